import pytest
from hypothesis import given, settings, strategies as st

from koszulkit.cocycle import (CrossedHom, Orientation, PadicApprox, commutator_polynomial_word,
                               cyclotomic_obstruction, evaluate, geometric_sum, root_multiplicity,
                               theta_value, weierstrass_eval, weierstrass_report)
from koszulkit.errors import InvalidSpecError, NonMonicError, NotInD2Error, PrecisionError
from koszulkit.ncpoly import (Commutator, Gen, Inverse, Power, Product, exponent_sums)
from koszulkit.progroup import (Demushkin, GroupPresentation, ThetaAbelian,
                                kochloukova_zalesskii, presentation_of)

from oracles import padic_closed_geometric

P, M, D = 3, 6, 3
MOD = P ** M


def words(max_leaves=4):
    leaf = st.integers(0, D - 1).map(Gen)
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            inner.map(Inverse),
            st.tuples(inner, st.integers(-5, 5)).map(lambda t: Power(*t)),
            st.tuples(inner, inner).map(lambda t: Commutator(*t)),
            st.lists(inner, min_size=2, max_size=3).map(lambda fs: Product(*fs)),
        ),
        max_leaves=max_leaves,
    )


units = st.integers(0, MOD - 1).filter(lambda v: v % P)
orientations = st.lists(units, min_size=D, max_size=D).map(lambda v: Orientation(P, M, tuple(v)))
homs = st.lists(st.integers(0, MOD - 1), min_size=D, max_size=D).map(
    lambda v: CrossedHom(P, M, tuple(v)))


def test_commutator_example():
    q = 9
    theta = Orientation(P, M, (1 + q, 1))
    f = CrossedHom(P, M, (0, 1))
    assert evaluate(f, theta, Commutator(Gen(0), Gen(1))).value == q


def test_trivial_theta_is_exponent_sum():
    theta = Orientation.trivial(P, D, M)
    f = CrossedHom(P, M, (2, 5, 7))
    w = Product(Power(Gen(0), 11), Inverse(Gen(2)), Commutator(Gen(1), Gen(0)))
    sums = exponent_sums(w, D)
    assert evaluate(f, theta, w).value == (2 * sums[0] + 5 * sums[1] + 7 * sums[2]) % MOD


def test_kochloukova_zalesskii_value():
    for p in (2, 3, 5):
        table = cyclotomic_obstruction(kochloukova_zalesskii(p), 2)
        assert table.entries == [[0], [0], [p]]
        assert table.status == "obstruction found"


@given(homs, orientations, words(), words())
@settings(max_examples=80, deadline=None)
def test_cocycle_law(f, theta, u, v):
    lhs = evaluate(f, theta, Product(u, v)).value
    rhs = (evaluate(f, theta, u).value + theta_value(theta, u) * evaluate(f, theta, v).value) % MOD
    assert lhs == rhs


@given(homs, orientations, words(), words())
@settings(max_examples=80, deadline=None)
def test_commutator_formula(f, theta, u, v):
    # evaluate() raises if the expansion and the closed form disagree
    value = evaluate(f, theta, Commutator(u, v)).value
    tu, tv = theta_value(theta, u), theta_value(theta, v)
    fu, fv = evaluate(f, theta, u).value, evaluate(f, theta, v).value
    assert value == ((tu - 1) * fv - (tv - 1) * fu) % MOD


@given(orientations, st.integers(0, MOD - 1), words(), words())
@settings(max_examples=60, deadline=None)
def test_coboundaries_vanish_on_commutator_products(theta, lam, u, v):
    f = CrossedHom(P, M, tuple((t - 1) * lam for t in theta.values))
    w = Product(Commutator(u, v), Commutator(v, u), Commutator(u, Commutator(u, v)))
    if theta_value(theta, w) == 1:
        assert evaluate(f, theta, w).value == 0


@given(units, st.integers(0, 60))
@settings(max_examples=80, deadline=None)
def test_geometric_sum(t, n):
    assert geometric_sum(t, n, MOD) == padic_closed_geometric(t, n, MOD)


def test_geometric_sum_huge_exponent():
    n = 10 ** 30
    t = 4
    closed = (pow(t, n, MOD * 3) - 1) // 3 % MOD  # (t^n - 1)/(t - 1) with t - 1 = 3
    assert geometric_sum(t, n, MOD) == closed


def test_power_with_negative_exponent():
    theta = Orientation(P, M, (4, 1, 1))
    f = CrossedHom.dual(P, 3, 0, M)
    assert evaluate(f, theta, Power(Gen(0), -2)).value == evaluate(
        f, theta, Product(Inverse(Gen(0)), Inverse(Gen(0)))).value


def test_precision_mismatch():
    with pytest.raises(PrecisionError):
        evaluate(CrossedHom(3, 4, (1,)), Orientation(3, 5, (1,)), Gen(0))


def test_orientation_units():
    with pytest.raises(InvalidSpecError):
        Orientation(3, 4, (3,))
    assert Orientation(2, 4, (5, 1)).torsion_free_image()
    assert not Orientation(2, 4, (3, 1)).torsion_free_image()


@pytest.mark.parametrize("spec", [Demushkin(2, 3, 3), Demushkin(4, 5, 5), Demushkin(4, 3, 9),
                                  Demushkin(4, 2, 4), ThetaAbelian(3, 3, 3), ThetaAbelian(4, 5, 25),
                                  Demushkin(3, 2, 2, "ii", f=3),
                                  Demushkin(4, 2, 2, "iii", f=2, alpha=4)], ids=repr)
def test_canonical_presentations_pass(spec):
    table = cyclotomic_obstruction(presentation_of(spec), 8)
    assert all(v == 0 for row in table.entries for v in row)
    assert table.status == "no obstruction found"


def test_obstruction_json_shape():
    out = cyclotomic_obstruction(kochloukova_zalesskii(3), 8).to_json()
    assert out["rows"] == ["f_x", "f_y", "f_z"]
    assert out["entries"][2] == [[3, 8]]
    assert "cyclotomic" not in out["status"]


def test_obstruction_requires_d2():
    class Raw:
        p, generators, relations, theta = 3, ("x",), (Gen(0),), (1,)
    with pytest.raises(NotInD2Error):
        cyclotomic_obstruction(Raw(), 4)


def test_weierstrass_examples():
    q = PadicApprox(3, 3, 4)
    assert weierstrass_eval([-3, 1], q).value == 0
    assert weierstrass_eval([0, 0, 1], PadicApprox(3, 3, 3)).value == 9
    with pytest.raises(NonMonicError):
        weierstrass_eval([1, 2], q)
    with pytest.raises(NonMonicError):
        commutator_polynomial_word([])


def test_weierstrass_reports():
    q = PadicApprox(3, 3, 5)
    assert weierstrass_report([-3, 1], q)["status"] == "no obstruction found"
    rep = weierstrass_report([9, -6, 1], q)  # (X - 3)^2
    assert rep["value"] == 0 and rep["root_multiplicity"] == 2
    assert rep["status"].startswith("passes crossed-hom test; excluded")
    assert weierstrass_report([0, 0, 1], PadicApprox(3, 3, 3))["status"] == "obstructed"


@given(st.lists(st.integers(-20, 20), min_size=0, max_size=3), st.sampled_from([2, 3, 5]),
       st.sampled_from([1, 2]))
@settings(max_examples=80, deadline=None)
def test_weierstrass_matches_word(lower, p, e):
    alpha = lower + [1]
    q = PadicApprox(p, p ** e, 6)
    # weierstrass_report asserts agreement with the commutator-polynomial word
    rep = weierstrass_report(alpha, q)
    assert rep["value"] == weierstrass_eval(alpha, q).value


def test_root_multiplicity():
    assert root_multiplicity([-8, 12, -6, 1], 2) == 3
    assert root_multiplicity([1, 1], 2) == 0


def test_presentation_theta_consistency():
    pres = GroupPresentation(3, ("x", "y"), (Product(Power(Gen(0), -3), Commutator(Gen(0), Gen(1))),),
                             (1, -2))
    assert theta_value(pres.orientation(), pres.relations[0]) == 1
