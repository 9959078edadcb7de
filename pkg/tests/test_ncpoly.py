import pytest
from hypothesis import given, settings, strategies as st

from koszulkit.errors import (AlphabetMismatchError, IndexOutOfRangeError, NotInD2Error,
                              PrecisionError, WordSyntaxError)
from koszulkit.ncpoly import (Commutator, Gen, Inverse, NcPoly, Power, Product, exponent_sums,
                              format_word, in_d2, initial_form, iterated_commutator,
                              magnus_expand, monomial_from_index, monomial_index, parse_word,
                              psi2)

D = 3


def words(max_leaves=4):
    leaf = st.integers(0, D - 1).map(Gen)
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            inner.map(Inverse),
            st.tuples(inner, st.integers(-4, 4)).map(lambda t: Power(*t)),
            st.tuples(inner, inner).map(lambda t: Commutator(*t)),
            st.lists(inner, min_size=2, max_size=3).map(lambda fs: Product(*fs)),
        ),
        max_leaves=max_leaves,
    )


def test_parse_and_format():
    w = parse_word("pow(x1, -3) * comm(x1, x2) * inv(x3)")
    assert w == Product(Power(Gen(0), -3), Commutator(Gen(0), Gen(1)), Inverse(Gen(2)))
    assert parse_word(format_word(w)) == w
    assert parse_word("z * comm(x, y)", ["x", "y", "z"]) == Product(Gen(2), Commutator(Gen(0), Gen(1)))


@pytest.mark.parametrize("bad", ["comm(x1,", "x0", "pow(x1, y)", "x1 x2", "q1", ""])
def test_parse_errors(bad):
    with pytest.raises(WordSyntaxError):
        parse_word(bad)


@given(words())
@settings(max_examples=80, deadline=None)
def test_format_round_trip(w):
    assert parse_word(format_word(w)) == w


def test_commutator_expansion():
    m = magnus_expand(Commutator(Gen(0), Gen(1)), 2, 5, 2)
    assert str(m) == "1 + X1X2 - X2X1"
    assert initial_form(Commutator(Gen(0), Gen(1)), 2, 5, 3)[0] == 2


def test_large_prime_printing_reads_like_integers():
    m = magnus_expand(Commutator(Gen(0), Gen(1)), 2, 2_147_483_647, 3)
    assert str(m).startswith("1 + X1X2 - X2X1")


@given(words(), st.sampled_from([2, 3, 5]))
@settings(max_examples=60, deadline=None)
def test_inverse_gives_identity(w, p):
    m = magnus_expand(Product(w, Inverse(w)), D, p, 4)
    assert m == NcPoly.one(p, D, 4)


@given(st.integers(0, D - 1), st.integers(-12, 12), st.sampled_from([2, 3]))
@settings(max_examples=60, deadline=None)
def test_power_matches_repeated_product(i, n, p):
    cap = 5
    x = Gen(i)
    base = x if n >= 0 else Inverse(x)
    expected = magnus_expand(Product(*([base] * abs(n))) if abs(n) > 1 else
                             (base if n else Product()), D, p, cap)
    assert magnus_expand(Power(x, n), D, p, cap) == expected


def test_power_reduction_uses_enough_digits():
    # (1 + X)^(p^2) = 1 + X^(p^2) mod p; with cap >= p^2 the exponent cannot be reduced mod p.
    p = 2
    m = magnus_expand(Power(Gen(0), 4), 1, p, 5)
    assert m.sorted_terms() == [((), 1), ((0, 0, 0, 0), 1)]


def test_precision_error_on_short_exponent():
    with pytest.raises(PrecisionError):
        magnus_expand(Power(Gen(0), 7, precision=2), 1, 3, 4)
    magnus_expand(Power(Gen(0), 7, precision=4), 1, 3, 4)


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRangeError):
        magnus_expand(Gen(3), 2, 3, 2)


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatchError):
        NcPoly.one(3, 2, 3) + NcPoly.one(3, 3, 3)


def test_psi2_of_demushkin_relation():
    r = Product(Power(Gen(0), -3), Commutator(Gen(0), Gen(1)), Commutator(Gen(2), Gen(3)))
    v = psi2(r, 4, 3)
    expected = [0] * 16
    expected[0 * 4 + 1], expected[1 * 4 + 0] = 1, 2
    expected[2 * 4 + 3], expected[3 * 4 + 2] = 1, 2
    assert list(v) == expected


def test_psi2_square_term_at_p2():
    # x^2 has degree-two part X^2 over F_2, x^4 does not.
    assert psi2(Power(Gen(0), 2), 1, 2) == (1,)
    assert psi2(Power(Gen(0), 4), 1, 2) == (0,)


def test_not_in_d2():
    assert not in_d2(Gen(0), 2, 3)
    with pytest.raises(NotInD2Error):
        psi2(Product(Gen(0), Gen(1)), 2, 3)


def test_iterated_commutator_degree():
    w = iterated_commutator(Gen(0), Gen(1), 3)
    k, part = initial_form(w, 2, 5, 4)
    assert k == 4
    assert part.coefficient((0, 0, 0, 1)) == 1


@given(words())
@settings(max_examples=60, deadline=None)
def test_exponent_sums_are_linear_magnus_terms(w):
    sums = exponent_sums(w, D)
    lin = magnus_expand(w, D, 7, 1).homogeneous_part(1).vector
    assert [s % 7 for s in sums] == list(lin)


def test_monomial_index_round_trip():
    for idx in range(27):
        assert monomial_index(monomial_from_index(idx, 3, 3), 3) == idx
