from math import comb

import pytest

from koszulkit.errors import (DegenerateRelationSpanError, FieldMismatchError, InvalidSpecError,
                              ModelOutOfScopeError, NotInD2Error, SpecFormatError,
                              UnsupportedSpecError)
from koszulkit.ncpoly import Commutator, Gen, Power, Product, format_word
from koszulkit.progroup import (Demushkin, FibreProduct, Free, FreeProduct, GroupPresentation,
                                ThetaAbelian, abelianization_snf, cohomology_from_presentation,
                                cohomology_ring, free_zassenhaus_dims, gr_algebra,
                                group_spec_from_json, group_spec_to_json, invariants,
                                kochloukova_zalesskii, presentation_of, restricted_pbw_series,
                                verify_koszul_duality, zassenhaus_dims)
from koszulkit.quadalg import (demushkin_dual, hilbert, koszul_dual, relations_equal, symmetric,
                               tensor_algebra)

from oracles import free_restricted_dims

ETC_SPECS = [
    Free(1, 3), Free(3, 3), Free(2, 3, 3), Free(2, 2),
    Demushkin(2, 3, 3), Demushkin(4, 5, 5), Demushkin(4, 3, 0), Demushkin(4, 2, 4),
    ThetaAbelian(1, 3, 3), ThetaAbelian(3, 3, 9), ThetaAbelian(3, 2, 4),
    FibreProduct(Demushkin(2, 3, 3), 1), FibreProduct(Demushkin(4, 3, 3), 2),
    FibreProduct(ThetaAbelian(2, 5, 5), 1),
    FreeProduct(ThetaAbelian(2, 3, 3), Demushkin(2, 3, 3)),
    FreeProduct(Free(1, 3), Free(1, 3)),
    FibreProduct(FreeProduct(Free(2, 3, 3), ThetaAbelian(2, 3, 9)), 1),
]


def test_demushkin_presentation():
    pres = presentation_of(Demushkin(2, 3, 3))
    assert pres.relations == (Product(Power(Gen(0), -3), Commutator(Gen(0), Gen(1))),)
    assert pres.theta == (1, -2)


def test_theta_abelian_presentation():
    pres = presentation_of(ThetaAbelian(2, 5, 5))
    assert pres.generators == ("x0", "x1")
    assert [format_word(r, pres.generators) for r in pres.relations] == [
        "x0 * x1 * inv(x0) * pow(x1, -6)"]
    assert pres.theta == (6, 1)


def test_free_presentation():
    pres = presentation_of(Free(3, 3))
    assert pres.d == 3 and pres.relations == ()


def test_fibre_product_relations():
    pres = presentation_of(FibreProduct(Demushkin(2, 3, 3), 2))
    assert pres.generators == ("x1", "x2", "z1", "z2")
    assert len(pres.relations) == 1 + 2 * 2 + 1
    assert pres.theta == (1, -2, 1, 1)


def test_p2_demushkin_variants_build():
    for spec in [Demushkin(3, 2, 2, "ii", f=3), Demushkin(5, 2, 2, "ii"),
                 Demushkin(4, 2, 2, "iii", f=2, alpha=4), Demushkin(2, 2, 2, "iii", alpha=-4)]:
        pres = presentation_of(spec)
        assert len(pres.relations) == 1
        with pytest.raises(ModelOutOfScopeError):
            cohomology_ring(spec)
        with pytest.raises(ModelOutOfScopeError):
            gr_algebra(spec)


@pytest.mark.parametrize("bad", [
    lambda: Free(0, 3), lambda: Free(2, 3, 2), lambda: Free(2, 2, 2),
    lambda: Demushkin(3, 3, 3), lambda: Demushkin(4, 3, 6), lambda: Demushkin(2, 2, 2),
    lambda: Demushkin(4, 2, 2, "ii"), lambda: Demushkin(4, 2, 2, "iii", alpha=2),
    lambda: ThetaAbelian(0, 3, 3), lambda: FibreProduct(Free(1, 3), 0),
])
def test_invalid_specs(bad):
    with pytest.raises(InvalidSpecError):
        bad()


def test_free_product_field_mismatch():
    with pytest.raises(FieldMismatchError):
        FreeProduct(Free(1, 3), Free(1, 5))


def test_presentation_checks():
    with pytest.raises(NotInD2Error):
        GroupPresentation(3, ("x",), (Gen(0),), (1,))
    with pytest.raises(InvalidSpecError):
        # theta(x) = 4 does not kill x^3
        GroupPresentation(3, ("x",), (Power(Gen(0), 3),), (4,))


@pytest.mark.parametrize("spec", ETC_SPECS, ids=repr)
def test_koszul_duality_of_etc_specs(spec):
    report = verify_koszul_duality(spec, 5)
    assert report.relation_subspaces_equal
    assert report.dims_equal_up_to == 5
    assert koszul_dual(cohomology_ring(spec)) == gr_algebra(spec)


@pytest.mark.parametrize("spec", ETC_SPECS, ids=repr)
def test_relation_rank_matches_h2(spec):
    pres = presentation_of(spec)
    H = cohomology_ring(spec)
    assert hilbert(H, 2)[2] == len(pres.relations) == invariants(spec).r


@pytest.mark.parametrize("spec", ETC_SPECS, ids=repr)
def test_psi2_reconstruction(spec):
    assert cohomology_from_presentation(presentation_of(spec)) == cohomology_ring(spec)


def test_degenerate_relation_span():
    x, y = Gen(0), Gen(1)
    pres = GroupPresentation(3, ("x", "y"), (Commutator(x, y), Commutator(y, x)), (1, 1))
    with pytest.raises(DegenerateRelationSpanError):
        cohomology_from_presentation(pres)


def test_demushkin_cup_products():
    H = cohomology_ring(Demushkin(4, 5, 5))
    assert hilbert(H, 3) == (1, 4, 1, 0)
    from koszulkit.fpfield import contains
    d = 4
    # chi_i chi_j = 0 for distinct pairs other than (1,2),(2,1),(3,4),(4,3)
    for i in range(d):
        for j in range(d):
            v = [0] * 16
            v[i * d + j] = 1
            paired = {(0, 1), (1, 0), (2, 3), (3, 2)}
            assert contains(H.relations, v) == ((i, j) not in paired)
    v = [0] * 16
    v[0 * d + 1], v[2 * d + 3] = 1, -1
    assert contains(H.relations, v)  # chi1 chi2 = chi3 chi4


def test_gr_algebra_families():
    assert hilbert(gr_algebra(ThetaAbelian(3, 3, 3)), 4) == (1, 3, 6, 10, 15)
    assert relations_equal(gr_algebra(FreeProduct(Free(1, 3), Free(1, 3))), tensor_algebra(2, 3))
    assert hilbert(gr_algebra(FibreProduct(Demushkin(2, 3, 3), 1)), 4) == (1, 3, 6, 10, 15)
    assert relations_equal(gr_algebra(Demushkin(4, 3, 3)), demushkin_dual(4, 3))


def test_fibre_product_h2():
    for d in (2, 4):
        for c in (1, 2):
            H = cohomology_ring(FibreProduct(Demushkin(d, 3, 3), c))
            assert hilbert(H, 2)[2] == 1 + d * c + comb(c, 2)


def test_invariants_examples():
    inv = invariants(Demushkin(4, 3, 3))
    assert inv.abelianization == (3, (3,))
    assert (inv.t1, inv.f1) == (1, 2)
    inv = invariants(ThetaAbelian(3, 3, 3))
    assert inv.abelianization == (1, (3, 3))
    assert inv.theta_centre_rank == 2
    assert invariants(FibreProduct(Demushkin(2, 3, 3), 2)).theta_centre_rank == 3
    assert invariants(FibreProduct(Demushkin(4, 3, 3), 2)).theta_centre_rank == 2
    assert invariants(Free(3, 3)).t1 is None


def test_free_product_torsion_ranks_are_flagged():
    inv = invariants(FreeProduct(ThetaAbelian(2, 3, 3), Demushkin(2, 3, 3)))
    assert (inv.t1, inv.f1) == (2, 1)
    assert inv.t1 + inv.f1 == inv.d - 1
    assert any("modeling choice" in n for n in inv.notes)


@pytest.mark.parametrize("spec", ETC_SPECS + [Demushkin(3, 2, 2, "ii", f=3),
                                              Demushkin(4, 2, 2, "iii", f=2, alpha=4)], ids=repr)
def test_abelianization_closed_form_matches_snf(spec):
    assert invariants(spec).abelianization == abelianization_snf(presentation_of(spec))


@pytest.mark.parametrize("spec", ETC_SPECS, ids=repr)
def test_torsion_plus_free_rank(spec):
    inv = invariants(spec)
    if inv.t1 is not None:
        assert inv.t1 + inv.f1 == inv.d - 1


@pytest.mark.parametrize("spec", ETC_SPECS, ids=repr)
def test_theta_kills_relations(spec):
    from koszulkit.cocycle import theta_value
    pres = presentation_of(spec)
    for r in pres.relations:
        assert theta_value(pres.orientation(), r) == 1


def test_zassenhaus_theta_abelian():
    assert zassenhaus_dims(ThetaAbelian(3, 2, 4), 8) == (3, 3, 0, 3, 0, 0, 0, 3)
    assert zassenhaus_dims(FibreProduct(ThetaAbelian(2, 3, 3), 2), 9) == (
        4, 0, 4, 0, 0, 0, 0, 0, 4)
    assert zassenhaus_dims(Free(1, 5), 6) == (1, 0, 0, 0, 1, 0)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_free_zassenhaus_matches_witt_oracle(p, d):
    dims = free_zassenhaus_dims(d, p, 8)
    assert list(dims) == free_restricted_dims(d, p, 8)
    assert restricted_pbw_series(dims, p, 8) == tuple(d ** n for n in range(9))


def test_free_zassenhaus_frozen():
    assert zassenhaus_dims(Free(2, 2), 4) == (2, 3, 2, 6)


def test_zassenhaus_unsupported():
    with pytest.raises(UnsupportedSpecError):
        zassenhaus_dims(Demushkin(4, 3, 3), 4)
    with pytest.raises(UnsupportedSpecError):
        zassenhaus_dims(FreeProduct(Free(1, 3), Free(1, 3)), 4)


def test_json_round_trip():
    for spec in ETC_SPECS + [Demushkin(3, 2, 2, "ii", f=3)]:
        assert group_spec_from_json(group_spec_to_json(spec)) == spec
    data = {"p": 3, "group": {"kind": "fibre", "c": 1, "inner": {"kind": "demushkin", "d": 4, "q": 3}}}
    assert group_spec_from_json(data) == FibreProduct(Demushkin(4, 3, 3), 1)


@pytest.mark.parametrize("bad", [{}, {"p": 3}, {"p": 3, "group": {"kind": "nope"}},
                                 {"p": 3, "group": {"kind": "free"}}, {"p": "x", "group": {}}])
def test_json_errors(bad):
    with pytest.raises(SpecFormatError):
        group_spec_from_json(bad)


def test_presentation_json_round_trip():
    pres = presentation_of(FibreProduct(Demushkin(2, 3, 3), 1))
    assert GroupPresentation.from_json(pres.to_json()) == pres
    kz = kochloukova_zalesskii(5)
    assert GroupPresentation.from_json(kz.to_json()) == kz
