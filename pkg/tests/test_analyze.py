from __future__ import annotations

import pytest
from hypothesis import given

from fibcat.acceptance import corpus_fibrations
from fibcat.analyze import (
    StableClass,
    classify_shape,
    find_separator,
    fibrewise_terminal_class,
    is_definable,
    is_generating_family,
    is_locally_small,
    is_representable,
    is_well_powered,
)
from fibcat.category import poset_from_covers
from fibcat.closure import coproduct_fibration, fundamental_fibration, glueing, slice_fibration
from fibcat.corpus import D2, T1, Z2, identity_fibration, lattice_functors, pmod, presheaf_on_2
from fibcat.errors import BaseLacksPullbacks, ClassNotStable, NoFibrewiseTerminals, NotElementary
from fibcat.fibration import FibrationData
from fibcat.fibred_limits import finite_limit_profile, has_small_global_sections, is_geometric, small_fibration_tests
from fibcat.functor import constant_functor
from fibcat.indexed import grothendieck
from fibcat.opposite import opposite_fibration
from fibcat.sums import has_internal_products, has_internal_sums, sums_profile

import oracles
from strategies import posets

FIBS = corpus_fibrations()


def lattice_leq(C):
    return {(C.dom[f], C.cod[f]) for f in C.arrows}


def no_divergence(v):
    assert v.divergences == [], [c.name for c in v.divergences]


# ---------------------------------------------------------------- shape


def test_discrete_fibration_has_every_shape_flag():
    v = classify_shape(grothendieck(presheaf_on_2()).fibration)
    assert all(v.verdict.values())
    no_divergence(v)


def test_pmod_is_groupoidal_not_posetal():
    v = classify_shape(pmod()).verdict
    assert v["groupoidal"] and v["conservative"]
    assert not v["posetal"] and not v["elementary"]


def test_codomain_d2_is_posetal_not_elementary():
    v = classify_shape(FIBS["P_D2"]).verdict
    assert v["posetal"] and v["faithful"]
    assert not v["elementary"]


@pytest.mark.parametrize("name", sorted(n for n, P in FIBS.items() if P.is_fibration))
def test_shape_routes_agree_on_corpus(name):
    no_divergence(classify_shape(FIBS[name]))


# ---------------------------------------------------------------- representability


@pytest.mark.parametrize("label", ["⊤", "a"])
def test_slice_fibration_is_represented_by_identity(label):
    B = D2()
    I = B.obj(label)
    P = slice_fibration(B, I)
    v = is_representable(P)
    assert v.verdict
    R = v.witnesses[0]["object"]
    assert P.P_obj[R] == I
    no_divergence(v)


def test_two_slices_side_by_side_are_not_representable():
    B = D2()
    S = slice_fibration(B, B.obj("⊤"))
    v = is_representable(coproduct_fibration(S, S))
    assert v.verdict is False
    no_divergence(v)


def test_representability_needs_elementary_input():
    with pytest.raises(NotElementary):
        is_representable(pmod())


# ---------------------------------------------------------------- local smallness


def test_fibration_over_terminal_is_locally_small_iff_homs_are_singletons():
    assert is_locally_small(FibrationData(constant_functor(T1(), T1(), 0))).verdict
    # Z2 has two arrows * → *; a one-point base cannot classify both
    assert is_locally_small(FibrationData(constant_functor(Z2(), T1(), 0))).verdict is False


@given(posets(4))
def test_poset_over_terminal_is_locally_small_iff_trivial(p):
    C, n, _ = p
    assert is_locally_small(FibrationData(constant_functor(C, T1(), 0))).verdict == (n == 1)


def test_codomain_d2_is_locally_small():
    v = is_locally_small(FIBS["P_D2"])
    assert v.verdict
    no_divergence(v)


def test_codomain_n5_counterexample():
    v = is_locally_small(FIBS["P_N5"])
    assert v.verdict is False
    assert (v.counterexample["u_label"], v.counterexample["X_label"]) == ("z≤⊤", "x≤z")
    no_divergence(v)


@pytest.mark.parametrize("name", ["P_2", "P_chain3", "P_D2", "P_N5", "P_M3"])
def test_local_smallness_matches_distributivity(name):
    P = FIBS[name]
    B = P.base
    assert is_locally_small(P).verdict == oracles.is_distributive(B.n_obj, lattice_leq(B))


@given(posets(4))
def test_local_smallness_matches_heyting_implication_on_random_lattices(p):
    C, n, cov = p
    leq = oracles.closure(n, cov)
    lattice = all(oracles.meet(n, leq, a, b) is not None and oracles.join(n, leq, a, b) is not None for a in range(n) for b in range(n))
    if not lattice:
        return
    P = fundamental_fibration(C)
    heyting = all(oracles.heyting_implication(n, leq, a, b) is not None for a in range(n) for b in range(n))
    assert is_locally_small(P).verdict == heyting == oracles.is_distributive(n, leq)


# ---------------------------------------------------------------- well-poweredness


def test_posetal_fibre_over_terminal_is_well_powered():
    P = FibrationData(constant_functor(T1(), T1(), 0))
    assert is_well_powered(P).verdict


def test_codomain_d2_is_not_well_powered():
    v = is_well_powered(FIBS["P_D2"])
    assert v.verdict is False
    no_divergence(v)


def test_codomain_of_terminal_is_well_powered():
    assert is_well_powered(FIBS["P_T1"]).verdict


@pytest.mark.parametrize("name", ["P_2", "P_chain3", "P_D2", "P_N5", "P_M3"])
def test_lattices_are_not_well_powered(name):
    assert is_well_powered(FIBS[name]).verdict is False


# ---------------------------------------------------------------- definability


def test_all_objects_are_definable_with_identity():
    P = FIBS["P_D2"]
    v = is_definable(P, StableClass("objects", P.total.objects))
    assert v.verdict
    B = P.base
    assert all(B.is_identity(w["m0"]) for w in v.witnesses)


def test_non_principal_sieve_is_not_definable():
    V = poset_from_covers(["l", "r", "t"], [("l", "t"), ("r", "t")])
    P = identity_fibration(V)
    v = is_definable(P, StableClass("objects", [V.obj("l"), V.obj("r")]))
    assert v.verdict is False and v.counterexample["I"] == V.obj("t")
    no_divergence(v)


def test_fibrewise_terminals_are_definable():
    P = FIBS["P_D2"]
    v = is_definable(P, fibrewise_terminal_class(P))
    assert v.verdict
    no_divergence(v)


def test_unstable_class_is_rejected():
    P = FIBS["P_D2"]
    top_id = next(x for x in P.total.objects if P.P_obj[x] == P.base.obj("⊤"))
    with pytest.raises(ClassNotStable):
        is_definable(P, StableClass("objects", [x for x in P.total.objects if P.P_obj[x] == P.base.obj("⊤")]))
    assert top_id is not None


# ---------------------------------------------------------------- generating families


def generating_oracle(P: FibrationData, G: int) -> bool:
    """Direct sweep of the definition over every parallel pair of distinct verticals."""
    T = P.total
    cart = [phi for phi in T.arrows if T.cod[phi] == G and P.is_cartesian(phi)]
    for X in T.objects:
        for Y in T.objects:
            vs = [a for a in T.hom(X, Y) if P.is_vertical(a)]
            for a1 in vs:
                for a2 in vs:
                    if a1 == a2:
                        continue
                    separated = any(
                        T.comp(a1, psi) != T.comp(a2, psi)
                        for phi in cart
                        for psi in T.arrows
                        if T.dom[psi] == T.dom[phi] and T.cod[psi] == X
                    )
                    if not separated:
                        return False
    return True


def test_posetal_fibration_is_generated_by_anything():
    P = FIBS["P_D2"]
    for G in P.total.objects:
        assert is_generating_family(P, G).verdict


@pytest.mark.parametrize("name", ["pmod", "fib(Hwarn)", "P_D2", "gl(incl_2_D2)"])
def test_generating_family_matches_oracle(name):
    P = FIBS[name]
    for G in P.total.objects:
        v = is_generating_family(P, G)
        assert v.verdict == generating_oracle(P, G)
        no_divergence(v)


def test_glueing_has_a_separator():
    P = glueing(lattice_functors()["incl_2_D2"])
    assert find_separator(P).verdict


# ---------------------------------------------------------------- sums and products


def test_sums_and_products_over_terminal_base():
    P = FibrationData(constant_functor(Z2(), T1(), 0))
    assert has_internal_sums(P).verdict and has_internal_products(P).verdict


def test_codomain_n5_has_sums_but_not_products():
    P = FIBS["P_N5"]
    assert has_internal_sums(P).verdict
    v = has_internal_products(P)
    assert v.verdict is False
    c = v.counterexample["no_evaluation_span"]
    assert (c["u_label"], c["X_label"]) == ("z≤⊤", "x≤z")
    no_divergence(v)


def test_codomain_d2_has_sums_and_products():
    P = FIBS["P_D2"]
    for v in (has_internal_sums(P), has_internal_products(P)):
        assert v.verdict
        no_divergence(v)


@pytest.mark.parametrize("name", ["P_T1", "P_2", "P_D2", "P_N5", "pmod"])
def test_products_are_sums_of_the_opposite(name):
    P = FIBS[name]
    assert has_internal_products(P, duality=False).verdict == has_internal_sums(opposite_fibration(P), adjoint_route=False).verdict


def test_sums_need_base_pullbacks():
    V = poset_from_covers(["l", "r", "t"], [("l", "t"), ("r", "t")])
    with pytest.raises(BaseLacksPullbacks):
        has_internal_sums(identity_fibration(V))


# ---------------------------------------------------------------- sums profile


def test_codomain_d2_sums_profile_all_true():
    v = sums_profile(FIBS["P_D2"])
    assert all(v.verdict.values())
    no_divergence(v)


def test_glueing_sums_profile_all_true():
    v = sums_profile(FIBS["gl(incl_2_D2)"])
    assert all(v.verdict.values())
    no_divergence(v)


def test_synthetic_counterexample_fails_moens_conditions_together():
    v = sums_profile(FIBS["nondisjoint"]).verdict
    assert (v["cancellation"], v["vertical_iso"], v["cocartesian_squares_pullbacks"]) == (False, False, False)


# ---------------------------------------------------------------- global sections, finite limits, geometric


def test_identity_fibration_has_small_global_sections():
    assert has_small_global_sections(identity_fibration(D2())).verdict


def test_glueing_has_small_global_sections():
    v = has_small_global_sections(FIBS["gl(incl_2_D2)"])
    assert v.verdict
    no_divergence(v)


def test_missing_fibrewise_terminal_raises():
    with pytest.raises(NoFibrewiseTerminals):
        has_small_global_sections(pmod())


def test_codomain_d2_finite_limits_both_ways():
    v = finite_limit_profile(FIBS["P_D2"])
    assert all(v.verdict.values())
    no_divergence(v)


def test_pmod_fibres_have_pullbacks_but_no_terminal():
    v = finite_limit_profile(pmod())
    assert v.verdict["pullbacks"] and not v.verdict["terminals"]
    no_divergence(v)


def test_discrete_fibration_over_lattice_has_fibred_finite_limits():
    B = D2()
    v = finite_limit_profile(slice_fibration(B, B.obj("⊤")))
    assert v.verdict["pullbacks"]
    no_divergence(v)


def test_glueing_is_geometric():
    assert is_geometric(FIBS["gl(incl_2_D2)"]).verdict


def test_codomain_n5_is_geometric():
    assert is_geometric(FIBS["P_N5"]).verdict


def test_fibration_without_terminals_is_not_geometric():
    assert is_geometric(pmod()).verdict is False


# ---------------------------------------------------------------- observations


@pytest.mark.parametrize("name", ["P_D2", "P_T1"])
def test_small_fibration_observations_hold(name):
    v = small_fibration_tests(FIBS[name])
    no_divergence(v)
