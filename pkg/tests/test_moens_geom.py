from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibcat.acceptance import corpus_fibrations
from fibcat.analyze import is_collectively_epic
from fibcat.category import poset_from_covers
from fibcat.change_base import (
    change_base_adjoints,
    coproduct_along,
    dependent_product,
    distributor_change_of_base,
    distributor_of_functor,
    glueing_composite_failure,
    pullback_preservation_profile,
    right_adjoint_distributor,
    smallness_preservation,
    terminal_presheaf,
)
from fibcat.closure import change_of_base, glueing
from fibcat.corpus import D2, T1, discrete2, lattice_adjunctions, lattice_functors, ordinal2
from fibcat.search import find_right_adjoint
from fibcat.errors import NonTerminating, NotLeftExact, PreconditionFailed
from fibcat.fibration import FibrationData, find_fibred_equivalence
from fibcat.functor import AdjunctionData, constant_functor, identity_functor, identity_transformation
from fibcat.geomorph import PROFILE_FIELDS, delta_gamma, generating_family_tests, gm_classify, lex_failure
from fibcat.localize import localize
from fibcat.moens import delta_functor, delta_iso_to_glued, gen_moens, gen_moens_conditions, moens_reconstruct


FIBS = corpus_fibrations()
LF = lattice_functors()
LA = lattice_adjunctions()


def no_divergence(v):
    assert v.divergences == [], [c.name for c in v.divergences]


# ---------------------------------------------------------------- Δ


def test_delta_of_glueing_is_the_glued_functor():
    S = delta_functor(FIBS["gl(incl_2_D2)"])
    assert delta_iso_to_glued(S) is not None


def test_delta_of_codomain_fibration_is_identity():
    P = FIBS["P_D2"]
    S = delta_functor(P)
    dom = P.legs[0]
    assert [dom.ob(S.fibre.objects[S.delta.ob(I)]) for I in P.base.objects] == list(P.base.objects)
    assert [dom(S.fibre.arrows[S.delta(u)]) for u in P.base.arrows] == list(P.base.arrows)


def test_delta_over_terminal_base_selects_fibrewise_terminal():
    C = D2()
    P = FibrationData(constant_functor(C, T1(), 0))
    S = delta_functor(P)
    assert S.at_object(S.ones[0]) == C.obj("⊤")


# ---------------------------------------------------------------- Moens reconstruction


@pytest.mark.parametrize("name", ["gl(incl_2_D2)", "P_N5", "gl(proj_D2_2)"])
def test_moens_reconstruction_succeeds(name):
    R = moens_reconstruct(FIBS[name])
    assert R.verdict.verdict is True
    no_divergence(R.verdict)


def test_moens_needs_disjoint_stable_sums():
    with pytest.raises(PreconditionFailed):
        moens_reconstruct(FIBS["nondisjoint"])


def test_terminal_preserving_non_lex_functor_passes_general_moens_only():
    F = LF["top_D2_2"]
    assert lex_failure(F) is not None
    P = glueing(F)
    assert gen_moens(P).verdict.verdict is True
    with pytest.raises(PreconditionFailed):
        moens_reconstruct(P)


def test_general_moens_on_glueing():
    R = gen_moens(FIBS["gl(incl_2_D2)"])
    assert R.verdict.verdict is True
    assert R.verdict.details["delta_iso_to_glued_functor"]


def test_counterexample_fails_all_three_conditions_together():
    conds = gen_moens_conditions(FIBS["nondisjoint"])
    assert all(c is not None for c in conds.values())


@pytest.mark.parametrize("name", sorted(n for n, P in FIBS.items() if P.is_fibration and P.verdict.bifibration))
def test_general_moens_conditions_agree(name):
    flags = [c is None for c in gen_moens_conditions(FIBS[name]).values()]
    assert len(set(flags)) == 1


# ---------------------------------------------------------------- Δ ⊣ Γ


def test_delta_gamma_on_glueing_agrees_with_explicit_form():
    D = delta_gamma(FIBS["gl(incl_2_D2)"])
    assert D.verdict.verdict is True
    no_divergence(D.verdict)


@pytest.mark.parametrize("name", ["P_T1", "P_D2", "gl(id_2)"])
def test_delta_gamma_triangle_laws(name):
    D = delta_gamma(FIBS[name])
    assert D.verdict.verdict is True
    no_divergence(D.verdict)


# ---------------------------------------------------------------- classification


def test_inclusion_two_into_d2_is_connected_not_injective():
    p = gm_classify(LA["incl_2_D2"])
    assert p.connected.verdict is True
    assert p.injective.verdict is False
    assert p.surjective.verdict is True


def test_identity_adjunction_has_every_property():
    C = D2()
    I = identity_functor(C)
    adj = AdjunctionData(I, I, identity_transformation(I), identity_transformation(I))
    p = gm_classify(adj)
    assert all(getattr(p, f).verdict is True for f in PROFILE_FIELDS)


def test_projection_onto_two_is_not_surjective():
    # F(⊥) = F(b) = ⊥ while ⊥ < b, so F does not reflect isomorphisms
    p = gm_classify(LA["proj_D2_2"])
    assert p.surjective.verdict is False
    assert p.injective.verdict is True


@pytest.mark.parametrize("name", sorted(LA))
def test_profiles_are_never_divergent(name):
    assert gm_classify(LA[name]).divergent == []


def test_classification_needs_left_exact_functor():
    two = ordinal2()
    F = constant_functor(two, two, two.obj("⊥"))
    adj = find_right_adjoint(F)
    with pytest.raises(NotLeftExact):
        gm_classify(adj)


# ---------------------------------------------------------------- change of base adjoints


def test_identity_change_of_base_adjoints_are_trivial():
    P = FIBS["P_D2"]
    F = identity_functor(D2())
    assert find_fibred_equivalence(dependent_product(F, P), P)
    assert find_fibred_equivalence(coproduct_along(F, P).fibration, P)


def test_sum_over_terminal_base_inverts_only_isos():
    Q = FibrationData(constant_functor(D2(), T1(), 0))
    total = coproduct_along(identity_functor(T1()), Q).fibration.total
    assert (total.n_obj, total.n_arr) == (4, 9)


def test_distributor_of_functor_agrees_with_change_of_base():
    F = LF["incl_2_D2"]
    P = FIBS["P_D2"]
    assert find_fibred_equivalence(distributor_change_of_base(distributor_of_functor(F), P), change_of_base(P, F))


def test_change_base_report_has_no_divergence():
    v = change_base_adjoints(LF["incl_2_D2"], FIBS["P_2"], FIBS["P_D2"])
    assert v.details["right_adjoint"] and v.details["right_adjoint_distributor"]
    assert all(c.applicable for c in v.crosschecks)
    no_divergence(v)


def test_representable_distributor_has_right_adjoint():
    v = right_adjoint_distributor(distributor_of_functor(LF["incl_2_D2"]))
    assert v.verdict
    no_divergence(v)


def test_terminal_presheaf_on_discrete_two_is_not_a_retract_of_representable():
    v = right_adjoint_distributor(terminal_presheaf(discrete2()))
    assert v.verdict is False
    no_divergence(v)


@pytest.mark.parametrize("name", sorted(LF))
def test_change_of_base_preservation_lemmas(name):
    no_divergence(pullback_preservation_profile(LF[name]))
    no_divergence(smallness_preservation(LF[name]))


def test_glueing_along_composite_is_the_stated_pullback():
    assert glueing_composite_failure(LF["incl_2_D2"], LF["graph_D2_D2x2"]) is None


# ---------------------------------------------------------------- localisation


def test_localising_one_arrow_of_d2():
    C = D2()
    L = localize(C, [C.hom(C.obj("⊥"), C.obj("a"))[0]])
    assert L.cat.n_arr == 11
    assert L.cat.isomorphic_objects(C.obj("⊥"), C.obj("a")) is not None


def test_crown_localisation_does_not_terminate():
    crown = poset_from_covers(["p", "q", "r", "s"], [("p", "r"), ("p", "s"), ("q", "r"), ("q", "s")])
    with pytest.raises(NonTerminating):
        localize(crown, list(crown.arrows))


@given(st.integers(2, 4), st.data())
def test_inverting_everything_in_a_chain_gives_indiscrete(n, data):
    names = [str(i) for i in range(n)]
    C = poset_from_covers(names, [(names[i], names[i + 1]) for i in range(n - 1)])
    L = localize(C, list(C.arrows))
    assert L.cat.n_arr == n * n
    assert L.cat.is_groupoid and L.cat.is_thin


# ---------------------------------------------------------------- generating families


def test_glueing_separator_found():
    v = generating_family_tests(FIBS["gl(incl_2_D2)"])
    assert v.verdict["separator"]
    no_divergence(v)


def test_glueing_identity_on_terminal_is_trivially_generated():
    P = glueing(identity_functor(T1()))
    v = generating_family_tests(P)
    assert v.verdict["generating_family"]


def test_cocartesian_arrows_cancel_verticals_in_codomain_d2():
    P = FIBS["P_D2"]
    for f in P.total.arrows:
        if P.is_cocartesian(f):
            assert is_collectively_epic(P, f)
