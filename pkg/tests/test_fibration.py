from __future__ import annotations

import pytest
from hypothesis import given

from fibcat.category import poset_from_covers
from fibcat.closure import arrow_object, fundamental_fibration, square_arrow
from fibcat.corpus import D2, N5, T1, discrete2, hwarn, ordinal2, pmod, presheaf_on_2
from fibcat.errors import BaseLacksPullbacks, NoLift, NotAFibration
from fibcat.fibration import (
    FibMorphism,
    FibrationData,
    cartesian_composition_failures,
    cartesian_lift,
    check_cleavage_split,
    check_fib_morphism,
    choose_cleavage,
    classify_arrow,
    cocartesian_lift,
    cocartesian_remark_failures,
    enumerate_cleavages,
    iso_characterisation_failures,
    is_fibration,
    liberal_vs_hyper_failures,
    lift_uniqueness_failures,
    reindexing_functor,
    split_cleavages,
)
from fibcat.functor import FunctorData, identity_functor
from fibcat.indexed import grothendieck

import oracles
from strategies import posets


def hyper_oracle(P: FibrationData) -> set[int]:
    T, B = P.total, P.base
    tcomp = {(g, f): T.comp(g, f) for g in T.arrows for f in T.arrows if T.dom[g] == T.cod[f]}
    bcomp = {(g, f): B.comp(g, f) for g in B.arrows for f in B.arrows if B.dom[g] == B.cod[f]}
    return oracles.hypercartesian_arrows(T.dom, T.cod, tcomp, bcomp, P.P_arr)


def corpus_fibrations():
    return [pmod(), hwarn(), grothendieck(presheaf_on_2()).fibration, fundamental_fibration(D2()), fundamental_fibration(N5())]


# ---------------------------------------------------------------- classify_arrow


def test_identity_arrows_have_every_flag():
    for P in corpus_fibrations():
        for x in P.total.objects:
            f = classify_arrow(P, P.total.identity[x])
            assert f.vertical and f.cartesian_liberal and f.hypercartesian and f.cocartesian


def test_pmod_odd_arrow_is_cartesian_over_the_generator():
    P = pmod()
    assert P.P_arr[1] == 1 and classify_arrow(P, 1).hypercartesian
    assert hyper_oracle(P) == set(P.total.arrows)


def test_fundamental_d2_cartesian_iff_pullback_square():
    P = fundamental_fibration(D2())
    B, T = P.base, P.total
    leq = {(B.dom[f], B.cod[f]) for f in B.arrows}
    built = P.built
    for f in T.arrows:
        (s0, s1, _), (t0, t1, _), top, bottom = built.arr_keys[f]
        # the square is a pullback iff s0 is the meet of t0 and s1
        is_pb = oracles.meet(B.n_obj, leq, t0, s1) == s0
        assert classify_arrow(P, f).hypercartesian == is_pb


@pytest.mark.parametrize("make", [pmod, hwarn, lambda: fundamental_fibration(D2())])
def test_hypercartesian_flags_match_oracle(make):
    P = make()
    assert {f for f in P.total.arrows if P.is_cartesian(f)} == hyper_oracle(P)


# ---------------------------------------------------------------- lifts


def test_lift_along_identity_contains_identity():
    for P in corpus_fibrations():
        for x in P.total.objects:
            u = P.base.identity[P.P_obj[x]]
            assert P.total.identity[x] in cartesian_lift(P, u, x)[0]
            assert P.total.identity[x] in cocartesian_lift(P, u, x)[0]


def test_pmod_lifts_are_the_odd_elements():
    P = pmod()
    assert cartesian_lift(P, 1, 0) == ((1, 3), 1)
    assert cocartesian_lift(P, 1, 0)[0] == (1, 3)


def test_discrete_fibration_has_exactly_one_lift():
    P = grothendieck(presheaf_on_2()).fibration
    for u in P.base.arrows:
        for x in P.over[P.base.cod[u]]:
            assert len(cartesian_lift(P, u, x)[0]) == 1


def test_cocartesian_lift_in_fundamental_d2_has_identity_top():
    P = fundamental_fibration(D2())
    B = P.base
    a, top, x = B.obj("a"), B.obj("⊤"), B.obj("⊥")
    u = B.hom(a, top)[0]
    X = arrow_object(P, B.hom(x, a)[0])
    _, canon = cocartesian_lift(P, u, X)
    target = arrow_object(P, B.hom(x, top)[0])
    assert canon == square_arrow(P, B.hom(x, a)[0], B.hom(x, top)[0], B.identity[x], u)
    assert P.total.cod[canon] == target


def test_missing_lift_raises():
    # the inclusion of ⊤ into 2 is not a fibration: nothing lies over ⊥
    two = ordinal2()
    P = FibrationData(FunctorData(T1(), two, [1], [2]))
    v = is_fibration(P)
    assert not v.fibration and v.counterexample is not None
    with pytest.raises(NotAFibration):
        choose_cleavage(P)
    u = two.hom(0, 1)[0]
    with pytest.raises(NoLift):
        cartesian_lift(P, u, 0)


# ---------------------------------------------------------------- is_fibration


def test_identity_functor_is_a_fibration():
    assert is_fibration(identity_functor(D2())).fibration


def test_pmod_is_a_bifibration():
    assert is_fibration(pmod()).bifibration


def test_codomain_fibration_on_n5():
    assert is_fibration(fundamental_fibration(N5())).fibration


def test_fundamental_fibration_of_discrete_two_exists():
    P = fundamental_fibration(discrete2())
    assert P.total.n_obj == 2 and is_fibration(P).fibration


def test_fundamental_fibration_needs_pullbacks():
    span = poset_from_covers(["l", "r", "t"], [("l", "t"), ("r", "t")])
    with pytest.raises(BaseLacksPullbacks):
        fundamental_fibration(span)


@given(posets(4))
def test_fundamental_fibration_exists_iff_pullbacks(p):
    C, n, cov = p
    leq = oracles.closure(n, cov)
    has = all(
        oracles.meet(n, leq, a, b) is not None
        for a in range(n)
        for b in range(n)
        if any((a, c) in leq and (b, c) in leq for c in range(n))
    )
    try:
        P = fundamental_fibration(C)
    except BaseLacksPullbacks:
        assert not has
    else:
        assert has and is_fibration(P).fibration


# ---------------------------------------------------------------- cleavages


def test_discrete_fibration_cleavage_is_unique_and_split():
    P = grothendieck(presheaf_on_2()).fibration
    assert len(list(enumerate_cleavages(P))) == 1
    assert check_cleavage_split(choose_cleavage(P)).split


def test_pmod_cleavage_and_coherence():
    P = pmod()
    cl = choose_cleavage(P)
    assert cl(1, 0) == 1
    assert cl.coherence(1, 1, 0) == 2
    assert all(not check_cleavage_split(c).split for c in enumerate_cleavages(P))


def test_hwarn_least_cleavage_and_two_splittings():
    P = hwarn()
    u = P.base.hom(0, 1)[0]
    lifts, canon = cartesian_lift(P, u, 1)
    assert len(lifts) == 2 and choose_cleavage(P)(u, 1) == min(lifts)
    assert len(split_cleavages(P)) == 2


def test_every_cleavage_is_normalised_with_vertical_iso_coherence():
    for P in corpus_fibrations()[:3]:
        for cl in enumerate_cleavages(P):
            B = P.base
            for u in B.arrows:
                for v in B.incoming[B.dom[u]]:
                    for x in P.over[B.cod[u]]:
                        c = cl.coherence(u, v, x)
                        assert P.is_vertical(c) and P.total.is_iso(c)
                        if cl.is_split:
                            assert P.total.is_identity(c)


# ---------------------------------------------------------------- morphisms


def test_identity_is_a_cartesian_functor():
    P = hwarn()
    assert check_fib_morphism(FibMorphism("cartesian_functor", identity_functor(P.total)), P, P).ok


def test_collapsing_hwarn_fibre_is_cartesian():
    P = hwarn()
    Q = FibrationData(identity_functor(P.base))
    F = FunctorData(P.total, P.base, list(P.P_obj), list(P.P_arr))
    assert check_fib_morphism(FibMorphism("cartesian_functor", F), P, Q).ok


# ---------------------------------------------------------------- reindexing


def test_reindexing_along_identity_is_identity():
    P = fundamental_fibration(D2())
    cl = choose_cleavage(P)
    I = P.base.obj("a")
    F = reindexing_functor(cl, P.base.identity[I])
    assert F == identity_functor(F.source)


def test_reindexing_in_fundamental_d2_is_meet():
    P = fundamental_fibration(D2())
    B = P.base
    cl = choose_cleavage(P)
    a, top = B.obj("a"), B.obj("⊤")
    u = B.hom(a, top)[0]
    leq = {(B.dom[f], B.cod[f]) for f in B.arrows}
    for x in B.objects:
        X = arrow_object(P, B.hom(x, top)[0])
        Y = cl.star(u, X)
        assert B.dom[P.built.obj_keys[Y][2]] == oracles.meet(4, leq, x, a)


def test_reindexing_hwarn_is_the_unique_functor():
    P = hwarn()
    u = P.base.hom(0, 1)[0]
    F = reindexing_functor(choose_cleavage(P), u)
    assert F.source.n_obj == 1 and F.target.n_arr == 2
    assert list(F.arr_map) == [F.target.identity[0]]


# ---------------------------------------------------------------- invariants


@pytest.mark.parametrize("make", [pmod, hwarn, lambda: fundamental_fibration(D2()), lambda: fundamental_fibration(N5())])
def test_cartesian_lemmas_hold(make):
    P = make()
    assert cartesian_composition_failures(P) == []
    assert iso_characterisation_failures(P) == []
    assert lift_uniqueness_failures(P) == []
    assert liberal_vs_hyper_failures(P) == []
    assert cocartesian_remark_failures(P) == []


@given(posets(4))
def test_fundamental_fibration_lemmas_on_random_posets(p):
    C = p[0]
    try:
        P = fundamental_fibration(C)
    except BaseLacksPullbacks:
        return
    assert cartesian_composition_failures(P) == []
    assert liberal_vs_hyper_failures(P) == []
