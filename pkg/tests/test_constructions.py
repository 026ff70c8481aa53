from __future__ import annotations

import pytest
from hypothesis import given

from fibcat.category import Absent, discrete_category, law_violations
from fibcat.closure import (
    change_of_base,
    check_fibred_fibration,
    diagram_fibration,
    discrete_internal,
    exponential_fibration,
    externalize,
    fam_fibration,
    fam_monad_law_failures,
    fundamental_fibration,
    glueing,
    internal_opposite,
    product_fibration,
    slice_fibration,
)
from fibcat.corpus import D2, N5, T1, Z2, hwarn, hwarn_indexed, ordinal2, pmod, poset_map, presheaf_on_2
from fibcat.errors import BaseLacksPullbacks, CleavageNotSplit
from fibcat.fibration import (
    FibrationData,
    check_cleavage_split,
    choose_cleavage,
    enumerate_cleavages,
    find_fibred_equivalence,
    is_cartesian_functor,
    is_fibrewise_equivalence,
    split_cleavages,
)
from fibcat.functor import FunctorData, compose_functors, constant_functor, identity_functor, validate_mapping
from fibcat.indexed import IndexedCat, comparison_to_grothendieck, grothendieck, to_indexed
from fibcat.opposite import double_opposite_comparison, opposite_cartesian_failures, opposite_fibration
from fibcat.search import categories_equivalent, isomorphic_categories
from fibcat.splitting import split_left, split_right

from strategies import posets


def constant_indexed(B, C) -> IndexedCat:
    return IndexedCat(B, [C] * B.n_obj, [identity_functor(C)] * B.n_arr)


def same_fibration(P: FibrationData, Q: FibrationData) -> bool:
    return P.total == Q.total and P.proj == Q.proj


# ---------------------------------------------------------------- Grothendieck


def test_grothendieck_of_constant_terminal_is_identity_fibration():
    B = D2()
    G = grothendieck(constant_indexed(B, T1()))
    assert not isinstance(isomorphic_categories(G.fibration.total, B), Absent)
    assert G.cleavage.is_split


def test_grothendieck_of_hwarn_counts():
    P = grothendieck(hwarn_indexed()).fibration
    assert (P.total.n_obj, P.total.n_arr) == (2, 5)
    assert law_violations(P.total) == []


def test_grothendieck_of_discrete_data_is_discrete():
    P = grothendieck(presheaf_on_2()).fibration
    for I in P.base.objects:
        assert P.fibre(I).cat.is_discrete


@pytest.mark.parametrize("make", [hwarn_indexed, presheaf_on_2])
def test_canonical_cleavage_is_split_and_round_trips(make):
    H = make()
    G = grothendieck(H)
    assert check_cleavage_split(G.cleavage).split
    assert to_indexed(G.fibration, G.cleavage) == H


def test_both_hwarn_splittings_give_the_same_indexed_category():
    P = hwarn()
    cls = split_cleavages(P)
    assert len(cls) == 2 and cls[0] != cls[1]
    assert to_indexed(P, cls[0]) == to_indexed(P, cls[1])


def test_to_indexed_rejects_unsplit_cleavage():
    P = pmod()
    with pytest.raises(CleavageNotSplit):
        to_indexed(P, choose_cleavage(P))


def test_grothendieck_of_to_indexed_is_isomorphic_over_base():
    P = hwarn()
    cl = split_cleavages(P)[0]
    G = grothendieck(to_indexed(P, cl))
    K = comparison_to_grothendieck(P, cl, G)
    assert validate_mapping(K) == []
    assert is_cartesian_functor(K, G.fibration, P).ok
    assert K.is_injective_on_objects() and K.is_full() and K.is_faithful()


# ---------------------------------------------------------------- fundamental fibration


def test_fundamental_fibration_of_terminal():
    P = fundamental_fibration(T1())
    assert (P.total.n_obj, P.total.n_arr) == (1, 1)


def test_fundamental_fibration_of_d2_fibre_over_top():
    P = fundamental_fibration(D2())
    F = P.fibre(D2().obj("⊤")).cat
    assert not isinstance(isomorphic_categories(F, D2()), Absent)


# ---------------------------------------------------------------- externalisation


def test_externalised_discrete_internal_is_the_slice_fibration():
    B = D2()
    top = B.obj("⊤")
    E = externalize(discrete_internal(B, top))
    S = slice_fibration(B, top)
    assert find_fibred_equivalence(E, S)
    assert not isinstance(isomorphic_categories(E.total, S.total), Absent)


def test_externalised_discrete_internal_on_two():
    B = ordinal2()
    E = externalize(discrete_internal(B, B.obj("⊥")))
    assert find_fibred_equivalence(E, slice_fibration(B, B.obj("⊥")))


def test_externalised_group_has_groupoid_fibres():
    from fibcat.acceptance import corpus_internal_categories

    ic = corpus_internal_categories()["Z2 in vect_f2"]
    assert ic.violations() == []
    E = externalize(ic)
    assert E.is_fibration
    assert all(E.fibre(I).cat.is_groupoid for I in E.base.objects)


# ---------------------------------------------------------------- change of base


def test_change_of_base_along_identity():
    P = hwarn()
    Q = change_of_base(P, identity_functor(P.base))
    assert find_fibred_equivalence(Q, P)
    assert (Q.total.n_obj, Q.total.n_arr) == (P.total.n_obj, P.total.n_arr)


def test_glueing_inclusion_two_into_d2():
    two, C = ordinal2(), D2()
    F = poset_map(two, C, [C.obj("⊥"), C.obj("⊤")])
    gl = glueing(F)
    assert gl.base == two and gl.is_fibration
    # objects of D2↓F are pairs (x, I) with x ≤ F(I)
    assert gl.total.n_obj == sum(len(C.hom(x, F.ob(I))) for x in C.objects for I in two.objects)


def test_change_of_base_of_hwarn_at_bottom_is_the_fibre():
    P = hwarn()
    inc = FunctorData(T1(), P.base, [0], [P.base.identity[0]])
    Q = change_of_base(P, inc)
    assert not isinstance(categories_equivalent(Q.total, Z2()), Absent)


def test_change_of_base_composes_strictly():
    P = fundamental_fibration(D2())
    C = D2()
    G = poset_map(ordinal2(), C, [C.obj("⊥"), C.obj("⊤")])
    F = poset_map(T1(), ordinal2(), [1])
    lhs = change_of_base(change_of_base(P, G), F)
    rhs = change_of_base(P, compose_functors(G, F))
    assert lhs.total == rhs.total and lhs.proj == rhs.proj


def test_change_of_base_preserves_and_reflects_cartesian_arrows():
    P = fundamental_fibration(N5())
    C = N5()
    G = poset_map(ordinal2(), C, [C.obj("x"), C.obj("⊤")])
    Q = change_of_base(P, G)
    leg = Q.legs[1]
    for f in Q.total.arrows:
        assert Q.is_cartesian(f) == P.is_cartesian(leg(f))


# ---------------------------------------------------------------- fibred fibrations


def test_identity_on_total_is_a_fibred_fibration():
    P = fundamental_fibration(D2())
    v = check_fibred_fibration(P, identity_functor(P.total))
    assert v.left and v.right


def test_composite_of_lattice_codomain_fibrations():
    B = D2()
    P = fundamental_fibration(B)
    Q = fundamental_fibration(P.total)
    v = check_fibred_fibration(P, Q.proj)
    assert v.agree and v.left and v.right


def test_fibre_collapse_missing_lifts_is_not_a_fibration():
    P = hwarn()
    # only the object over ⊤ and its identity: nothing lies over (⊥,*)
    F = FunctorData(T1(), P.total, [1], [P.total.identity[1]])
    v = check_fibred_fibration(P, F)
    assert v.agree and not v.left and not v.right


# ---------------------------------------------------------------- products, diagrams, exponentials


def test_product_with_identity_fibration():
    P = hwarn()
    R = product_fibration(P, FibrationData(identity_functor(P.base)))
    assert find_fibred_equivalence(R, P)


def test_pmod_squared_fibre_is_kernel_pair():
    R = product_fibration(pmod(), pmod())
    fib = R.fibre(0).cat
    assert (fib.n_obj, fib.n_arr) == (1, 4) and fib.is_groupoid


def test_product_of_codomain_fibrations_validates():
    P = fundamental_fibration(D2())
    R = product_fibration(P, P)
    assert R.is_fibration
    assert law_violations(R.total) == []
    assert all(is_cartesian_functor(leg, R, P).ok for leg in R.legs)


def test_diagram_over_terminal_shape():
    P = hwarn()
    assert find_fibred_equivalence(diagram_fibration(P, T1()), P)


def test_diagram_of_pmod_over_two_has_functor_category_fibre():
    R = diagram_fibration(pmod(), ordinal2())
    fib = R.fibre(0).cat
    # functors 2 → Z2 (2 of them) with natural transformations between them
    assert fib.n_obj == 2 and fib.n_arr == 8
    assert R.is_fibration


def test_diagram_over_discrete_two_is_product():
    P = hwarn()
    assert find_fibred_equivalence(diagram_fibration(P, discrete_category(["l", "r"])), product_fibration(P, P))


def test_exponential_over_terminal_contains_identity():
    P = FibrationData(constant_functor(Z2(), T1(), 0))
    E = exponential_fibration(P, P)
    assert E.fibre_sizes[0][0] >= 1
    assert E.fibration.is_fibration


def test_exponential_from_terminal_fibration_is_target():
    B = ordinal2()
    one = FibrationData(identity_functor(B))
    Q = hwarn()
    E = exponential_fibration(one, Q)
    assert find_fibred_equivalence(E.fibration, Q)


# ---------------------------------------------------------------- Fam


def test_fam_over_terminal_base_is_equivalent():
    P = FibrationData(constant_functor(Z2(), T1(), 0))
    fam = fam_fibration(P)
    assert is_fibrewise_equivalence(fam.eta, P, fam.fibration)


def test_fam_of_codomain_fibration_over_d2():
    B = D2()
    P = fundamental_fibration(B)
    fam = fam_fibration(P)
    assert fam.fibration.base == B and fam.fibration.is_fibration
    top = B.obj("⊤")
    # objects over ⊤: an arrow a: K → ⊤ and an object of the slice over K
    expected = sum(len(P.over[B.dom[a]]) for a in B.incoming[top])
    assert len(fam.fibration.over[top]) == expected


@pytest.mark.parametrize("make", [pmod, hwarn, lambda: fundamental_fibration(ordinal2())])
def test_fam_monad_laws_and_cartesian_unit(make):
    P = make()
    assert fam_monad_law_failures(P) == []
    fam = fam_fibration(P)
    assert is_cartesian_functor(fam.eta, P, fam.fibration).ok


# ---------------------------------------------------------------- opposite


@pytest.mark.parametrize("make", [pmod, hwarn, lambda: fundamental_fibration(D2())])
def test_double_opposite_is_equivalent(make):
    P = make()
    Op = opposite_fibration(P)
    OpOp = opposite_fibration(Op)
    K = double_opposite_comparison(P, Op, OpOp)
    assert is_cartesian_functor(K, P, OpOp).ok and is_fibrewise_equivalence(K, P, OpOp)
    assert opposite_cartesian_failures(Op, P) == []


def test_opposite_of_discrete_fibration_is_itself():
    P = grothendieck(presheaf_on_2()).fibration
    Op = opposite_fibration(P)
    assert not isinstance(isomorphic_categories(Op.total, P.total), Absent)


@pytest.mark.parametrize("make", [pmod, hwarn, lambda: fundamental_fibration(D2())])
def test_opposite_is_cleavage_independent(make):
    P = make()
    outputs = {(opposite_fibration(P, cl).total, opposite_fibration(P, cl).proj) for cl in list(enumerate_cleavages(P))[:4]}
    assert len(outputs) == 1


def test_externalisation_commutes_with_opposite():
    B = D2()
    for I in B.objects:
        ic = discrete_internal(B, I)
        assert find_fibred_equivalence(opposite_fibration(externalize(ic)), externalize(internal_opposite(ic)))


# ---------------------------------------------------------------- splittings


def test_right_splitting_of_split_discrete_fibration():
    G = grothendieck(presheaf_on_2())
    R = split_right(G.fibration)
    assert R.split.cleavage.is_split
    assert R.comparison.is_injective_on_objects() and R.comparison.is_full() and R.comparison.is_faithful()


def test_splittings_of_pmod_are_split():
    P = pmod()
    R, L = split_right(P), split_left(P)
    assert R.split.cleavage.is_split and L.split.cleavage.is_split
    assert is_fibrewise_equivalence(R.comparison, R.split.fibration, P)
    assert is_fibrewise_equivalence(L.comparison, P, L.split.fibration)


def test_left_splitting_of_pmod_has_two_objects():
    assert split_left(pmod()).indexed.fibres[0].n_obj == 2


@given(posets(3))
def test_left_splitting_of_random_codomain_fibration(p):
    C = p[0]
    try:
        P = fundamental_fibration(C)
    except BaseLacksPullbacks:
        return
    L = split_left(P)
    assert L.split.cleavage.is_split
    assert L.indexed.violations() == []
    assert is_fibrewise_equivalence(L.comparison, P, L.split.fibration)
