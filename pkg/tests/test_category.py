from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibcat.category import (
    FinCat,
    RawCategory,
    law_violations,
    monoid_category,
    opposite_category,
    validate_category,
)
from fibcat.constructions import all_idempotents_split, derived_category, pullback_of_categories, split_idempotents
from fibcat.corpus import D2, N5, T1, Z2, Z4, chain3, discrete2, ordinal2, poset_map
from fibcat.errors import AssociativityViolation, BadArgs, CategoryValidationError, DanglingId, FunctorLawViolation
from fibcat.functor import FunctorData, constant_functor, identity_functor, validate_mapping
from fibcat.limits import find_limit
from fibcat.category import Absent, empty_category
from fibcat.search import categories_equivalent, find_left_adjoint, find_right_adjoint

import oracles
from strategies import groups, posets, small_categories


def as_dicts(C: FinCat):
    arrows = {f: (C.dom[f], C.cod[f]) for f in C.arrows}
    identity = dict(enumerate(C.identity))
    comp = {(g, f): C.comp(g, f) for g in C.arrows for f in C.arrows if C.dom[g] == C.cod[f]}
    return arrows, identity, comp


# ---------------------------------------------------------------- validate_category


def test_terminal_category_is_valid():
    assert law_violations(T1()) == []
    assert (T1().n_obj, T1().n_arr) == (1, 1)


def test_z4_is_valid_and_matches_direct_enumeration():
    C = Z4()
    arrows, identity, comp = as_dicts(C)
    assert len(comp) == 16
    assert oracles.law_failures(arrows, identity, comp) == []
    assert law_violations(C) == []
    assert comp == oracles.group_table(4)


def test_z4_corrupted_reports_exactly_the_oracle_triples():
    table = np.array([[(g + f) % 4 for f in range(4)] for g in range(4)])
    table[1, 1] = 3
    bad = FinCat([0] * 4, [0] * 4, [0], table)
    found = law_violations(bad)
    arrows, identity, comp = as_dicts(bad)
    expected = {(h, g, f) for _, h, g, f in oracles.law_failures(arrows, identity, comp)}
    assert expected and {(v.h, v.g, v.f) for v in found} == expected
    assert all(isinstance(v, AssociativityViolation) for v in found)
    # 1∘(1∘1) = 1∘3 = 0 = 3∘1 = (1∘1)∘1, so the triple (1,1,1) itself holds
    assert (1, 1, 1) not in expected and (1, 1, 2) in expected
    with pytest.raises(CategoryValidationError):
        validate_category(bad)


def test_raw_category_with_dangling_identity():
    raw = RawCategory(objects=["x"], arrows=[("i", "x", "x")], identity={"x": "j"}, comp={("i", "i"): "i"})
    with pytest.raises(CategoryValidationError) as info:
        validate_category(raw)
    assert any(isinstance(v, DanglingId) for v in info.value.violations)


def test_raw_category_renumbers_in_sorted_order():
    raw = RawCategory(
        objects=["b", "a"],
        arrows=[("ib", "b", "b"), ("ia", "a", "a"), ("f", "a", "b")],
        identity={"a": "ia", "b": "ib"},
        comp={("ia", "ia"): "ia", ("ib", "ib"): "ib", ("f", "ia"): "f", ("ib", "f"): "f"},
    )
    C = validate_category(raw)
    assert C.n_obj == 2 and C.n_arr == 3
    assert C.dom[C.arr("f")] == C.obj("a")


@given(groups(), st.data())
def test_corrupted_tables_agree_with_oracle(C, data):
    n = C.n_arr
    g = data.draw(st.integers(0, n - 1))
    f = data.draw(st.integers(0, n - 1))
    v = data.draw(st.integers(0, n - 1))
    table = C.table.copy()
    table[g, f] = v
    bad = FinCat(C.dom, C.cod, C.identity, table)
    arrows, identity, comp = as_dicts(bad)
    assert (law_violations(bad) == []) == (oracles.law_failures(arrows, identity, comp) == [])


@given(posets())
def test_random_posets_are_valid_and_thin(p):
    C, n, cov = p
    assert law_violations(C) == []
    assert C.is_thin
    assert C.n_arr == len(oracles.closure(n, cov))


@given(groups())
def test_random_groups_are_valid_groupoids(C):
    assert law_violations(C) == []
    assert C.is_groupoid


# ---------------------------------------------------------------- opposite


def test_opposite_of_terminal():
    assert opposite_category(T1()) == T1()


def test_opposite_chain_reverses_arrows():
    C = chain3()
    op = opposite_category(C)
    assert op.n_arr == C.n_arr == 6
    for f in C.arrows:
        assert (op.dom[f], op.cod[f]) == (C.cod[f], C.dom[f])


def test_opposite_group_is_isomorphic_by_inversion():
    C = Z4()
    op = opposite_category(C)
    inv = [(-x) % 4 for x in range(4)]
    F = FunctorData(C, op, [0], inv)
    assert validate_mapping(F) == []


@given(small_categories())
def test_opposite_is_an_involution(C):
    twice = opposite_category(opposite_category(C))
    assert twice == C and twice.same_labels(C)
    assert np.array_equal(twice.table, C.table)
    assert law_violations(opposite_category(C)) == []


# ---------------------------------------------------------------- derived categories


def test_arrow_category_of_terminal():
    assert derived_category("arrow", T1()).cat == T1()


def test_slice_of_chain_at_top():
    C = chain3()
    S = derived_category("slice", C, C.obj("2")).cat
    assert (S.n_obj, S.n_arr) == (3, 6)
    assert law_violations(S) == []


def test_product_of_ordinal_two():
    P = derived_category("product", ordinal2(), ordinal2()).cat
    assert (P.n_obj, P.n_arr) == (4, 9)


def test_derived_category_rejects_bad_args():
    with pytest.raises(BadArgs):
        derived_category("slice", chain3())
    with pytest.raises(BadArgs):
        derived_category("nonsense")


@given(small_categories(), small_categories())
def test_product_is_symmetric_up_to_iso(C, D):
    CD = derived_category("product", C, D).cat
    DC = derived_category("product", D, C).cat
    assert law_violations(CD) == []
    assert (CD.n_obj, CD.n_arr) == (C.n_obj * D.n_obj, C.n_arr * D.n_arr) == (DC.n_obj, DC.n_arr)


# ---------------------------------------------------------------- limits


def test_terminal_of_lattice_is_top():
    C = D2()
    assert find_limit(C, "terminal").canonical.apex == C.obj("⊤")


def test_pullback_in_n5_is_meet():
    C = N5()
    z, y, top = C.obj("z"), C.obj("y"), C.obj("⊤")
    res = find_limit(C, "pullback", [C.hom(z, top)[0], C.hom(y, top)[0]])
    assert res.canonical.apex == C.obj("⊥")
    leq = {(C.dom[f], C.cod[f]) for f in C.arrows}
    assert oracles.meet(C.n_obj, leq, z, y) == C.obj("⊥")


def test_discrete_two_has_no_terminal():
    assert isinstance(find_limit(discrete2(), "terminal"), Absent)


@given(posets())
def test_products_in_posets_are_meets(p):
    C, n, cov = p
    leq = oracles.closure(n, cov)
    for a in range(n):
        for b in range(n):
            res = find_limit(C, "binary_product", [a, b])
            m = oracles.meet(n, leq, a, b)
            if m is None:
                assert isinstance(res, Absent)
            else:
                assert res.canonical.apex == m


# ---------------------------------------------------------------- pullback of categories


def test_pullback_of_identities_is_diagonal():
    C = D2()
    d = pullback_of_categories(identity_functor(C), identity_functor(C))
    assert (d.cat.n_obj, d.cat.n_arr) == (C.n_obj, C.n_arr)


def test_pullback_over_terminal_is_product():
    two = ordinal2()
    bang = constant_functor(two, T1(), 0)
    d = pullback_of_categories(bang, bang)
    assert (d.cat.n_obj, d.cat.n_arr) == (4, 9)
    F, G = d.projections
    assert F.then(bang) == G.then(bang)


def test_pullback_with_empty_is_empty():
    C = D2()
    E = empty_category()
    d = pullback_of_categories(FunctorData(E, C, [], []), identity_functor(C))
    assert d.cat.n_obj == 0


# ---------------------------------------------------------------- idempotents


def test_split_idempotents_of_split_category():
    C = D2()
    K = split_idempotents(C)
    assert K.projections[0].is_equivalence()


def test_split_idempotents_of_idempotent_monoid():
    M = monoid_category(["1", "e"], lambda g, f: max(g, f))
    K = split_idempotents(M).cat
    assert K.n_obj == 2
    assert all_idempotents_split(K)
    assert not all_idempotents_split(M)


def test_split_idempotents_of_group():
    C = Z4()
    idem = [x for x in range(4) if (2 * x) % 4 == x]
    assert idem == [0]
    assert split_idempotents(C).cat.n_obj == 1


@given(small_categories())
def test_split_idempotents_output_is_split(C):
    d = split_idempotents(C)
    assert all_idempotents_split(d.cat)
    inc = d.projections[0]
    assert inc.is_full() and inc.is_faithful()


# ---------------------------------------------------------------- mappings


def test_identity_functor_is_valid():
    assert validate_mapping(identity_functor(D2())) == []


def test_monotone_map_into_d2_is_a_functor():
    two, C = ordinal2(), D2()
    F = poset_map(two, C, [C.obj("⊥"), C.obj("a")])
    assert validate_mapping(F) == []


def test_z2_to_z4_sending_one_to_one_is_not_a_functor():
    F = FunctorData(Z2(), Z4(), [0], [0, 1])
    found = validate_mapping(F)
    assert found and all(isinstance(v, FunctorLawViolation) for v in found)


# ---------------------------------------------------------------- adjoints


def test_identity_has_identity_right_adjoint():
    C = D2()
    adj = find_right_adjoint(identity_functor(C))
    assert adj.right == identity_functor(C)


def test_inclusion_of_two_into_d2_has_galois_right_adjoint():
    two, C = ordinal2(), D2()
    F = poset_map(two, C, [C.obj("⊥"), C.obj("⊤")])
    adj = find_right_adjoint(F)
    top = C.obj("⊤")
    for x in C.objects:
        assert adj.right.ob(x) == (two.obj("⊤") if x == top else two.obj("⊥"))
    leq2 = {(two.dom[f], two.cod[f]) for f in two.arrows}
    leqD = {(C.dom[f], C.cod[f]) for f in C.arrows}
    assert oracles.galois_right_adjoint(2, leq2, 4, leqD, list(F.obj_map)) == list(adj.right.obj_map)


def test_constant_top_on_two_has_no_right_adjoint():
    two = ordinal2()
    assert isinstance(find_right_adjoint(constant_functor(two, two, two.obj("⊤"))), Absent)


def test_constant_bottom_on_two_has_constant_top_right_adjoint():
    two = ordinal2()
    adj = find_right_adjoint(constant_functor(two, two, two.obj("⊥")))
    assert list(adj.right.obj_map) == [two.obj("⊤")] * 2
    assert isinstance(find_left_adjoint(constant_functor(two, two, two.obj("⊥"))), Absent)


@given(posets(4), posets(4), st.data())
def test_right_adjoint_search_matches_galois_scan(p, q, data):
    (A, n, cov_a), (B, m, cov_b) = p, q
    la, lb = oracles.closure(n, cov_a), oracles.closure(m, cov_b)
    obj = data.draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n))
    if any((obj[x], obj[y]) not in lb for x, y in la):
        return
    F = poset_map(A, B, obj)
    found = find_right_adjoint(F)
    expected = oracles.galois_right_adjoint(n, la, m, lb, obj)
    assert (expected is None) == isinstance(found, Absent)


# ---------------------------------------------------------------- equivalence


def test_category_equivalent_to_itself():
    assert not isinstance(categories_equivalent(D2(), D2()), Absent)


def test_relabelled_d2_is_equivalent():
    C = D2()
    R = C.relabel([f"o{i}" for i in C.objects], [f"f{i}" for i in C.arrows])
    w = categories_equivalent(C, R)
    assert w.forward.is_equivalence()


def test_two_and_d2_are_inequivalent():
    assert isinstance(categories_equivalent(ordinal2(), D2()), Absent)
