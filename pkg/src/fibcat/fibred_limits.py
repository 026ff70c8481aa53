"""Fibred finite limits, small global sections, geometric fibrations and the
observations about small fibrations."""

from __future__ import annotations

from .analyze import classify_shape, is_locally_small, is_representable
from .category import FinCat
from .closure import InternalCat, externalize
from .errors import FibcatError, NoFibrewiseTerminals, SearchCapExceeded
from .fibration import FibrationData, choose_cleavage, find_fibred_equivalence
from .functor import FunctorData
from .limits import (
    find_limit,
    has_finite_limits,
    has_pullbacks,
    initial_object,
    is_pullback_square,
    terminal_object,
)
from .report import UNKNOWN, Crosscheck, Verdict
from .search import DEFAULT_CAP, Budget, find_right_adjoint


# ---------------------------------------------------------------- finite limits


def _fibre_pullback_failure(P: FibrationData) -> dict | None:
    """A fibre cospan without pullback, or a fibre pullback not preserved by reindexing."""
    cl = choose_cleavage(P)
    B = P.base
    for I in B.objects:
        F = P.fibre(I)
        C = F.cat
        for c in C.objects:
            for f in C.incoming[c]:
                for g in C.incoming[c]:
                    r = find_limit(C, "pullback", (f, g))
                    if not r:
                        return {"I": I, "cospan": (F.arrows[f], F.arrows[g])}
                    p1, p2 = (F.arrows[p] for p in r.canonical.legs)
                    tf, tg = F.arrows[f], F.arrows[g]
                    for u in B.incoming[I]:
                        G = P.fibre(B.dom[u])
                        img = [G.arr_index[cl.reindex_arrow(u, a)] for a in (p2, p1, tg, tf)]
                        if not is_pullback_square(G.cat, *img):
                            return {"I": I, "cospan": (tf, tg), "u": u}
    return None


def fibrewise_terminals(P: FibrationData, strict: bool = True) -> dict[int, int] | None:
    """``I ↦ 1_I`` with a unique arrow ``X → 1_I`` over every ``u: J → I``.

    Raises :class:`NoFibrewiseTerminals` (or returns ``None`` when not ``strict``).
    """
    B = P.base
    out = {}
    for I in B.objects:
        found = None
        for t in P.over[I]:
            if all(len(P.hom_over(X, t, u)) == 1 for u in B.incoming[I] for X in P.over[B.dom[u]]):
                found = t
                break
        if found is None:
            if strict:
                raise NoFibrewiseTerminals(I)
            return None
        out[I] = found
    return out


def _fibre_terminal_failure(P: FibrationData) -> dict | None:
    cl = choose_cleavage(P)
    B = P.base
    for I in B.objects:
        F = P.fibre(I)
        t = terminal_object(F.cat)
        if t is None:
            return {"I": I}
        for u in B.incoming[I]:
            G = P.fibre(B.dom[u])
            image = G.obj_index[P.total.dom[cl(u, F.objects[t])]]
            if not all(len(G.cat.hom(y, image)) == 1 for y in G.cat.objects):
                return {"I": I, "u": u}
    return None


def _total_pullback_failure(P: FibrationData) -> dict | None:
    """A total cospan without pullback, or one whose pullback is not sent to a pullback."""
    T, B = P.total, P.base
    for c in T.objects:
        for f in T.incoming[c]:
            for g in T.incoming[c]:
                r = find_limit(T, "pullback", (f, g))
                if not r:
                    return {"cospan": (f, g)}
                p1, p2 = r.canonical.legs
                if not is_pullback_square(B, P.P_arr[p2], P.P_arr[p1], P.P_arr[g], P.P_arr[f]):
                    return {"cospan": (f, g), "not_preserved": True}
    return None


def _total_terminal(P: FibrationData) -> bool:
    T, B = P.total, P.base
    one = terminal_object(T)
    return one is not None and all(len(B.hom(I, P.P_obj[one])) == 1 for I in B.objects)


def _cartesian_square_failures(P: FibrationData) -> list[tuple]:
    """Squares that should be total pullbacks: cartesian squares over base pullbacks,
    and cartesian arrows along vertical sides."""
    T = P.total
    cart = [f for f in T.arrows if P.is_cartesian(f)]
    out = []
    for bottom in cart:
        for right in T.incoming[T.cod[bottom]]:
            for left in T.incoming[T.dom[bottom]]:
                for top in T.hom(T.dom[left], T.dom[right]):
                    if T.comp(right, top) != T.comp(bottom, left):
                        continue
                    all_cart = P.is_cartesian(top) and P.is_cartesian(left) and P.is_cartesian(right)
                    over_pullback = is_pullback_square(P.base, P.P_arr[top], P.P_arr[left], P.P_arr[right], P.P_arr[bottom])
                    vertical_sides = P.is_cartesian(top) and P.is_vertical(left) and P.is_vertical(right)
                    if (all_cart and over_pullback) or vertical_sides:
                        if not is_pullback_square(T, top, left, right, bottom):
                            out.append((top, left, right, bottom))
    return out


def _fibre_pullbacks_not_total(P: FibrationData) -> list[tuple]:
    out = []
    for I in P.base.objects:
        F = P.fibre(I)
        C = F.cat
        for c in C.objects:
            for f in C.incoming[c]:
                for g in C.incoming[c]:
                    r = find_limit(C, "pullback", (f, g))
                    if r:
                        p1, p2 = (F.arrows[p] for p in r.canonical.legs)
                        if not is_pullback_square(P.total, p2, p1, F.arrows[g], F.arrows[f]):
                            out.append((F.arrows[f], F.arrows[g]))
    return out


def finite_limit_profile(P: FibrationData, crosscheck: bool = True) -> Verdict:
    """Fibred pullbacks, terminals and finite limits, decided fibrewise (with
    stability under reindexing) and through the total category."""
    P.require_fibration()
    B = P.base
    pb_fail = _fibre_pullback_failure(P)
    term_fail = _fibre_terminal_failure(P)
    flags = {
        "pullbacks": pb_fail is None,
        "terminals": term_fail is None,
        "finite_limits": pb_fail is None and term_fail is None,
    }
    failures = {"pullbacks": pb_fail, "terminals": term_fail}
    checks = []
    details = {"failures": {k: v for k, v in failures.items() if v is not None}}
    if crosscheck:
        base_pb = has_pullbacks(B)
        base_term = terminal_object(B) is not None
        total_pb = _total_pullback_failure(P) is None
        total_term = _total_terminal(P)
        checks = [
            Crosscheck("fibred pullbacks", "fibres and reindexing", flags["pullbacks"], "total pullbacks preserved", total_pb, base_pb),
            Crosscheck(
                "fibred terminals",
                "fibres and reindexing",
                flags["terminals"],
                "total terminal over base terminal",
                total_term,
                base_pb and base_term,
            ),
            Crosscheck(
                "fibred finite limits",
                "fibres and reindexing",
                flags["finite_limits"],
                "total finite limits preserved",
                total_pb and total_term,
                has_finite_limits(B),
            ),
        ]
        if base_pb:
            squares = _cartesian_square_failures(P)
            checks.append(Crosscheck("cartesian squares are pullbacks", "sweep", not squares, "expected", True))
        if flags["pullbacks"]:
            fibre_pb = _fibre_pullbacks_not_total(P)
            checks.append(Crosscheck("fibre pullbacks are total pullbacks", "sweep", not fibre_pb, "expected", True))
    return Verdict("finite_limit_profile", flags, crosschecks=checks, details=details)


# ---------------------------------------------------------------- global sections


def terminal_functor(P: FibrationData, ones: dict[int, int]) -> FunctorData:
    """``1: B → X`` choosing fibrewise terminals."""
    B = P.base
    arr = [P.hom_over(ones[B.dom[v]], ones[B.cod[v]], v)[0] for v in B.arrows]
    return FunctorData(B, P.total, [ones[I] for I in B.objects], arr)


def has_small_global_sections(P: FibrationData) -> Verdict:
    """Each ``X`` has ``ε_X: 1_K → X`` through which every ``σ: 1_J → X`` factors
    as ``ε_X∘1_v`` for a unique ``v``; the right adjoint search on ``1`` is the cross-check."""
    P.require_fibration()
    ones = fibrewise_terminals(P)
    B, T = P.base, P.total
    one = terminal_functor(P, ones)
    G_obj, counit, failure = [], [], None
    for X in T.objects:
        found = None
        for K in B.objects:
            for eps in T.hom(ones[K], X):
                if _global_section_universal(B, T, one, ones, X, K, eps):
                    found = (K, eps)
                    break
            if found:
                break
        if found is None:
            failure = failure or {"X": X, "X_label": T.obj_labels[X]}
            continue
        G_obj.append(found[0])
        counit.append(found[1])
    verdict = failure is None
    adj = find_right_adjoint(one)
    checks = [Crosscheck("small global sections", "counit search", verdict, "right adjoint to 1", bool(adj))]
    witnesses = []
    if verdict:
        witnesses = [{"X": X, "G": G_obj[X], "counit": counit[X]} for X in T.objects]
    return Verdict("small_global_sections", verdict, witnesses, failure, checks)


def _global_section_universal(B: FinCat, T: FinCat, one: FunctorData, ones: dict, X: int, K: int, eps: int) -> bool:
    for J in B.objects:
        for sigma in T.hom(ones[J], X):
            if sum(1 for v in B.hom(J, K) if T.comp(eps, one(v)) == sigma) != 1:
                return False
    return True


# ---------------------------------------------------------------- geometric


def is_geometric(P: FibrationData) -> Verdict:
    """Fibred finite limits, stable disjoint internal sums and small global sections."""
    from .sums import has_internal_sums, sums_profile

    P.require_fibration()
    items: dict[str, bool] = {}
    checks = []
    limits = finite_limit_profile(P)
    checks += limits.crosschecks
    items["finite_limits"] = limits.verdict["finite_limits"]
    try:
        sums = has_internal_sums(P)
        checks += sums.crosschecks
        items["internal_sums"] = sums.verdict
    except FibcatError:
        items["internal_sums"] = False
    if items["internal_sums"]:
        prof = sums_profile(P)
        checks += prof.crosschecks
        items["stable"] = prof.verdict["stable"]
        items["disjoint"] = prof.verdict["disjoint"]
    else:
        items["stable"] = items["disjoint"] = False
    try:
        gs = has_small_global_sections(P)
        checks += gs.crosschecks
        items["small_global_sections"] = gs.verdict
    except NoFibrewiseTerminals:
        items["small_global_sections"] = False
    return Verdict("geometric", all(items.values()), crosschecks=checks, details={"items": items})


# ---------------------------------------------------------------- small fibrations


def _initial_observation(P: FibrationData) -> bool:
    zero = initial_object(P.base)
    return all(len(P.verticals(X, Y)) == 1 for X in P.over[zero] for Y in P.over[zero])


def _epi_observation(P: FibrationData) -> bool:
    T, B = P.total, P.base
    return all(T.is_epi(f) for f in T.arrows if P.is_cartesian(f) and B.is_epi(P.P_arr[f]))


def internal_categories(B: FinCat, budget: Budget):
    """Every internal category in ``B``, candidates counted against ``budget``."""
    for C0 in B.objects:
        for C1 in B.objects:
            for d0 in B.hom(C1, C0):
                for d1 in B.hom(C1, C0):
                    r = find_limit(B, "pullback", (d0, d1))
                    if not r:
                        continue
                    for i in B.hom(C0, C1):
                        for m in B.hom(r.canonical.apex, C1):
                            budget.tick()
                            C = InternalCat(B, C0, C1, d0, d1, i, m)
                            if not C.violations() and _associative(C):
                                yield C


def _associative(C: InternalCat) -> bool:
    B = C.ambient
    for X in B.objects:
        for h in B.hom(X, C.C1):
            for g in B.hom(X, C.C1):
                if B.comp(C.d0, h) != B.comp(C.d1, g):
                    continue
                for f in B.hom(X, C.C1):
                    if B.comp(C.d0, g) != B.comp(C.d1, f):
                        continue
                    hg = B.comp(C.m, C.pair(h, g))
                    gf = B.comp(C.m, C.pair(g, f))
                    if B.comp(C.m, C.pair(hg, f)) != B.comp(C.m, C.pair(h, gf)):
                        return False
    return True


def is_small(P: FibrationData, cap: int = DEFAULT_CAP) -> bool | str:
    """Is ``P`` equivalent to the externalisation of an internal category?
    Returns ``"unknown"`` when the capped search runs out."""
    budget = Budget(cap, "internal category search")
    try:
        for C in internal_categories(P.base, budget):
            if find_fibred_equivalence(externalize(C), P, cap):
                return True
    except SearchCapExceeded:
        return UNKNOWN
    return False


def small_fibration_tests(P: FibrationData, cap: int = DEFAULT_CAP) -> Verdict:
    """Representability, smallness and the two observations about locally small fibrations."""
    P.require_fibration()
    B = P.base
    locally_small = is_locally_small(P, global_spans=False).verdict
    shape = classify_shape(P).verdict
    representable = is_representable(P).verdict if shape["elementary"] else None
    flags = {
        "representable": representable,
        "small": is_small(P, cap),
        "locally_small": locally_small,
    }
    applies_initial = locally_small and initial_object(B) is not None
    checks = [
        Crosscheck("unique verticals over initial", "sweep", _initial_observation(P) if applies_initial else None, "expected", True, applies_initial),
        Crosscheck("cartesian over epi is epi", "sweep", _epi_observation(P) if locally_small else None, "expected", True, locally_small),
    ]
    return Verdict("small_fibration", flags, crosschecks=checks)
