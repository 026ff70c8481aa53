"""Reconstruction of fibrations as glueings: the sum-to-terminal functor, the
glueing equivalence and its generalisation to terminal-preserving functors."""

from __future__ import annotations

from dataclasses import dataclass

from .closure import arrow_object, glueing, square_arrow
from .errors import FibcatError, MissingStructure, PreconditionFailed, SearchCapExceeded
from .fibration import Fibre, FibrationData, find_fibred_equivalence, is_cartesian_functor, is_fibrewise_equivalence
from .fibred_limits import finite_limit_profile, fibrewise_terminals, terminal_functor
from .functor import FunctorData, NatTransData, compose_functors
from .limits import Cone, find_limit, has_finite_limits, is_pullback_square, mediators, terminal_object
from .report import Crosscheck, Verdict
from .search import DEFAULT_CAP, enumerate_transformations
from .sums import _extensive, _terminal_colifts, has_internal_sums, sums_profile


# ---------------------------------------------------------------- the sum-to-terminal functor


@dataclass
class TotalSum:
    """``X ↦ ∐_{P X} X`` into the fibre over the terminal object, and ``Δ = that∘1``.

    ``colift[X]`` is the canonical cocartesian arrow out of ``X`` over the
    terminal projection of ``P X``; ``functor`` is on total ids, landing in
    ``fibre.cat``.
    """

    fibration: FibrationData
    terminal: int
    ones: dict[int, int]
    fibre: Fibre
    colift: list[int]
    functor: FunctorData
    one: FunctorData
    delta: FunctorData

    def at(self, f: int) -> int:
        """Image of a total arrow as a total arrow over the terminal object."""
        return self.fibre.arrows[self.functor(f)]

    def at_object(self, X: int) -> int:
        return self.fibre.objects[self.functor.ob(X)]


def delta_functor(P: FibrationData) -> TotalSum:
    B, T = P.base, P.total
    top = terminal_object(B)
    if top is None:
        raise MissingStructure("base has no terminal object")
    ones = fibrewise_terminals(P, strict=False)
    if ones is None:
        raise MissingStructure("some fibre has no terminal object stable under reindexing")
    bang = {I: B.hom(I, top)[0] for I in B.objects}
    colift = []
    for X in T.objects:
        u = bang[P.P_obj[X]]
        if not P.colifts(u, X):
            raise MissingStructure(f"no cocartesian lift of {T.obj_labels[X]} along {B.arr_labels[u]}")
        colift.append(P.canonical_colift(u, X))
    F1 = P.fibre(top)
    obj = [F1.obj_index[T.cod[phi]] for phi in colift]
    arr = [
        F1.arr_index[P.cocartesian_vertical_factor(colift[T.dom[f]], T.comp(colift[T.cod[f]], f))]
        for f in T.arrows
    ]
    bold = FunctorData(T, F1.cat, obj, arr)
    one = terminal_functor(P, ones)
    return TotalSum(P, top, ones, F1, colift, bold, one, compose_functors(bold, one))


def total_sum_limit_failure(S: TotalSum) -> dict | None:
    """A finite limit of the total category not sent to a limit in the fibre over 1."""
    T, C = S.fibration.total, S.fibre.cat
    term = terminal_object(T)
    if term is not None and terminal_object(C) is not None:
        if not all(len(C.hom(c, S.functor.ob(term))) == 1 for c in C.objects):
            return {"terminal": term}
    for c in T.objects:
        for f in T.incoming[c]:
            for g in T.incoming[c]:
                r = find_limit(T, "pullback", (f, g))
                if not r:
                    continue
                p1, p2 = r.canonical.legs
                F = S.functor
                if not is_pullback_square(C, F(p2), F(p1), F(g), F(f)):
                    return {"cospan": (f, g)}
    return None


def mediator_failure(P: FibrationData) -> dict | None:
    """A total pullback whose mediator into the pullback of the vertical parts is not cocartesian."""
    T = P.total
    for c in T.objects:
        for f1 in T.incoming[c]:
            for f2 in T.incoming[c]:
                outer = find_limit(T, "pullback", (f1, f2))
                if not outer:
                    continue
                parts = []
                for f in (f1, f2):
                    u = P.P_arr[f]
                    if not P.colifts(u, T.dom[f]):
                        return None
                    phi = P.canonical_colift(u, T.dom[f])
                    parts.append((phi, P.cocartesian_vertical_factor(phi, f)))
                (phi1, alpha1), (phi2, alpha2) = parts
                inner = find_limit(T, "pullback", (alpha1, alpha2))
                if not inner:
                    return {"cospan": (f1, f2), "reason": "no pullback of the vertical parts"}
                g1, g2 = outer.canonical.legs
                src = Cone(outer.canonical.apex, (T.comp(phi1, g1), T.comp(phi2, g2)))
                theta = mediators(T, src, inner.canonical)[0]
                if not P.is_cocartesian(theta):
                    return {"cospan": (f1, f2), "theta": theta}
    return None


# ---------------------------------------------------------------- the glueing equivalence


@dataclass
class Reconstruction:
    """``P`` compared with ``gl(Δ)`` through the functor ``E``."""

    verdict: Verdict
    total_sum: TotalSum | None = None
    glued: FibrationData | None = None
    embedding: FunctorData | None = None


def comparison_functor(S: TotalSum) -> tuple[FibrationData, FunctorData]:
    """``gl(Δ)`` and ``E: P → gl(Δ)`` sending ``f`` over ``u`` to the square of its sums
    over the terminal projections and ``Δ(u)``."""
    P, T, B = S.fibration, S.fibration.total, S.fibration.base
    G = glueing(S.delta)
    PC, built = G.fundamental, G.built
    proj = {X: P.hom_over(X, S.ones[P.P_obj[X]], B.identity[P.P_obj[X]])[0] for X in T.objects}
    obj = [built.o((P.P_obj[X], arrow_object(PC, S.functor(proj[X])))) for X in T.objects]
    arr = []
    for f in T.arrows:
        X, Y, u = T.dom[f], T.cod[f], P.P_arr[f]
        sq = square_arrow(PC, S.functor(proj[X]), S.functor(proj[Y]), S.functor(f), S.delta(u))
        arr.append(built.a((u, sq)))
    return G, FunctorData(T, G.total, obj, arr)


def delta_iso_to_glued(S: TotalSum) -> NatTransData | None:
    """For ``P = gl(F)``: a natural iso from ``Δ`` (read in the domain category) to ``F``."""
    P = S.fibration
    F = getattr(P, "glued", None)
    if F is None:
        return None
    K = P.legs[1]
    dom = P.fundamental.legs[0]
    obj = [dom.ob(K.ob(S.fibre.objects[S.delta.ob(I)])) for I in P.base.objects]
    arr = [dom(K(S.fibre.arrows[S.delta(u)])) for u in P.base.arrows]
    read = FunctorData(P.base, F.target, obj, arr)
    C = F.target
    for tau in enumerate_transformations(read, F, comp_ok=lambda x, a: C.is_iso(a)):
        return tau
    return None


def _moens_preconditions(P: FibrationData) -> dict[str, bool]:
    items = {"fibration": P.is_fibration, "base_finite_limits": has_finite_limits(P.base)}
    if not all(items.values()):
        return items
    items["fibred_finite_limits"] = finite_limit_profile(P, crosscheck=False).verdict["finite_limits"]
    try:
        items["internal_sums"] = has_internal_sums(P, adjoint_route=False).verdict
    except FibcatError:
        items["internal_sums"] = False
    if items["internal_sums"]:
        flags = sums_profile(P).verdict
        items["stable"], items["disjoint"] = flags["stable"], flags["disjoint"]
    else:
        items["stable"] = items["disjoint"] = False
    return items


def _equivalence_checks(P: FibrationData, G: FibrationData, E: FunctorData, cap: int) -> tuple[bool, list[Crosscheck], dict]:
    cart = is_cartesian_functor(E, P, G).ok
    fibrewise = is_fibrewise_equivalence(E, P, G)
    verdict = cart and fibrewise
    try:
        searched = bool(find_fibred_equivalence(P, G, cap))
        applicable = True
    except SearchCapExceeded:
        searched, applicable = None, False
    checks = [Crosscheck("glueing equivalence", "explicit comparison functor", verdict, "equivalence search", searched, applicable)]
    return verdict, checks, {"cartesian": cart, "fibrewise_equivalence": fibrewise}


def moens_reconstruct(P: FibrationData, cap: int = DEFAULT_CAP) -> Reconstruction:
    """Compare ``P`` with ``gl(Δ)`` for ``Δ(I) = ∐_I 1_I``.

    Needs fibred finite limits and stable disjoint internal sums over a base
    with finite limits; small global sections are not needed.
    """
    items = _moens_preconditions(P)
    if not all(items.values()):
        raise PreconditionFailed({k: v for k, v in items.items() if not v})
    S = delta_functor(P)
    G, E = comparison_functor(S)
    verdict, checks, details = _equivalence_checks(P, G, E, cap)
    limit_fail = total_sum_limit_failure(S)
    mediator_fail = mediator_failure(P)
    checks.append(Crosscheck("sum to terminal is left exact", "sweep", limit_fail is None, "expected", True))
    checks.append(Crosscheck("mediator into vertical pullback is cocartesian", "sweep", mediator_fail is None, "expected", True))
    witnesses = []
    iso = delta_iso_to_glued(S)
    if getattr(P, "glued", None) is not None:
        details["delta_iso_to_glued_functor"] = iso is not None
        if iso is not None:
            witnesses.append({"delta_iso_components": list(iso.components)})
    details["delta_objects"] = [S.fibre.cat.obj_labels[S.delta.ob(I)] for I in P.base.objects]
    if limit_fail:
        details["limit_failure"] = limit_fail
    if mediator_fail:
        details["mediator_failure"] = mediator_fail
    return Reconstruction(Verdict("moens", verdict, witnesses, None, checks, details), S, G, E)


# ---------------------------------------------------------------- the generalisation


def gen_moens_conditions(P: FibrationData) -> dict[str, dict | None]:
    """The three cancellation conditions, each decided on its own; ``None`` means it holds."""
    from .sums import _moens_cancellation, _moens_pullback, _moens_vertical_iso

    return {
        "cancellation": _moens_cancellation(P),
        "vertical_iso": _moens_vertical_iso(P),
        "cocartesian_squares_pullbacks": _moens_pullback(P),
    }


def _gen_moens_preconditions(P: FibrationData) -> dict[str, bool]:
    from .sums import _stability

    items = {"bifibration": P.verdict.bifibration, "base_finite_limits": has_finite_limits(P.base)}
    if not all(items.values()):
        return items
    items["fibred_finite_limits"] = finite_limit_profile(P, crosscheck=False).verdict["finite_limits"]
    items["stable_along_verticals"] = _stability(P, vertical_only=True)[0] is None
    return items


def gen_moens(P: FibrationData, cap: int = DEFAULT_CAP) -> Reconstruction:
    """Decide the three conditions; when they hold, compare ``P`` with ``gl(Δ_P)``."""
    items = _gen_moens_preconditions(P)
    if not all(items.values()):
        raise PreconditionFailed({k: v for k, v in items.items() if not v})
    fails = gen_moens_conditions(P)
    flags = {k: v is None for k, v in fails.items()}
    checks = [
        Crosscheck("(1) vs (2)", "cancellation", flags["cancellation"], "vertical iso", flags["vertical_iso"]),
        Crosscheck(
            "(2) vs (3)",
            "vertical iso",
            flags["vertical_iso"],
            "pullback squares",
            flags["cocartesian_squares_pullbacks"],
        ),
    ]
    holds = all(flags.values())
    details: dict = {"conditions": flags, "failures": {k: v for k, v in fails.items() if v is not None}}
    if not holds:
        return Reconstruction(Verdict("gen_moens", False, [], details["failures"], checks, details))
    colifts = _terminal_colifts(P)
    criterion = _extensive(P, colifts)
    checks.append(Crosscheck("square over terminal colift is pullback iff cocartesian", "sweep", criterion is None, "expected", True))
    S = delta_functor(P)
    G, E = comparison_functor(S)
    verdict, eq_checks, eq_details = _equivalence_checks(P, G, E, cap)
    checks += eq_checks
    details.update(eq_details)
    witnesses = []
    if getattr(P, "glued", None) is not None:
        iso = delta_iso_to_glued(S)
        details["delta_iso_to_glued_functor"] = iso is not None
        if iso is not None:
            witnesses.append({"delta_iso_components": list(iso.components)})
    return Reconstruction(Verdict("gen_moens", verdict, witnesses, None, checks, details), S, G, E)
