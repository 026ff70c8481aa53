"""Internal sums and products of a fibration, Beck-Chevalley conditions and the
stability, disjointness and extensivity profile of cocartesian arrows."""

from __future__ import annotations

from .closure import fam_fibration
from .constructions import slice_category
from .errors import BaseLacksPullbacks, NoInternalSums
from .fibration import FibrationData, is_cartesian_functor
from .functor import FunctorData
from .limits import Cone, find_limit, has_finite_limits, is_pullback_square, mediators, missing_pullback, terminal_object
from .opposite import opposite_fibration
from .report import Crosscheck, Verdict

# Fam(P) search is only attempted below this many total arrows.
FAM_ROUTE_LIMIT = 1500


def require_base_pullbacks(P: FibrationData) -> None:
    miss = missing_pullback(P.base)
    if miss is not None:
        raise BaseLacksPullbacks(miss)


def _base_square_is_pullback(P: FibrationData, top: int, left: int, right: int, bottom: int) -> bool:
    return is_pullback_square(P.base, P.P_arr[top], P.P_arr[left], P.P_arr[right], P.P_arr[bottom])


def bcc_squares(P: FibrationData):
    """Commuting squares ``ψ∘φ̃ = φ∘ψ̃`` over a base pullback with ``φ`` cocartesian
    and ``ψ̃`` cartesian, as tuples ``(φ, ψ, ψ̃, φ̃)``."""
    T = P.total
    for phi in T.arrows:
        if not P.is_cocartesian(phi):
            continue
        A, Bo = T.dom[phi], T.cod[phi]
        for psi_t in T.incoming[A]:
            if not P.is_cartesian(psi_t):
                continue
            lower = T.comp(phi, psi_t)
            for psi in T.incoming[Bo]:
                for phi_t in T.hom(T.dom[psi_t], T.dom[psi]):
                    if T.comp(psi, phi_t) == lower and _base_square_is_pullback(P, phi_t, psi_t, psi, phi):
                        yield phi, psi, psi_t, phi_t


def missing_colift(P: FibrationData) -> tuple[int, int] | None:
    return P.verdict.co_counterexample


def has_internal_sums(P: FibrationData, adjoint_route: bool = True) -> Verdict:
    """Cocartesian lifts plus BCC.  The dual form of BCC is decided on the same
    squares, and at small scale the fibred left adjoint to ``η_P`` is searched."""
    P.require_fibration()
    require_base_pullbacks(P)
    missing = missing_colift(P)
    bcc_failure = dual_failure = None
    for phi, psi, psi_t, phi_t in bcc_squares(P):
        if bcc_failure is None and P.is_cartesian(psi) and not P.is_cocartesian(phi_t):
            bcc_failure = {"phi": phi, "psi": psi, "psi_tilde": psi_t, "phi_tilde": phi_t}
        if dual_failure is None and P.is_cocartesian(phi_t) and not P.is_cartesian(psi):
            dual_failure = {"phi": phi, "psi": psi, "psi_tilde": psi_t, "phi_tilde": phi_t}
        if bcc_failure and dual_failure:
            break
    lifts = missing is None
    bcc = bcc_failure is None
    verdict = lifts and bcc
    checks = [
        Crosscheck("sums BCC", "cocartesian form", bcc, "cartesian form", dual_failure is None, applicable=lifts)
    ]
    if adjoint_route:
        adj = sums_adjoint_route(P)
        if adj is not None:
            checks.append(Crosscheck("internal sums", "lifts and BCC", verdict, "fibred left adjoint to η_P", adj))
    counter = None
    if missing is not None:
        counter = {"missing_cocartesian_lift": {"u": missing[0], "X": missing[1]}}
    elif bcc_failure is not None:
        counter = {"bcc": bcc_failure}
    return Verdict("internal_sums", verdict, counterexample=counter, crosschecks=checks, details={"lifts": lifts, "bcc": bcc})


def sums_adjoint_route(P: FibrationData, limit: int = FAM_ROUTE_LIMIT) -> bool | None:
    """Does ``η_P: P → Fam(P)`` have a fibred left adjoint?  ``None`` above ``limit``."""
    fam = fam_fibration(P)
    F, eta = fam.fibration, fam.eta
    FT, T = F.total, P.total
    if FT.n_arr > limit:
        return None
    eta_obj = [eta.ob(Y) for Y in T.objects]

    def universal(d: int, Y: int, e: int) -> bool:
        for Y2 in T.objects:
            for g in FT.hom(d, eta_obj[Y2]):
                n = sum(1 for h in T.hom(Y, Y2) if FT.comp(eta(h), e) == g)
                if n != 1:
                    return False
        return True

    left_obj, units = [], []
    for d in FT.objects:
        found = None
        for Y in P.over[F.P_obj[d]]:
            for e in F.verticals(d, eta_obj[Y]):
                if universal(d, Y, e):
                    found = (Y, e)
                    break
            if found:
                break
        if found is None:
            return False
        left_obj.append(found[0])
        units.append(found[1])
    left_arr = []
    for f in FT.arrows:
        d1, d2 = FT.dom[f], FT.cod[f]
        target = FT.comp(units[d2], f)
        hs = [h for h in T.hom(left_obj[d1], left_obj[d2]) if FT.comp(eta(h), units[d1]) == target]
        left_arr.append(hs[0])
    L = FunctorData(FT, T, left_obj, left_arr)
    return is_cartesian_functor(L, F, P).ok


# ---------------------------------------------------------------- products


class _EvaluationSpans:
    """Memoised evaluation-span tests for one fibration."""

    def __init__(self, P: FibrationData):
        self.P = P
        self.cache: dict[tuple[int, int, int, int], bool] = {}

    def is_span(self, u: int, X: int, phi: int, eps: int) -> bool:
        key = (u, X, phi, eps)
        if key not in self.cache:
            self.cache[key] = self._decide(u, X, phi, eps)
        return self.cache[key]

    def _decide(self, u: int, X: int, phi: int, eps: int) -> bool:
        P, T = self.P, self.P.total
        J = P.base.cod[u]
        E = T.cod[phi]
        for Z in P.over[J]:
            verts = P.verticals(Z, E)
            for theta in P.lifts(u, Z):
                for alpha in P.verticals(T.dom[theta], X):
                    n = 0
                    for beta in verts:
                        if T.comp(eps, P.vertical_factor(phi, T.comp(beta, theta))) == alpha:
                            n += 1
                    if n != 1:
                        return False
        return True

    def spans(self, u: int, X: int) -> list[tuple[int, int]]:
        P, T = self.P, self.P.total
        out = []
        for E in P.over[P.base.cod[u]]:
            for phi in P.lifts(u, E):
                for eps in P.verticals(T.dom[phi], X):
                    if self.is_span(u, X, phi, eps):
                        out.append((phi, eps))
        return out


def has_internal_products(P: FibrationData, duality: bool = True) -> Verdict:
    """Evaluation spans for every ``(u, X)`` and their stability under base pullbacks;
    compared with internal sums of the opposite fibration."""
    P.require_fibration()
    require_base_pullbacks(P)
    B, T = P.base, P.total
    ev = _EvaluationSpans(P)
    missing = None
    bcc_failure = None
    for u in B.arrows:
        I = B.dom[u]
        for X in P.over[I]:
            spans = ev.spans(u, X)
            if not spans:
                missing = missing or {"u": u, "u_label": B.arr_labels[u], "X": X, "X_label": T.obj_labels[X]}
                continue
            if bcc_failure is not None:
                continue
            for phi, eps in spans:
                bcc_failure = bcc_failure or _product_bcc_failure(P, ev, u, X, phi, eps)
    verdict = missing is None and bcc_failure is None
    checks = []
    if duality:
        dual = has_internal_sums(opposite_fibration(P), adjoint_route=False).verdict
        checks.append(Crosscheck("internal products", "evaluation spans and BCC", verdict, "sums of opposite fibration", dual))
    counter = None
    if missing is not None:
        counter = {"no_evaluation_span": missing}
    elif bcc_failure is not None:
        counter = {"bcc": bcc_failure}
    details = {"evaluation_spans": missing is None, "bcc": bcc_failure is None}
    return Verdict("internal_products", verdict, counterexample=counter, crosschecks=checks, details=details)


def _product_bcc_failure(P: FibrationData, ev: _EvaluationSpans, u: int, X: int, phi: int, eps: int) -> dict | None:
    B, T = P.base, P.total
    J = B.cod[u]
    E = T.cod[phi]
    for v in B.incoming[J]:
        for cone in find_limit(B, "pullback", (v, u)).cones:
            u_t, v_t = cone.legs  # v∘ũ = u∘ṽ
            for theta in P.lifts(v, E):
                for theta_t in P.lifts(v_t, T.dom[phi]):
                    phi_t = P.factor_over(theta, T.comp(phi, theta_t), u_t)
                    for psi in P.lifts(v_t, X):
                        eps_t = P.vertical_factor(psi, T.comp(eps, theta_t))
                        if not ev.is_span(u_t, T.dom[psi], phi_t, eps_t):
                            return {"u": u, "v": v, "X": X, "phi": phi, "eps": eps, "phi_tilde": phi_t, "eps_tilde": eps_t}
    return None


# ---------------------------------------------------------------- sums profile


def _cocartesian(P: FibrationData) -> list[int]:
    return [f for f in P.total.arrows if P.is_cocartesian(f)]


def _stability(P: FibrationData, vertical_only: bool) -> tuple[dict | None, list]:
    """First cocartesian arrow whose pullback is not cocartesian, and cospans lacking a pullback."""
    T = P.total
    missing = []
    for phi in _cocartesian(P):
        for g in T.incoming[T.cod[phi]]:
            if vertical_only and not P.is_vertical(g):
                continue
            r = find_limit(T, "pullback", (phi, g))
            if not r:
                missing.append((phi, g))
                continue
            pulled = r.canonical.legs[1]
            if not P.is_cocartesian(pulled):
                return {"phi": phi, "along": g, "pullback": pulled}, missing
    return None, missing


def fibrewise_diagonal(T, phi: int) -> int | None:
    r = find_limit(T, "pullback", (phi, phi))
    if not r:
        return None
    X = T.dom[phi]
    ident = T.identity[X]
    return mediators(T, Cone(X, (ident, ident)), r.canonical)[0]


def _disjointness(P: FibrationData) -> dict | None:
    T = P.total
    for phi in _cocartesian(P):
        delta = fibrewise_diagonal(T, phi)
        if delta is None:
            return {"phi": phi, "reason": "no pullback of the arrow with itself"}
        if not P.is_cocartesian(delta):
            return {"phi": phi, "diagonal": delta}
    return None


def _moens_cancellation(P: FibrationData) -> dict | None:
    """``φ`` and ``φ∘ψ`` cocartesian but ``ψ`` not."""
    T = P.total
    for phi in _cocartesian(P):
        for psi in T.incoming[T.dom[phi]]:
            if P.is_cocartesian(T.comp(phi, psi)) and not P.is_cocartesian(psi):
                return {"phi": phi, "psi": psi}
    return None


def _moens_vertical_iso(P: FibrationData) -> dict | None:
    """Vertical ``α`` with ``φ`` and ``φ∘α`` cocartesian but ``α`` not iso."""
    T = P.total
    for phi in _cocartesian(P):
        for alpha in T.incoming[T.dom[phi]]:
            if P.is_vertical(alpha) and P.is_cocartesian(T.comp(phi, alpha)) and not T.is_iso(alpha):
                return {"phi": phi, "alpha": alpha}
    return None


def _vertical_squares(P: FibrationData, bottoms: list[int]):
    """Squares ``β∘φ = ψ∘α`` with ``ψ`` from ``bottoms`` and ``α``, ``β`` vertical."""
    T = P.total
    for psi in bottoms:
        Y, V = T.dom[psi], T.cod[psi]
        for alpha in T.incoming[Y]:
            if not P.is_vertical(alpha):
                continue
            lower = T.comp(psi, alpha)
            for beta in T.incoming[V]:
                if not P.is_vertical(beta):
                    continue
                for phi in T.hom(T.dom[alpha], T.dom[beta]):
                    if T.comp(beta, phi) == lower:
                        yield phi, alpha, beta, psi


def _moens_pullback(P: FibrationData) -> dict | None:
    """Square of cocartesian and vertical arrows that is not a pullback."""
    T = P.total
    for phi, alpha, beta, psi in _vertical_squares(P, _cocartesian(P)):
        if P.is_cocartesian(phi) and not is_pullback_square(T, phi, alpha, beta, psi):
            return {"phi": phi, "alpha": alpha, "beta": beta, "psi": psi}
    return None


def _extensive(P: FibrationData, bottoms: list[int]) -> dict | None:
    T = P.total
    for phi, alpha, beta, psi in _vertical_squares(P, bottoms):
        if P.is_cocartesian(phi) != is_pullback_square(T, phi, alpha, beta, psi):
            return {"phi": phi, "alpha": alpha, "beta": beta, "psi": psi}
    return None


def _terminal_colifts(P: FibrationData) -> list[int] | None:
    """Cocartesian arrows ``1_I → ∐_I 1_I`` over ``!_I``; ``None`` without the terminals."""
    from .fibred_limits import fibrewise_terminals

    B = P.base
    one = terminal_object(B)
    if one is None:
        return None
    terms = fibrewise_terminals(P, strict=False)
    if terms is None:
        return None
    out = []
    for I in B.objects:
        bang = B.hom(I, one)[0]
        out += P.colifts(bang, terms[I])
    return out


def coproduct_functor(P: FibrationData, u: int) -> FunctorData:
    """``∐_u: X_I → X_J`` between fibres, through canonical cocartesian lifts."""
    B, T = P.base, P.total
    FI, FJ = P.fibre(B.dom[u]), P.fibre(B.cod[u])
    lift = [P.canonical_colift(u, X) for X in FI.objects]
    obj = [FJ.obj_index[T.cod[phi]] for phi in lift]
    arr = []
    for a in FI.cat.arrows:
        h = FI.arrows[a]
        s, t = FI.obj_index[T.dom[h]], FI.obj_index[T.cod[h]]
        arr.append(FJ.arr_index[P.cocartesian_vertical_factor(lift[s], T.comp(lift[t], h))])
    return FunctorData(FI.cat, FJ.cat, obj, arr)


def _sliced_coproduct(P: FibrationData, u: int, x: int) -> FunctorData:
    """``∐_u/X: X_I/X → X_J/∐_u X`` with ``x`` a fibre object id."""
    S = coproduct_functor(P, u)
    src = slice_category(S.source, x)
    tgt = slice_category(S.target, S.ob(x))

    def push(key):
        a, z, f = key
        return (S.ob(a), z, S(f))

    obj = [tgt.built.o(push(k)) for k in src.built.obj_keys]
    arr = [tgt.built.a((push(s), push(t), S(h), z)) for s, t, h, z in src.built.arr_keys]
    return FunctorData(src.cat, tgt.cat, obj, arr)


def _sliced_equivalence_failure(P: FibrationData) -> dict | None:
    B = P.base
    for u in B.arrows:
        FI = P.fibre(B.dom[u])
        for x in FI.cat.objects:
            if not _sliced_coproduct(P, u, x).is_equivalence():
                return {"u": u, "X": FI.objects[x]}
    return None


def _pullback_preservation_failure(P: FibrationData) -> dict | None:
    B = P.base
    for u in B.arrows:
        S = coproduct_functor(P, u)
        C, D = S.source, S.target
        for c in C.objects:
            for f in C.incoming[c]:
                for g in C.incoming[c]:
                    r = find_limit(C, "pullback", (f, g))
                    if not r:
                        continue
                    p1, p2 = r.canonical.legs
                    if not is_pullback_square(D, S(p2), S(p1), S(g), S(f)):
                        return {"u": u, "cospan": (f, g)}
    return None


def _aux_failure(P: FibrationData) -> dict | None:
    """The mediator ``γ: U → W`` into the pullback of ``φ`` along ``φ∘ψ`` is cocartesian."""
    T = P.total
    for phi in _cocartesian(P):
        for psi in T.incoming[T.dom[phi]]:
            U = T.dom[psi]
            r = find_limit(T, "pullback", (phi, T.comp(phi, psi)))
            if not r:
                return {"phi": phi, "psi": psi, "reason": "no pullback"}
            gamma = mediators(T, Cone(U, (psi, T.identity[U])), r.canonical)[0]
            if not P.is_cocartesian(gamma):
                return {"phi": phi, "psi": psi, "gamma": gamma}
    return None


def _vertical_mono_failure(P: FibrationData) -> dict | None:
    """Cocartesian arrows are monic with respect to vertical arrows."""
    T = P.total
    for phi in _cocartesian(P):
        X = T.dom[phi]
        for Z in P.over[P.P_obj[X]]:
            seen: dict[int, int] = {}
            for a in P.verticals(Z, X):
                k = T.comp(phi, a)
                if k in seen:
                    return {"phi": phi, "alpha1": seen[k], "alpha2": a}
                seen[k] = a
    return None


def sums_profile(P: FibrationData) -> Verdict:
    """Stability, disjointness, the cancellation conditions and extensivity of
    cocartesian arrows, each decided on its own.

    Only cocartesian lifts are required, so that bifibrations failing BCC can be
    profiled; the equivalences between conditions are asserted only where their
    hypotheses (finite limits, internal sums, stability) hold.
    """
    from .fibred_limits import finite_limit_profile

    P.require_fibration()
    if missing_colift(P) is not None:
        raise NoInternalSums(f"no cocartesian lift for {missing_colift(P)}")
    stable_fail, missing_pb = _stability(P, vertical_only=False)
    stable_v_fail, _ = _stability(P, vertical_only=True)
    disjoint_fail = _disjointness(P)
    cond2 = _moens_cancellation(P)
    cond3 = _moens_vertical_iso(P)
    cond4 = _moens_pullback(P)
    ext2 = _extensive(P, _cocartesian(P))
    terminal_colifts = _terminal_colifts(P)
    ext3 = None if terminal_colifts is None else _extensive(P, terminal_colifts)

    stable, stable_v = stable_fail is None, stable_v_fail is None
    flags = {
        "stable": stable,
        "stable_along_verticals": stable_v,
        "disjoint": disjoint_fail is None,
        "cancellation": cond2 is None,
        "vertical_iso": cond3 is None,
        "cocartesian_squares_pullbacks": cond4 is None,
        "extensive": ext2 is None,
        "lawvere_extensive": None if terminal_colifts is None else ext3 is None,
    }
    failures = {
        "stable": stable_fail,
        "stable_along_verticals": stable_v_fail,
        "disjoint": disjoint_fail,
        "cancellation": cond2,
        "vertical_iso": cond3,
        "cocartesian_squares_pullbacks": cond4,
        "extensive": ext2,
        "lawvere_extensive": ext3,
    }
    base_lex = has_finite_limits(P.base)
    fibred_lex = base_lex and finite_limit_profile(P, crosscheck=False).verdict["finite_limits"]
    sums = base_lex and has_internal_sums(P, adjoint_route=False).verdict
    weak = fibred_lex and sums and stable_v
    strong = fibred_lex and sums and stable
    checks = [
        Crosscheck("disjoint vs cancellation", "disjoint", flags["disjoint"], "cancellation", flags["cancellation"], strong),
        Crosscheck("cancellation vs vertical iso", "cancellation", flags["cancellation"], "vertical iso", flags["vertical_iso"], weak),
        Crosscheck(
            "vertical iso vs pullback squares",
            "vertical iso",
            flags["vertical_iso"],
            "pullback squares",
            flags["cocartesian_squares_pullbacks"],
            weak,
        ),
        Crosscheck(
            "stable and disjoint vs extensive",
            "stable and disjoint",
            stable and flags["disjoint"],
            "extensive",
            flags["extensive"],
            fibred_lex and sums,
        ),
        Crosscheck(
            "extensive vs Lawvere extensive",
            "extensive",
            flags["extensive"],
            "Lawvere extensive",
            flags["lawvere_extensive"],
            weak and terminal_colifts is not None,
        ),
    ]
    sweeps = {}
    if strong and flags["disjoint"]:
        sweeps = {
            "diagonal_mediator_cocartesian": _aux_failure(P),
            "cocartesian_monic_on_verticals": _vertical_mono_failure(P),
            "sliced_coproduct_equivalence": _sliced_equivalence_failure(P),
            "coproduct_preserves_pullbacks": _pullback_preservation_failure(P),
        }
        for name, fail in sweeps.items():
            checks.append(Crosscheck(name, "sweep", fail is None, "expected", True))
    details = {
        "failures": {k: v for k, v in failures.items() if v is not None},
        "missing_total_pullbacks": len(missing_pb),
        "hypotheses": {"base_finite_limits": base_lex, "fibred_finite_limits": fibred_lex, "internal_sums": sums},
    }
    if sweeps:
        details["sweeps"] = {k: v is None for k, v in sweeps.items()}
    return Verdict("sums_profile", flags, crosschecks=checks, details=details)
