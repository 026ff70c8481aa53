"""Geometric fibrations and geometric morphisms: the fibred adjunction ``Δ_P ⊣ Γ_P``,
classification of geometric morphisms through their glueing, and boundedness."""

from __future__ import annotations

from dataclasses import dataclass, field

from .analyze import fibre_monos, find_separator, is_collectively_epic, is_generating_family, is_locally_small, is_well_powered
from .category import FinCat
from .closure import arrow_object, fundamental_fibration, glueing, square_arrow
from .errors import FibcatError, NotGeometric, NotLeftExact, PreconditionFailed
from .fibration import FibrationData, is_cartesian_functor
from .fibred_limits import fibrewise_terminals, has_small_global_sections, is_geometric, terminal_functor
from .functor import AdjunctionData, FunctorData, NatTransData, adjunction_violations, compose_functors, identity_functor
from .limits import find_limit, has_finite_limits, is_pullback_square, terminal_object
from .report import DIVERGENT, Crosscheck, Verdict
from .search import enumerate_transformations, find_left_adjoint, find_right_adjoint
from .sums import _vertical_mono_failure


def _factor_over(P: FibrationData, phi: int, target: int, w: int) -> int:
    """The unique ``g`` over ``w`` with ``g∘phi = target`` (``phi`` cocartesian)."""
    T = P.total
    for g in T.hom(T.cod[phi], T.cod[target]):
        if P.P_arr[g] == w and T.comp(g, phi) == target:
            return g
    raise ValueError(f"arrow {target} does not factor through {phi} over {w}")


# ---------------------------------------------------------------- Δ_P ⊣ Γ_P


@dataclass
class FibredAdjunction:
    """``Δ_P: P_B → P`` and ``Γ_P: P → P_B`` on total categories.

    ``sections[X]`` and ``section_counit[X]`` are ``G X`` and ``ε_X: 1_{G X} → X``
    for the right adjoint ``G`` of ``1: B → X``; ``colift[u]`` is the canonical
    cocartesian arrow out of ``1_{dom u}`` over ``u``.
    """

    fibration: FibrationData
    fundamental: FibrationData
    adjunction: AdjunctionData
    one: FunctorData
    colift: dict[int, int]
    sections: list[int]
    section_counit: list[int]
    verdict: Verdict = field(default=None)

    @property
    def delta(self) -> FunctorData:
        return self.adjunction.left

    @property
    def gamma(self) -> FunctorData:
        return self.adjunction.right

    def global_arrow(self, h: int) -> int:
        """``G(h)``: the unique ``v`` with ``ε_X∘1_v = h∘ε_Y`` for ``h: Y → X``."""
        P = self.fibration
        T, B = P.total, P.base
        Y, X = T.dom[h], T.cod[h]
        target = T.comp(h, self.section_counit[Y])
        for v in B.hom(self.sections[Y], self.sections[X]):
            if T.comp(self.section_counit[X], self.one(v)) == target:
                return v
        raise AssertionError("global sections counit failed to factor")


def delta_gamma(P: FibrationData) -> FibredAdjunction:
    geo = is_geometric(P)
    if not geo.verdict:
        raise NotGeometric(f"not geometric: {[k for k, v in geo.details['items'].items() if not v]}")
    B, T = P.base, P.total
    PB = fundamental_fibration(B)
    keys = PB.built
    ones = fibrewise_terminals(P)
    one = terminal_functor(P, ones)
    colift = {u: P.canonical_colift(u, ones[B.dom[u]]) for u in B.arrows}

    delta_obj = [T.cod[colift[k[2]]] for k in keys.obj_keys]
    delta_arr = []
    for s, t, v, w in keys.arr_keys:
        delta_arr.append(_factor_over(P, colift[s[2]], T.comp(colift[t[2]], one(v)), w))
    delta = FunctorData(PB.total, T, delta_obj, delta_arr)

    gs = has_small_global_sections(P)
    sections = [w["G"] for w in gs.witnesses]
    eps = [w["counit"] for w in gs.witnesses]
    result = FibredAdjunction(P, PB, None, one, colift, sections, eps)  # adjunction filled below
    gamma_obj = [arrow_object(PB, P.P_arr[eps[X]]) for X in T.objects]
    gamma_arr = [
        square_arrow(PB, P.P_arr[eps[T.dom[h]]], P.P_arr[eps[T.cod[h]]], result.global_arrow(h), P.P_arr[h])
        for h in T.arrows
    ]
    gamma = FunctorData(T, PB.total, gamma_obj, gamma_arr)

    unit = []
    for I, J, u in keys.obj_keys:
        D = T.cod[colift[u]]
        lift = next(v for v in B.hom(I, sections[D]) if T.comp(eps[D], one(v)) == colift[u])
        unit.append(square_arrow(PB, u, P.P_arr[eps[D]], lift, B.identity[J]))
    counit = [P.cocartesian_vertical_factor(colift[P.P_arr[eps[X]]], eps[X]) for X in T.objects]
    adj = AdjunctionData(
        delta,
        gamma,
        NatTransData(identity_functor(PB.total), compose_functors(gamma, delta), unit),
        NatTransData(compose_functors(delta, gamma), identity_functor(T), counit),
    )
    result.adjunction = adj

    laws = adjunction_violations(adj)
    vertical = all(PB.is_vertical(a) for a in unit) and all(P.is_vertical(a) for a in counit)
    delta_cart = is_cartesian_functor(delta, PB, P).ok
    gamma_cart = is_cartesian_functor(gamma, P, PB).ok
    ok = not laws and vertical and delta_cart and gamma_cart
    checks = list(gs.crosschecks)
    details = {"triangle_identities": not laws, "vertical_unit_counit": vertical, "delta_cartesian": delta_cart, "gamma_cartesian": gamma_cart}
    if getattr(P, "glued", None) is not None:
        explicit = _explicit_form_agrees(result)
        if explicit is not None:
            checks.append(Crosscheck("explicit glueing form", "abstract construction", True, "pullback along the unit", explicit))
    result.verdict = Verdict("fibred_adjunction", ok, [], None if ok else {"laws": [v.describe() for v in laws[:3]]}, checks, details)
    return result


def _explicit_form_agrees(D: FibredAdjunction) -> bool | None:
    """For ``P = gl(F)`` with ``F ⊣ U``: ``Δ`` is ``F`` on arrows and squares, and ``Γ`` over
    ``I`` is pullback along ``η_I`` after ``U``; both up to vertical iso."""
    P, PB = D.fibration, D.fundamental
    F = P.glued
    found = find_right_adjoint(F)
    if not found:
        return None
    B, T, PC = P.base, P.total, P.fundamental
    U, eta = found.right, found.unit
    keys, built = PB.built, P.built
    obj = [built.o((J, arrow_object(PC, F(u)))) for I, J, u in keys.obj_keys]
    arr = [
        built.a((w, square_arrow(PC, F(s[2]), F(t[2]), F(v), F(w))))
        for s, t, v, w in keys.arr_keys
    ]
    explicit_delta = FunctorData(PB.total, T, obj, arr)
    iso_ok = lambda x, a: T.is_iso(a) and P.is_vertical(a)  # noqa: E731
    if next(enumerate_transformations(D.delta, explicit_delta, comp_ok=iso_ok), None) is None:
        return False
    B2 = PB.total
    for X in T.objects:
        I, a = built.obj_keys[X]
        f = PC.built.obj_keys[a][2]
        r = find_limit(B, "pullback", (eta[I], U(f)))
        if not r:
            return False
        explicit = arrow_object(PB, r.canonical.legs[0])
        if not any(B2.is_iso(k) and PB.is_vertical(k) for k in B2.hom(D.gamma.ob(X), explicit)):
            return False
    return True


# ---------------------------------------------------------------- classification


@dataclass
class ProfileEntry:
    """One property decided on the adjunction side and on the glueing side."""

    name: str
    adjunction_route: str
    adjunction_side: bool
    fibration_route: str
    fibration_side: bool
    witness: dict = field(default_factory=dict)
    extra: list[Crosscheck] = field(default_factory=list)
    alternative: ProfileEntry | None = None

    @property
    def verdict(self) -> bool | str:
        if self.adjunction_side != self.fibration_side or any(not c.agree for c in self.extra):
            return DIVERGENT
        return self.adjunction_side

    @property
    def degenerate(self) -> bool:
        """The alternative characterisation decides the property differently."""
        return self.alternative is not None and self.alternative.verdict != self.verdict

    def to_json(self) -> dict:
        out = {
            "property": self.name,
            "verdict": self.verdict,
            "characterisations": [
                {"route": self.adjunction_route, "value": self.adjunction_side},
                {"route": self.fibration_route, "value": self.fibration_side},
            ],
            "witness": self.witness,
            "theorem_crosschecks": [c.to_json() for c in self.extra],
        }
        if self.alternative is not None:
            out["alternative"] = self.alternative.to_json()
            out["degenerate"] = self.degenerate
        return out


PROFILE_FIELDS = ("injective", "surjective", "connected", "hyperconnected", "local", "locally_connected")


@dataclass
class GeometricProfile:
    injective: ProfileEntry
    surjective: ProfileEntry
    connected: ProfileEntry
    hyperconnected: ProfileEntry
    local: ProfileEntry
    locally_connected: ProfileEntry

    def entries(self) -> list[ProfileEntry]:
        return [getattr(self, name) for name in PROFILE_FIELDS]

    @property
    def divergent(self) -> list[str]:
        out = [e.name for e in self.entries() if e.verdict == DIVERGENT]
        alt = self.hyperconnected.alternative
        if alt is not None and alt.verdict == DIVERGENT:
            out.append(alt.name)
        return out

    def to_json(self) -> dict:
        return {e.name: e.to_json() for e in self.entries()}


def lex_failure(F: FunctorData) -> dict | None:
    """Where ``F`` fails to preserve the terminal object or a pullback."""
    B, C = F.source, F.target
    if not has_finite_limits(B):
        raise PreconditionFailed("source category lacks finite limits")
    top = terminal_object(B)
    if not all(len(C.hom(c, F.ob(top))) == 1 for c in C.objects):
        return {"terminal": top}
    for c in B.objects:
        for f in B.incoming[c]:
            for g in B.incoming[c]:
                p1, p2 = find_limit(B, "pullback", (f, g)).canonical.legs
                if not is_pullback_square(C, F(p2), F(p1), F(g), F(f)):
                    return {"cospan": (f, g)}
    return None


def _fibred_adjoint(adj: AdjunctionData, P_src: FibrationData, P_tgt: FibrationData) -> bool:
    """Unit and counit over isos and both functors cartesian: a fibred adjunction up to iso."""
    S, T = P_src.base, P_tgt.base
    if not all(S.is_iso(P_src.P_arr[a]) for a in adj.unit.components):
        return False
    if not all(T.is_iso(P_tgt.P_arr[a]) for a in adj.counit.components):
        return False
    left_ok = all(P_tgt.is_cartesian(adj.left(f)) for f in P_src.total.arrows if P_src.is_cartesian(f))
    right_ok = all(P_src.is_cartesian(adj.right(f)) for f in P_tgt.total.arrows if P_tgt.is_cartesian(f))
    return left_ok and right_ok


def _first(items, test) -> dict | None:
    for item in items:
        if not test(item):
            return item
    return None


def _entry(name, adj_route, adj_value, fib_route, fib_value, failure=None, checked=0, extra=()) -> ProfileEntry:
    witness = {"checked": checked} if failure is None else {"failure": failure}
    return ProfileEntry(name, adj_route, adj_value, fib_route, fib_value, witness, list(extra))


def _subobject_equivalence_failure(adj: AdjunctionData) -> dict | None:
    """An ``I`` where ``F`` does not restrict to an equivalence ``Sub(I) → Sub(F I)``."""
    F = adj.left
    B, C = F.source, F.target

    def leq(K: FinCat, m: int, n: int) -> bool:
        return any(K.comp(n, k) == m for k in K.hom(K.dom[m], K.dom[n]))

    for I in B.objects:
        subs = [m for m in B.incoming[I] if B.is_mono(m)]
        for m in subs:
            for n in subs:
                if leq(B, m, n) != leq(C, F(m), F(n)):
                    return {"I": I, "pair": (m, n)}
        for n in C.incoming[F.ob(I)]:
            if C.is_mono(n) and not any(leq(C, n, F(m)) and leq(C, F(m), n) for m in subs):
                return {"I": I, "missing": n}
    return None


def gm_classify(adj: AdjunctionData) -> GeometricProfile:
    """Classify ``F ⊣ U`` (``F`` left exact) through ``F``, ``U`` and through ``gl(F)``."""
    laws = adjunction_violations(adj)
    if laws:
        raise PreconditionFailed({"adjunction_laws": [v.describe() for v in laws[:3]]})
    F, U = adj.left, adj.right
    B, C = F.source, F.target
    bad = lex_failure(F)
    if bad is not None:
        raise NotLeftExact(bad)
    P = glueing(F)
    D = delta_gamma(P)
    T, PB = P.total, D.fundamental
    cocart = [h for h in T.arrows if P.is_cocartesian(h)]
    counit_tilde = D.adjunction.counit.components

    # injective
    fail = _first(T.objects, lambda X: P.is_cocartesian(D.section_counit[X]))
    inj = _entry(
        "injective",
        "U full and faithful",
        U.is_full() and U.is_faithful(),
        "global sections counit cocartesian",
        fail is None,
        None if fail is None else {"X": fail},
        T.n_obj,
        [Crosscheck("injective (2)", "counit cocartesian", fail is None, "fibred counit iso", all(T.is_iso(a) for a in counit_tilde))],
    )

    # surjective
    fail = _first(B.arrows, lambda u: not P.is_cocartesian(D.one(u)) or B.is_iso(u))
    surj = _entry("surjective", "F reflects isos", F.reflects_isos(), "1_u cocartesian only over isos", fail is None, None if fail is None else {"u": fail}, B.n_arr)

    # connected
    connected_adj = F.is_full() and F.is_faithful()
    fail = _first(cocart, lambda h: B.is_iso(D.global_arrow(h)))
    gamma_cocart = all(PB.is_cocartesian(D.gamma(h)) for h in cocart)
    conn = _entry(
        "connected",
        "F full and faithful",
        connected_adj,
        "G inverts cocartesian arrows",
        fail is None,
        None if fail is None else {"h": fail},
        len(cocart),
        [Crosscheck("connected (3)", "G inverts cocartesian", fail is None, "Γ preserves cocartesian", gamma_cocart)],
    )
    inverts = fail is None

    # hyperconnected, counit route
    monos = fibre_monos(P)
    counit_monic = all(C.is_mono(a) for a in adj.counit.components)
    fail = _first(T.objects, lambda X: counit_tilde[X] in monos)
    hyper = _entry(
        "hyperconnected",
        "connected and counit monic",
        connected_adj and counit_monic,
        "G inverts cocartesian and fibred counit vertical mono",
        inverts and fail is None,
        None if fail is None else {"X": fail},
        T.n_obj,
    )
    # hyperconnected, subobject route
    sub_fail = _subobject_equivalence_failure(adj)
    ones = D.one
    sub_terminals = [X for X in T.objects for m in T.hom(X, ones.ob(P.P_obj[X])) if m in monos]
    fail = _first(sub_terminals, lambda X: T.is_iso(counit_tilde[X]))
    hyper.alternative = _entry(
        "hyperconnected_subobjects",
        "connected and F restricts to Sub equivalences",
        connected_adj and sub_fail is None,
        "G inverts cocartesian and subterminals fixed by ΔΓ",
        inverts and fail is None,
        sub_fail if sub_fail is not None else (None if fail is None else {"X": fail}),
        len(sub_terminals),
    )

    # local
    right_of_u = find_right_adjoint(U)
    gamma_right = find_right_adjoint(D.gamma)
    loc = _entry(
        "local",
        "F full and faithful and U has a right adjoint",
        connected_adj and bool(right_of_u),
        "Γ has a fibred right adjoint",
        bool(gamma_right) and _fibred_adjoint(gamma_right, P, PB),
        None if gamma_right else {"no_universal_arrow_at": gamma_right.checked},
        T.n_obj,
    )

    # locally connected
    left_of_f = find_left_adjoint(F)
    square_fail = _locally_connected_failure(F, left_of_f) if left_of_f else {"no_left_adjoint": True}
    delta_left = find_left_adjoint(D.delta)
    lc = _entry(
        "locally_connected",
        "F has a left adjoint with the pullback transpose condition",
        square_fail is None,
        "Δ has a fibred left adjoint",
        bool(delta_left) and _fibred_adjoint(delta_left, P, PB),
        square_fail,
        B.n_arr,
    )
    return GeometricProfile(inj, surj, conn, hyper, loc, lc)


def _locally_connected_failure(F: FunctorData, L: AdjunctionData) -> dict | None:
    """A pullback of ``b`` along ``F u`` whose transpose square is not a pullback."""
    B, C = F.source, F.target
    eps = L.counit
    Lf = L.left
    for u in B.arrows:
        I, J = B.dom[u], B.cod[u]
        for b in C.incoming[F.ob(J)]:
            r = find_limit(C, "pullback", (F(u), b))
            if not r:
                return {"u": u, "b": b, "reason": "no pullback"}
            a, f = r.canonical.legs
            a_hat = B.comp(eps[I], Lf(a))
            b_hat = B.comp(eps[J], Lf(b))
            if not is_pullback_square(B, Lf(f), a_hat, b_hat, u):
                return {"u": u, "b": b}
    return None


def profile_verdict(profile: GeometricProfile) -> Verdict:
    """The profile as a report verdict with one cross-check per characterisation pair."""
    checks = []
    entries = profile.entries() + [profile.hyperconnected.alternative]
    for e in entries:
        checks.append(Crosscheck(e.name, e.adjunction_route, e.adjunction_side, e.fibration_route, e.fibration_side))
        checks += e.extra
    values = {e.name: e.verdict for e in profile.entries()}
    details = {"profile": profile.to_json(), "degenerate": {"hyperconnected": profile.hyperconnected.degenerate}}
    return Verdict("geometric_profile", values, [], None, checks, details)


# ---------------------------------------------------------------- boundedness


def epic_stability_failure(P: FibrationData) -> dict | None:
    """A collectively epic arrow whose pullback along some arrow is not collectively epic."""
    T = P.total
    for psi in T.arrows:
        if not is_collectively_epic(P, psi):
            continue
        for g in T.incoming[T.cod[psi]]:
            r = find_limit(T, "pullback", (psi, g))
            if not r:
                return {"psi": psi, "g": g, "reason": "no pullback"}
            if not is_collectively_epic(P, r.canonical.legs[1]):
                return {"psi": psi, "g": g}
    return None


def generating_family_tests(P: FibrationData) -> Verdict:
    """Generating family and separator, each searched exhaustively, with the
    cocartesian cancellation sweep and the separator criterion where it applies."""
    geo = is_geometric(P)
    if not geo.verdict:
        raise PreconditionFailed({k: v for k, v in geo.details["items"].items() if not v})
    T = P.total
    family = next((G for G in T.objects if is_generating_family(P, G).verdict), None)
    sep = find_separator(P)
    try:
        well_powered = bool(is_well_powered(P).verdict)
    except FibcatError:
        well_powered = False
    epic_fail = epic_stability_failure(P)
    pre = {
        "locally_small": bool(is_locally_small(P, global_spans=False).verdict),
        "well_powered": well_powered,
        "collectively_epic_stable": epic_fail is None,
    }
    ccmon = _vertical_mono_failure(P)
    checks = [
        Crosscheck("cocartesian arrows monic on verticals", "sweep", ccmon is None, "expected", True),
        Crosscheck("generating family vs separator", "family search", family is not None, "separator search", sep.verdict, all(pre.values())),
    ]
    witnesses = []
    if family is not None:
        witnesses.append({"generating_family": family, "label": T.obj_labels[family]})
    witnesses += sep.witnesses
    details = {"separator_criterion_preconditions": pre}
    if ccmon is not None:
        details["ccmon_failure"] = ccmon
    values = {"generating_family": family is not None, "separator": sep.verdict}
    return Verdict("generating_family_tests", values, witnesses, None, checks, details)
