"""Deciders for the size and shape properties of a fibration: elementary and
representable fibrations, local smallness, well-poweredness, definable classes
and generating families.

Every decider returns a :class:`Verdict`; where a theorem gives a second
characterisation it is computed independently and recorded as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .category import FinCat
from .closure import slice_fibration
from .errors import ClassNotStable, NotElementary, PreconditionFailed
from .fibration import FibrationData, choose_cleavage, is_cartesian_functor, is_fibrewise_equivalence
from .functor import FunctorData
from .limits import Cone, binary_product, find_limit, has_binary_products, has_finite_limits, mediators, terminal_object
from .report import Crosscheck, Verdict
from .search import find_right_adjoint


def _label(C: FinCat, f: int) -> str:
    return C.arr_labels[f]


def fibre_monos(P: FibrationData) -> frozenset[int]:
    """Vertical arrows that are monic in their fibre."""
    cache = P.__dict__
    if "_fibre_monos" not in cache:
        out = set()
        for I in P.base.objects:
            F = P.fibre(I)
            out.update(F.arrows[a] for a in F.cat.arrows if F.cat.is_mono(a))
        cache["_fibre_monos"] = frozenset(out)
    return cache["_fibre_monos"]


def fibre_epis(P: FibrationData) -> frozenset[int]:
    cache = P.__dict__
    if "_fibre_epis" not in cache:
        out = set()
        for I in P.base.objects:
            F = P.fibre(I)
            out.update(F.arrows[a] for a in F.cat.arrows if F.cat.is_epi(a))
        cache["_fibre_epis"] = frozenset(out)
    return cache["_fibre_epis"]


def fibre_terminal(P: FibrationData, I: int) -> int | None:
    """Least terminal object of the fibre over ``I`` as a total id."""
    F = P.fibre(I)
    t = terminal_object(F.cat)
    return None if t is None else F.objects[t]


def cartesian_into(P: FibrationData, X: int) -> list[int]:
    return [f for f in P.total.incoming[X] if P.is_cartesian(f)]


def _least_terminal(objects: list, arrows_between) -> int | None:
    """Index of the least object receiving exactly one arrow from every object."""
    for t in range(len(objects)):
        if all(len(arrows_between(s, t)) == 1 for s in range(len(objects))):
            return t
    return None


# ---------------------------------------------------------------- shape


def classify_shape(P: FibrationData) -> Verdict:
    """Discrete, groupoidal, posetal and elementary fibres, decided fibrewise and
    through the functor-level criteria (reflects identities, conservative, faithful)."""
    P.require_fibration()
    fibres = [P.fibre(I).cat for I in P.base.objects]
    discrete = all(F.is_discrete for F in fibres)
    groupoidal = all(F.is_groupoid for F in fibres)
    posetal = all(F.is_thin for F in fibres)
    elementary = all(F.is_groupoid and F.is_thin for F in fibres)
    T = P.total
    reflects_ids = all(T.is_identity(f) for f in T.arrows if P.is_vertical(f))
    conservative = P.proj.reflects_isos()
    faithful = P.proj.is_faithful()
    flags = {
        "discrete": discrete,
        "groupoidal": groupoidal,
        "posetal": posetal,
        "elementary": elementary,
        "conservative": conservative,
        "faithful": faithful,
    }
    checks = [
        Crosscheck("discrete fibres", "fibre scan", discrete, "reflects identities", reflects_ids),
        Crosscheck("groupoid fibres", "fibre scan", groupoidal, "conservative", conservative),
        Crosscheck("posetal fibres", "fibre scan", posetal, "faithful", faithful),
        Crosscheck("elementary fibres", "fibre scan", elementary, "faithful and conservative", faithful and conservative),
    ]
    return Verdict("shape", flags, crosschecks=checks)


def is_representable(P: FibrationData) -> Verdict:
    """An elementary fibration is representable iff its total category has a terminal object."""
    shape = classify_shape(P)
    if not shape.verdict["elementary"]:
        raise NotElementary("representability needs an elementary fibration")
    T, B = P.total, P.base
    term = terminal_object(T)
    # second route: a unique classifying base arrow for every object
    classifying = None
    for R in T.objects:
        I = P.P_obj[R]
        if all(
            sum(1 for u in B.hom(P.P_obj[X], I) if P.hom_over(X, R, u)) == 1 for X in T.objects
        ):
            classifying = R
            break
    checks = [
        Crosscheck(
            "representable",
            "terminal object of total category",
            term is not None,
            "unique classifying arrows",
            classifying is not None,
        )
    ]
    if term is None:
        return Verdict("representable", False, crosschecks=checks)
    I = P.P_obj[term]
    comparison = slice_comparison(P, term)
    ok = is_cartesian_functor(comparison, slice_fibration(B, I), P).ok and is_fibrewise_equivalence(
        comparison, slice_fibration(B, I), P
    )
    checks.append(Crosscheck("equivalent to a slice fibration", "comparison B/I → P", ok, "expected", True))
    witness = {"object": term, "label": T.obj_labels[term], "base_object": I, "base_label": B.obj_labels[I]}
    return Verdict("representable", True, witnesses=[witness], crosschecks=checks)


def slice_comparison(P: FibrationData, R: int) -> FunctorData:
    """``B/I → P`` sending ``u: J → I`` to the domain of a cartesian lift of ``u`` at ``R``."""
    B, T = P.base, P.total
    I = P.P_obj[R]
    S = slice_fibration(B, I)
    keys = S.built
    obj = [T.dom[P.canonical_lift(u, R)] for _, _, u in keys.obj_keys]
    arr = []
    for (s, t, v, _) in keys.arr_keys:
        a, b = obj[keys.o(s)], obj[keys.o(t)]
        arr.append(P.hom_over(a, b, v)[0])
    return FunctorData(S.total, T, obj, arr)


# ---------------------------------------------------------------- local smallness


@dataclass
class HomCat:
    """``Hom_I(X, Y)``: spans ``(φ, f)`` out of a common object with ``φ``
    cartesian into ``X`` and ``P φ = P f``; arrows ``θ`` with ``φ'θ = φ`` and ``f'θ = f``.
    It is fibred over ``B/I`` by ``P φ``."""

    P: FibrationData
    I: int
    X: int
    Y: int

    @cached_property
    def objects(self) -> list[tuple[int, int]]:
        T, P = self.P.total, self.P
        out = []
        for phi in cartesian_into(P, self.X):
            for f in T.hom(T.dom[phi], self.Y):
                if P.P_arr[f] == P.P_arr[phi]:
                    out.append((phi, f))
        return out

    def projection(self, k: int) -> int:
        """The base arrow over ``I`` that the span sits over."""
        return self.P.P_arr[self.objects[k][0]]

    def arrows(self, s: int, t: int) -> list[int]:
        T = self.P.total
        (psi, g), (phi, f) = self.objects[s], self.objects[t]
        return [
            th for th in T.hom(T.dom[psi], T.dom[phi]) if T.comp(phi, th) == psi and T.comp(f, th) == g
        ]

    def terminal(self) -> int | None:
        return _least_terminal(self.objects, self.arrows)


def _pullback_functor(B: FinCat, u: int, over_I: FibrationData, over_J: FibrationData) -> FunctorData:
    """``u*: B/I → B/J`` through canonical pullbacks."""
    src, tgt = over_I.built, over_J.built
    cones: list[Cone] = []
    obj = []
    for a, _, f in src.obj_keys:
        cone = find_limit(B, "pullback", (u, f)).canonical  # u∘p1 = f∘p2
        cones.append(cone)
        obj.append(tgt.o((cone.apex, 0, cone.legs[0])))
    arr = []
    for s, t, x, _ in src.arr_keys:
        cs, ct = cones[src.o(s)], cones[src.o(t)]
        source_cone = Cone(cs.apex, (cs.legs[0], B.comp(x, cs.legs[1])))
        m = mediators(B, source_cone, ct)[0]
        arr.append(tgt.a(((cs.apex, 0, cs.legs[0]), (ct.apex, 0, ct.legs[0]), m, 0)))
    return FunctorData(over_I.total, over_J.total, obj, arr)


def dependent_product_witness(B: FinCat) -> dict | None:
    """Least ``(u, X)`` where ``u*: B/I → B/J`` has no universal arrow at ``X``;
    ``None`` when every pullback functor has a right adjoint."""
    slices = {I: slice_fibration(B, I) for I in B.objects}
    for u in B.arrows:
        J, I = B.dom[u], B.cod[u]
        F = _pullback_functor(B, u, slices[I], slices[J])
        found = find_right_adjoint(F)
        if not found:
            x = found.checked
            _, _, f = slices[J].built.obj_keys[x]
            return {"u": u, "u_label": _label(B, u), "X": f, "X_label": _label(B, f)}
    return None


def is_locally_small(P: FibrationData, global_spans: bool = True) -> Verdict:
    """Every ``Hom_I(X, Y)`` has a terminal object.

    For fundamental fibrations the dependent-product route (right adjoints to
    every pullback functor) is computed as well; its witness is reported as the
    counterexample because it names the base arrow responsible.
    """
    P.require_fibration()
    B, T = P.base, P.total
    witnesses = []
    failure = None
    for I in B.objects:
        for X in P.over[I]:
            for Y in P.over[I]:
                H = HomCat(P, I, X, Y)
                t = H.terminal()
                if t is None:
                    failure = failure or {"I": I, "X": X, "Y": Y, "X_label": T.obj_labels[X], "Y_label": T.obj_labels[Y]}
                else:
                    phi, f = H.objects[t]
                    witnesses.append({"I": I, "X": X, "Y": Y, "span": (phi, f)})
    verdict = failure is None
    checks = []
    counterexample = None if verdict else {"route": "Hom_I(X,Y) terminal search", **failure}
    if P.provenance.get("construction") == "fundamental":
        pi = dependent_product_witness(B)
        checks.append(
            Crosscheck("locally cartesian closed base", "Hom_I terminal search", verdict, "right adjoints to pullback", pi is None)
        )
        if pi is not None:
            counterexample = {"route": "right adjoint to pullback", **pi, "hom_route": failure}
    if verdict and global_spans and has_binary_products(B):
        bad = global_span_failures(P)
        checks.append(Crosscheck("global spans over binary products", "universal property", not bad, "expected", True))
    return Verdict("locally_small", verdict, witnesses=witnesses, counterexample=counterexample, crosschecks=checks)


def global_span(P: FibrationData, X: int, Y: int) -> tuple[int, int]:
    """``(φ0, f0)`` into ``X`` and ``Y`` built from a product of their base objects."""
    B, T = P.base, P.total
    I, J = P.P_obj[X], P.P_obj[Y]
    cone = binary_product(B, I, J)
    p, q = cone.legs
    phi_X, phi_Y = P.canonical_lift(p, X), P.canonical_lift(q, Y)
    H = HomCat(P, cone.apex, T.dom[phi_X], T.dom[phi_Y])
    t = H.terminal()
    if t is None:
        raise PreconditionFailed({"Hom_K terminal": (cone.apex, X, Y)})
    phi_t, f_t = H.objects[t]
    return T.comp(phi_X, phi_t), T.comp(phi_Y, f_t)


def global_span_failures(P: FibrationData) -> list[tuple[int, int]]:
    """Pairs ``(X, Y)`` whose global span lacks the unique-mediator property."""
    T = P.total
    bad = []
    for X in T.objects:
        for Y in T.objects:
            phi0, f0 = global_span(P, X, Y)
            Z0 = T.dom[phi0]
            for phi in cartesian_into(P, X):
                Z = T.dom[phi]
                for f in T.hom(Z, Y):
                    n = sum(1 for th in T.hom(Z, Z0) if T.comp(phi0, th) == phi and T.comp(f0, th) == f)
                    if n != 1:
                        bad.append((X, Y))
                        break
                else:
                    continue
                break
    return bad


# ---------------------------------------------------------------- well-poweredness


def mono_stability_failure(P: FibrationData) -> dict | None:
    """Least fibre-mono whose reindexing along some base arrow is not a fibre-mono."""
    cl = choose_cleavage(P)
    monos = fibre_monos(P)
    B, T = P.base, P.total
    for m in sorted(monos):
        I = P.P_obj[T.dom[m]]
        for u in B.incoming[I]:
            if cl.reindex_arrow(u, m) not in monos:
                return {"mono": m, "u": u}
    return None


def mono_divergences(P: FibrationData) -> list[int]:
    """Vertical arrows whose fibre-monicity differs from monicity in the total category."""
    T = P.total
    monos = fibre_monos(P)
    return [f for f in T.arrows if P.is_vertical(f) and (f in monos) != T.is_mono(f)]


@dataclass
class SubCat:
    """``Sub_I(X)``: pairs ``(φ, m)`` with ``φ: Y → X`` cartesian and ``m: S → Y`` a
    vertical fibre-mono; ``θ: (ψ, n) → (φ, m)`` when ``φθ = ψ`` and ``θn = mθ̃``
    for a cartesian ``θ̃``."""

    P: FibrationData
    I: int
    X: int

    @cached_property
    def objects(self) -> list[tuple[int, int]]:
        T, P = self.P.total, self.P
        monos = fibre_monos(P)
        return [
            (phi, m)
            for phi in cartesian_into(P, self.X)
            for m in T.incoming[T.dom[phi]]
            if m in monos
        ]

    def arrows(self, s: int, t: int) -> list[int]:
        T, P = self.P.total, self.P
        (psi, n), (phi, m) = self.objects[s], self.objects[t]
        out = []
        for th in T.hom(T.dom[psi], T.dom[phi]):
            if T.comp(phi, th) != psi:
                continue
            target = T.comp(th, n)
            if any(P.is_cartesian(tt) and T.comp(m, tt) == target for tt in T.hom(T.dom[n], T.dom[m])):
                out.append(th)
        return out

    def terminal(self) -> int | None:
        return _least_terminal(self.objects, self.arrows)


def is_well_powered(P: FibrationData) -> Verdict:
    """Every ``Sub_I(X)`` has a terminal object (vertical monos read as fibre-monos)."""
    P.require_fibration()
    bad = mono_stability_failure(P)
    if bad is not None:
        raise PreconditionFailed({"vertical monos not stable under reindexing": bad})
    T, B = P.total, P.base
    witnesses, failure = [], None
    for I in B.objects:
        for X in P.over[I]:
            S = SubCat(P, I, X)
            t = S.terminal()
            if t is None:
                failure = failure or {"I": I, "X": X, "X_label": T.obj_labels[X], "subobjects": len(S.objects)}
            else:
                witnesses.append({"I": I, "X": X, "generic": S.objects[t]})
    verdict = failure is None
    checks = []
    if P.provenance.get("construction") == "fundamental" and has_finite_limits(B):
        checks.append(Crosscheck("base is a topos", "Sub_I terminal search", verdict, "topos decider", is_topos(B)))
    details = {"mono_divergences": mono_divergences(P)}
    return Verdict("well_powered", verdict, witnesses, failure, checks, details)


def _product_arrow(C: FinCat, cone_src: Cone, cone_tgt: Cone, h: int, k: int) -> int:
    """``h × k`` between chosen product cones."""
    a, b = cone_src.legs
    return mediators(C, Cone(cone_src.apex, (C.comp(h, a), C.comp(k, b))), cone_tgt)[0]


def has_exponentials(C: FinCat) -> bool:
    """Every pair ``A, B`` has an exponential ``B^A`` with evaluation."""
    prod = {(x, y): binary_product(C, x, y) for x in C.objects for y in C.objects}
    if any(v is None for v in prod.values()):
        return False
    for A in C.objects:
        idA = C.identity[A]
        for Bo in C.objects:
            found = False
            for E in C.objects:
                EA = prod[(E, A)]
                for ev in C.hom(EA.apex, Bo):
                    ok = True
                    for Z in C.objects:
                        ZA = prod[(Z, A)]
                        for g in C.hom(ZA.apex, Bo):
                            n = sum(
                                1
                                for h in C.hom(Z, E)
                                if C.comp(ev, _product_arrow(C, ZA, EA, h, idA)) == g
                            )
                            if n != 1:
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        found = True
                        break
                if found:
                    break
            if not found:
                return False
    return True


def has_subobject_classifier(C: FinCat) -> bool:
    one = terminal_object(C)
    if one is None:
        return False
    monos = [m for m in C.arrows if C.is_mono(m)]
    bang = {x: C.hom(x, one)[0] for x in C.objects}
    for Omega in C.objects:
        for true in C.hom(one, Omega):
            ok = True
            for m in monos:
                S, A = C.dom[m], C.cod[m]
                n = 0
                for chi in C.hom(A, Omega):
                    if C.comp(chi, m) != C.comp(true, bang[S]):
                        continue
                    r = find_limit(C, "pullback", (chi, true))
                    if r and Cone(S, (m, bang[S])) in r.cones:
                        n += 1
                if n != 1:
                    ok = False
                    break
            if ok:
                return True
    return False


def is_topos(C: FinCat) -> bool:
    """Finite limits, exponentials and a subobject classifier, each by direct search."""
    return has_finite_limits(C) and has_subobject_classifier(C) and has_exponentials(C)


# ---------------------------------------------------------------- definability


@dataclass(frozen=True)
class StableClass:
    """A class of objects, of vertical arrows, or a subfibration (as a set of arrows)."""

    kind: str  # "objects" | "vertical_arrows" | "subfibration"
    members: frozenset[int]

    def __init__(self, kind: str, members):
        if kind not in ("objects", "vertical_arrows", "subfibration"):
            raise ValueError(f"unknown class kind {kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "members", frozenset(members))


def reindex_vertical(P: FibrationData, u: int, alpha: int) -> int:
    """``u*α`` computed from canonical lifts."""
    T = P.total
    top = P.canonical_lift(u, T.dom[alpha])
    bottom = P.canonical_lift(u, T.cod[alpha])
    return P.vertical_factor(bottom, T.comp(alpha, top))


def stability_failure(P: FibrationData, C: StableClass) -> tuple | None:
    T, B = P.total, P.base
    if C.kind == "objects":
        for X in sorted(C.members):
            for phi in cartesian_into(P, X):
                if T.dom[phi] not in C.members:
                    return ("object", X, phi)
        return None
    if C.kind == "vertical_arrows":
        for a in sorted(C.members):
            if not P.is_vertical(a):
                return ("not vertical", a)
            I = P.P_obj[T.dom[a]]
            for u in B.incoming[I]:
                for phi in P.lifts(u, T.dom[a]):
                    for psi in P.lifts(u, T.cod[a]):
                        if P.vertical_factor(psi, T.comp(a, phi)) not in C.members:
                            return ("vertical arrow", a, u)
        return None
    Z = C.members
    objs = {x for x in T.objects if T.identity[x] in Z}
    for f in sorted(Z):
        if T.dom[f] not in objs or T.cod[f] not in objs:
            return ("not a subcategory", f)
        for g in T.outgoing[T.cod[f]]:
            if g in Z and T.comp(g, f) not in Z:
                return ("not closed under composition", g, f)
    for X in sorted(objs):
        for phi in cartesian_into(P, X):
            if phi not in Z:
                return ("cartesian arrow into Z", phi)
    for f in sorted(Z):
        for phi in cartesian_into(P, T.dom[f]):
            for psi in cartesian_into(P, T.cod[f]):
                target = T.comp(f, phi)
                for g in T.hom(T.dom[phi], T.dom[psi]):
                    if T.comp(psi, g) == target and g not in Z:
                        return ("square", f, phi, psi, g)
    return None


def _sieve(P: FibrationData, C: StableClass, item: int) -> tuple[int, list[int]]:
    """Base object ``I`` and the arrows ``u`` into it with ``u*item`` in the class."""
    T, B = P.total, P.base
    if C.kind == "objects":
        I = P.P_obj[item]
        return I, [u for u in B.incoming[I] if T.dom[P.canonical_lift(u, item)] in C.members]
    I = P.P_obj[T.dom[item]]
    return I, [u for u in B.incoming[I] if reindex_vertical(P, u, item) in C.members]


def _universal_mono(B: FinCat, I: int, sieve: list[int]) -> int | None:
    """Least mono ``m0`` into ``I`` in the sieve through which every member factors."""
    members = set(sieve)
    for m in B.incoming[I]:
        if m not in members or not B.is_mono(m):
            continue
        if all(any(B.comp(m, v) == u for v in B.hom(B.dom[u], B.dom[m])) for u in sieve):
            return m
    return None


def _representing_arrow(B: FinCat, I: int, sieve: list[int]) -> int | None:
    """Least ``m`` in the sieve with each member uniquely of the form ``m∘v``."""
    members = set(sieve)
    for m in B.incoming[I]:
        if m not in members:
            continue
        if all(sum(1 for v in B.hom(B.dom[u], B.dom[m]) if B.comp(m, v) == u) == 1 for u in sieve):
            return m
    return None


def _items(P: FibrationData, C: StableClass) -> list[int]:
    if C.kind == "objects":
        return list(P.total.objects)
    return [f for f in P.total.arrows if P.is_vertical(f)]


def is_definable(P: FibrationData, C: StableClass) -> Verdict:
    """Each object (or vertical arrow) has a least-id subobject ``m0`` of its index
    with ``m0*X`` in the class and every ``u`` with ``u*X`` in the class factoring
    through ``m0``.  Representability of the sieve is the cross-check."""
    P.require_fibration()
    bad = stability_failure(P, C)
    if bad is not None:
        raise ClassNotStable(bad)
    if C.kind == "subfibration":
        T = P.total
        objs = StableClass("objects", [x for x in T.objects if T.identity[x] in C.members])
        verts = StableClass("vertical_arrows", [f for f in C.members if P.is_vertical(f)])
        a, b = is_definable(P, objs), is_definable(P, verts)
        checks = a.crosschecks + b.crosschecks
        counter = a.counterexample or b.counterexample
        return Verdict("definable", a.verdict and b.verdict, a.witnesses + b.witnesses, counter, checks)
    witnesses, counter = [], None
    agree = True
    for item in _items(P, C):
        I, sieve = _sieve(P, C, item)
        m0 = _universal_mono(P.base, I, sieve)
        rep = _representing_arrow(P.base, I, sieve)
        if (m0 is None) != (rep is None):
            agree = False
        if m0 is None:
            counter = counter or {"item": item, "I": I, "sieve": sieve}
        else:
            witnesses.append({"item": item, "m0": m0})
    verdict = counter is None
    check = Crosscheck("definable", "universal subobject", verdict, "sieve representable", verdict if agree else not verdict)
    return Verdict("definable", verdict, witnesses, counter, [check])


def fibrewise_terminal_class(P: FibrationData) -> StableClass:
    """Objects terminal in their fibre."""
    out = []
    for I in P.base.objects:
        F = P.fibre(I)
        out += [F.objects[x] for x in F.cat.objects if all(len(F.cat.hom(y, x)) == 1 for y in F.cat.objects)]
    return StableClass("objects", out)


# ---------------------------------------------------------------- generating families


def is_collectively_epic(P: FibrationData, f: int) -> bool:
    """Vertical arrows out of ``cod f`` that agree after ``f`` are equal."""
    T = P.total
    Y = T.cod[f]
    I = P.P_obj[Y]
    for Z in P.over[I]:
        seen = set()
        for a in P.verticals(Y, Z):
            k = T.comp(a, f)
            if k in seen:
                return False
            seen.add(k)
    return True


def collectively_epic_divergences(P: FibrationData) -> list[int]:
    """Arrows where the cancellation test and the cocartesian factorisation test differ."""
    T = P.total
    epis = fibre_epis(P)
    out = []
    for f in T.arrows:
        u = P.P_arr[f]
        if not P.colifts(u, T.dom[f]):
            continue
        phi = P.canonical_colift(u, T.dom[f])
        alpha = P.cocartesian_vertical_factor(phi, f)
        if is_collectively_epic(P, f) != (alpha in epis):
            out.append(f)
    return out


def _generating_failure(P: FibrationData, G: int) -> tuple[int, int] | None:
    T = P.total
    phis = cartesian_into(P, G)
    for I in P.base.objects:
        for X in P.over[I]:
            for Y in P.over[I]:
                vs = P.verticals(X, Y)
                for i, a1 in enumerate(vs):
                    for a2 in vs[i + 1:]:
                        if not any(
                            T.comp(a1, psi) != T.comp(a2, psi) for phi in phis for psi in T.hom(T.dom[phi], X)
                        ):
                            return (a1, a2)
    return None


def _covering_failure(P: FibrationData, G: int) -> int | None:
    """Least object with no cartesian ``φ: Z → G`` and collectively epic ``ψ: Z → X``."""
    T = P.total
    phis = cartesian_into(P, G)
    for X in T.objects:
        if not any(is_collectively_epic(P, psi) for phi in phis for psi in T.hom(T.dom[phi], X)):
            return X
    return None


def is_generating_family(P: FibrationData, G: int) -> Verdict:
    P.require_fibration()
    bad = _generating_failure(P, G)
    verdict = bad is None
    checks = []
    if has_binary_products(P.base) and is_locally_small(P, global_spans=False).verdict:
        cover = _covering_failure(P, G)
        checks.append(Crosscheck("generating family", "distinct verticals separated", verdict, "collectively epic covers", cover is None))
    counter = None if verdict else {"alpha1": bad[0], "alpha2": bad[1]}
    return Verdict("generating_family", verdict, [{"G": G}] if verdict else [], counter, checks)


def find_separator(P: FibrationData) -> Verdict:
    """Least ``S`` over the terminal base object covering every ``X`` over it by
    a cartesian arrow, a vertical mono and a collectively epic arrow."""
    P.require_fibration()
    B, T = P.base, P.total
    one = terminal_object(B)
    if one is None:
        raise PreconditionFailed("base has no terminal object")
    monos = fibre_monos(P)

    def covers(S: int, X: int) -> bool:
        for phi in cartesian_into(P, S):
            Y = T.dom[phi]
            for m in T.incoming[Y]:
                if m in monos and any(is_collectively_epic(P, psi) for psi in T.hom(T.dom[m], X)):
                    return True
        return False

    for S in P.over[one]:
        if all(covers(S, X) for X in P.over[one]):
            return Verdict("separator", True, [{"S": S, "label": T.obj_labels[S]}])
    return Verdict("separator", False)
