"""New fibrations from old: fundamental, slice, externalisation, change of base,
products, diagrams, exponentials and the family monad."""

from __future__ import annotations

from dataclasses import dataclass

from .category import FinCat, build_category
from .constructions import Derived, arrow_category, pullback_of_categories, slice_category
from .errors import BaseLacksPullbacks, FunctorLawViolation, Violation
from .fibration import FibrationData, fibre_functor, is_cartesian_functor
from .functor import FunctorData, compose_functors
from .indexed import IndexedCat, grothendieck
from .limits import Cone, find_limit, mediators, missing_pullback
from .search import Budget, DEFAULT_CAP, functor_category, precomposition


# ---------------------------------------------------------------- fundamental and slices


def fundamental_fibration(B: FinCat) -> FibrationData:
    """``cod: B² → B``; ``legs`` are ``(dom, cod)``."""
    missing = missing_pullback(B)
    if missing is not None:
        raise BaseLacksPullbacks(missing)
    d = arrow_category(B)
    P = FibrationData(d.projections[1], "fundamental", built=d.built)
    P.legs = d.projections
    return P


def arrow_object(P_B: FibrationData, f: int) -> int:
    """Object of ``B²`` for the base arrow ``f``."""
    B = P_B.base
    return P_B.built.o((B.dom[f], B.cod[f], f))


def square_arrow(P_B: FibrationData, source: int, target: int, top: int, bottom: int) -> int:
    """Arrow of ``B²`` between the arrow objects ``source → target`` with the given edges."""
    B = P_B.base
    s = (B.dom[source], B.cod[source], source)
    t = (B.dom[target], B.cod[target], target)
    return P_B.built.a((s, t, top, bottom))


def slice_fibration(B: FinCat, I: int) -> FibrationData:
    """``∂0: B/I → B``."""
    d = slice_category(B, I)
    P = FibrationData(d.projections[0], "slice", built=d.built)
    P.legs = d.projections
    return P


def slice_pushforward(B: FinCat, u: int, source: FibrationData, target: FibrationData) -> FunctorData:
    """``Σ_u: B/J → B/I`` for ``u: J → I``, postcomposing with ``u``."""
    sb, tb = source.built, target.built

    def push(o):
        return (o[0], o[1], B.comp(u, o[2]))

    obj = [tb.o(push(o)) for o in sb.obj_keys]
    arr = [tb.a((push(k[0]), push(k[1]), k[2], k[3])) for k in sb.arr_keys]
    return FunctorData(source.total, target.total, obj, arr)


# ---------------------------------------------------------------- externalisation


@dataclass(frozen=True)
class InternalCat:
    """An internal category: ``d0`` source, ``d1`` target, ``i`` identity, ``m`` composition.

    ``m`` has domain the canonical pullback of ``(d0, d1)``, whose legs
    ``(p1, p2)`` pick the later and the earlier arrow of a composable pair.
    """

    ambient: FinCat
    C0: int
    C1: int
    d0: int
    d1: int
    i: int
    m: int

    @property
    def composable(self) -> Cone:
        r = find_limit(self.ambient, "pullback", (self.d0, self.d1))
        if not r:
            raise BaseLacksPullbacks((self.d0, self.d1))
        return r.canonical

    def pair(self, later: int, earlier: int) -> int:
        """The arrow ``⟨later, earlier⟩`` into the object of composable pairs."""
        B = self.ambient
        cone = self.composable
        found = mediators(B, Cone(B.dom[later], (later, earlier)), cone)
        if len(found) != 1:
            raise ValueError("arrows do not form a composable pair")
        return found[0]

    def violations(self) -> list[Violation]:
        B = self.ambient
        out: list[Violation] = []
        typed = [
            ("d0", self.d0, self.C1, self.C0),
            ("d1", self.d1, self.C1, self.C0),
            ("i", self.i, self.C0, self.C1),
        ]
        for name, f, a, b in typed:
            if B.dom[f] != a or B.cod[f] != b:
                out.append(FunctorLawViolation(f"{name} typing", f))
        if out:
            return out
        cone = self.composable
        p1, p2 = cone.legs
        if B.dom[self.m] != cone.apex or B.cod[self.m] != self.C1:
            return [FunctorLawViolation("m typing", self.m)]
        idC0, idC1 = B.identity[self.C0], B.identity[self.C1]
        checks = [
            ("d0∘i = id", B.comp(self.d0, self.i) == idC0),
            ("d1∘i = id", B.comp(self.d1, self.i) == idC0),
            ("d0∘m = d0∘p2", B.comp(self.d0, self.m) == B.comp(self.d0, p2)),
            ("d1∘m = d1∘p1", B.comp(self.d1, self.m) == B.comp(self.d1, p1)),
            ("left unit", B.comp(self.m, self.pair(B.comp(self.i, self.d1), idC1)) == idC1),
            ("right unit", B.comp(self.m, self.pair(idC1, B.comp(self.i, self.d0))) == idC1),
        ]
        out += [FunctorLawViolation(name, self.m) for name, ok in checks if not ok]
        return out


def discrete_internal(B: FinCat, I: int) -> InternalCat:
    """The object ``I`` as a discrete internal category."""
    ident = B.identity[I]
    cone = find_limit(B, "pullback", (ident, ident)).canonical
    return InternalCat(B, I, I, ident, ident, ident, cone.legs[0])


def internal_opposite(C: InternalCat) -> InternalCat:
    """Swap source and target; composition precomposes ``m`` with the pair swap."""
    B = C.ambient
    r = find_limit(B, "pullback", (C.d1, C.d0))
    if not r:
        raise BaseLacksPullbacks((C.d1, C.d0))
    q1, q2 = r.canonical.legs
    return InternalCat(B, C.C0, C.C1, C.d1, C.d0, C.i, B.comp(C.m, C.pair(q2, q1)))


def externalize(C: InternalCat) -> FibrationData:
    """Objects ``(I, a: I → C0)``; arrows ``(J, b) → (I, a)`` over ``u`` are
    ``f: J → C1`` with ``d0∘f = b`` and ``d1∘f = a∘u``, keyed ``(u, f, a)``."""
    B = C.ambient
    objs = [(B.dom[a], a) for a in B.incoming[C.C0]]
    arrs = []
    for u in B.arrows:
        J, I = B.dom[u], B.cod[u]
        for a in B.hom(I, C.C0):
            au = B.comp(a, u)
            for f in B.hom(J, C.C1):
                if B.comp(C.d1, f) == au:
                    arrs.append((u, f, a))

    def compose(g, f):
        v, gg, c = g
        u, ff, _ = f
        return (B.comp(v, u), B.comp(C.m, C.pair(B.comp(gg, u), ff)), c)

    built = build_category(
        objs,
        arrs,
        lambda k: (B.dom[k[0]], B.comp(C.d0, k[1])),
        lambda k: (B.cod[k[0]], k[2]),
        lambda o: (B.identity[o[0]], B.comp(C.i, o[1]), o[1]),
        compose,
        obj_label=lambda o: f"({B.obj_labels[o[0]]},{B.arr_labels[o[1]]})",
        arr_label=lambda k: f"({B.arr_labels[k[0]]},{B.arr_labels[k[1]]})",
    )
    T = built.cat
    proj = FunctorData(T, B, [o[0] for o in built.obj_keys], [k[0] for k in built.arr_keys])
    return FibrationData(proj, "externalize", built=built)


# ---------------------------------------------------------------- change of base


def change_of_base(P: FibrationData, F: FunctorData) -> FibrationData:
    """``F*P`` as a strict pullback; ``legs`` are ``(F*P, K)``."""
    pb = pullback_of_categories(F, P.proj)
    Q = FibrationData(pb.projections[0], "change_of_base", built=pb.built)
    Q.legs = pb.projections
    return Q


def glueing(F: FunctorData) -> FibrationData:
    """``gl(F)``: change of base of the fundamental fibration of ``target F`` along ``F``."""
    PC = fundamental_fibration(F.target)
    Q = change_of_base(PC, F)
    Q.provenance = {"construction": "glueing"}
    Q.name = "glueing"
    Q.glued = F
    Q.fundamental = PC
    return Q


def change_of_base_failures(P: FibrationData, Q: FibrationData) -> list[int]:
    """Arrows ``(u, φ)`` of ``Q = F*P`` where cartesianness of ``(u, φ)`` and of ``φ`` differ."""
    K = Q.legs[1]
    return [f for f in Q.total.arrows if Q.is_cartesian(f) != P.is_cartesian(K(f))]


@dataclass(frozen=True)
class FibredFibrationVerdict:
    left: bool
    right: bool
    condition_1: bool
    condition_2: bool

    @property
    def agree(self) -> bool:
        return self.left == self.right


def check_fibred_fibration(P: FibrationData, F: FunctorData) -> FibredFibrationVerdict:
    """Is ``F: Y → X`` a fibration, decided directly and by the two-condition criterion."""
    left = FibrationData(F).is_fibration
    Q = FibrationData(compose_functors(P.proj, F))
    cond1 = Q.is_fibration and is_cartesian_functor(F, Q, P).ok
    cond2 = True
    fibre_fibs = {}
    for I in P.base.objects:
        fibre_fibs[I] = FibrationData(fibre_functor(F, Q, P, I))
        if not fibre_fibs[I].is_fibration:
            cond2 = False
    if cond2:
        cond2 = _reindexing_stable(Q, fibre_fibs)
    return FibredFibrationVerdict(left, cond1 and cond2, cond1, cond2)


def _reindexing_stable(Q: FibrationData, fibre_fibs: dict[int, FibrationData]) -> bool:
    Y = Q.total
    for psi in Y.arrows:
        if not Q.is_vertical(psi):
            continue
        I = Q.P_obj[Y.dom[psi]]
        FI = Q.fibre(I)
        if not fibre_fibs[I].is_cartesian(FI.arr_index[psi]):
            continue
        X1, X2 = Y.dom[psi], Y.cod[psi]
        for phi1 in Y.incoming[X1]:
            if not Q.is_cartesian(phi1):
                continue
            u = Q.P_arr[phi1]
            for phi2 in Q.lifts(u, X2):
                for theta in Q.verticals(Y.dom[phi1], Y.dom[phi2]):
                    if Y.comp(phi2, theta) != Y.comp(psi, phi1):
                        continue
                    J = Q.P_obj[Y.dom[theta]]
                    if not fibre_fibs[J].is_cartesian(Q.fibre(J).arr_index[theta]):
                        return False
    return True


# ---------------------------------------------------------------- products and diagrams


def product_fibration(P: FibrationData, Q: FibrationData) -> FibrationData:
    """``P ×_B Q = P∘P*Q``; ``legs`` are the two projections."""
    pb = pullback_of_categories(P.proj, Q.proj)
    R = FibrationData(compose_functors(P.proj, pb.projections[0]), "product", built=pb.built)
    R.legs = pb.projections
    return R


def coproduct_fibration(P: FibrationData, Q: FibrationData) -> FibrationData:
    """``P + Q`` over a common base: disjoint union of the total categories."""
    if P.base != Q.base:
        raise ValueError("coproduct of fibrations needs a common base")
    parts = (P.total, Q.total)
    objs = [(s, x) for s, C in enumerate(parts) for x in C.objects]
    arrs = [(s, f) for s, C in enumerate(parts) for f in C.arrows]
    built = build_category(
        objs,
        arrs,
        lambda k: (k[0], parts[k[0]].dom[k[1]]),
        lambda k: (k[0], parts[k[0]].cod[k[1]]),
        lambda o: (o[0], parts[o[0]].identity[o[1]]),
        lambda g, f: (g[0], parts[g[0]].comp(g[1], f[1])),
        obj_label=lambda o: f"{o[0]}:{parts[o[0]].obj_labels[o[1]]}",
        arr_label=lambda k: f"{k[0]}:{parts[k[0]].arr_labels[k[1]]}",
    )
    maps = (P, Q)
    proj = FunctorData(
        built.cat,
        P.base,
        [maps[s].P_obj[x] for s, x in built.obj_keys],
        [maps[s].P_arr[f] for s, f in built.arr_keys],
    )
    return FibrationData(proj, "coproduct", built=built)


def diagram_power(P: FibrationData, D: FinCat, cap: int = DEFAULT_CAP) -> tuple[FibrationData, Derived, Derived]:
    """``P^D: X^D → B^D`` by postcomposition, with both functor categories."""
    budget = Budget(cap, "diagram fibration")
    XD = functor_category(D, P.total, cap=budget)
    BD = functor_category(D, P.base, cap=budget)
    xb, bb = XD.derived.built, BD.derived.built

    def image(key):
        om, am = key
        return (tuple(P.P_obj[x] for x in om), tuple(P.P_arr[f] for f in am))

    obj = [bb.o(image(k)) for k in xb.obj_keys]
    arr = [bb.a((image(s), image(t), tuple(P.P_arr[c] for c in comps))) for s, t, comps in xb.arr_keys]
    PD = FibrationData(FunctorData(XD.cat, BD.cat, obj, arr), "diagram_power", built=xb)
    return PD, XD.derived, BD.derived


def diagram_fibration(P: FibrationData, D: FinCat, cap: int = DEFAULT_CAP) -> FibrationData:
    """``P^(D)``: pullback of ``P^D`` along the diagonal ``Δ_D: B → B^D``."""
    PD, _, BDd = diagram_power(P, D, cap)
    B = P.base
    bb = BDd.built
    n, m = D.n_obj, D.n_arr

    def const(I):
        return ((I,) * n, (B.identity[I],) * m)

    delta = FunctorData(
        B,
        BDd.cat,
        [bb.o(const(I)) for I in B.objects],
        [bb.a((const(B.dom[u]), const(B.cod[u]), (u,) * n)) for u in B.arrows],
    )
    pb = pullback_of_categories(delta, PD.proj)
    R = FibrationData(pb.projections[0], "diagram", built=pb.built)
    R.legs = pb.projections
    return R


# ---------------------------------------------------------------- exponentials


@dataclass
class ExponentialResult:
    fibration: FibrationData
    indexed: IndexedCat
    fibre_sizes: dict[int, tuple[int, int]]


def exponential_fibration(P: FibrationData, Q: FibrationData, cap: int = DEFAULT_CAP) -> ExponentialResult:
    """``[P → Q]`` with fibre at ``I`` the cartesian functors ``I̲ ×_B P → Q``
    and vertical transformations; reindexing precomposes with ``u̲ × P``."""
    B = P.base
    budget = Budget(cap, "exponential fibration")
    slices = [slice_fibration(B, I) for I in B.objects]
    prods = [product_fibration(S, P) for S in slices]
    fibres = []
    for I in B.objects:
        R = prods[I]
        cands = [Q.over[R.P_obj[x]] for x in R.total.objects]

        def arr_ok(f, g, R=R):
            return Q.P_arr[g] == R.P_arr[f] and (not R.is_cartesian(f) or Q.is_cartesian(g))

        fibres.append(functor_category(R.total, Q.total, cands, arr_ok, lambda x, a: Q.is_vertical(a), budget))
    reindex = []
    for u in B.arrows:
        J, I = B.dom[u], B.cod[u]
        sigma = slice_pushforward(B, u, slices[J], slices[I])
        RJ, RI = prods[J], prods[I]
        kb, ib = RJ.built, RI.built
        obj = [ib.o((sigma.ob(s), x)) for s, x in kb.obj_keys]
        arr = [ib.a((sigma(a), f)) for a, f in kb.arr_keys]
        K = FunctorData(RJ.total, RI.total, obj, arr)
        reindex.append(precomposition(fibres[I], fibres[J], K))
    H = IndexedCat(B, [f.cat for f in fibres], reindex)
    G = grothendieck(H)
    G.fibration.name = "exponential"
    G.fibration.provenance = {"construction": "exponential"}
    sizes = {I: (fibres[I].cat.n_obj, fibres[I].cat.n_arr) for I in B.objects}
    return ExponentialResult(G.fibration, H, sizes)


# ---------------------------------------------------------------- family fibration


@dataclass
class FamResult:
    """``Fam(P) = P_B∘Fam(P)`` with the fibred family functor and ``η_P``.

    Objects are keyed ``(arrow object a of B², X)`` with ``dom a = P X``.
    """

    fibration: FibrationData
    family: FunctorData
    fundamental: FibrationData
    source: FibrationData
    eta: FunctorData


def fam_fibration(P: FibrationData) -> FamResult:
    B = P.base
    PB = fundamental_fibration(B)
    dom = PB.legs[0]
    pb = pullback_of_categories(dom, P.proj)
    family = pb.projections[0]
    F = FibrationData(compose_functors(PB.proj, family), "fam", built=pb.built)
    F.legs = pb.projections
    built = pb.built
    obj = [built.o((arrow_object(PB, B.identity[P.P_obj[x]]), x)) for x in P.total.objects]
    arr = []
    for f in P.total.arrows:
        u = P.P_arr[f]
        s = B.identity[B.dom[u]]
        t = B.identity[B.cod[u]]
        arr.append(built.a((square_arrow(PB, s, t, u, u), f)))
    eta = FunctorData(P.total, F.total, obj, arr)
    return FamResult(F, family, PB, P, eta)


def fam_map(Fun: FunctorData, source: FamResult, target: FamResult) -> FunctorData:
    """``Fam(F)``: ``(a, X) ↦ (a, F X)`` and ``(s, φ) ↦ (s, F φ)``."""
    sb, tb = source.fibration.built, target.fibration.built
    return FunctorData(
        source.fibration.total,
        target.fibration.total,
        [tb.o((a, Fun.ob(x))) for a, x in sb.obj_keys],
        [tb.a((s, Fun(f))) for s, f in sb.arr_keys],
    )


def fam_multiplication(outer: FamResult, inner: FamResult) -> FunctorData:
    """``μ_P: Fam(Fam(P)) → Fam(P)`` sending ``((X, v), u)`` to ``(X, u∘v)``.

    ``outer`` is ``fam_fibration(inner.fibration)``.
    """
    PB = inner.fundamental
    B = PB.base
    A = PB.built  # arrow category keys
    ob_, ib_ = outer.fibration.built, inner.fibration.built
    obj = []
    for a2, y in ob_.obj_keys:
        u = A.obj_keys[a2][2]
        a1, x = ib_.obj_keys[y]
        v = A.obj_keys[a1][2]
        obj.append(ib_.o((arrow_object(PB, B.comp(u, v)), x)))
    arr = []
    for s2, g in ob_.arr_keys:
        src2, tgt2, _, bottom = A.arr_keys[s2]
        s1, phi = ib_.arr_keys[g]
        src1, tgt1, top, _ = A.arr_keys[s1]
        source = B.comp(src2[2], src1[2])
        target = B.comp(tgt2[2], tgt1[2])
        arr.append(ib_.a((square_arrow(PB, source, target, top, bottom), phi)))
    return FunctorData(outer.fibration.total, inner.fibration.total, obj, arr)


def fam_monad_law_failures(P: FibrationData, associativity: bool = True) -> list[str]:
    """Unit laws ``μ∘Fam(η) = id = μ∘η_Fam`` and, optionally, associativity."""
    fam1 = fam_fibration(P)
    fam2 = fam_fibration(fam1.fibration)
    mu = fam_multiplication(fam2, fam1)
    out = []
    ident = list(range(fam1.fibration.total.n_arr))
    left = compose_functors(mu, fam_map(fam1.eta, fam1, fam2))
    if list(left.arr_map) != ident:
        out.append("μ∘Fam(η) ≠ id")
    right = compose_functors(mu, fam2.eta)
    if list(right.arr_map) != ident:
        out.append("μ∘η_Fam ≠ id")
    if associativity:
        fam3 = fam_fibration(fam2.fibration)
        mu2 = fam_multiplication(fam3, fam2)
        lhs = compose_functors(mu, fam_map(mu, fam3, fam2))
        rhs = compose_functors(mu, mu2)
        if lhs != rhs:
            out.append("μ∘Fam(μ) ≠ μ∘μ_Fam")
    return out
