"""Capped exhaustive searches: functors, transformations, adjoints, equivalences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .category import Absent, FinCat, build_category, opposite_category
from .constructions import Derived
from .errors import SearchCapExceeded
from .functor import (
    AdjunctionData,
    FunctorData,
    NatTransData,
    adjunction_violations,
    compose_functors,
    identity_functor,
)

DEFAULT_CAP = 10**6


class Budget:
    """Counts candidate evaluations against a cap."""

    def __init__(self, cap: int = DEFAULT_CAP, what: str = "search"):
        self.cap = cap
        self.used = 0
        self.what = what

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.cap:
            raise SearchCapExceeded(self.cap, self.what)


def _as_budget(cap: int | Budget | None, what: str) -> Budget:
    if isinstance(cap, Budget):
        return cap
    return Budget(DEFAULT_CAP if cap is None else cap, what)


def enumerate_functors(
    S: FinCat,
    T: FinCat,
    obj_cands: Sequence[Sequence[int]] | None = None,
    arr_ok: Callable[[int, int], bool] | None = None,
    injective_on_homs: bool = False,
    obj_ok: Callable[[dict[int, int]], bool] | None = None,
    cap: int | Budget | None = None,
) -> Iterator[FunctorData]:
    """Yield every functor ``S → T`` meeting the restrictions, in lexicographic order.

    ``obj_cands[x]`` lists allowed images of object ``x``; ``arr_ok(f, g)``
    says whether arrow ``f`` may go to ``g``.  ``obj_ok`` prunes partial
    object assignments.
    """
    budget = _as_budget(cap, "functor enumeration")
    n_obj, n_arr = S.n_obj, S.n_arr
    cands = [list(obj_cands[x]) if obj_cands is not None else list(T.objects) for x in S.objects]
    free = [f for f in S.arrows if not S.is_identity(f)]
    pos = {f: i for i, f in enumerate(free)}
    # composition constraints g∘f = h among non-identity g, f
    checks: list[list[tuple[int, int, int]]] = [[] for _ in free]
    for f in free:
        for g in S.outgoing[S.cod[f]]:
            if S.is_identity(g):
                continue
            h = S.comp(g, f)
            k = max(pos[f], pos[g], pos.get(h, -1))
            checks[k].append((g, f, h))
    arr_img = [-1] * n_arr
    obj_img: dict[int, int] = {}

    def objects(i: int) -> Iterator[None]:
        if i == n_obj:
            yield None
            return
        for y in cands[i]:
            budget.tick()
            obj_img[i] = y
            if obj_ok is not None and not obj_ok(obj_img):
                continue
            ok = True
            for f in S.outgoing[i]:
                if S.cod[f] in obj_img and not S.is_identity(f) and not _has_candidate(f):
                    ok = False
                    break
            if ok:
                for f in S.incoming[i]:
                    if S.dom[f] in obj_img and not S.is_identity(f) and not _has_candidate(f):
                        ok = False
                        break
            if ok:
                yield from objects(i + 1)
        obj_img.pop(i, None)

    def _has_candidate(f: int) -> bool:
        hs = T.hom(obj_img[S.dom[f]], obj_img[S.cod[f]])
        if arr_ok is None:
            return bool(hs)
        return any(arr_ok(f, g) for g in hs)

    def arrows(i: int) -> Iterator[None]:
        if i == len(free):
            yield None
            return
        f = free[i]
        used = None
        if injective_on_homs:
            used = {arr_img[h] for h in S.hom(S.dom[f], S.cod[f]) if arr_img[h] >= 0 and h != f}
        for g in T.hom(obj_img[S.dom[f]], obj_img[S.cod[f]]):
            budget.tick()
            if arr_ok is not None and not arr_ok(f, g):
                continue
            if used is not None and g in used:
                continue
            arr_img[f] = g
            if all(T.try_comp(arr_img[a], arr_img[b]) == arr_img[c] for a, b, c in checks[i]):
                yield from arrows(i + 1)
        arr_img[f] = -1

    for _ in objects(0):
        for x in S.objects:
            arr_img[S.identity[x]] = T.identity[obj_img[x]]
        for _ in arrows(0):
            yield FunctorData(S, T, [obj_img[x] for x in S.objects], list(arr_img))


def enumerate_transformations(
    F: FunctorData,
    G: FunctorData,
    comp_ok: Callable[[int, int], bool] | None = None,
    cap: int | Budget | None = None,
) -> Iterator[NatTransData]:
    """Yield every natural transformation ``F ⇒ G`` (components in object order)."""
    budget = _as_budget(cap, "transformation enumeration")
    S, T = F.source, F.target
    n = S.n_obj
    comps = [-1] * n
    # naturality of f checked once both endpoints are assigned
    checks: list[list[int]] = [[] for _ in range(n)]
    for f in S.arrows:
        checks[max(S.dom[f], S.cod[f])].append(f)

    def rec(x: int) -> Iterator[None]:
        if x == n:
            yield None
            return
        for a in T.hom(F.ob(x), G.ob(x)):
            budget.tick()
            if comp_ok is not None and not comp_ok(x, a):
                continue
            comps[x] = a
            if all(T.comp(G(f), comps[S.dom[f]]) == T.comp(comps[S.cod[f]], F(f)) for f in checks[x]):
                yield from rec(x + 1)
        comps[x] = -1

    for _ in rec(0):
        yield NatTransData(F, G, list(comps))


def vertical_compose(sigma: NatTransData, tau: NatTransData) -> NatTransData:
    """``sigma ∙ tau`` for ``tau: F ⇒ G`` and ``sigma: G ⇒ H``."""
    T = tau.source_functor.target
    return NatTransData(
        tau.source_functor,
        sigma.target_functor,
        [T.comp(s, t) for s, t in zip(sigma.components, tau.components)],
    )


def whisker_right(tau: NatTransData, K: FunctorData) -> NatTransData:
    """``tau K``: components ``tau_{K x}`` for ``K: R → S``."""
    return NatTransData(
        compose_functors(tau.source_functor, K),
        compose_functors(tau.target_functor, K),
        [tau.components[K.ob(x)] for x in K.source.objects],
    )


def whisker_left(K: FunctorData, tau: NatTransData) -> NatTransData:
    """``K tau``: components ``K(tau_x)``."""
    return NatTransData(
        compose_functors(K, tau.source_functor),
        compose_functors(K, tau.target_functor),
        [K(a) for a in tau.components],
    )


@dataclass
class FunctorCategory:
    """A category of functors and transformations with its key lists."""

    derived: Derived
    functors: list[FunctorData]
    transformations: list[NatTransData]

    @property
    def cat(self) -> FinCat:
        return self.derived.cat

    def index_of(self, F: FunctorData) -> int:
        return self.derived.built.o((F.obj_map, F.arr_map))


def functor_category(
    D: FinCat,
    C: FinCat,
    obj_cands: Sequence[Sequence[int]] | None = None,
    arr_ok: Callable[[int, int], bool] | None = None,
    comp_ok: Callable[[int, int], bool] | None = None,
    cap: int | Budget | None = None,
) -> FunctorCategory:
    """Functors ``D → C`` (optionally restricted) and transformations between them.

    Objects are keyed by ``(obj_map, arr_map)``; arrows by
    ``(source key, target key, components)``.
    """
    budget = _as_budget(cap, "functor category")
    functors = list(enumerate_functors(D, C, obj_cands, arr_ok, cap=budget))
    keys = [(F.obj_map, F.arr_map) for F in functors]
    trans: list[NatTransData] = []
    arr_keys = []
    for i, F in enumerate(functors):
        for j, G in enumerate(functors):
            for t in enumerate_transformations(F, G, comp_ok, cap=budget):
                trans.append(t)
                arr_keys.append((keys[i], keys[j], t.components))
    built = build_category(
        keys,
        arr_keys,
        lambda k: k[0],
        lambda k: k[1],
        lambda o: (o, o, tuple(C.identity[y] for y in o[0])),
        lambda g, f: (f[0], g[1], tuple(C.comp(a, b) for a, b in zip(g[2], f[2]))),
        obj_label=lambda o: "<" + ",".join(C.obj_labels[y] for y in o[0]) + ">",
        arr_label=lambda k: "[" + ",".join(C.arr_labels[a] for a in k[2]) + "]",
    )
    return FunctorCategory(Derived(built.cat, (), built), functors, trans)


# ---------------------------------------------------------------- adjoints


def _universal_arrow(
    F: FunctorData, d: int, budget: Budget
) -> tuple[int, int] | None:
    """Least ``(c, ε: F c → d)`` terminal in the comma category ``F↓d``."""
    S, T = F.source, F.target
    pairs = [(c, e) for c in S.objects for e in T.hom(F.ob(c), d)]
    for c, eps in pairs:
        budget.tick()
        good = True
        for c2, g in pairs:
            n = 0
            for h in S.hom(c2, c):
                if T.comp(eps, F(h)) == g:
                    n += 1
                    if n > 1:
                        break
            if n != 1:
                good = False
                break
        if good:
            return c, eps
    return None


def find_right_adjoint(F: FunctorData, cap: int | Budget | None = None) -> AdjunctionData | Absent:
    """Right adjoint via a universal arrow at every target object.

    Returns :class:`Absent` naming the first object without a universal arrow.
    """
    budget = _as_budget(cap, "right adjoint search")
    S, T = F.source, F.target
    Uobj: list[int] = []
    counit: list[int] = []
    for d in T.objects:
        found = _universal_arrow(F, d, budget)
        if found is None:
            return Absent(f"no universal arrow into object {T.obj_labels[d]}", d)
        Uobj.append(found[0])
        counit.append(found[1])

    def lift(c: int, target: int, g: int) -> int:
        # unique h: c → U(target) with ε_target ∘ F(h) = g
        for h in S.hom(c, Uobj[target]):
            if T.comp(counit[target], F(h)) == g:
                return h
        raise AssertionError("universal arrow failed to factor")

    Uarr = [lift(Uobj[T.dom[k]], T.cod[k], T.comp(k, counit[T.dom[k]])) for k in T.arrows]
    U = FunctorData(T, S, Uobj, Uarr)
    UF = compose_functors(U, F)
    FU = compose_functors(F, U)
    unit = NatTransData(identity_functor(S), UF, [lift(c, F.ob(c), T.identity[F.ob(c)]) for c in S.objects])
    eps = NatTransData(FU, identity_functor(T), counit)
    adj = AdjunctionData(F, U, unit, eps)
    problems = adjunction_violations(adj)
    if problems:
        raise AssertionError(f"constructed adjunction fails its laws: {problems[:3]}")
    return adj


def find_left_adjoint(G: FunctorData, cap: int | Budget | None = None) -> AdjunctionData | Absent:
    """Left adjoint of ``G`` through the right-adjoint search on opposites."""
    S, T = G.source, G.target
    Sop, Top = opposite_category(S), opposite_category(T)
    Gop = FunctorData(Sop, Top, G.obj_map, G.arr_map)
    found = find_right_adjoint(Gop, cap)
    if not found:
        return found
    L = FunctorData(T, S, found.right.obj_map, found.right.arr_map)
    LG = compose_functors(L, G)
    GL = compose_functors(G, L)
    unit = NatTransData(identity_functor(T), GL, found.counit.components)
    counit = NatTransData(LG, identity_functor(S), found.unit.components)
    adj = AdjunctionData(L, G, unit, counit)
    problems = adjunction_violations(adj)
    if problems:
        raise AssertionError(f"dual adjunction fails its laws: {problems[:3]}")
    return adj


# ---------------------------------------------------------------- equivalences


@dataclass
class Equivalence:
    forward: FunctorData
    backward: FunctorData
    unit: NatTransData  # id ⇒ backward∘forward, invertible
    counit: NatTransData  # forward∘backward ⇒ id, invertible


def _hom_profile(C: FinCat) -> list[list[int]]:
    return [[len(C.hom(a, b)) for b in C.objects] for a in C.objects]


def pseudo_inverse(F: FunctorData) -> Equivalence:
    """Quasi-inverse of a full, faithful, essentially surjective functor."""
    S, T = F.source, F.target
    choice: list[tuple[int, int]] = []
    for d in T.objects:
        best = None
        for c in S.objects:
            i = T.isomorphic_objects(F.ob(c), d)
            if i >= 0:
                best = (c, i)
                break
        if best is None:
            raise ValueError("functor is not essentially surjective")
        choice.append(best)

    def preimage(a: int, b: int, k: int) -> int:
        for h in S.hom(a, b):
            if F(h) == k:
                return h
        raise ValueError("functor is not full")

    Gobj = [c for c, _ in choice]
    Garr = []
    for k in T.arrows:
        (a, ia), (b, ib) = choice[T.dom[k]], choice[T.cod[k]]
        Garr.append(preimage(a, b, T.c(T.inverse(ib), k, ia)))
    G = FunctorData(T, S, Gobj, Garr)
    counit = NatTransData(compose_functors(F, G), identity_functor(T), [i for _, i in choice])
    unit_c = []
    for c in S.objects:
        d = F.ob(c)
        a, ia = choice[d]
        unit_c.append(preimage(c, a, T.inverse(ia)))
    unit = NatTransData(identity_functor(S), compose_functors(G, F), unit_c)
    return Equivalence(F, G, unit, counit)


def categories_equivalent(C: FinCat, D: FinCat, cap: int | Budget | None = None) -> Equivalence | Absent:
    """Search for an equivalence ``C ≃ D``; the witness carries a quasi-inverse."""
    budget = _as_budget(cap, "equivalence search")
    if (C.n_obj == 0) != (D.n_obj == 0):
        return Absent("exactly one side is empty")
    pc, pd = _hom_profile(C), _hom_profile(D)
    iso_classes_c = _iso_class_count(C)
    iso_classes_d = _iso_class_count(D)
    if iso_classes_c != iso_classes_d:
        return Absent("different numbers of isomorphism classes", (iso_classes_c, iso_classes_d))
    if not _same_endo_multiset(C, D):
        return Absent("endomorphism monoid sizes differ")
    cands = [[y for y in D.objects if pd[y][y] == pc[x][x]] for x in C.objects]

    def obj_ok(m: dict[int, int]) -> bool:
        x = max(m)
        y = m[x]
        for x2, y2 in m.items():
            if pc[x][x2] != pd[y][y2] or pc[x2][x] != pd[y2][y]:
                return False
        return True

    for F in enumerate_functors(C, D, cands, injective_on_homs=True, obj_ok=obj_ok, cap=budget):
        if F.is_essentially_surjective() and F.is_full() and F.is_faithful():
            return pseudo_inverse(F)
    return Absent("no full, faithful, essentially surjective functor exists")


def _iso_class_count(C: FinCat) -> int:
    reps: list[int] = []
    for x in C.objects:
        if not any(C.isomorphic_objects(r, x) >= 0 for r in reps):
            reps.append(x)
    return len(reps)


def _same_endo_multiset(C: FinCat, D: FinCat) -> bool:
    def sig(K: FinCat) -> list[int]:
        reps: list[int] = []
        for x in K.objects:
            if not any(K.isomorphic_objects(r, x) >= 0 for r in reps):
                reps.append(x)
        return sorted(len(K.hom(r, r)) for r in reps)

    return sig(C) == sig(D)


def isomorphic_categories(C: FinCat, D: FinCat, cap: int | Budget | None = None) -> FunctorData | Absent:
    """An isomorphism of categories ``C → D`` (bijective on objects and arrows)."""
    if C.n_obj != D.n_obj or C.n_arr != D.n_arr:
        return Absent("sizes differ")
    pc, pd = _hom_profile(C), _hom_profile(D)
    cands = [[y for y in D.objects if pd[y][y] == pc[x][x]] for x in C.objects]

    def obj_ok(m: dict[int, int]) -> bool:
        x = max(m)
        if list(m.values()).count(m[x]) > 1:
            return False
        for x2, y2 in m.items():
            if pc[x][x2] != pd[m[x]][y2] or pc[x2][x] != pd[y2][m[x]]:
                return False
        return True

    for F in enumerate_functors(C, D, cands, injective_on_homs=True, obj_ok=obj_ok, cap=cap):
        return F
    return Absent("no isomorphism")


def precomposition(source: FunctorCategory, target: FunctorCategory, K: FunctorData) -> FunctorData:
    """``- ∘ K`` from functors ``D → C`` to functors ``D' → C`` for ``K: D' → D``.

    Every ``F∘K`` must lie in ``target``.
    """
    sb, tb = source.derived.built, target.derived.built

    def pre(key):
        om, am = key
        return (tuple(om[y] for y in K.obj_map), tuple(am[f] for f in K.arr_map))

    return FunctorData(
        source.cat,
        target.cat,
        [tb.o(pre(k)) for k in sb.obj_keys],
        [tb.a((pre(s), pre(t), tuple(c[y] for y in K.obj_map))) for s, t, c in sb.arr_keys],
    )
