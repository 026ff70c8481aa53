"""Fibrations as functors with decidable arrow classification.

The classification of every arrow of the total category is computed once,
straight from the universal properties, and cached on the
:class:`FibrationData` instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .category import Absent, FinCat, build_category
from .errors import NoLift, NotAFibration
from .functor import FunctorData, NatTransData, compose_functors, validate_mapping
from .search import Budget, DEFAULT_CAP, enumerate_functors


@dataclass(frozen=True)
class ArrowFlags:
    vertical: bool
    cartesian_liberal: bool
    hypercartesian: bool
    cocartesian: bool
    cocartesian_liberal: bool

    @property
    def cartesian(self) -> bool:
        return self.hypercartesian


@dataclass
class Fibre:
    """The fibre over a base object with its id-preserving embedding."""

    base_obj: int
    cat: FinCat
    objects: tuple[int, ...]  # fibre object id → total object id
    arrows: tuple[int, ...]  # fibre arrow id → total arrow id
    obj_index: dict[int, int]
    arr_index: dict[int, int]


class FibrationData:
    """A functor ``proj: total → base`` with cached arrow classification.

    Nothing here assumes ``proj`` is a fibration; use :meth:`verdict`.
    """

    def __init__(self, proj: FunctorData, name: str = "", built=None, provenance: dict | None = None):
        self.proj = proj
        self.built = built
        self.provenance = provenance or {"construction": name or "input"}
        self.legs: tuple[FunctorData, ...] = ()
        self.total: FinCat = proj.source
        self.base: FinCat = proj.target
        self.name = name
        self.P_obj = proj.obj_map
        self.P_arr = proj.arr_map
        over: list[list[int]] = [[] for _ in self.base.objects]
        for x in self.total.objects:
            over[self.P_obj[x]].append(x)
        self.over = tuple(tuple(v) for v in over)
        arrows_over: dict[int, list[int]] = {}
        for f in self.total.arrows:
            arrows_over.setdefault(self.P_arr[f], []).append(f)
        self.arrows_over = {k: tuple(v) for k, v in arrows_over.items()}

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"FibrationData{tag}(total={self.total}, base={self.base})"

    # ------------------------------------------------------------ helpers

    def is_vertical(self, f: int) -> bool:
        return self.base.is_identity(self.P_arr[f])

    def hom_over(self, a: int, b: int, u: int) -> list[int]:
        return [f for f in self.total.hom(a, b) if self.P_arr[f] == u]

    def verticals(self, a: int, b: int) -> list[int]:
        if self.P_obj[a] != self.P_obj[b]:
            return []
        return self.hom_over(a, b, self.base.identity[self.P_obj[a]])

    def base_factors(self, u: int, w: int) -> list[int]:
        """All ``v`` with ``u∘v = w``."""
        B = self.base
        return [v for v in B.hom(B.dom[w], B.dom[u]) if B.comp(u, v) == w]

    def base_cofactors(self, u: int, w: int) -> list[int]:
        """All ``v`` with ``v∘u = w``."""
        B = self.base
        return [v for v in B.hom(B.cod[u], B.cod[w]) if B.comp(v, u) == w]

    # ------------------------------------------------------------ classification

    def _hypercartesian(self, phi: int) -> bool:
        X, Y = self.total, self.total.dom[phi]
        u = self.P_arr[phi]
        for theta in X.incoming[X.cod[phi]]:
            Z = X.dom[theta]
            for v in self.base_factors(u, self.P_arr[theta]):
                n = 0
                for psi in X.hom(Z, Y):
                    if self.P_arr[psi] == v and X.try_comp(phi, psi) == theta:
                        n += 1
                        if n > 1:
                            return False
                if n != 1:
                    return False
        return True

    def _liberal(self, phi: int) -> bool:
        X = self.total
        Y = X.dom[phi]
        u = self.P_arr[phi]
        idJ = self.base.identity[self.base.dom[u]]
        for theta in X.incoming[X.cod[phi]]:
            if self.P_arr[theta] != u:
                continue
            n = sum(
                1
                for psi in X.hom(X.dom[theta], Y)
                if self.P_arr[psi] == idJ and X.try_comp(phi, psi) == theta
            )
            if n != 1:
                return False
        return True

    def _cocartesian(self, phi: int) -> bool:
        X = self.total
        Y = X.cod[phi]
        u = self.P_arr[phi]
        for psi in X.outgoing[X.dom[phi]]:
            Z = X.cod[psi]
            for v in self.base_cofactors(u, self.P_arr[psi]):
                n = 0
                for theta in X.hom(Y, Z):
                    if self.P_arr[theta] == v and X.try_comp(theta, phi) == psi:
                        n += 1
                        if n > 1:
                            return False
                if n != 1:
                    return False
        return True

    def _cocartesian_liberal(self, phi: int) -> bool:
        X = self.total
        Y = X.cod[phi]
        u = self.P_arr[phi]
        idJ = self.base.identity[self.base.cod[u]]
        for psi in X.outgoing[X.dom[phi]]:
            if self.P_arr[psi] != u:
                continue
            n = sum(
                1
                for theta in X.hom(Y, X.cod[psi])
                if self.P_arr[theta] == idJ and X.try_comp(theta, phi) == psi
            )
            if n != 1:
                return False
        return True

    @cached_property
    def flags(self) -> tuple[ArrowFlags, ...]:
        return tuple(self.recompute_flags(f) for f in self.total.arrows)

    def recompute_flags(self, f: int) -> ArrowFlags:
        """Classification straight from the definitions (no cache)."""
        return ArrowFlags(
            vertical=self.is_vertical(f),
            cartesian_liberal=self._liberal(f),
            hypercartesian=self._hypercartesian(f),
            cocartesian=self._cocartesian(f),
            cocartesian_liberal=self._cocartesian_liberal(f),
        )

    def classify_arrow(self, f: int) -> ArrowFlags:
        return self.flags[f]

    def is_cartesian(self, f: int) -> bool:
        return self.flags[f].hypercartesian

    def is_cocartesian(self, f: int) -> bool:
        return self.flags[f].cocartesian

    # ------------------------------------------------------------ lifts

    @cached_property
    def _lift_index(self) -> dict[tuple[int, int], tuple[int, ...]]:
        idx: dict[tuple[int, int], list[int]] = {}
        for f in self.total.arrows:
            if self.flags[f].hypercartesian:
                idx.setdefault((self.P_arr[f], self.total.cod[f]), []).append(f)
        return {k: tuple(v) for k, v in idx.items()}

    @cached_property
    def _colift_index(self) -> dict[tuple[int, int], tuple[int, ...]]:
        idx: dict[tuple[int, int], list[int]] = {}
        for f in self.total.arrows:
            if self.flags[f].cocartesian:
                idx.setdefault((self.P_arr[f], self.total.dom[f]), []).append(f)
        return {k: tuple(v) for k, v in idx.items()}

    def lifts(self, u: int, X: int) -> tuple[int, ...]:
        return self._lift_index.get((u, X), ())

    def colifts(self, u: int, X: int) -> tuple[int, ...]:
        return self._colift_index.get((u, X), ())

    def canonical_lift(self, u: int, X: int) -> int:
        ls = self.lifts(u, X)
        if not ls:
            raise NoLift(u, X)
        ident = self.total.identity[X]
        return ident if ident in ls else ls[0]

    def canonical_colift(self, u: int, X: int) -> int:
        ls = self.colifts(u, X)
        if not ls:
            raise NoLift(u, X, "cocartesian")
        ident = self.total.identity[X]
        return ident if ident in ls else ls[0]

    @cached_property
    def verdict(self) -> FibrationVerdict:
        B = self.base
        missing = None
        for u in B.arrows:
            for X in self.over[B.cod[u]]:
                if not self.lifts(u, X):
                    missing = (u, X)
                    break
            if missing:
                break
        co_missing = None
        for u in B.arrows:
            for X in self.over[B.dom[u]]:
                if not self.colifts(u, X):
                    co_missing = (u, X)
                    break
            if co_missing:
                break
        return FibrationVerdict(missing is None, co_missing is None, missing, co_missing)

    @property
    def is_fibration(self) -> bool:
        return self.verdict.fibration

    def require_fibration(self) -> None:
        if not self.verdict.fibration:
            u, X = self.verdict.counterexample
            raise NotAFibration(f"no cartesian lift of object {X} along base arrow {u}")

    # ------------------------------------------------------------ fibres

    def fibre(self, I: int) -> Fibre:
        cache = self.__dict__.setdefault("_fibres", {})
        if I in cache:
            return cache[I]
        X = self.total
        idI = self.base.identity[I]
        objs = self.over[I]
        arrs = self.arrows_over.get(idI, ())
        built = build_category(
            objs,
            arrs,
            lambda f: X.dom[f],
            lambda f: X.cod[f],
            lambda o: X.identity[o],
            lambda g, f: X.comp(g, f),
            obj_label=lambda o: X.obj_labels[o],
            arr_label=lambda f: X.arr_labels[f],
        )
        fib = Fibre(I, built.cat, tuple(built.obj_keys), tuple(built.arr_keys), built.obj_index, built.arr_index)
        cache[I] = fib
        return fib

    def vertical_factor(self, phi: int, theta: int) -> int:
        """The unique vertical ``ψ`` with ``phi∘ψ = theta`` (``phi`` cartesian)."""
        X = self.total
        for psi in self.verticals(X.dom[theta], X.dom[phi]):
            if X.comp(phi, psi) == theta:
                return psi
        raise ValueError(f"arrow {theta} does not factor vertically through {phi}")

    def cocartesian_vertical_factor(self, phi: int, psi: int) -> int:
        """The unique vertical ``θ`` with ``θ∘phi = psi`` (``phi`` cocartesian)."""
        X = self.total
        for theta in self.verticals(X.cod[phi], X.cod[psi]):
            if X.comp(theta, phi) == psi:
                return theta
        raise ValueError(f"arrow {psi} does not factor vertically through {phi}")

    def factor_over(self, phi: int, theta: int, v: int) -> int:
        """The unique ``ψ`` over ``v`` with ``phi∘ψ = theta``."""
        X = self.total
        for psi in X.hom(X.dom[theta], X.dom[phi]):
            if self.P_arr[psi] == v and X.comp(phi, psi) == theta:
                return psi
        raise ValueError(f"arrow {theta} does not factor through {phi} over {v}")


@dataclass(frozen=True)
class FibrationVerdict:
    fibration: bool
    opfibration: bool
    counterexample: tuple[int, int] | None
    co_counterexample: tuple[int, int] | None

    @property
    def bifibration(self) -> bool:
        return self.fibration and self.opfibration


def is_fibration(P: FibrationData | FunctorData) -> FibrationVerdict:
    if isinstance(P, FunctorData):
        P = FibrationData(P)
    return P.verdict


def classify_arrow(P: FibrationData, f: int) -> ArrowFlags:
    return P.classify_arrow(f)


def cartesian_lift(P: FibrationData, u: int, X: int) -> tuple[tuple[int, ...], int]:
    """All hypercartesian lifts of ``X`` along ``u`` and the canonical one."""
    if P.P_obj[X] != P.base.cod[u]:
        raise ValueError("object does not lie over the codomain of the base arrow")
    return P.lifts(u, X), P.canonical_lift(u, X)


def cocartesian_lift(P: FibrationData, u: int, X: int) -> tuple[tuple[int, ...], int]:
    if P.P_obj[X] != P.base.dom[u]:
        raise ValueError("object does not lie over the domain of the base arrow")
    return P.colifts(u, X), P.canonical_colift(u, X)


# ---------------------------------------------------------------- cleavages


class Cleavage:
    """A choice ``Cart(u, X)`` of cartesian lifts for every base arrow and object."""

    def __init__(self, fib: FibrationData, table: dict[tuple[int, int], int]):
        self.fib = fib
        self.table = dict(table)

    def __call__(self, u: int, X: int) -> int:
        return self.table[(u, X)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cleavage):
            return NotImplemented
        return self.table == other.table

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.table.items())))

    def star(self, u: int, X: int) -> int:
        """The object ``u*X``."""
        return self.fib.total.dom[self.table[(u, X)]]

    @property
    def normalized(self) -> bool:
        B, X = self.fib.base, self.fib.total
        return all(self.table[(B.identity[I], x)] == X.identity[x] for I in B.objects for x in self.fib.over[I])

    def entry_violations(self) -> list[tuple[int, int]]:
        P = self.fib
        bad = []
        for u in P.base.arrows:
            for x in P.over[P.base.cod[u]]:
                f = self.table.get((u, x))
                if f is None or P.P_arr[f] != u or P.total.cod[f] != x or not P.is_cartesian(f):
                    bad.append((u, x))
        return bad

    def reindex_arrow(self, u: int, alpha: int) -> int:
        """``u*α``: the vertical arrow with ``Cart(u, X')∘u*α = α∘Cart(u, X)``."""
        P = self.fib
        X = P.total
        src, tgt = X.dom[alpha], X.cod[alpha]
        return P.vertical_factor(self.table[(u, tgt)], X.comp(alpha, self.table[(u, src)]))

    def reindexing_functor(self, u: int) -> FunctorData:
        P = self.fib
        B = P.base
        FI, FJ = P.fibre(B.cod[u]), P.fibre(B.dom[u])
        obj = [FJ.obj_index[self.star(u, x)] for x in FI.objects]
        arr = [FJ.arr_index[self.reindex_arrow(u, a)] for a in FI.arrows]
        return FunctorData(FI.cat, FJ.cat, obj, arr)

    def coherence(self, u: int, v: int, X: int) -> int:
        """``c_{u,v}``: vertical iso with ``Cart(u∘v, X)∘c = Cart(u, X)∘Cart(v, u*X)``."""
        P = self.fib
        T = P.total
        uv = P.base.comp(u, v)
        composite = T.comp(self.table[(u, X)], self.table[(v, self.star(u, X))])
        return P.vertical_factor(self.table[(uv, X)], composite)

    def split_violation(self) -> tuple | None:
        """First failure of normalisation or strict functoriality, else ``None``."""
        P = self.fib
        B, T = P.base, P.total
        for I in B.objects:
            for x in P.over[I]:
                if self.table[(B.identity[I], x)] != T.identity[x]:
                    return ("identity", B.identity[I], x)
        for u in B.arrows:
            for v in B.incoming[B.dom[u]]:
                uv = B.comp(u, v)
                for x in P.over[B.cod[u]]:
                    lhs = self.table[(uv, x)]
                    rhs = T.comp(self.table[(u, x)], self.table[(v, self.star(u, x))])
                    if lhs != rhs:
                        return ("composition", u, v, x)
        return None

    @property
    def is_split(self) -> bool:
        return self.split_violation() is None


def choose_cleavage(P: FibrationData, prefer: str = "least") -> Cleavage:
    """Normalised deterministic cleavage: identities over identities, else least (or greatest) lift."""
    P.require_fibration()
    B, T = P.base, P.total
    table = {}
    for u in B.arrows:
        for x in P.over[B.cod[u]]:
            ls = P.lifts(u, x)
            if B.is_identity(u):
                table[(u, x)] = T.identity[x]
            else:
                table[(u, x)] = ls[0] if prefer == "least" else ls[-1]
    return Cleavage(P, table)


@dataclass(frozen=True)
class SplitVerdict:
    split: bool
    violation: tuple | None


def check_cleavage_split(cl: Cleavage) -> SplitVerdict:
    v = cl.split_violation()
    return SplitVerdict(v is None, v)


def enumerate_cleavages(P: FibrationData, cap: int = DEFAULT_CAP) -> Iterator[Cleavage]:
    """Every cleavage (all choices of cartesian lifts)."""
    P.require_fibration()
    keys = [(u, x) for u in P.base.arrows for x in P.over[P.base.cod[u]]]
    budget = Budget(cap, "cleavage enumeration")
    choice: dict[tuple[int, int], int] = {}

    def rec(i: int) -> Iterator[Cleavage]:
        if i == len(keys):
            yield Cleavage(P, choice)
            return
        for f in P.lifts(*keys[i]):
            budget.tick()
            choice[keys[i]] = f
            yield from rec(i + 1)
        choice.pop(keys[i], None)

    yield from rec(0)


def split_cleavages(P: FibrationData, cap: int = DEFAULT_CAP, limit: int | None = None) -> list[Cleavage]:
    """All split cleavages, by backtracking with the splitting equations as constraints."""
    P.require_fibration()
    B, T = P.base, P.total
    budget = Budget(cap, "split cleavage search")
    keys = [(u, x) for u in B.arrows if not B.is_identity(u) for x in P.over[B.cod[u]]]
    choice: dict[tuple[int, int], int] = {}
    for I in B.objects:
        for x in P.over[I]:
            choice[(B.identity[I], x)] = T.identity[x]
    found: list[Cleavage] = []

    def consistent() -> bool:
        for (u, x), f in list(choice.items()):
            y = T.dom[f]
            for v in B.incoming[B.dom[u]]:
                g = choice.get((v, y))
                h = choice.get((B.comp(u, v), x))
                if g is not None and h is not None and T.comp(f, g) != h:
                    return False
        return True

    def rec(i: int) -> bool:
        if i == len(keys):
            found.append(Cleavage(P, choice))
            return limit is not None and len(found) >= limit
        for f in P.lifts(*keys[i]):
            budget.tick()
            choice[keys[i]] = f
            if consistent() and rec(i + 1):
                return True
        choice.pop(keys[i], None)
        return False

    rec(0)
    return found


def is_splittable(P: FibrationData, cap: int = DEFAULT_CAP) -> bool:
    return bool(split_cleavages(P, cap, limit=1))


def reindexing_functor(cl: Cleavage, u: int) -> FunctorData:
    return cl.reindexing_functor(u)


def fibre(P: FibrationData, I: int) -> Fibre:
    return P.fibre(I)


# ---------------------------------------------------------------- morphisms


@dataclass(frozen=True, eq=False)
class FibMorphism:
    kind: str  # "cartesian_functor" | "vertical_transformation"
    payload: FunctorData | NatTransData
    over: FunctorData | None = None


@dataclass(frozen=True)
class MorphismVerdict:
    ok: bool
    failures: tuple = ()


def is_cartesian_functor(F: FunctorData, P: FibrationData, Q: FibrationData, over: FunctorData | None = None) -> MorphismVerdict:
    """Commutes with the projections (over ``over``) and preserves cartesian arrows."""
    failures = []
    if validate_mapping(F):
        return MorphismVerdict(False, (("functor laws",),))
    if over is None:
        if P.base != Q.base:
            return MorphismVerdict(False, (("bases differ",),))
        lhs = compose_functors(Q.proj, F)
        if lhs.obj_map != P.proj.obj_map or lhs.arr_map != P.proj.arr_map:
            failures.append(("projection",))
    else:
        lhs = compose_functors(Q.proj, F)
        rhs = compose_functors(over, P.proj)
        if lhs.obj_map != rhs.obj_map or lhs.arr_map != rhs.arr_map:
            failures.append(("projection",))
    for f in P.total.arrows:
        if P.is_cartesian(f) and not Q.is_cartesian(F(f)):
            failures.append(("cartesian", f))
            break
    return MorphismVerdict(not failures, tuple(failures))


def check_fib_morphism(
    m: FibMorphism,
    P: FibrationData,
    Q: FibrationData,
    cleavages: tuple[Cleavage, Cleavage] | None = None,
) -> MorphismVerdict:
    if m.kind == "cartesian_functor":
        F = m.payload
        v = is_cartesian_functor(F, P, Q, m.over)
        if not v.ok or cleavages is None:
            return v
        cP, cQ = cleavages
        G = m.over
        for (u, x), f in cP.table.items():
            gu = u if G is None else G(u)
            if F(f) != cQ(gu, F.ob(x)):
                return MorphismVerdict(False, (("split", u, x),))
        return v
    if m.kind == "vertical_transformation":
        tau = m.payload
        failures = list(validate_mapping(tau))
        for part in (tau.source_functor, tau.target_functor):
            pv = is_cartesian_functor(part, P, Q, m.over)
            if not pv.ok:
                failures.append(("component functor", pv.failures))
        for x, a in enumerate(tau.components):
            if not Q.is_vertical(a):
                failures.append(("vertical", x))
        return MorphismVerdict(not failures, tuple(failures))
    raise ValueError(f"unknown morphism kind {m.kind!r}")


def fibre_functor(F: FunctorData, P: FibrationData, Q: FibrationData, I: int) -> FunctorData:
    """Restriction of a functor over the base to the fibres over ``I``."""
    FP, FQ = P.fibre(I), Q.fibre(I)
    return FunctorData(
        FP.cat,
        FQ.cat,
        [FQ.obj_index[F.ob(x)] for x in FP.objects],
        [FQ.arr_index[F(a)] for a in FP.arrows],
    )


def is_fibrewise_equivalence(F: FunctorData, P: FibrationData, Q: FibrationData) -> bool:
    return all(fibre_functor(F, P, Q, I).is_equivalence() for I in P.base.objects)


def find_fibred_equivalence(P: FibrationData, Q: FibrationData, cap: int = DEFAULT_CAP) -> FunctorData | Absent:
    """A cartesian functor ``P → Q`` over the identity that is an equivalence in every fibre."""
    if P.base != Q.base:
        return Absent("different bases")
    X, Y = P.total, Q.total
    hc = [[len(X.hom(a, b)) for b in X.objects] for a in X.objects]
    hq = [[len(Y.hom(a, b)) for b in Y.objects] for a in Y.objects]
    for I in P.base.objects:
        if bool(P.over[I]) != bool(Q.over[I]):
            return Absent("a fibre is empty on exactly one side", I)
    cands = [[y for y in Q.over[P.P_obj[x]] if hq[y][y] == hc[x][x]] for x in X.objects]

    def obj_ok(m: dict[int, int]) -> bool:
        x = max(m)
        y = m[x]
        for x2, y2 in m.items():
            if hc[x][x2] != hq[y][y2] or hc[x2][x] != hq[y2][y]:
                return False
        return True

    def arr_ok(f: int, g: int) -> bool:
        return Q.P_arr[g] == P.P_arr[f] and (not P.is_cartesian(f) or Q.is_cartesian(g))

    budget = Budget(cap, "fibred equivalence search")
    for F in enumerate_functors(X, Y, cands, arr_ok, injective_on_homs=True, obj_ok=obj_ok, cap=budget):
        if is_fibrewise_equivalence(F, P, Q):
            return F
    return Absent("no fibred equivalence")


# ---------------------------------------------------------------- lemma sweeps


def cartesian_composition_failures(P: FibrationData) -> list[tuple[int, int]]:
    """Pairs of composable hypercartesian arrows whose composite is not hypercartesian."""
    T = P.total
    out = []
    for f in T.arrows:
        if not P.is_cartesian(f):
            continue
        for g in T.outgoing[T.cod[f]]:
            if P.is_cartesian(g) and not P.is_cartesian(T.comp(g, f)):
                out.append((g, f))
    return out


def iso_characterisation_failures(P: FibrationData) -> list[int]:
    """Arrows where (iso) differs from (hypercartesian over an iso)."""
    T, B = P.total, P.base
    return [f for f in T.arrows if T.is_iso(f) != (P.is_cartesian(f) and B.is_iso(P.P_arr[f]))]


def lift_uniqueness_failures(P: FibrationData) -> list[tuple[int, int, int]]:
    """Pairs of lifts of the same (u, X) not linked by a unique vertical iso."""
    T = P.total
    out = []
    for (u, x), ls in P._lift_index.items():
        for a in ls:
            for b in ls:
                links = [
                    i for i in P.verticals(T.dom[a], T.dom[b]) if T.comp(b, i) == a
                ]
                if len(links) != 1 or not T.is_iso(links[0]):
                    out.append((u, a, b))
    return out


def liberal_vs_hyper_failures(P: FibrationData) -> list[int]:
    return [f for f in P.total.arrows if P.flags[f].cartesian_liberal != P.flags[f].hypercartesian]


def cocartesian_remark_failures(P: FibrationData) -> list[int]:
    return [f for f in P.total.arrows if P.flags[f].cocartesian != P.flags[f].cocartesian_liberal]
