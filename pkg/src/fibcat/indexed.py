"""Strict indexed categories and the Grothendieck construction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .category import FinCat, build_category
from .errors import CleavageNotSplit, FunctorLawViolation, Violation
from .fibration import Cleavage, FibrationData, check_cleavage_split
from .functor import FunctorData, compose_functors, functor_violations, identity_functor


@dataclass(frozen=True, eq=False)
class IndexedCat:
    """A strict functor ``base^op → Cat``: a fibre per object, a reindexing per arrow.

    ``reindex[u]`` goes from the fibre over ``cod u`` to the fibre over ``dom u``.
    """

    base: FinCat
    fibres: tuple[FinCat, ...]
    reindex: tuple[FunctorData, ...]

    def __init__(self, base: FinCat, fibres: Sequence[FinCat], reindex: Sequence[FunctorData]):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "fibres", tuple(fibres))
        object.__setattr__(self, "reindex", tuple(reindex))

    def fibre_at(self, I: int) -> FinCat:
        return self.fibres[I]

    def reindex_at(self, u: int) -> FunctorData:
        return self.reindex[u]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IndexedCat):
            return NotImplemented
        return (
            self.base == other.base
            and self.fibres == other.fibres
            and all(a == b for a, b in zip(self.reindex, other.reindex))
        )

    def __hash__(self) -> int:
        return hash((self.base, self.fibres))

    def violations(self) -> list[Violation]:
        """Typing, functor laws and strict functoriality failures."""
        B = self.base
        out: list[Violation] = []
        if len(self.fibres) != B.n_obj or len(self.reindex) != B.n_arr:
            return [FunctorLawViolation("shape", (len(self.fibres), len(self.reindex)))]
        for u in B.arrows:
            F = self.reindex[u]
            if F.source != self.fibres[B.cod[u]] or F.target != self.fibres[B.dom[u]]:
                out.append(FunctorLawViolation("reindexing typing", u))
                continue
            out += functor_violations(F)
        if out:
            return out
        for I in B.objects:
            ident = identity_functor(self.fibres[I])
            if self.reindex[B.identity[I]] != ident:
                out.append(FunctorLawViolation("reindex(id) ≠ id", I))
        for u in B.arrows:
            for v in B.incoming[B.dom[u]]:
                lhs = self.reindex[B.comp(u, v)]
                rhs = compose_functors(self.reindex[v], self.reindex[u])
                if lhs != rhs:
                    out.append(FunctorLawViolation("reindex(u∘v) ≠ reindex(v)∘reindex(u)", (u, v)))
        return out


@dataclass
class GrothendieckResult:
    fibration: FibrationData
    cleavage: Cleavage


def grothendieck(H: IndexedCat) -> GrothendieckResult:
    """The total category of pairs ``(I, X)`` with its split cleavage ``Cart(u, Y) = (u, id)``.

    An arrow ``(I, X) → (J, Y)`` is ``(u, α)`` with ``α: X → H(u)(Y)`` in ``H(I)``;
    it is keyed ``(u, α, Y)``.  ``(v, β)∘(u, α) = (v∘u, H(u)(β)∘α)``.
    """
    B = H.base
    objs = [(I, x) for I in B.objects for x in H.fibres[I].objects]
    arrs = []
    for u in B.arrows:
        I, J = B.dom[u], B.cod[u]
        Hu, HI = H.reindex[u], H.fibres[I]
        for y in H.fibres[J].objects:
            target = Hu.ob(y)
            for a in HI.arrows:
                if HI.cod[a] == target:
                    arrs.append((u, a, y))

    def compose(g, f):
        v, beta, z = g
        u, alpha, _ = f
        HI = H.fibres[B.dom[u]]
        return (B.comp(v, u), HI.comp(H.reindex[u](beta), alpha), z)

    built = build_category(
        objs,
        arrs,
        lambda k: (B.dom[k[0]], H.fibres[B.dom[k[0]]].dom[k[1]]),
        lambda k: (B.cod[k[0]], k[2]),
        lambda o: (B.identity[o[0]], H.fibres[o[0]].identity[o[1]], o[1]),
        compose,
        obj_label=lambda o: f"({B.obj_labels[o[0]]},{H.fibres[o[0]].obj_labels[o[1]]})",
        arr_label=lambda k: f"({B.arr_labels[k[0]]},{H.fibres[B.dom[k[0]]].arr_labels[k[1]]})",
    )
    T = built.cat
    proj = FunctorData(T, B, [o[0] for o in built.obj_keys], [k[0] for k in built.arr_keys])
    P = FibrationData(proj, "grothendieck", built=built)
    table = {}
    for u in B.arrows:
        I = B.dom[u]
        for y in H.fibres[B.cod[u]].objects:
            fy = H.reindex[u].ob(y)
            table[(u, built.o((B.cod[u], y)))] = built.a((u, H.fibres[I].identity[fy], y))
    return GrothendieckResult(P, Cleavage(P, table))


def to_indexed(P: FibrationData, cl: Cleavage) -> IndexedCat:
    """Fibres and reindexing functors of a split cleavage."""
    verdict = check_cleavage_split(cl)
    if not verdict.split:
        raise CleavageNotSplit(verdict.violation)
    B = P.base
    return IndexedCat(
        B,
        [P.fibre(I).cat for I in B.objects],
        [cl.reindexing_functor(u) for u in B.arrows],
    )


def comparison_to_grothendieck(P: FibrationData, cl: Cleavage, G: GrothendieckResult) -> FunctorData:
    """``∫(to_indexed(P, cl)) → P``: ``(u, α, Y) ↦ Cart(u, Y)∘α``."""
    built = G.fibration.built
    T = P.total
    obj = [P.fibre(I).objects[x] for I, x in built.obj_keys]
    arr = []
    for u, a, y in built.arr_keys:
        I = P.base.dom[u]
        alpha = P.fibre(I).arrows[a]
        Y = P.fibre(P.base.cod[u]).objects[y]
        arr.append(T.comp(cl(u, Y), alpha))
    return FunctorData(G.fibration.total, T, obj, arr)
