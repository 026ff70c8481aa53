"""Functors, natural transformations and adjunctions between finite categories."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .category import FinCat
from .errors import FunctorLawViolation, MappingValidationError, NaturalityViolation, Violation


@dataclass(frozen=True, eq=False)
class FunctorData:
    source: FinCat
    target: FinCat
    obj_map: tuple[int, ...]
    arr_map: tuple[int, ...]

    def __init__(self, source: FinCat, target: FinCat, obj_map: Sequence[int], arr_map: Sequence[int]):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "obj_map", tuple(int(x) for x in obj_map))
        object.__setattr__(self, "arr_map", tuple(int(x) for x in arr_map))

    def __call__(self, f: int) -> int:
        """Image of an arrow."""
        return self.arr_map[f]

    def ob(self, x: int) -> int:
        return self.obj_map[x]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FunctorData):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.obj_map == other.obj_map
            and self.arr_map == other.arr_map
        )

    def __hash__(self) -> int:
        return hash((self.obj_map, self.arr_map))

    def then(self, other: FunctorData) -> FunctorData:
        """``other ∘ self``."""
        return compose_functors(other, self)

    def is_full(self) -> bool:
        S, T = self.source, self.target
        for a in S.objects:
            for b in S.objects:
                image = {self.arr_map[f] for f in S.hom(a, b)}
                if len(image) != len(T.hom(self.obj_map[a], self.obj_map[b])):
                    return False
        return True

    def is_faithful(self) -> bool:
        S = self.source
        for a in S.objects:
            for b in S.objects:
                hs = S.hom(a, b)
                if len({self.arr_map[f] for f in hs}) != len(hs):
                    return False
        return True

    def is_essentially_surjective(self) -> bool:
        T = self.target
        images = set(self.obj_map)
        return all(any(T.isomorphic_objects(x, y) >= 0 for x in images) for y in T.objects)

    def is_equivalence(self) -> bool:
        return self.is_full() and self.is_faithful() and self.is_essentially_surjective()

    def reflects_isos(self) -> bool:
        S, T = self.source, self.target
        return all(S.is_iso(f) or not T.is_iso(self.arr_map[f]) for f in S.arrows)

    def is_injective_on_objects(self) -> bool:
        return len(set(self.obj_map)) == len(self.obj_map)


def identity_functor(C: FinCat) -> FunctorData:
    return FunctorData(C, C, range(C.n_obj), range(C.n_arr))


def compose_functors(G: FunctorData, F: FunctorData) -> FunctorData:
    """``G∘F``."""
    return FunctorData(
        F.source,
        G.target,
        [G.obj_map[x] for x in F.obj_map],
        [G.arr_map[f] for f in F.arr_map],
    )


def constant_functor(C: FinCat, D: FinCat, obj: int) -> FunctorData:
    return FunctorData(C, D, [obj] * C.n_obj, [D.identity[obj]] * C.n_arr)


def opposite_functor(F: FunctorData, source_op: FinCat, target_op: FinCat) -> FunctorData:
    return FunctorData(source_op, target_op, F.obj_map, F.arr_map)


@dataclass(frozen=True, eq=False)
class NatTransData:
    source_functor: FunctorData
    target_functor: FunctorData
    components: tuple[int, ...]

    def __init__(self, source_functor: FunctorData, target_functor: FunctorData, components: Sequence[int]):
        object.__setattr__(self, "source_functor", source_functor)
        object.__setattr__(self, "target_functor", target_functor)
        object.__setattr__(self, "components", tuple(int(x) for x in components))

    def __getitem__(self, x: int) -> int:
        return self.components[x]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NatTransData):
            return NotImplemented
        return (
            self.source_functor == other.source_functor
            and self.target_functor == other.target_functor
            and self.components == other.components
        )

    def __hash__(self) -> int:
        return hash(self.components)

    def is_iso(self) -> bool:
        T = self.source_functor.target
        return all(T.is_iso(a) for a in self.components)


def identity_transformation(F: FunctorData) -> NatTransData:
    return NatTransData(F, F, [F.target.identity[F.obj_map[x]] for x in F.source.objects])


@dataclass(frozen=True, eq=False)
class AdjunctionData:
    """``left ⊣ right`` with unit ``id → right∘left`` and counit ``left∘right → id``."""

    left: FunctorData
    right: FunctorData
    unit: NatTransData
    counit: NatTransData


# ---------------------------------------------------------------- validation


def functor_violations(F: FunctorData) -> list[Violation]:
    S, T = F.source, F.target
    out: list[Violation] = []
    if len(F.obj_map) != S.n_obj or len(F.arr_map) != S.n_arr:
        return [FunctorLawViolation("shape", (len(F.obj_map), len(F.arr_map)))]
    for x in F.obj_map:
        if not 0 <= x < T.n_obj:
            out.append(FunctorLawViolation("object out of range", x))
    for f in F.arr_map:
        if not 0 <= f < T.n_arr:
            out.append(FunctorLawViolation("arrow out of range", f))
    if out:
        return out
    for f in S.arrows:
        g = F.arr_map[f]
        if T.dom[g] != F.obj_map[S.dom[f]] or T.cod[g] != F.obj_map[S.cod[f]]:
            out.append(FunctorLawViolation("typing", f))
    for x in S.objects:
        if F.arr_map[S.identity[x]] != T.identity[F.obj_map[x]]:
            out.append(FunctorLawViolation("identity", x))
    if out:
        return out
    for f in S.arrows:
        for g in S.outgoing[S.cod[f]]:
            if F.arr_map[S.comp(g, f)] != T.try_comp(F.arr_map[g], F.arr_map[f]):
                out.append(FunctorLawViolation("composition", (g, f)))
    return out


def nat_violations(tau: NatTransData) -> list[Violation]:
    F, G = tau.source_functor, tau.target_functor
    S, T = F.source, F.target
    out: list[Violation] = []
    if G.source is not S and G.source != S:
        return [FunctorLawViolation("source mismatch", None)]
    if len(tau.components) != S.n_obj:
        return [FunctorLawViolation("shape", len(tau.components))]
    for x in S.objects:
        a = tau.components[x]
        if not 0 <= a < T.n_arr or T.dom[a] != F.obj_map[x] or T.cod[a] != G.obj_map[x]:
            out.append(NaturalityViolation(S.identity[x]))
    if out:
        return out
    for f in S.arrows:
        lhs = T.comp(G.arr_map[f], tau.components[S.dom[f]])
        rhs = T.comp(tau.components[S.cod[f]], F.arr_map[f])
        if lhs != rhs:
            out.append(NaturalityViolation(f))
    return out


def validate_mapping(entity: FunctorData | NatTransData) -> list[Violation]:
    """Every preservation or naturality failure; empty means valid."""
    if isinstance(entity, FunctorData):
        return functor_violations(entity)
    if isinstance(entity, NatTransData):
        out = functor_violations(entity.source_functor) + functor_violations(entity.target_functor)
        return out or nat_violations(entity)
    raise TypeError(f"cannot validate {type(entity).__name__}")


def require_valid(entity: FunctorData | NatTransData) -> None:
    problems = validate_mapping(entity)
    if problems:
        raise MappingValidationError(problems)


def adjunction_violations(adj: AdjunctionData) -> list[Violation]:
    """Triangle identities checked arrow by arrow, plus typing of unit/counit."""
    L, R = adj.left, adj.right
    C, D = L.source, L.target
    out: list[Violation] = []
    out += validate_mapping(adj.unit)
    out += validate_mapping(adj.counit)
    if out:
        return out
    for x in C.objects:
        if adj.unit.source_functor.obj_map[x] != x or adj.unit.target_functor.obj_map[x] != R.obj_map[L.obj_map[x]]:
            out.append(FunctorLawViolation("unit typing", x))
    for a in D.objects:
        if adj.counit.target_functor.obj_map[a] != a or adj.counit.source_functor.obj_map[a] != L.obj_map[R.obj_map[a]]:
            out.append(FunctorLawViolation("counit typing", a))
    if out:
        return out
    for x in C.objects:
        # ε_{Lx} ∘ L(η_x) = id_{Lx}
        if D.comp(adj.counit[L.obj_map[x]], L(adj.unit[x])) != D.identity[L.obj_map[x]]:
            out.append(FunctorLawViolation("left triangle", x))
    for a in D.objects:
        # R(ε_a) ∘ η_{Ra} = id_{Ra}
        if C.comp(R(adj.counit[a]), adj.unit[R.obj_map[a]]) != C.identity[R.obj_map[a]]:
            out.append(FunctorLawViolation("right triangle", a))
    return out
