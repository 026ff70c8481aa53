"""Exhaustive limit search in finite categories."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .category import Absent, FinCat
from .errors import BadArgs

SHAPES = ("terminal", "binary_product", "pullback", "equalizer")


@dataclass(frozen=True, order=True)
class Cone:
    apex: int
    legs: tuple[int, ...]


@dataclass(frozen=True)
class LimitResult:
    shape: str
    legs: tuple[int, ...]
    cones: tuple[Cone, ...]
    canonical: Cone

    def __bool__(self) -> bool:
        return True


def _diagram(C: FinCat, shape: str, legs: Sequence[int]) -> tuple[list[int], list[tuple[int, int, int]], int]:
    """Nodes, arrows ``(i, j, f)`` and how many leading legs a cone reports."""
    legs = tuple(legs)
    if shape == "terminal":
        if legs:
            raise BadArgs("terminal takes no legs")
        return [], [], 0
    if shape == "binary_product":
        a, b = legs
        return [a, b], [], 2
    if shape == "pullback":
        f, g = legs
        if C.cod[f] != C.cod[g]:
            raise BadArgs("pullback legs must share a codomain")
        return [C.dom[f], C.dom[g], C.cod[f]], [(0, 2, f), (1, 2, g)], 2
    if shape == "equalizer":
        f, g = legs
        if C.dom[f] != C.dom[g] or C.cod[f] != C.cod[g]:
            raise BadArgs("equalizer legs must be parallel")
        return [C.dom[f], C.cod[f]], [(0, 1, f), (0, 1, g)], 1
    raise BadArgs(f"unknown limit shape {shape!r}")


def all_cones(C: FinCat, nodes: Sequence[int], arrows: Sequence[tuple[int, int, int]]) -> list[Cone]:
    """Every cone over the diagram, in ascending (apex, legs) order."""
    out: list[Cone] = []
    checks: list[list[tuple[int, int, int]]] = [[] for _ in nodes]
    for i, j, f in arrows:
        checks[max(i, j)].append((i, j, f))
    k = len(nodes)
    for X in C.objects:
        legs = [0] * k

        def rec(pos: int) -> None:
            if pos == k:
                out.append(Cone(X, tuple(legs)))
                return
            for leg in C.hom(X, nodes[pos]):
                legs[pos] = leg
                if all(C.comp(f, legs[i]) == legs[j] for i, j, f in checks[pos]):
                    rec(pos + 1)

        rec(0)
    return out


def mediators(C: FinCat, source: Cone, target: Cone) -> list[int]:
    """Arrows ``h`` with ``target.legs[i]∘h = source.legs[i]`` for all i."""
    return [
        h
        for h in C.hom(source.apex, target.apex)
        if all(C.comp(t, h) == s for t, s in zip(target.legs, source.legs))
    ]


def limiting_cones(C: FinCat, nodes: Sequence[int], arrows: Sequence[tuple[int, int, int]]) -> tuple[list[Cone], list[Cone]]:
    cones = all_cones(C, nodes, arrows)
    by_apex: dict[int, list[Cone]] = {}
    for c in cones:
        by_apex.setdefault(c.apex, []).append(c)
    limits = []
    for L in cones:
        if all(len(mediators(C, K, L)) == 1 for K in cones):
            limits.append(L)
    return limits, cones


def find_limit(C: FinCat, shape: str, legs: Sequence[int] = ()) -> LimitResult | Absent:
    """All limiting cones of the given shape plus the canonical (least) one."""
    key = (shape, tuple(legs))
    cache = C.__dict__.setdefault("_limit_cache", {})
    if key in cache:
        return cache[key]
    nodes, arrows, keep = _diagram(C, shape, legs)
    limits, cones = limiting_cones(C, nodes, arrows)
    if not limits:
        result: LimitResult | Absent = Absent(f"no limiting {shape} cone", tuple(cones))
    else:
        trimmed = tuple(Cone(c.apex, c.legs[:keep]) for c in limits)
        result = LimitResult(shape, tuple(legs), trimmed, min(trimmed))
    cache[key] = result
    return result


def pullback(C: FinCat, f: int, g: int) -> Cone | None:
    r = find_limit(C, "pullback", (f, g))
    return r.canonical if r else None


def terminal_object(C: FinCat) -> int | None:
    r = find_limit(C, "terminal")
    return r.canonical.apex if r else None


def initial_object(C: FinCat) -> int | None:
    for x in C.objects:
        if all(len(C.hom(x, y)) == 1 for y in C.objects):
            return x
    return None


def binary_product(C: FinCat, a: int, b: int) -> Cone | None:
    r = find_limit(C, "binary_product", (a, b))
    return r.canonical if r else None


def missing_pullback(C: FinCat) -> tuple[int, int] | None:
    """Least cospan without a pullback, or ``None`` when all exist."""
    for c in C.objects:
        into = C.incoming[c]
        for f in into:
            for g in into:
                if not find_limit(C, "pullback", (f, g)):
                    return (f, g)
    return None


def has_pullbacks(C: FinCat) -> bool:
    return missing_pullback(C) is None


def has_binary_products(C: FinCat) -> bool:
    return all(binary_product(C, a, b) is not None for a in C.objects for b in C.objects)


def has_finite_limits(C: FinCat) -> bool:
    return terminal_object(C) is not None and has_pullbacks(C)


def is_pullback_square(C: FinCat, top: int, left: int, right: int, bottom: int) -> bool:
    """Is ``right∘top = bottom∘left`` a pullback of ``(bottom, right)``?

    The square has apex ``dom top``; ``left`` goes down to ``dom bottom``.
    """
    if C.comp(right, top) != C.comp(bottom, left):
        return False
    r = find_limit(C, "pullback", (bottom, right))
    if not r:
        return False
    return Cone(C.dom[top], (left, top)) in r.cones
