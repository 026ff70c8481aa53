"""Brute-force reference computations on plain Python data.

These never import the package's deciders; tests compare the package against them.
"""

from __future__ import annotations

from itertools import product


def closure(n: int, covers: list[tuple[int, int]]) -> set[tuple[int, int]]:
    """Reflexive-transitive closure of a relation on ``range(n)``."""
    rel = {(i, i) for i in range(n)} | set(covers)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return rel


def meet(n: int, leq: set, a: int, b: int) -> int | None:
    lower = [c for c in range(n) if (c, a) in leq and (c, b) in leq]
    top = [c for c in lower if all((d, c) in leq for d in lower)]
    return top[0] if top else None


def join(n: int, leq: set, a: int, b: int) -> int | None:
    upper = [c for c in range(n) if (a, c) in leq and (b, c) in leq]
    bottom = [c for c in upper if all((c, d) in leq for d in upper)]
    return bottom[0] if bottom else None


def is_distributive(n: int, leq: set) -> bool:
    for a, b, c in product(range(n), repeat=3):
        if meet(n, leq, a, join(n, leq, b, c)) != join(n, leq, meet(n, leq, a, b), meet(n, leq, a, c)):
            return False
    return True


def heyting_implication(n: int, leq: set, a: int, b: int) -> int | None:
    """Greatest ``c`` with ``c ∧ a ≤ b``, or ``None``."""
    cands = [c for c in range(n) if (meet(n, leq, c, a), b) in leq]
    top = [c for c in cands if all((d, c) in leq for d in cands)]
    return top[0] if top else None


def law_failures(arrows: dict, identity: dict, comp: dict) -> list[tuple]:
    """Direct enumeration of category laws on ``arrows: id -> (dom, cod)``."""
    out = []
    for (g, f), h in comp.items():
        if arrows[g][0] != arrows[f][1]:
            out.append(("not composable", g, f))
        elif arrows[h] != (arrows[f][0], arrows[g][1]):
            out.append(("type", g, f))
    for g, f in product(arrows, repeat=2):
        if arrows[g][0] == arrows[f][1] and (g, f) not in comp:
            out.append(("missing", g, f))
    if out:
        return out
    for f, (d, c) in arrows.items():
        if comp[(identity[c], f)] != f or comp[(f, identity[d])] != f:
            out.append(("unit", f))
    for h, g, f in product(arrows, repeat=3):
        if arrows[h][0] == arrows[g][1] and arrows[g][0] == arrows[f][1]:
            if comp[(h, comp[(g, f)])] != comp[(comp[(h, g)], f)]:
                out.append(("assoc", h, g, f))
    return out


def group_table(n: int) -> dict:
    return {(g, f): (g + f) % n for g in range(n) for f in range(n)}


def galois_right_adjoint(n: int, leq_src: set, m: int, leq_tgt: set, F: list[int]) -> list[int] | None:
    """``U(y) = max{x | F x ≤ y}`` for monotone ``F`` between finite posets."""
    U = []
    for y in range(m):
        cands = [x for x in range(n) if (F[x], y) in leq_tgt]
        top = [x for x in cands if all((z, x) in leq_src for z in cands)]
        if not top:
            return None
        U.append(top[0])
    for x in range(n):
        for y in range(m):
            if ((F[x], y) in leq_tgt) != ((x, U[y]) in leq_src):
                return None
    return U


def hypercartesian_arrows(total_dom, total_cod, total_comp, base_comp, P_arr) -> set[int]:
    """Arrows ``φ`` such that every ``θ`` into ``cod φ`` with ``Pθ = Pφ∘v`` factors uniquely over ``v``.

    ``total_comp``/``base_comp`` map composable ``(g, f)`` to ``g∘f``.
    """
    base_arrows = {a for pair in base_comp for a in pair}
    out = set()
    for phi in range(len(total_dom)):
        u = P_arr[phi]
        ok = True
        for theta in range(len(total_dom)):
            if total_cod[theta] != total_cod[phi]:
                continue
            for v in base_arrows:
                if base_comp.get((u, v)) != P_arr[theta]:
                    continue
                n = sum(
                    1
                    for psi in range(len(total_dom))
                    if P_arr[psi] == v
                    and total_cod[psi] == total_dom[phi]
                    and total_dom[psi] == total_dom[theta]
                    and total_comp[(phi, psi)] == theta
                )
                ok = ok and n == 1
        if ok:
            out.add(phi)
    return out
