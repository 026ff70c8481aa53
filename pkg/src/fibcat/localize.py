"""Localisation ``C[W⁻¹]`` of a finite category by completion of its zigzag presentation.

Words are tuples of letters in composition order: ``(a, b)`` denotes ``a∘b``.
Letter ``f < n_arr`` is a non-identity arrow of ``C``; letter ``n_arr + w`` is a
formal inverse of ``w ∈ W``. Rules are oriented by shortlex order and completed
by Knuth–Bendix; irreducible words are the arrows of the localisation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .category import Built, FinCat, build_category
from .errors import NonTerminating
from .functor import FunctorData

DEFAULT_ZIGZAG_CAP = 8
DEFAULT_RULE_CAP = 4000

Word = tuple[int, ...]


def _shortlex(w: Word) -> tuple[int, Word]:
    return (len(w), w)


class RewriteSystem:
    """A string rewriting system over typed letters, kept interreduced."""

    def __init__(self, rule_cap: int = DEFAULT_RULE_CAP):
        self.rules: dict[Word, Word] = {}
        self.rule_cap = rule_cap
        self._lengths: set[int] = set()

    def reduce(self, w: Word) -> Word:
        changed = True
        while changed:
            changed = False
            for n in sorted(self._lengths):
                for i in range(len(w) - n + 1):
                    rhs = self.rules.get(w[i : i + n])
                    if rhs is not None:
                        w = w[:i] + rhs + w[i + n :]
                        changed = True
                        break
                if changed:
                    break
        return w

    def irreducible_suffix(self, w: Word) -> bool:
        """No rule applies to a suffix of ``w`` (enough when ``w[:-1]`` is irreducible)."""
        return not any(n <= len(w) and w[-n:] in self.rules for n in self._lengths)

    def add(self, a: Word, b: Word) -> bool:
        a, b = self.reduce(a), self.reduce(b)
        if a == b:
            return False
        lhs, rhs = (a, b) if _shortlex(a) > _shortlex(b) else (b, a)
        self.rules[lhs] = rhs
        self._lengths.add(len(lhs))
        if len(self.rules) > self.rule_cap:
            raise NonTerminating(self.rule_cap, "localisation rule completion")
        self._interreduce(lhs)
        return True

    def _interreduce(self, new: Word) -> None:
        stale = []
        for lhs, rhs in list(self.rules.items()):
            if lhs == new:
                continue
            if _contains(lhs, new):
                stale.append((lhs, rhs))
        for lhs, rhs in stale:
            del self.rules[lhs]
        self._lengths = {len(k) for k in self.rules}
        for lhs in list(self.rules):
            self.rules[lhs] = self.reduce(self.rules[lhs])
        for lhs, rhs in stale:
            self.add(lhs, rhs)

    def complete(self) -> None:
        """Knuth–Bendix: resolve every overlap of left-hand sides until confluent."""
        done: set[tuple[Word, Word]] = set()
        while True:
            pending = [(l1, l2) for l1 in self.rules for l2 in self.rules if (l1, l2) not in done]
            if not pending:
                return
            for l1, l2 in pending:
                done.add((l1, l2))
                if l1 not in self.rules or l2 not in self.rules:
                    continue
                r1, r2 = self.rules[l1], self.rules[l2]
                for k in range(1, min(len(l1), len(l2))):
                    if l1[-k:] == l2[:k]:
                        self.add(r1 + l2[k:], l1[:-k] + r2)
                        if l1 not in self.rules or l2 not in self.rules:
                            break


def _contains(word: Word, part: Word) -> bool:
    n = len(part)
    return any(word[i : i + n] == part for i in range(len(word) - n + 1))


@dataclass
class Localization:
    """``C[W⁻¹]`` with the quotient functor ``C → C[W⁻¹]``.

    Arrow keys are ``(dom, cod, word)`` with ``word`` irreducible.
    """

    source: FinCat
    inverted: frozenset[int]
    system: RewriteSystem
    built: Built
    quotient: FunctorData

    @property
    def cat(self) -> FinCat:
        return self.built.cat

    def arrow_of_word(self, dom: int, cod: int, w: Iterable[int]) -> int:
        return self.built.a((dom, cod, self.system.reduce(tuple(w))))

    def inverse_word(self, w: int) -> Word:
        """The irreducible word of ``w⁻¹`` for ``w ∈ W``."""
        C = self.source
        if C.is_identity(w):
            return ()
        return self.system.reduce((C.n_arr + w,))


def localize(
    C: FinCat,
    W: Iterable[int],
    zigzag_cap: int = DEFAULT_ZIGZAG_CAP,
    rule_cap: int = DEFAULT_RULE_CAP,
) -> Localization:
    """Freely invert the arrows in ``W`` (closed under composition first).

    Raises ``NonTerminating`` when completion exceeds ``rule_cap`` rules or an
    irreducible word longer than ``zigzag_cap`` exists.
    """
    n = C.n_arr
    W_closed = set(W) | {C.identity[a] for a in C.objects}
    grow = True
    while grow:
        grow = False
        for f in list(W_closed):
            for g in C.outgoing[C.cod[f]]:
                if g in W_closed and C.comp(g, f) not in W_closed:
                    W_closed.add(C.comp(g, f))
                    grow = True
    inverted = sorted(w for w in W_closed if not C.is_identity(w))

    def dom(x: int) -> int:
        return C.dom[x] if x < n else C.cod[x - n]

    def cod(x: int) -> int:
        return C.cod[x] if x < n else C.dom[x - n]

    def letter(f: int) -> Word:
        return () if C.is_identity(f) else (f,)

    def inv_letter(w: int) -> Word:
        return () if C.is_identity(w) else (n + w,)

    R = RewriteSystem(rule_cap)
    plain = [f for f in C.arrows if not C.is_identity(f)]
    for f in plain:
        for g in C.incoming[C.dom[f]]:
            if not C.is_identity(g):
                R.add((f, g), letter(C.comp(f, g)))
    for w in inverted:
        R.add((w, n + w), ())
        R.add((n + w, w), ())
        inverse = C.inverse(w) if C.is_iso(w) else None
        if inverse is not None:
            R.add((n + w,), letter(inverse))
        for w2 in inverted:
            if C.dom[w2] == C.cod[w]:
                # w̄ ∘ w̄2 = (w2 ∘ w)⁻¹
                R.add((n + w, n + w2), inv_letter(C.comp(w2, w)))
    R.complete()

    letters = plain + [n + w for w in inverted]
    words: list[tuple[int, int, Word]] = [(a, a, ()) for a in C.objects]
    frontier = [(dom(x), cod(x), (x,)) for x in letters if R.irreducible_suffix((x,))]
    length = 1
    while frontier:
        if length > zigzag_cap:
            raise NonTerminating(zigzag_cap, f"irreducible zigzag of length {length}: {frontier[0][2]}")
        words += frontier
        nxt = []
        for d, c, w in frontier:
            for x in letters:
                if cod(x) == d:
                    w2 = w + (x,)
                    if R.irreducible_suffix(w2):
                        nxt.append((dom(x), c, w2))
        frontier = nxt
        length += 1

    def label(k: tuple[int, int, Word]) -> str:
        d, _, w = k
        if not w:
            return f"id{C.obj_labels[d]}"
        return "∘".join(C.arr_labels[x] if x < n else f"{C.arr_labels[x - n]}⁻¹" for x in w)

    built = build_category(
        C.objects,
        words,
        lambda k: k[0],
        lambda k: k[1],
        lambda a: (a, a, ()),
        lambda g, f: (f[0], g[1], R.reduce(g[2] + f[2])),
        obj_label=lambda a: C.obj_labels[a],
        arr_label=label,
    )
    quotient = FunctorData(
        C,
        built.cat,
        list(C.objects),
        [built.a((C.dom[f], C.cod[f], R.reduce(letter(f)))) for f in C.arrows],
    )
    return Localization(C, frozenset(inverted), R, built, quotient)


def induced_functor(G: FunctorData, source: Localization, target: Localization) -> FunctorData:
    """The functor ``C[W⁻¹] → D[V⁻¹]`` induced by ``G: C → D`` with ``G(W) ⊆ V``."""
    n = source.source.n_arr
    D = target.source
    images: dict[int, tuple[int, ...]] = {}
    for x in range(n):
        g = G(x)
        images[x] = () if D.is_identity(g) else (g,)
    for w in source.inverted:
        g = G(w)
        if not D.is_identity(g) and g not in target.inverted:
            raise ValueError(f"arrow {w} is inverted but its image {g} is not")
        images[n + w] = () if D.is_identity(g) else (D.n_arr + g,)
    arr = []
    for d, c, w in source.built.arr_keys:
        word = tuple(y for x in w for y in images[x])
        arr.append(target.arrow_of_word(G.ob(d), G.ob(c), word))
    return FunctorData(source.cat, target.cat, list(G.obj_map), arr)
