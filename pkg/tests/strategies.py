"""Hypothesis strategies for small categories."""

from __future__ import annotations

from hypothesis import strategies as st

from fibcat.category import cyclic_group, poset_from_covers


@st.composite
def covers(draw, max_size: int = 5):
    """Random acyclic cover relations on up to ``max_size`` named points."""
    n = draw(st.integers(1, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return n, chosen


@st.composite
def posets(draw, max_size: int = 5):
    n, cov = draw(covers(max_size))
    names = [f"p{i}" for i in range(n)]
    return poset_from_covers(names, [(names[a], names[b]) for a, b in cov]), n, cov


def groups(max_order: int = 6):
    return st.integers(1, max_order).map(cyclic_group)


def small_categories():
    return st.one_of(posets().map(lambda t: t[0]), groups())
