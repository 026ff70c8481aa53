"""Finite categories stored as explicit tables.

Objects and arrows are dense integer ids.  Composition is a square integer
table ``table[g, f] = g∘f`` with ``-1`` wherever ``dom g != cod f``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import (
    AssociativityViolation,
    CategoryValidationError,
    CompositeTypeMismatch,
    DanglingId,
    MissingComposite,
    NonComposablePairInTable,
    UnitViolation,
    Violation,
)

UNDEFINED = -1


class Absent:
    """A negative search result that remembers what was checked."""

    __slots__ = ("reason", "checked")

    def __init__(self, reason: str = "", checked: Any = None):
        self.reason = reason
        self.checked = checked

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"Absent({self.reason!r})"


class FinCat:
    """A validated finite category.

    Construct through :func:`validate_category` or :func:`build_category`;
    the constructor itself trusts its input.
    """

    def __init__(
        self,
        dom: Sequence[int],
        cod: Sequence[int],
        identity: Sequence[int],
        table: Any,
        obj_labels: Sequence[str] | None = None,
        arr_labels: Sequence[str] | None = None,
    ):
        self.dom: tuple[int, ...] = tuple(int(x) for x in dom)
        self.cod: tuple[int, ...] = tuple(int(x) for x in cod)
        self.identity: tuple[int, ...] = tuple(int(x) for x in identity)
        n = len(self.dom)
        arr = np.asarray(table, dtype=np.int64).reshape(n, n) if n else np.zeros((0, 0), np.int64)
        arr.setflags(write=False)
        self.table = arr
        self._c: list[list[int]] = arr.tolist()
        self.obj_labels: tuple[str, ...] = (
            tuple(obj_labels) if obj_labels is not None else tuple(str(i) for i in range(len(self.identity)))
        )
        self.arr_labels: tuple[str, ...] = (
            tuple(arr_labels) if arr_labels is not None else tuple(str(i) for i in range(n))
        )
        outgoing: list[list[int]] = [[] for _ in self.identity]
        incoming: list[list[int]] = [[] for _ in self.identity]
        hom: dict[tuple[int, int], list[int]] = {}
        for f in range(n):
            outgoing[self.dom[f]].append(f)
            incoming[self.cod[f]].append(f)
            hom.setdefault((self.dom[f], self.cod[f]), []).append(f)
        self.outgoing = tuple(tuple(x) for x in outgoing)
        self.incoming = tuple(tuple(x) for x in incoming)
        self._hom = {k: tuple(v) for k, v in hom.items()}

    # ------------------------------------------------------------ basics

    @property
    def n_obj(self) -> int:
        return len(self.identity)

    @property
    def n_arr(self) -> int:
        return len(self.dom)

    @property
    def objects(self) -> range:
        return range(self.n_obj)

    @property
    def arrows(self) -> range:
        return range(self.n_arr)

    def hom(self, a: int, b: int) -> tuple[int, ...]:
        return self._hom.get((a, b), ())

    def comp(self, g: int, f: int) -> int:
        """``g∘f``; raises if the pair is not composable."""
        h = self._c[g][f]
        if h < 0:
            raise ValueError(f"arrows {g} and {f} are not composable")
        return h

    def c(self, *arrows: int) -> int:
        """Compose right to left: ``c(h, g, f) = h∘g∘f``."""
        out = arrows[-1]
        for g in reversed(arrows[:-1]):
            out = self._c[g][out]
            if out < 0:
                raise ValueError(f"arrows {arrows} are not composable")
        return out

    def try_comp(self, g: int, f: int) -> int:
        return self._c[g][f]

    def is_identity(self, f: int) -> bool:
        return self.identity[self.dom[f]] == f

    def obj(self, label: str) -> int:
        return self._obj_index[label]

    def arr(self, label: str) -> int:
        return self._arr_index[label]

    @cached_property
    def _obj_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.obj_labels)}

    @cached_property
    def _arr_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.arr_labels)}

    # ------------------------------------------------------------ arrow kinds

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        """Inverse of every arrow, or -1 when it is not an isomorphism."""
        inv = []
        for f in self.arrows:
            a, b = self.dom[f], self.cod[f]
            found = UNDEFINED
            for g in self.hom(b, a):
                if self._c[g][f] == self.identity[a] and self._c[f][g] == self.identity[b]:
                    found = g
                    break
            inv.append(found)
        return tuple(inv)

    def is_iso(self, f: int) -> bool:
        return self.inverses[f] >= 0

    def inverse(self, f: int) -> int:
        g = self.inverses[f]
        if g < 0:
            raise ValueError(f"arrow {f} is not an isomorphism")
        return g

    def is_mono(self, f: int, among: Callable[[int], bool] | None = None) -> bool:
        """Left cancellable; ``among`` restricts the test arrows."""
        a = self.dom[f]
        for z in self.objects:
            seen: dict[int, int] = {}
            for x in self.hom(z, a):
                if among is not None and not among(x):
                    continue
                y = self._c[f][x]
                if y in seen:
                    return False
                seen[y] = x
        return True

    def is_epi(self, f: int, among: Callable[[int], bool] | None = None) -> bool:
        b = self.cod[f]
        for z in self.objects:
            seen: dict[int, int] = {}
            for x in self.hom(b, z):
                if among is not None and not among(x):
                    continue
                y = self._c[x][f]
                if y in seen:
                    return False
                seen[y] = x
        return True

    def is_idempotent(self, e: int) -> bool:
        return self.dom[e] == self.cod[e] and self._c[e][e] == e

    def isomorphic_objects(self, a: int, b: int) -> int:
        """An isomorphism ``a → b`` (least id) or -1."""
        for f in self.hom(a, b):
            if self.inverses[f] >= 0:
                return f
        return UNDEFINED

    @cached_property
    def is_thin(self) -> bool:
        return all(len(v) <= 1 for v in self._hom.values())

    @cached_property
    def is_discrete(self) -> bool:
        return all(self.is_identity(f) for f in self.arrows)

    @cached_property
    def is_groupoid(self) -> bool:
        return all(x >= 0 for x in self.inverses)

    # ------------------------------------------------------------ identity

    def structure(self) -> tuple:
        return (self.dom, self.cod, self.identity, self.table.tobytes())

    def __eq__(self, other: object) -> bool:
        """Bit-exact equality of the tables; labels are ignored."""
        if not isinstance(other, FinCat):
            return NotImplemented
        return (
            self.dom == other.dom
            and self.cod == other.cod
            and self.identity == other.identity
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        return hash(self.structure())

    def same_labels(self, other: FinCat) -> bool:
        return self.obj_labels == other.obj_labels and self.arr_labels == other.arr_labels

    def __repr__(self) -> str:
        return f"FinCat(objects={self.n_obj}, arrows={self.n_arr})"

    def describe_arrow(self, f: int) -> str:
        return f"{self.arr_labels[f]}: {self.obj_labels[self.dom[f]]}→{self.obj_labels[self.cod[f]]}"

    def relabel(self, obj_labels: Sequence[str], arr_labels: Sequence[str]) -> FinCat:
        return FinCat(self.dom, self.cod, self.identity, self.table, obj_labels, arr_labels)


# ---------------------------------------------------------------- raw input


@dataclass
class RawCategory:
    """Unchecked category data, as read from text or typed by hand.

    Ids may be any sortable hashable values; validation renumbers them densely
    in ascending order.
    """

    objects: list[Hashable]
    arrows: list[tuple[Hashable, Hashable, Hashable]]
    identity: dict[Hashable, Hashable]
    comp: dict[tuple[Hashable, Hashable], Hashable]
    obj_labels: dict[Hashable, str] = field(default_factory=dict)
    arr_labels: dict[Hashable, str] = field(default_factory=dict)


def law_violations(C: FinCat) -> list[Violation]:
    """All composition-table, unit and associativity failures of ``C``."""
    out: list[Violation] = []
    n = C.n_arr
    if n == 0:
        return out
    dom = np.asarray(C.dom)
    cod = np.asarray(C.cod)
    T = C.table
    composable = dom[:, None] == cod[None, :]
    defined = T >= 0
    for g, f in zip(*np.nonzero(defined & ~composable)):
        out.append(NonComposablePairInTable(int(g), int(f)))
    for g, f in zip(*np.nonzero(composable & ~defined)):
        out.append(MissingComposite(int(g), int(f)))
    if np.any(T >= n):
        for g, f in zip(*np.nonzero(T >= n)):
            out.append(DanglingId("comp", int(T[g, f])))
        return out
    ok = composable & defined
    safe = np.where(ok, T, 0)
    bad_type = ok & ((dom[safe] != dom[None, :]) | (cod[safe] != cod[:, None]))
    for g, f in zip(*np.nonzero(bad_type)):
        out.append(CompositeTypeMismatch(int(g), int(f), int(T[g, f])))
    ident = np.asarray(C.identity)
    for f in range(n):
        if T[ident[cod[f]], f] != f or T[f, ident[dom[f]]] != f:
            out.append(UnitViolation(f))
    for o, i in enumerate(C.identity):
        if dom[i] != o or cod[i] != o:
            out.append(UnitViolation(int(i)))
    if out:
        return out
    # associativity, vectorised one outer arrow at a time
    Tp = np.full((n + 1, n + 1), -1, dtype=np.int64)
    Tp[:n, :n] = T
    into = [np.nonzero(cod == o)[0] for o in range(C.n_obj)]
    for h in range(n):
        G = into[dom[h]]  # every g with h∘g defined
        hg = Tp[h, G]
        left = Tp[hg]  # (h∘g)∘f, one row per g
        right = Tp[h, T[G]]  # h∘(g∘f)
        bad = (T[G] >= 0) & (left[:, :n] != right)
        for i, f in zip(*np.nonzero(bad)):
            out.append(AssociativityViolation(h, int(G[i]), int(f)))
    return out


def validate_category(raw: RawCategory | FinCat) -> FinCat:
    """Canonicalise and check a category, raising with every violation."""
    if isinstance(raw, FinCat):
        problems = law_violations(raw)
        if problems:
            raise CategoryValidationError(problems)
        return raw
    problems: list[Violation] = []
    objs = sorted(set(raw.objects), key=_sort_key)
    if len(objs) != len(raw.objects):
        problems.append(DanglingId("objects", "duplicate object id"))
    oidx = {o: i for i, o in enumerate(objs)}
    arr_ids = [a for a, _, _ in raw.arrows]
    arrs = sorted(set(arr_ids), key=_sort_key)
    if len(arrs) != len(arr_ids):
        problems.append(DanglingId("arrows", "duplicate arrow id"))
    aidx = {a: i for i, a in enumerate(arrs)}
    n = len(arrs)
    dom = [0] * n
    cod = [0] * n
    for a, d, c in raw.arrows:
        for where, o in (("dom", d), ("cod", c)):
            if o not in oidx:
                problems.append(DanglingId(f"{where} of arrow {a!r}", o))
        dom[aidx[a]] = oidx.get(d, 0)
        cod[aidx[a]] = oidx.get(c, 0)
    identity = [0] * len(objs)
    for o in objs:
        if o not in raw.identity:
            problems.append(DanglingId("identity", o))
            continue
        i = raw.identity[o]
        if i not in aidx:
            problems.append(DanglingId(f"identity of {o!r}", i))
            continue
        identity[oidx[o]] = aidx[i]
    for o in raw.identity:
        if o not in oidx:
            problems.append(DanglingId("identity", o))
    table = np.full((n, n), UNDEFINED, dtype=np.int64)
    for (g, f), h in raw.comp.items():
        missing = [x for x in (g, f, h) if x not in aidx]
        if missing:
            problems.append(DanglingId(f"comp entry ({g!r},{f!r})", missing[0]))
            continue
        table[aidx[g], aidx[f]] = aidx[h]
    if problems:
        raise CategoryValidationError(problems)
    C = FinCat(
        dom,
        cod,
        identity,
        table,
        [raw.obj_labels.get(o, str(o)) for o in objs],
        [raw.arr_labels.get(a, str(a)) for a in arrs],
    )
    problems = law_violations(C)
    if problems:
        # report in the caller's ids
        raise CategoryValidationError([_rename(v, arrs) for v in problems])
    return C


def _sort_key(x: Hashable) -> tuple:
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


def _rename(v: Violation, arrs: list[Hashable]) -> Violation:
    mapping = {
        AssociativityViolation: ("h", "g", "f"),
        UnitViolation: ("f",),
        NonComposablePairInTable: ("g", "f"),
        MissingComposite: ("g", "f"),
        CompositeTypeMismatch: ("g", "f", "result"),
    }
    names = mapping.get(type(v))
    if names is None:
        return v
    vals = {k: arrs[getattr(v, k)] for k in names}
    return type(v)(**vals)


# ---------------------------------------------------------------- building


@dataclass
class Built:
    """A category built from sortable keys, with the key ↔ id maps."""

    cat: FinCat
    obj_keys: list
    arr_keys: list
    obj_index: dict
    arr_index: dict

    def o(self, key: Hashable) -> int:
        return self.obj_index[key]

    def a(self, key: Hashable) -> int:
        return self.arr_index[key]


def build_category(
    obj_keys: Iterable[Hashable],
    arr_keys: Iterable[Hashable],
    dom_of: Callable[[Any], Hashable],
    cod_of: Callable[[Any], Hashable],
    identity_of: Callable[[Any], Hashable],
    compose: Callable[[Any, Any], Hashable],
    obj_label: Callable[[Any], str] | None = None,
    arr_label: Callable[[Any], str] | None = None,
) -> Built:
    """Assign ids in ascending key order and tabulate composition.

    ``compose(g, f)`` receives keys with ``dom_of(g) == cod_of(f)``.
    """
    objs = sorted(set(obj_keys))
    arrs = sorted(set(arr_keys))
    oidx = {k: i for i, k in enumerate(objs)}
    aidx = {k: i for i, k in enumerate(arrs)}
    dom = [oidx[dom_of(a)] for a in arrs]
    cod = [oidx[cod_of(a)] for a in arrs]
    identity = [aidx[identity_of(o)] for o in objs]
    n = len(arrs)
    table = np.full((n, n), UNDEFINED, dtype=np.int64)
    outgoing: list[list[int]] = [[] for _ in objs]
    for i in range(n):
        outgoing[dom[i]].append(i)
    for fi, f in enumerate(arrs):
        for gi in outgoing[cod[fi]]:
            table[gi, fi] = aidx[compose(arrs[gi], f)]
    C = FinCat(
        dom,
        cod,
        identity,
        table,
        [obj_label(k) for k in objs] if obj_label else [_key_label(k) for k in objs],
        [arr_label(k) for k in arrs] if arr_label else [_key_label(k) for k in arrs],
    )
    return Built(C, objs, arrs, oidx, aidx)


def _key_label(k: Any) -> str:
    if isinstance(k, tuple):
        return "(" + ",".join(_key_label(x) for x in k) + ")"
    return str(k)


# ---------------------------------------------------------------- small makers


def poset_category(elements: Sequence[str], leq: Callable[[int, int], bool]) -> FinCat:
    """The thin category of a finite preorder on ``range(len(elements))``."""
    n = len(elements)
    pairs = [(a, b) for a in range(n) for b in range(n) if leq(a, b)]
    names = list(elements)
    return build_category(
        range(n),
        pairs,
        lambda p: p[0],
        lambda p: p[1],
        lambda o: (o, o),
        lambda g, f: (f[0], g[1]),
        obj_label=lambda o: names[o],
        arr_label=lambda p: names[p[0]] if p[0] == p[1] else f"{names[p[0]]}≤{names[p[1]]}",
    ).cat


def poset_from_covers(elements: Sequence[str], covers: Iterable[tuple[str, str]]) -> FinCat:
    """Preorder generated by the given ``(lower, upper)`` pairs."""
    n = len(elements)
    idx = {e: i for i, e in enumerate(elements)}
    up = np.eye(n, dtype=bool)
    for a, b in covers:
        up[idx[a], idx[b]] = True
    for k in range(n):
        up |= up[:, [k]] & up[[k], :]
    return poset_category(elements, lambda a, b: bool(up[a, b]))


def monoid_category(elements: Sequence[str], mult: Callable[[int, int], int], unit: int = 0) -> FinCat:
    """One-object category; ``mult(g, f)`` is the composite ``g∘f``."""
    n = len(elements)
    table = np.array([[mult(g, f) for f in range(n)] for g in range(n)], dtype=np.int64)
    return FinCat([0] * n, [0] * n, [unit], table, ["*"], list(elements))


def cyclic_group(n: int) -> FinCat:
    return monoid_category([str(i) for i in range(n)], lambda g, f: (g + f) % n)


def discrete_category(labels: Sequence[str]) -> FinCat:
    n = len(labels)
    table = np.full((n, n), UNDEFINED, dtype=np.int64)
    for i in range(n):
        table[i, i] = i
    return FinCat(range(n), range(n), range(n), table, list(labels), list(labels))


def empty_category() -> FinCat:
    return FinCat([], [], [], np.zeros((0, 0), np.int64), [], [])


def terminal_category() -> FinCat:
    return discrete_category(["*"])


def opposite_category(C: FinCat) -> FinCat:
    """Swap domains and codomains and transpose composition."""
    return FinCat(C.cod, C.dom, C.identity, C.table.T.copy(), C.obj_labels, C.arr_labels)
