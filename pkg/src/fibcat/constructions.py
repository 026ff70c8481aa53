"""Standard constructions of finite categories with canonical ids.

Every construction names its objects and arrows by tuples of constituent ids
and numbers them in ascending tuple order, so outputs are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import Built, FinCat, build_category, discrete_category, terminal_category
from .errors import BadArgs
from .functor import FunctorData, constant_functor, identity_functor


@dataclass
class Derived:
    """A constructed category, its projection functors and its key maps."""

    cat: FinCat
    projections: tuple[FunctorData, ...]
    built: Built | None = None


def comma_category(F: FunctorData, G: FunctorData) -> Derived:
    """``F↓G``: objects ``(a, b, f: F a → G b)``; arrows commuting squares.

    Arrow keys are ``(source key, target key, x, y)``.
    """
    if F.target != G.target:
        raise BadArgs("comma category needs functors into the same category")
    A, B, C = F.source, G.source, F.target
    objs = [(a, b, f) for a in A.objects for b in B.objects for f in C.hom(F.ob(a), G.ob(b))]
    by_ab: dict[tuple[int, int], list] = {}
    for o in objs:
        by_ab.setdefault((o[0], o[1]), []).append(o)
    arrs = []
    for s in objs:
        for x in A.outgoing[s[0]]:
            for y in B.outgoing[s[1]]:
                for t in by_ab.get((A.cod[x], B.cod[y]), ()):
                    if C.comp(G(y), s[2]) == C.comp(t[2], F(x)):
                        arrs.append((s, t, x, y))
    built = build_category(
        objs,
        arrs,
        lambda k: k[0],
        lambda k: k[1],
        lambda o: (o, o, A.identity[o[0]], B.identity[o[1]]),
        lambda g, f: (f[0], g[1], A.comp(g[2], f[2]), B.comp(g[3], f[3])),
        obj_label=lambda o: f"({A.obj_labels[o[0]]},{B.obj_labels[o[1]]},{C.arr_labels[o[2]]})",
        arr_label=lambda k: f"({A.arr_labels[k[2]]},{B.arr_labels[k[3]]})",
    )
    K = built.cat
    p0 = FunctorData(K, A, [o[0] for o in built.obj_keys], [k[2] for k in built.arr_keys])
    p1 = FunctorData(K, B, [o[1] for o in built.obj_keys], [k[3] for k in built.arr_keys])
    return Derived(K, (p0, p1), built)


def arrow_category(C: FinCat) -> Derived:
    """``C²`` with projections ``(dom, cod)``; objects are labelled by the arrow."""
    d = comma_category(identity_functor(C), identity_functor(C))
    K = d.cat.relabel(
        [C.arr_labels[o[2]] for o in d.built.obj_keys],
        [_square_label(C, k) for k in d.built.arr_keys],
    )
    return _relabelled(d, K)


def slice_category(C: FinCat, I: int) -> Derived:
    """``C/I`` with the domain projection ``∂0``."""
    point = constant_functor(terminal_category(), C, I)
    d = comma_category(identity_functor(C), point)
    K = d.cat.relabel(
        [C.arr_labels[o[2]] for o in d.built.obj_keys],
        [C.arr_labels[k[2]] for k in d.built.arr_keys],
    )
    return _relabelled(d, K, keep=1)


def coslice_category(C: FinCat, I: int) -> Derived:
    point = constant_functor(terminal_category(), C, I)
    d = comma_category(point, identity_functor(C))
    K = d.cat.relabel(
        [C.arr_labels[o[2]] for o in d.built.obj_keys],
        [C.arr_labels[k[3]] for k in d.built.arr_keys],
    )
    d = _relabelled(d, K)
    return Derived(d.cat, (d.projections[1],), d.built)


def product_category(C: FinCat, D: FinCat) -> Derived:
    built = build_category(
        [(a, b) for a in C.objects for b in D.objects],
        [(f, g) for f in C.arrows for g in D.arrows],
        lambda k: (C.dom[k[0]], D.dom[k[1]]),
        lambda k: (C.cod[k[0]], D.cod[k[1]]),
        lambda o: (C.identity[o[0]], D.identity[o[1]]),
        lambda g, f: (C.comp(g[0], f[0]), D.comp(g[1], f[1])),
        obj_label=lambda o: f"({C.obj_labels[o[0]]},{D.obj_labels[o[1]]})",
        arr_label=lambda k: f"({C.arr_labels[k[0]]},{D.arr_labels[k[1]]})",
    )
    K = built.cat
    p0 = FunctorData(K, C, [o[0] for o in built.obj_keys], [k[0] for k in built.arr_keys])
    p1 = FunctorData(K, D, [o[1] for o in built.obj_keys], [k[1] for k in built.arr_keys])
    return Derived(K, (p0, p1), built)


def pullback_of_categories(F: FunctorData, G: FunctorData) -> Derived:
    """Strict pullback ``A ×_C B`` of ``F: A → C`` and ``G: B → C``."""
    if F.target != G.target:
        raise BadArgs("pullback needs functors into the same category")
    A, B = F.source, G.source
    by_obj: dict[int, list[int]] = {}
    for b in B.objects:
        by_obj.setdefault(G.ob(b), []).append(b)
    by_arr: dict[int, list[int]] = {}
    for g in B.arrows:
        by_arr.setdefault(G(g), []).append(g)
    objs = [(a, b) for a in A.objects for b in by_obj.get(F.ob(a), ())]
    arrs = [(f, g) for f in A.arrows for g in by_arr.get(F(f), ())]
    built = build_category(
        objs,
        arrs,
        lambda k: (A.dom[k[0]], B.dom[k[1]]),
        lambda k: (A.cod[k[0]], B.cod[k[1]]),
        lambda o: (A.identity[o[0]], B.identity[o[1]]),
        lambda g, f: (A.comp(g[0], f[0]), B.comp(g[1], f[1])),
        obj_label=lambda o: f"({A.obj_labels[o[0]]},{B.obj_labels[o[1]]})",
        arr_label=lambda k: f"({A.arr_labels[k[0]]},{B.arr_labels[k[1]]})",
    )
    K = built.cat
    p0 = FunctorData(K, A, [o[0] for o in built.obj_keys], [k[0] for k in built.arr_keys])
    p1 = FunctorData(K, B, [o[1] for o in built.obj_keys], [k[1] for k in built.arr_keys])
    return Derived(K, (p0, p1), built)


def derived_category(kind: str, *args) -> Derived:
    """Dispatch on ``kind`` in ``product|arrow|slice|coslice|comma|discrete``."""
    try:
        if kind == "product":
            return product_category(*args)
        if kind == "arrow":
            return arrow_category(*args)
        if kind == "slice":
            return slice_category(*args)
        if kind == "coslice":
            return coslice_category(*args)
        if kind == "comma":
            return comma_category(*args)
        if kind == "discrete":
            (labels,) = args
            if isinstance(labels, int):
                labels = [str(i) for i in range(labels)]
            return Derived(discrete_category(labels), ())
    except (TypeError, ValueError, IndexError) as exc:
        raise BadArgs(f"bad arguments for {kind}: {exc}") from exc
    raise BadArgs(f"unknown construction {kind!r}")


def split_idempotents(C: FinCat) -> Derived:
    """Karoubi envelope with the full and faithful inclusion of ``C``.

    Objects are idempotents ``e``; arrows ``e → e'`` are ``f`` with
    ``e'∘f∘e = f``, keyed ``(e, e', f)``.
    """
    idem = [e for e in C.arrows if C.is_idempotent(e)]
    arrs = []
    for e in idem:
        for e2 in idem:
            for f in C.hom(C.dom[e], C.dom[e2]):
                if C.c(e2, f, e) == f:
                    arrs.append((e, e2, f))
    built = build_category(
        idem,
        arrs,
        lambda k: k[0],
        lambda k: k[1],
        lambda e: (e, e, e),
        lambda g, f: (f[0], g[1], C.comp(g[2], f[2])),
        obj_label=lambda e: C.arr_labels[e],
        arr_label=lambda k: C.arr_labels[k[2]],
    )
    K = built.cat
    inc = FunctorData(
        C,
        K,
        [built.o(C.identity[a]) for a in C.objects],
        [built.a((C.identity[C.dom[f]], C.identity[C.cod[f]], f)) for f in C.arrows],
    )
    return Derived(K, (inc,), built)


def idempotent_splits(C: FinCat, e: int) -> tuple[int, int] | None:
    """A retraction/section pair ``(r, s)`` with ``r∘s = id`` and ``s∘r = e``."""
    x = C.dom[e]
    for z in C.objects:
        for r in C.hom(x, z):
            for s in C.hom(z, x):
                if C.comp(r, s) == C.identity[z] and C.comp(s, r) == e:
                    return r, s
    return None


def all_idempotents_split(C: FinCat) -> bool:
    return all(idempotent_splits(C, e) is not None for e in C.arrows if C.is_idempotent(e))


def _square_label(C: FinCat, k: tuple) -> str:
    return f"({C.arr_labels[k[2]]},{C.arr_labels[k[3]]})"


def _relabelled(d: Derived, K: FinCat, keep: int | None = None) -> Derived:
    projs = tuple(FunctorData(K, p.target, p.obj_map, p.arr_map) for p in d.projections)
    if keep is not None:
        projs = projs[:keep]
    return Derived(K, projs, Built(K, d.built.obj_keys, d.built.arr_keys, d.built.obj_index, d.built.arr_index))
