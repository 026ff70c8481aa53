"""The built-in example zoo: small categories, functors and fibrations."""

from __future__ import annotations

from functools import lru_cache
from typing import TYPE_CHECKING

from .category import FinCat, build_category, cyclic_group, discrete_category, poset_from_covers, terminal_category
from .fibration import FibrationData
from .functor import AdjunctionData, FunctorData, identity_functor
from .indexed import IndexedCat, grothendieck

if TYPE_CHECKING:
    from .textformat import Document


# ---------------------------------------------------------------- categories


@lru_cache(maxsize=None)
def T1() -> FinCat:
    return terminal_category()


@lru_cache(maxsize=None)
def ordinal2() -> FinCat:
    """``2 = {⊥ ≤ ⊤}``."""
    return poset_from_covers(["⊥", "⊤"], [("⊥", "⊤")])


@lru_cache(maxsize=None)
def chain3() -> FinCat:
    return poset_from_covers(["0", "1", "2"], [("0", "1"), ("1", "2")])


@lru_cache(maxsize=None)
def D2() -> FinCat:
    """The four-element Boolean lattice ``⊥ < a, b < ⊤``."""
    return poset_from_covers(["⊥", "a", "b", "⊤"], [("⊥", "a"), ("⊥", "b"), ("a", "⊤"), ("b", "⊤")])


@lru_cache(maxsize=None)
def N5() -> FinCat:
    """The pentagon ``⊥ < x < z < ⊤`` and ``⊥ < y < ⊤``."""
    return poset_from_covers(
        ["⊥", "x", "z", "y", "⊤"], [("⊥", "x"), ("x", "z"), ("z", "⊤"), ("⊥", "y"), ("y", "⊤")]
    )


@lru_cache(maxsize=None)
def M3() -> FinCat:
    """The diamond with three atoms."""
    atoms = ["a", "b", "c"]
    return poset_from_covers(["⊥", *atoms, "⊤"], [("⊥", t) for t in atoms] + [(t, "⊤") for t in atoms])


@lru_cache(maxsize=None)
def D2_times_2() -> FinCat:
    """``D2 × 2`` as a lattice of eight elements."""
    names = [f"{p}{q}" for p in ["⊥", "a", "b", "⊤"] for q in ["0", "1"]]
    leq_d2 = {("⊥", "a"), ("⊥", "b"), ("a", "⊤"), ("b", "⊤")}
    covers = []
    for p in ["⊥", "a", "b", "⊤"]:
        covers.append((f"{p}0", f"{p}1"))
        for lo, hi in leq_d2:
            if lo == p:
                for q in "01":
                    covers.append((f"{lo}{q}", f"{hi}{q}"))
    return poset_from_covers(names, covers)


@lru_cache(maxsize=None)
def walking_cospan() -> FinCat:
    """``• → • ← •``: a category without pullbacks of its cospan."""
    return poset_from_covers(["l", "c", "r"], [("l", "c"), ("r", "c")])


@lru_cache(maxsize=None)
def discrete2() -> FinCat:
    return discrete_category(["p", "q"])


@lru_cache(maxsize=None)
def Z2() -> FinCat:
    return cyclic_group(2)


@lru_cache(maxsize=None)
def Z4() -> FinCat:
    return cyclic_group(4)


LATTICES = {"2": ordinal2, "chain3": chain3, "D2": D2, "N5": N5, "M3": M3}
DISTRIBUTIVE = {"2": True, "chain3": True, "D2": True, "N5": False, "M3": False}


def vect_f2() -> FinCat:
    """Linear maps between ``F2^0``, ``F2^1`` and ``F2^2`` (matrices over the two-element field)."""
    return _vect_f2()


@lru_cache(maxsize=None)
def _vect_f2() -> FinCat:
    dims = [0, 1, 2]

    def matrices(m, n):
        size = m * n
        return [tuple((k >> i) & 1 for i in range(size)) for k in range(2**size)]

    arrs = [(m, n, mat) for m in dims for n in dims for mat in matrices(m, n)]

    def compose(g, f):
        # an arrow m → n is an n×m matrix stored row-major
        m, n, F = f
        _, k, G = g
        out = []
        for r in range(k):
            for c in range(m):
                out.append(sum(G[r * n + j] * F[j * m + c] for j in range(n)) % 2)
        return (m, k, tuple(out))

    def identity(n):
        return (n, n, tuple(int(r == c) for r in range(n) for c in range(n)))

    def label(a):
        m, n, mat = a
        if m == 0 or n == 0:
            return f"0:{m}→{n}"
        rows = ["".join(str(mat[r * m + c]) for c in range(m)) for r in range(n)]
        return f"[{'|'.join(rows)}]"

    return build_category(
        dims,
        arrs,
        lambda a: a[0],
        lambda a: a[1],
        identity,
        compose,
        obj_label=lambda d: f"F2^{d}",
        arr_label=label,
    ).cat


# ---------------------------------------------------------------- functors and fibrations


def poset_map(source: FinCat, target: FinCat, obj_map: list[int]) -> FunctorData:
    """The functor between thin categories induced by a monotone object map."""
    arr = [target.hom(obj_map[source.dom[f]], obj_map[source.cod[f]])[0] for f in source.arrows]
    return FunctorData(source, target, obj_map, arr)


def pmod() -> FibrationData:
    """``Z4 → Z2``, reduction mod 2: a fibration with no split cleavage."""
    return FibrationData(FunctorData(Z4(), Z2(), [0], [i % 2 for i in range(4)]), "pmod")


def hwarn_indexed() -> IndexedCat:
    """Over ``2``: the fibre ``Z2`` over ``⊥``, ``T1`` over ``⊤``, the unique reindexing."""
    B = ordinal2()
    fib0, fib1 = Z2(), T1()
    u = B.hom(0, 1)[0]
    reindex = []
    for f in B.arrows:
        if f == u:
            reindex.append(FunctorData(fib1, fib0, [0], [0]))
        elif B.dom[f] == 0:
            reindex.append(FunctorData(fib0, fib0, [0], [0, 1]))
        else:
            reindex.append(FunctorData(fib1, fib1, [0], [0]))
    return IndexedCat(B, [fib0, fib1], reindex)


def hwarn() -> FibrationData:
    P = grothendieck(hwarn_indexed()).fibration
    P.name = "fib(Hwarn)"
    return P


def presheaf_on_2() -> IndexedCat:
    """A discrete indexed category on ``2``: sets ``{p, q}`` over ``⊥`` and ``{s}`` over ``⊤``."""
    B = ordinal2()
    over0, over1 = discrete_category(["p", "q"]), discrete_category(["s"])
    u = B.hom(0, 1)[0]
    reindex = []
    for f in B.arrows:
        if f == u:
            reindex.append(FunctorData(over1, over0, [1], [1]))
        elif B.dom[f] == 0:
            reindex.append(FunctorData(over0, over0, [0, 1], [0, 1]))
        else:
            reindex.append(FunctorData(over1, over1, [0], [0]))
    return IndexedCat(B, [over0, over1], reindex)


def identity_fibration(B: FinCat) -> FibrationData:
    return FibrationData(identity_functor(B), "identity")


def _finset_op(sizes: list[int]) -> FinCat:
    """The opposite of finite sets of the given sizes: arrows ``m → n`` are maps ``n → m``."""
    maps = [
        (m, n, tuple(f))
        for m in sizes
        for n in sizes
        for f in _all_maps(n, m)
    ]

    def compose(g, f):
        # in the opposite, g∘f is the map f_set∘g_set
        m, _, fm = f
        _, k, gm = g
        return (m, k, tuple(fm[gm[i]] for i in range(k)))

    return build_category(
        sizes,
        maps,
        lambda a: a[0],
        lambda a: a[1],
        lambda n: (n, n, tuple(range(n))),
        compose,
        obj_label=lambda n: f"#{n}",
        arr_label=lambda a: f"{a[0]}←{a[1]}:{''.join(map(str, a[2]))}",
    ).cat


def _all_maps(n: int, m: int) -> list[list[int]]:
    """Every function from ``{0..n-1}`` to ``{0..m-1}`` as a value list."""
    if n == 0:
        return [[]]
    return [[v] + rest for v in range(m) for rest in _all_maps(n - 1, m)]


def nondisjoint_indexed() -> IndexedCat:
    """Over ``2``: finite sets of size 0, 1, 2 reversed over ``⊥``, one object over ``⊤``,
    reindexing along ``⊥ ≤ ⊤`` constant at the terminal object ``#0``."""
    B = ordinal2()
    fib0, fib1 = _finset_op([0, 1, 2]), T1()
    u = B.hom(0, 1)[0]
    reindex = []
    for f in B.arrows:
        if f == u:
            reindex.append(FunctorData(fib1, fib0, [0], [fib0.identity[0]]))
        elif B.dom[f] == 0:
            reindex.append(identity_functor(fib0))
        else:
            reindex.append(identity_functor(fib1))
    return IndexedCat(B, [fib0, fib1], reindex)


def nondisjoint_bifibration() -> FibrationData:
    """A bifibration whose cocartesian arrows are not disjoint: every arrow over
    ``⊥ ≤ ⊤`` is cocartesian, so non-invertible verticals followed by one stay cocartesian."""
    P = grothendieck(nondisjoint_indexed()).fibration
    P.name = "nondisjoint"
    P.provenance = {"construction": "synthetic", "name": "nondisjoint"}
    return P


def chain_bifibration() -> FibrationData:
    """The chain ``A < A' < B`` over ``2`` with ``A, A'`` over ``⊥``: a bifibration with
    fibred finite limits whose cocartesian arrows fail every cancellation condition."""
    X = poset_from_covers(["A", "A'", "B"], [("A", "A'"), ("A'", "B")])
    return FibrationData(
        poset_map(X, ordinal2(), [0, 0, 1]),
        "chain",
        provenance={"construction": "synthetic", "name": "chain"},
    )


SYNTHETIC = {"nondisjoint": nondisjoint_bifibration, "chain": chain_bifibration}


# ---------------------------------------------------------------- lattice functors and adjunctions


def lattice_functors() -> dict[str, FunctorData]:
    """Monotone maps between corpus lattices, keyed by a descriptive name."""
    two, d2 = ordinal2(), D2()
    return {
        "id_2": identity_functor(two),
        "id_D2": identity_functor(d2),
        "id_N5": identity_functor(N5()),
        "incl_2_D2": poset_map(two, d2, [0, 3]),
        "proj_D2_2": poset_map(d2, two, [0, 1, 0, 1]),
        "top_D2_2": poset_map(d2, two, [0, 1, 1, 1]),
        "bottom_2_D2": poset_map(two, d2, [0, 1]),
        "incl_3_D2": poset_map(chain3(), d2, [0, 1, 3]),
        "graph_D2_D2x2": poset_map(d2, D2_times_2(), [1, 3, 5, 7]),
        "incl_2_D2x2": poset_map(two, D2_times_2(), [1, 7]),
    }


LEX_FUNCTORS = ("id_2", "id_D2", "id_N5", "incl_2_D2", "proj_D2_2", "incl_3_D2", "graph_D2_D2x2", "incl_2_D2x2")


def lattice_adjunctions() -> dict[str, AdjunctionData]:
    """Inverse images of geometric morphisms between corpus lattices, with their right adjoints."""
    from .search import find_right_adjoint

    fs = lattice_functors()
    out = {}
    for name in ("id_2", "id_D2", "incl_2_D2", "proj_D2_2"):
        out[name] = find_right_adjoint(fs[name])
    return out


# ---------------------------------------------------------------- documents

CATEGORY_FILE = "categories.fcat"


def corpus() -> dict[str, "Document"]:
    """The corpus as text documents keyed by file name.

    ``categories.fcat`` holds the named small categories; the other documents
    include it and refer to its blocks by name.
    """
    from .change_base import distributor_of_functor, terminal_presheaf
    from .closure import discrete_internal, fundamental_fibration, glueing
    from .textformat import Block, Document

    cats = Document()
    for name, C in [
        ("T1", T1()),
        ("2", ordinal2()),
        ("chain3", chain3()),
        ("D2", D2()),
        ("N5", N5()),
        ("M3", M3()),
        ("Z2", Z2()),
        ("Z4", Z4()),
        ("discrete2", discrete2()),
        ("D2x2", D2_times_2()),
    ]:
        cats.category(name, C)

    def with_categories() -> Document:
        doc = Document(includes=[CATEGORY_FILE])
        doc.scope.update(cats.blocks)
        return doc

    out = {CATEGORY_FILE: cats}

    doc = with_categories()
    doc.fibration("pmod", pmod(), "Z4", "Z2")
    out["pmod.ffib"] = doc

    doc = with_categories()
    doc.indexed("Hwarn", hwarn_indexed(), "2")
    out["hwarn.fidx"] = doc

    doc = with_categories()
    doc.fibration("fib(Hwarn)", hwarn(), base="2")
    out["hwarn.ffib"] = doc

    doc = with_categories()
    doc.indexed("presheaf_on_2", presheaf_on_2(), "2")
    out["presheaf_on_2.fidx"] = doc

    for lattice in ("2", "D2", "N5"):
        doc = with_categories()
        doc.fibration(f"P_{lattice}", fundamental_fibration(LATTICES[lattice]()), base=lattice)
        out[f"P_{lattice}.ffib"] = doc

    adjunctions = lattice_adjunctions()
    doc = with_categories()
    for name, adj in adjunctions.items():
        doc.adjunction(name, adj, cats.name_of(adj.left.source), cats.name_of(adj.left.target))
    out["adjunctions.fcat"] = doc

    for name, adj in adjunctions.items():
        doc = with_categories()
        F = adj.left
        src, tgt = cats.name_of(F.source), cats.name_of(F.target)
        doc.functor(name, F, src, tgt)
        doc.fibration(f"gl({name})", glueing(F), base=src)
        out[f"gl_{name}.ffib"] = doc

    for name, make in SYNTHETIC.items():
        doc = with_categories()
        doc.fibration(name, make(), base="2")
        out[f"{name}.ffib"] = doc

    doc = with_categories()
    doc.add(Block("distributor", "terminal_presheaf_discrete2", terminal_presheaf(discrete2()), {"source": "T1", "target": "discrete2"}))
    incl = lattice_functors()["incl_2_D2"]
    doc.add(Block("distributor", "phi_incl_2_D2", distributor_of_functor(incl), {"source": "2", "target": "D2"}))
    doc.add(Block("internal", "discrete_a", discrete_internal(D2(), 1), {"ambient": "D2"}))
    out["distributors.fcat"] = doc
    return out
