"""Right and left adjoint splittings of a fibration."""

from __future__ import annotations

from dataclasses import dataclass

from .category import build_category
from .closure import slice_fibration, slice_pushforward
from .fibration import Cleavage, FibrationData, choose_cleavage
from .functor import FunctorData
from .indexed import GrothendieckResult, IndexedCat, grothendieck
from .search import Budget, DEFAULT_CAP, FunctorCategory, functor_category, precomposition


@dataclass
class SplitResult:
    indexed: IndexedCat
    split: GrothendieckResult
    comparison: FunctorData  # E_P: total of Sp(P) → P, or H_P: P → total of L(P)
    fibre_sizes: dict[int, tuple[int, int]]


def _slice_identity(S: FibrationData, I: int) -> int:
    B = S.base
    return S.built.o((I, 0, B.identity[I]))


def split_right(P: FibrationData, cap: int = DEFAULT_CAP) -> SplitResult:
    """``Sp(P)(I)`` = cartesian functors ``I̲ → P`` and vertical transformations;
    the counit ``E_P`` evaluates at ``id_I``."""
    B = P.base
    budget = Budget(cap, "right splitting")
    slices = [slice_fibration(B, I) for I in B.objects]
    fibres: list[FunctorCategory] = []
    for I in B.objects:
        S = slices[I]
        cands = [P.over[S.P_obj[x]] for x in S.total.objects]

        def arr_ok(f, g, S=S):
            return P.P_arr[g] == S.P_arr[f] and (not S.is_cartesian(f) or P.is_cartesian(g))

        fibres.append(functor_category(S.total, P.total, cands, arr_ok, lambda x, a: P.is_vertical(a), budget))
    reindex = [
        precomposition(fibres[B.cod[u]], fibres[B.dom[u]], slice_pushforward(B, u, slices[B.dom[u]], slices[B.cod[u]]))
        for u in B.arrows
    ]
    H = IndexedCat(B, [f.cat for f in fibres], reindex)
    G = grothendieck(H)
    gb = G.fibration.built
    T = P.total
    obj = []
    for I, x in gb.obj_keys:
        om, _ = fibres[I].derived.built.obj_keys[x]
        obj.append(om[_slice_identity(slices[I], I)])
    arr = []
    for u, tau, y in gb.arr_keys:
        J, I = B.dom[u], B.cod[u]
        _, _, comps = fibres[J].derived.built.arr_keys[tau]
        _, target_arrows = fibres[I].derived.built.obj_keys[y]
        SI = slices[I]
        u_to_id = SI.built.a(((J, 0, u), (I, 0, B.identity[I]), u, 0))
        arr.append(T.comp(target_arrows[u_to_id], comps[_slice_identity(slices[J], J)]))
    E = FunctorData(G.fibration.total, T, obj, arr)
    sizes = {I: (fibres[I].cat.n_obj, fibres[I].cat.n_arr) for I in B.objects}
    return SplitResult(H, G, E, sizes)


def split_left(P: FibrationData, cl: Cleavage | None = None) -> SplitResult:
    """``L(P)`` from a normalised cleavage: ``S(P)(I)`` has objects ``(a, X)`` with
    ``a: I → P X`` and arrows ``(b, Y) → (a, X)`` the vertical ``b*Y → a*X``.
    The unit ``H_P`` sends ``X`` to ``(id, X)``."""
    cl = cl or choose_cleavage(P)
    B, T = P.base, P.total

    def lifted(u, a, X):
        """``Cart_L(u, (a, X))``: cartesian over ``u`` with ``Cart(a, X)∘φ = Cart(a∘u, X)``."""
        return P.factor_over(cl(a, X), cl(B.comp(a, u), X), u)

    fibres, keys = [], []
    for I in B.objects:
        objs = [(a, X) for X in T.objects for a in B.hom(I, P.P_obj[X])]
        arrs = [
            (s, t, alpha)
            for s in objs
            for t in objs
            for alpha in P.verticals(cl.star(*s), cl.star(*t))
        ]
        built = build_category(
            objs,
            arrs,
            lambda k: k[0],
            lambda k: k[1],
            lambda o: (o, o, T.identity[cl.star(*o)]),
            lambda g, f: (f[0], g[1], T.comp(g[2], f[2])),
            obj_label=lambda o: f"({B.arr_labels[o[0]]},{T.obj_labels[o[1]]})",
            arr_label=lambda k: T.arr_labels[k[2]],
        )
        fibres.append(built.cat)
        keys.append(built)
    reindex = []
    for u in B.arrows:
        J, I = B.dom[u], B.cod[u]
        src, tgt = keys[I], keys[J]
        obj = [tgt.o((B.comp(a, u), X)) for a, X in src.obj_keys]
        arr = []
        for (b, Y), (a, X), alpha in src.arr_keys:
            top = lifted(u, a, X)
            gamma = P.vertical_factor(top, T.comp(alpha, lifted(u, b, Y)))
            arr.append(tgt.a(((B.comp(b, u), Y), (B.comp(a, u), X), gamma)))
        reindex.append(FunctorData(fibres[I], fibres[J], obj, arr))
    H = IndexedCat(B, fibres, reindex)
    G = grothendieck(H)
    gb = G.fibration.built
    obj = [gb.o((P.P_obj[X], keys[P.P_obj[X]].o((B.identity[P.P_obj[X]], X)))) for X in T.objects]
    arr = []
    for f in T.arrows:
        u, X, Y = P.P_arr[f], T.cod[f], T.dom[f]
        J, I = B.dom[u], B.cod[u]
        beta = P.vertical_factor(cl(u, X), f)
        fibre_arrow = keys[J].a(((B.identity[J], Y), (u, X), beta))
        arr.append(gb.a((u, fibre_arrow, keys[I].o((B.identity[I], X)))))
    unit = FunctorData(T, G.fibration.total, obj, arr)
    sizes = {I: (fibres[I].n_obj, fibres[I].n_arr) for I in B.objects}
    return SplitResult(H, G, unit, sizes)
