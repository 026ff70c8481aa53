"""Adjoints to change of base, change of base along distributors, and the
preservation properties of change of base."""

from __future__ import annotations

from dataclasses import dataclass

from .category import FinCat, build_category, terminal_category
from .closure import (
    arrow_object,
    change_of_base,
    fam_fibration,
    fundamental_fibration,
    glueing,
    slice_fibration,
    slice_pushforward,
    square_arrow,
)
from .constructions import comma_category, split_idempotents
from .errors import NonTerminating, SearchCapExceeded
from .fibration import FibrationData, find_fibred_equivalence
from .fibred_limits import fibrewise_terminals, terminal_functor
from .functor import FunctorData, compose_functors, constant_functor, functor_violations
from .indexed import IndexedCat, grothendieck
from .limits import find_limit, is_pullback_square, terminal_object
from .localize import DEFAULT_ZIGZAG_CAP, Localization, induced_functor, localize
from .report import Crosscheck, Verdict
from .search import DEFAULT_CAP, Budget, find_right_adjoint, functor_category, precomposition
from .sums import has_internal_sums

# ---------------------------------------------------------------- distributors


@dataclass
class DistributorData:
    """``φ: A ⇸ B``, a functor ``B^op × A → Set`` with finite values.

    ``sizes[(b, a)]`` is ``|φ(b, a)|``; elements are ``0..size-1``.
    ``restrict[(v, a)]`` maps ``φ(b, a) → φ(b', a)`` for ``v: b' → b`` in ``B``;
    ``extend[(u, b)]`` maps ``φ(b, a) → φ(b, a')`` for ``u: a → a'`` in ``A``.
    """

    source: FinCat
    target: FinCat
    sizes: dict[tuple[int, int], int]
    restrict: dict[tuple[int, int], tuple[int, ...]]
    extend: dict[tuple[int, int], tuple[int, ...]]

    def violations(self) -> list[tuple]:
        A, B = self.source, self.target
        out = []
        for a in A.objects:
            for b in B.objects:
                n = self.sizes[(b, a)]
                if self.restrict[(B.identity[b], a)] != tuple(range(n)):
                    out.append(("restrict identity", b, a))
                if self.extend[(A.identity[a], b)] != tuple(range(n)):
                    out.append(("extend identity", b, a))
        for a in A.objects:
            for v in B.arrows:
                for v2 in B.incoming[B.dom[v]]:
                    lhs = self.restrict[(B.comp(v, v2), a)]
                    first = self.restrict[(v, a)]
                    if lhs != tuple(self.restrict[(v2, a)][x] for x in first):
                        out.append(("restrict composition", v, v2, a))
        for b in B.objects:
            for u in A.arrows:
                for u2 in A.outgoing[A.cod[u]]:
                    lhs = self.extend[(A.comp(u2, u), b)]
                    first = self.extend[(u, b)]
                    if lhs != tuple(self.extend[(u2, b)][x] for x in first):
                        out.append(("extend composition", u2, u, b))
        for u in A.arrows:
            for v in B.arrows:
                b2, b = B.dom[v], B.cod[v]
                a, a2 = A.dom[u], A.cod[u]
                one = [self.extend[(u, b2)][self.restrict[(v, a)][x]] for x in range(self.sizes[(b, a)])]
                two = [self.restrict[(v, a2)][self.extend[(u, b)][x]] for x in range(self.sizes[(b, a)])]
                if one != two:
                    out.append(("interchange", u, v))
        return out

    def elements(self, a: int) -> FibrationData:
        """The discrete fibration of elements of ``φ(-, a)`` over ``B``."""
        B = self.target
        objs = [(b, x) for b in B.objects for x in range(self.sizes[(b, a)])]
        arrs = [(v, x) for v in B.arrows for x in range(self.sizes[(B.cod[v], a)])]
        built = build_category(
            objs,
            arrs,
            lambda k: (B.dom[k[0]], self.restrict[(k[0], a)][k[1]]),
            lambda k: (B.cod[k[0]], k[1]),
            lambda o: (B.identity[o[0]], o[1]),
            lambda g, f: (B.comp(g[0], f[0]), g[1]),
            obj_label=lambda o: f"{B.obj_labels[o[0]]}:{o[1]}",
            arr_label=lambda k: f"{B.arr_labels[k[0]]}:{k[1]}",
        )
        proj = FunctorData(built.cat, B, [o[0] for o in built.obj_keys], [k[0] for k in built.arr_keys])
        return FibrationData(proj, "elements", built=built)

    def element_map(self, u: int, source: FibrationData, target: FibrationData) -> FunctorData:
        """``el φ(-, a) → el φ(-, a')`` induced by ``u: a → a'``."""
        sb, tb = source.built, target.built
        B = self.target
        obj = [tb.o((b, self.extend[(u, b)][x])) for b, x in sb.obj_keys]
        arr = [tb.a((v, self.extend[(u, B.cod[v])][x])) for v, x in sb.arr_keys]
        return FunctorData(source.total, target.total, obj, arr)


def _distributor(A: FinCat, B: FinCat, sets, restrict_fn, extend_fn) -> DistributorData:
    """Tabulate a distributor from element lists and action functions on elements."""
    sizes, restrict, extend = {}, {}, {}
    for b in B.objects:
        for a in A.objects:
            sizes[(b, a)] = len(sets(b, a))
    for a in A.objects:
        for v in B.arrows:
            src, tgt = sets(B.cod[v], a), sets(B.dom[v], a)
            restrict[(v, a)] = tuple(tgt.index(restrict_fn(v, x)) for x in src)
    for b in B.objects:
        for u in A.arrows:
            src, tgt = sets(b, A.dom[u]), sets(b, A.cod[u])
            extend[(u, b)] = tuple(tgt.index(extend_fn(u, x)) for x in src)
    return DistributorData(A, B, sizes, restrict, extend)


def distributor_of_functor(F: FunctorData) -> DistributorData:
    """``φ_F: A ⇸ B`` with ``φ_F(b, a) = B(b, F a)`` for ``F: A → B``."""
    A, B = F.source, F.target
    return _distributor(
        A,
        B,
        lambda b, a: B.hom(b, F.ob(a)),
        lambda v, x: B.comp(x, v),
        lambda u, x: B.comp(F(u), x),
    )


def distributor_cofunctor(F: FunctorData) -> DistributorData:
    """``φ^F: B ⇸ A`` with ``φ^F(a, b) = B(F a, b)`` for ``F: A → B``."""
    A, B = F.source, F.target
    return _distributor(
        B,
        A,
        lambda a, b: B.hom(F.ob(a), b),
        lambda v, x: B.comp(x, F(v)),
        lambda u, x: B.comp(u, x),
    )


def terminal_presheaf(B: FinCat) -> DistributorData:
    """``T1 ⇸ B`` selecting the terminal presheaf on ``B``."""
    return _distributor(terminal_category(), B, lambda b, a: [0], lambda v, x: 0, lambda u, x: 0)


# ---------------------------------------------------------------- cartesian section fibrations


def _sections_fibration(
    base: FinCat,
    probes: list[FibrationData],
    maps: list[FunctorData],
    P: FibrationData,
    budget: Budget,
    name: str,
) -> tuple[FibrationData, IndexedCat]:
    """Over ``base``: fibre at ``I`` the cartesian functors ``probes[I] → P`` and vertical
    transformations; ``maps[u]: probes[dom u] → probes[cod u]`` induce reindexing."""
    fibres = []
    for I in base.objects:
        R = probes[I]
        cands = [P.over[R.P_obj[x]] for x in R.total.objects]

        def arr_ok(f, g, R=R):
            return P.P_arr[g] == R.P_arr[f] and (not R.is_cartesian(f) or P.is_cartesian(g))

        fibres.append(functor_category(R.total, P.total, cands, arr_ok, lambda x, a: P.is_vertical(a), budget))
    reindex = [precomposition(fibres[base.cod[u]], fibres[base.dom[u]], maps[u]) for u in base.arrows]
    H = IndexedCat(base, [f.cat for f in fibres], reindex)
    Q = grothendieck(H).fibration
    Q.name = name
    Q.provenance = {"construction": name}
    return Q, H


def distributor_change_of_base(phi: DistributorData, P: FibrationData, cap: int = DEFAULT_CAP) -> FibrationData:
    """``φ*(P)`` over ``φ.source`` with fibre at ``I`` the cartesian functors ``el φ(I) → P``."""
    A = phi.source
    els = [phi.elements(a) for a in A.objects]
    maps = [phi.element_map(u, els[A.dom[u]], els[A.cod[u]]) for u in A.arrows]
    Q, _ = _sections_fibration(A, els, maps, P, Budget(cap, "distributor change of base"), "distributor_change_of_base")
    return Q


def dependent_product(F: FunctorData, P: FibrationData, cap: int = DEFAULT_CAP) -> FibrationData:
    """``∏_F(P)`` over ``B`` for ``F: A → B``: fibre at ``I`` the cartesian functors ``F*I̲ → P``."""
    B = F.target
    slices = [slice_fibration(B, I) for I in B.objects]
    probes = [change_of_base(S, F) for S in slices]
    maps = []
    for u in B.arrows:
        J, I = B.dom[u], B.cod[u]
        sigma = slice_pushforward(B, u, slices[J], slices[I])
        kb, ib = probes[J].built, probes[I].built
        obj = [ib.o((a, sigma.ob(s))) for a, s in kb.obj_keys]
        arr = [ib.a((f, sigma(g))) for f, g in kb.arr_keys]
        maps.append(FunctorData(probes[J].total, probes[I].total, obj, arr))
    Q, _ = _sections_fibration(B, probes, maps, P, Budget(cap, "dependent product"), "dependent_product")
    return Q


# ---------------------------------------------------------------- sums along a functor


@dataclass
class CoproductAlong:
    """``∐_F(P)`` with the localisations ``X_(I)[Cart⁻¹]`` it is built from."""

    fibration: FibrationData
    indexed: IndexedCat
    localizations: list[Localization]


def coproduct_along(F: FunctorData, P: FibrationData, zigzag_cap: int = DEFAULT_ZIGZAG_CAP) -> CoproductAlong:
    """``∐_F(P)`` over ``B`` for ``F: A → B`` and ``P`` over ``A``: fibre at ``I`` is the
    pullback of ``P`` along ``∂1: I/F → A`` with its cartesian arrows inverted."""
    B = F.target
    T1 = terminal_category()
    commas = [comma_category(constant_functor(T1, B, I), F) for I in B.objects]
    pulled = [change_of_base(P, d.projections[1]) for d in commas]
    locs = []
    for Q in pulled:
        locs.append(localize(Q.total, [f for f in Q.total.arrows if Q.is_cartesian(f)], zigzag_cap))
    reindex = []
    for u in B.arrows:
        J, I = B.dom[u], B.cod[u]
        cb, jb = commas[I].built, commas[J].built

        def pre(o):
            return (o[0], o[1], B.comp(o[2], u))

        G_comma = FunctorData(
            commas[I].cat,
            commas[J].cat,
            [jb.o(pre(o)) for o in cb.obj_keys],
            [jb.a((pre(s), pre(t), x, y)) for s, t, x, y in cb.arr_keys],
        )
        xb, yb = pulled[I].built, pulled[J].built
        G = FunctorData(
            pulled[I].total,
            pulled[J].total,
            [yb.o((G_comma.ob(c), x)) for c, x in xb.obj_keys],
            [yb.a((G_comma(g), f)) for g, f in xb.arr_keys],
        )
        reindex.append(induced_functor(G, locs[I], locs[J]))
    H = IndexedCat(B, [L.cat for L in locs], reindex)
    Q = grothendieck(H).fibration
    Q.name = "coproduct_along"
    Q.provenance = {"construction": "coproduct_along"}
    return CoproductAlong(Q, H, locs)


# ---------------------------------------------------------------- right adjoint distributors


def _retract_by_idempotent(phi: DistributorData, a: int) -> dict | None:
    """An idempotent ``e`` of ``B`` and ``q ∈ φ(dom e, a)`` exhibiting ``φ(-, a)`` as the image of ``e``."""
    B = phi.target
    Kar = split_idempotents(B)
    for e in Kar.built.obj_keys:
        b = B.dom[e]
        for q in range(phi.sizes[(b, a)]):
            if phi.restrict[(e, a)][q] != q:
                continue
            if all(
                sorted(phi.restrict[(f, a)][q] for f in B.hom(X, b) if B.comp(e, f) == f)
                == list(range(phi.sizes[(X, a)]))
                for X in B.objects
            ):
                return {"a": a, "idempotent": e, "element": q}
    return None


def _retract_by_section(phi: DistributorData, a: int) -> dict | None:
    """A representable ``y(b)`` with ``s: φ(-, a) → y(b)`` and ``r`` at ``q`` such that ``r∘s = id``."""
    B = phi.target
    elements = [(X, x) for X in B.objects for x in range(phi.sizes[(X, a)])]
    for b in B.objects:
        for q in range(phi.sizes[(b, a)]):
            choice: dict[tuple[int, int], int] = {}

            def consistent(X: int, x: int, f: int) -> bool:
                # naturality with every already chosen element related through some v
                for v in B.incoming[X]:
                    key = (B.dom[v], phi.restrict[(v, a)][x])
                    if key in choice and choice[key] != B.comp(f, v):
                        return False
                for (Y, y), g in choice.items():
                    for v in B.hom(X, Y):
                        if phi.restrict[(v, a)][y] == x and B.comp(g, v) != f:
                            return False
                return True

            def search(i: int) -> bool:
                if i == len(elements):
                    return True
                X, x = elements[i]
                for f in B.hom(X, b):
                    if phi.restrict[(f, a)][q] == x and consistent(X, x, f):
                        choice[(X, x)] = f
                        if search(i + 1):
                            return True
                        del choice[(X, x)]
                return False

            if search(0):
                return {"a": a, "representing": b, "element": q}
    return None


def right_adjoint_distributor(phi: DistributorData) -> Verdict:
    """Does ``φ`` have a right adjoint distributor: is every ``φ(-, a)`` a retract of a representable?"""
    A = phi.source
    by_idem = [_retract_by_idempotent(phi, a) for a in A.objects]
    by_section = [_retract_by_section(phi, a) for a in A.objects]
    left = all(w is not None for w in by_idem)
    right = all(w is not None for w in by_section)
    failing = next((a for a in A.objects if by_idem[a] is None), None)
    check = Crosscheck("retract of representable", "image of an idempotent", left, "section and retraction", right)
    return Verdict(
        "right_adjoint_distributor",
        left,
        [w for w in by_idem if w is not None],
        None if failing is None else {"a": failing, "label": A.obj_labels[failing]},
        [check],
    )


# ---------------------------------------------------------------- the report


def _equivalent(P: FibrationData, Q: FibrationData, cap: int) -> bool | None:
    try:
        return bool(find_fibred_equivalence(P, Q, cap))
    except SearchCapExceeded:
        return None


def change_base_adjoints(
    F: FunctorData,
    P: FibrationData | None = None,
    Q: FibrationData | None = None,
    cap: int = DEFAULT_CAP,
    zigzag_cap: int = DEFAULT_ZIGZAG_CAP,
) -> Verdict:
    """``∏_F(P)`` two ways, ``∐_F(P)``, and the right-adjoint comparisons for ``F: A → B``.

    ``P`` lives over ``A`` and ``Q`` over ``B``; either may be omitted.
    """
    checks: list[Crosscheck] = []
    details: dict = {}
    witnesses = []
    adjoint = find_right_adjoint(F)
    if P is not None:
        prod = dependent_product(F, P, cap)
        via_phi = distributor_change_of_base(distributor_cofunctor(F), P, cap)
        details["dependent_product"] = {"objects": prod.total.n_obj, "arrows": prod.total.n_arr}
        eq = _equivalent(prod, via_phi, cap)
        checks.append(Crosscheck("∏_F against φ^F change of base", "F*I̲ sections", True, "φ^F elements", eq, eq is not None))
        if adjoint:
            eq = _equivalent(prod, change_of_base(P, adjoint.right), cap)
            checks.append(Crosscheck("∏_F against U*", "∏_F", True, "change of base along U", eq, eq is not None))
        try:
            co = coproduct_along(F, P, zigzag_cap)
            details["coproduct_along"] = {"objects": co.fibration.total.n_obj, "arrows": co.fibration.total.n_arr}
        except NonTerminating as exc:
            details["coproduct_along"] = {"non_terminating": str(exc)}
    if Q is not None:
        pulled = change_of_base(Q, F)
        via_phi = distributor_change_of_base(distributor_of_functor(F), Q, cap)
        eq = _equivalent(pulled, via_phi, cap)
        checks.append(Crosscheck("F* against φ_F change of base", "strict pullback", True, "φ_F elements", eq, eq is not None))
        if adjoint:
            try:
                sums = coproduct_along(adjoint.right, Q, zigzag_cap).fibration
                eq = _equivalent(pulled, sums, cap)
            except NonTerminating:
                eq = None
            checks.append(Crosscheck("F* against ∐_U", "change of base along F", True, "∐ along U", eq, eq is not None))
    phi = distributor_of_functor(F)
    rad = right_adjoint_distributor(phi)
    checks += rad.crosschecks
    witnesses += rad.witnesses
    details["right_adjoint"] = bool(adjoint)
    details["right_adjoint_distributor"] = rad.verdict
    return Verdict("change_base_adjoints", True, witnesses, None, checks, details)


# ---------------------------------------------------------------- preservation by change of base


def pullback_preservation_profile(F: FunctorData) -> Verdict:
    """``F`` preserves pullbacks, ``F*`` preserves internal sums on probe fibrations,
    and ``gl(F)`` has internal sums: three conditions asserted equivalent."""
    A, B = F.source, F.target
    first = None
    for c in A.objects:
        for f in A.incoming[c]:
            for g in A.incoming[c]:
                r = find_limit(A, "pullback", (f, g))
                if r:
                    p1, p2 = r.canonical.legs
                    if not is_pullback_square(B, F(p2), F(p1), F(g), F(f)):
                        first = first or {"cospan": (f, g)}
    one = first is None
    probes = [fundamental_fibration(B)] + [slice_fibration(B, I) for I in B.objects]
    probe_fail = None
    for i, S in enumerate(probes):
        if has_internal_sums(S).verdict and not has_internal_sums(change_of_base(S, F)).verdict:
            probe_fail = i
            break
    two = probe_fail is None
    three = bool(has_internal_sums(glueing(F)).verdict)
    checks = [
        Crosscheck("pullbacks vs sums preserved", "F preserves pullbacks", one, "F* preserves sums on probes", two),
        Crosscheck("sums preserved vs glueing sums", "F* preserves sums on probes", two, "gl(F) has internal sums", three),
    ]
    details = {"probe_failure": probe_fail}
    return Verdict("pullback_preservation", one, [], first, checks, details)


def smallness_preservation(F: FunctorData) -> Verdict:
    """``F`` has a right adjoint iff every ``F*(B/I)`` is representable, i.e. has a terminal object."""
    B = F.target
    adjoint = bool(find_right_adjoint(F))
    missing = None
    for I in B.objects:
        pulled = change_of_base(slice_fibration(B, I), F)
        if terminal_object(pulled.total) is None:
            missing = I
            break
    check = Crosscheck("smallness preserved", "F has a right adjoint", adjoint, "F*(B/I) representable", missing is None)
    return Verdict("smallness_preservation", adjoint, [], None if missing is None else {"I": missing}, [check])


def glueing_composite_failure(F: FunctorData, G: FunctorData) -> dict | None:
    """Compare ``gl(G∘F)`` with ``1*F*Fam(gl(G))`` through an explicit isomorphism over the base.

    ``F*`` here is change of base along the second leg ``Gl(F) → C²`` of ``gl(F)`` and
    ``1`` the fibrewise terminal functor of ``gl(F)``.
    """
    direct = glueing(compose_functors(G, F))
    glF, glG = glueing(F), glueing(G)
    fam = fam_fibration(glG)
    family = FibrationData(fam.family, "family", built=fam.fibration.built)
    middle = change_of_base(family, glF.legs[1])
    one = terminal_functor(glF, fibrewise_terminals(glF))
    composite = change_of_base(middle, one)
    PC = glF.fundamental
    famb, midb, comb = fam.fibration.built, middle.built, composite.built
    obj = []
    for I, c in direct.built.obj_keys:
        FI = F.ob(I)
        a = arrow_object(PC, F.target.identity[FI])
        x = glG.built.o((FI, c))
        z = famb.o((a, x))
        y = one.ob(I)
        obj.append(comb.o((I, midb.o((y, z)))))
    arr = []
    for u, s in direct.built.arr_keys:
        Fu = F(u)
        C = F.target
        sq = square_arrow(PC, C.identity[C.dom[Fu]], C.identity[C.cod[Fu]], Fu, Fu)
        z = famb.a((sq, glG.built.a((Fu, s))))
        arr.append(comb.a((u, midb.a((one(u), z)))))
    iso = FunctorData(direct.total, composite.total, obj, arr)
    bad = functor_violations(iso)
    if bad:
        return {"functor_laws": [v.describe() for v in bad[:3]]}
    if sorted(obj) != list(composite.total.objects) or sorted(arr) != list(composite.total.arrows):
        return {"not_bijective": True}
    if any(composite.P_arr[iso(f)] != direct.P_arr[f] for f in direct.total.arrows):
        return {"not_over_base": True}
    return None
