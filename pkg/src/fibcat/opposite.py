"""The opposite of a fibration, built from span classes."""

from __future__ import annotations

from .category import build_category
from .fibration import Cleavage, FibrationData, choose_cleavage
from .functor import FunctorData


def span_class_key(P: FibrationData, alpha: int, phi: int) -> tuple[int, int]:
    """Least member ``(α', φ')`` of the class of the span ``(α, φ)``.

    Members are ``(α∘ι, φ∘ι)`` for vertical isos ``ι``; there is exactly one per
    cartesian lift ``φ'`` of the same base arrow and codomain.
    """
    T = P.total
    u, X = P.P_arr[phi], T.cod[phi]
    return min((T.comp(alpha, P.vertical_factor(phi, other)), other) for other in P.lifts(u, X))


def opposite_fibration(P: FibrationData, cl: Cleavage | None = None) -> FibrationData:
    """``P^op``: same objects; arrows ``Y → X`` over ``u`` are classes of spans
    ``Y ←α– Z –φ→ X`` with ``α`` vertical and ``φ`` cartesian over ``u``.

    Arrows are keyed by the least span of their class, so the result does not
    depend on ``cl``, which is only used to pick the lift ``ψ̃`` in composites.
    """
    P.require_fibration()
    cl = cl or choose_cleavage(P)
    T, B = P.total, P.base
    arrs = []
    for X in T.objects:
        for u in B.incoming[P.P_obj[X]]:
            phi = cl(u, X)
            Z = T.dom[phi]
            for alpha in T.outgoing[Z]:
                if P.is_vertical(alpha):
                    arrs.append(span_class_key(P, alpha, phi))

    def compose(g, f):
        alpha, phi = g  # Y → X over u
        beta, psi = f  # W → Y over v
        # ψ̃: cartesian over v into dom φ; α̃ vertical with ψ∘α̃ = α∘ψ̃
        psi_t = cl(P.P_arr[psi], T.dom[phi])
        alpha_t = P.vertical_factor(psi, T.comp(alpha, psi_t))
        return span_class_key(P, T.comp(beta, alpha_t), T.comp(phi, psi_t))

    def identity(X):
        ident = T.identity[X]
        return span_class_key(P, ident, ident)

    built = build_category(
        T.objects,
        arrs,
        lambda k: T.cod[k[0]],
        lambda k: T.cod[k[1]],
        identity,
        compose,
        obj_label=lambda o: T.obj_labels[o],
        arr_label=lambda k: f"[{T.arr_labels[k[0]]},{T.arr_labels[k[1]]}]",
    )
    proj = FunctorData(built.cat, B, [P.P_obj[x] for x in T.objects], [P.P_arr[k[1]] for k in built.arr_keys])
    return FibrationData(proj, "opposite", built=built)


def span_arrow(Pop: FibrationData, P: FibrationData, alpha: int, phi: int) -> int:
    """Arrow of ``P^op`` for any span ``(α, φ)`` of ``P``."""
    return Pop.built.a(span_class_key(P, alpha, phi))


def opposite_cartesian_failures(Pop: FibrationData, P: FibrationData) -> list[int]:
    """Arrows of ``P^op`` whose cartesianness differs from 'vertical leg is iso'."""
    T = P.total
    return [
        f for f, (alpha, _) in enumerate(Pop.built.arr_keys) if Pop.is_cartesian(f) != T.is_iso(alpha)
    ]


def double_opposite_comparison(P: FibrationData, Pop: FibrationData, Popop: FibrationData) -> FunctorData:
    """``P → (P^op)^op`` sending ``f = Cart(u, X)∘f_v`` to the span
    ``([f_v, id], [id, Cart(u, X)])``."""
    T = P.total
    arr = []
    for f in T.arrows:
        u, X, Y = P.P_arr[f], T.cod[f], T.dom[f]
        cart = P.canonical_lift(u, X)
        f_v = P.vertical_factor(cart, f)
        Z = T.dom[cart]
        vertical = span_arrow(Pop, P, f_v, T.identity[Y])  # Z → Y in P^op
        cart_op = span_arrow(Pop, P, T.identity[Z], cart)  # Z → X in P^op
        arr.append(span_arrow(Popop, Pop, vertical, cart_op))
    return FunctorData(T, Popop.total, list(T.objects), arr)
