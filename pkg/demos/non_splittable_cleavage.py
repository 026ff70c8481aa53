"""Reduction mod 2 from Z4 to Z2: a fibration with no split cleavage."""

from __future__ import annotations

from fibcat.corpus import pmod
from fibcat.fibration import choose_cleavage, enumerate_cleavages, split_cleavages
from fibcat.splitting import split_left, split_right


def main() -> None:
    P = pmod()
    cl = choose_cleavage(P)
    print("chosen cleavage split:", cl.is_split)
    print("cleavages enumerated:", sum(1 for _ in enumerate_cleavages(P)))
    print("split cleavages:", sum(1 for _ in split_cleavages(P)))
    for name, make in [("right", split_right), ("left", split_left)]:
        S = make(P)
        print(f"{name} splitting fibre sizes:", S.fibre_sizes)


if __name__ == "__main__":
    main()
