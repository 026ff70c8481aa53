"""The codomain fibration of a finite lattice is locally small iff the lattice is distributive."""

from __future__ import annotations

from fibcat.analyze import is_locally_small
from fibcat.closure import fundamental_fibration
from fibcat.corpus import D2, M3, N5, chain3


def main() -> None:
    for name, L in [("chain3", chain3()), ("D2", D2()), ("N5", N5()), ("M3", M3())]:
        v = is_locally_small(fundamental_fibration(L))
        where = "" if v.verdict else f"  fails at {v.counterexample}"
        print(f"{name:7s} locally small: {v.verdict}{where}")


if __name__ == "__main__":
    main()
