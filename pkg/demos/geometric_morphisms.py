"""Classify the corpus adjunctions between lattices through their glueing fibrations."""

from __future__ import annotations

from fibcat.corpus import lattice_adjunctions
from fibcat.geomorph import gm_classify


def main() -> None:
    for name, adj in lattice_adjunctions().items():
        profile = gm_classify(adj)
        flags = ", ".join(f"{e.name}={e.verdict}" for e in profile.entries())
        print(f"{name:10s} {flags}")


if __name__ == "__main__":
    main()
