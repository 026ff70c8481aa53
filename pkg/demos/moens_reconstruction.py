"""Recover a glued functor from its fibration, and watch the preconditions fail on a bad example."""

from __future__ import annotations

from fibcat.acceptance import corpus_fibrations
from fibcat.errors import PreconditionFailed
from fibcat.moens import gen_moens_conditions, moens_reconstruct


def main() -> None:
    fibs = corpus_fibrations()
    for name in ["gl(incl_2_D2)", "P_N5", "nondisjoint"]:
        try:
            print(f"{name}: reconstruction {moens_reconstruct(fibs[name]).verdict.verdict}")
        except PreconditionFailed as exc:
            print(f"{name}: {exc}")
            failing = [k for k, v in gen_moens_conditions(fibs[name]).items() if v is not None]
            print(f"  failing conditions: {failing}")


if __name__ == "__main__":
    main()
