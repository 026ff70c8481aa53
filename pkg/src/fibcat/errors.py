"""Exceptions and law-violation records shared by every module."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class FibcatError(Exception):
    """Base class for all library errors."""


# ---------------------------------------------------------------- violations


@dataclass(frozen=True)
class Violation:
    """A single failed law, with enough data to locate it."""

    def describe(self) -> str:
        fields = ", ".join(f"{k}={v!r}" for k, v in self.__dict__.items())
        return f"{type(self).__name__}({fields})"


@dataclass(frozen=True)
class DanglingId(Violation):
    where: str
    ident: Any


@dataclass(frozen=True)
class NonComposablePairInTable(Violation):
    g: int
    f: int


@dataclass(frozen=True)
class MissingComposite(Violation):
    g: int
    f: int


@dataclass(frozen=True)
class CompositeTypeMismatch(Violation):
    g: int
    f: int
    result: int


@dataclass(frozen=True)
class AssociativityViolation(Violation):
    h: int
    g: int
    f: int


@dataclass(frozen=True)
class UnitViolation(Violation):
    f: int


@dataclass(frozen=True)
class FunctorLawViolation(Violation):
    law: str
    item: Any


@dataclass(frozen=True)
class NaturalityViolation(Violation):
    arrow: int


# ---------------------------------------------------------------- exceptions


class CategoryValidationError(FibcatError):
    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        head = "; ".join(v.describe() for v in self.violations[:5])
        more = "" if len(self.violations) <= 5 else f" (+{len(self.violations) - 5} more)"
        super().__init__(f"invalid category: {head}{more}")


class MappingValidationError(FibcatError):
    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        head = "; ".join(v.describe() for v in self.violations[:5])
        super().__init__(f"invalid mapping: {head}")


class BadArgs(FibcatError):
    pass


class SearchCapExceeded(FibcatError):
    def __init__(self, cap: int, what: str = "search"):
        self.cap = cap
        self.what = what
        super().__init__(f"{what} exceeded the candidate cap of {cap}")


class NonTerminating(FibcatError):
    def __init__(self, cap: int, what: str = "normalisation"):
        self.cap = cap
        super().__init__(f"{what} did not stabilise within {cap} steps")


class NoLift(FibcatError):
    def __init__(self, base_arrow: int, obj: int, kind: str = "cartesian"):
        self.base_arrow = base_arrow
        self.obj = obj
        super().__init__(f"no {kind} lift of object {obj} along base arrow {base_arrow}")


class NotAFibration(FibcatError):
    pass


class CleavageNotSplit(FibcatError):
    pass


class BaseLacksPullbacks(FibcatError):
    def __init__(self, cospan: tuple[int, int]):
        self.cospan = cospan
        super().__init__(f"base has no pullback of the cospan {cospan}")


class NotElementary(FibcatError):
    pass


class PreconditionFailed(FibcatError):
    def __init__(self, items: dict[str, Any] | str):
        self.items = items if isinstance(items, dict) else {"reason": items}
        super().__init__(f"precondition failed: {self.items}")


class ClassNotStable(FibcatError):
    def __init__(self, witness: Any):
        self.witness = witness
        super().__init__(f"class not stable under reindexing: {witness}")


class NoInternalSums(FibcatError):
    pass


class NoFibrewiseTerminals(FibcatError):
    def __init__(self, base_obj: int):
        self.base_obj = base_obj
        super().__init__(f"fibre over base object {base_obj} has no terminal object")


class MissingStructure(FibcatError):
    pass


class NotGeometric(FibcatError):
    pass


class NotLeftExact(FibcatError):
    def __init__(self, witness: Any):
        self.witness = witness
        super().__init__(f"functor does not preserve finite limits at {witness}")


class FormatSyntaxError(FibcatError):
    def __init__(self, message: str, line: int, col: int = 1):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")


class UnresolvedReference(FibcatError):
    def __init__(self, name: str, line: int | None = None):
        self.name = name
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unresolved reference {name!r}{where}")


class DocumentValidationError(FibcatError):
    def __init__(self, block: str, line: int | None, cause: Exception):
        self.block = block
        self.line = line
        self.cause = cause
        where = f" at line {line}" if line is not None else ""
        super().__init__(f"block {block!r}{where}: {cause}")
