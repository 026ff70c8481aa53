"""Verdict records shared by the deciders and serialised by the command line."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1

UNKNOWN = "unknown"
DIVERGENT = "divergent"


@dataclass
class Crosscheck:
    """Two independent decisions of the same statement."""

    name: str
    left_route: str
    left: Any
    right_route: str
    right: Any
    applicable: bool = True

    @property
    def agree(self) -> bool:
        return not self.applicable or self.left == self.right

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "routes": [self.left_route, self.right_route],
            "values": [_plain(self.left), _plain(self.right)],
            "applicable": self.applicable,
            "agree": self.agree,
        }


@dataclass
class Verdict:
    """The outcome of one decider: a value, witnesses and cross-checks."""

    property: str
    verdict: Any
    witnesses: list[dict] = field(default_factory=list)
    counterexample: dict | None = None
    crosschecks: list[Crosscheck] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verdict is True

    @property
    def divergences(self) -> list[Crosscheck]:
        return [c for c in self.crosschecks if not c.agree]

    def to_json(self) -> dict:
        out = {
            "property": self.property,
            "verdict": _plain(self.verdict),
            "witnesses": [_plain(w) for w in self.witnesses],
            "theorem_crosschecks": [c.to_json() for c in self.crosschecks],
        }
        if self.counterexample is not None:
            out["counterexample"] = _plain(self.counterexample)
        if self.details:
            out["details"] = _plain(self.details)
        return out


def _plain(value: Any) -> Any:
    """JSON-friendly copy: tuples become lists, dict keys become strings."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    if hasattr(value, "to_json"):
        return value.to_json()
    return str(value)
