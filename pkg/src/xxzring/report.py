"""Structured results for numerical bound checks, and their JSON encoding."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

__all__ = ["CheckReport", "dumps", "fmt_float"]


@dataclass(frozen=True)
class CheckReport:
    """One inequality lhs <= rhs, evaluated at its worst case.

    ``slack`` is rhs - lhs.  Informational reports record a comparison that
    is not expected to hold at the given parameters and never count as a
    failure.
    """

    check: str
    params: dict
    lhs: float
    rhs: float
    slack: float
    holds: bool
    informational: bool = False
    details: dict = field(default_factory=dict)

    @classmethod
    def make(cls, check, params, lhs, rhs, tol=0.0, details=None, informational=False):
        lhs, rhs = float(lhs), float(rhs)
        return cls(check, dict(params), lhs, rhs, rhs - lhs, bool(lhs <= rhs + tol),
                   informational, dict(details or {}))

    @property
    def failed(self) -> bool:
        return not self.holds and not self.informational

    def to_row(self) -> dict:
        row = {"check": self.check, "params": self.params, "lhs": self.lhs,
               "rhs": self.rhs, "slack": self.slack, "holds": self.holds}
        if self.informational:
            row["informational"] = True
        if self.details:
            row["details"] = self.details
        return row


def fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def dumps(obj) -> str:
    """Compact JSON with every float written to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if getattr(obj, "ndim", 0) > 0:
        return dumps(obj.tolist())
    if hasattr(obj, "item") and not isinstance(obj, (list, tuple, dict, str)):
        return dumps(obj.item())
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return "[" + ", ".join(dumps(v) for v in items) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")
