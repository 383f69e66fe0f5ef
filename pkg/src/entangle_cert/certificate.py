"""Machine-readable verdicts shared by every analysis."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import GaussianRational, format_gr


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


def jsonable(obj: Any) -> Any:
    """Convert evidence payloads (exact scalars, complex floats, tuples) to JSON types."""
    if isinstance(obj, GaussianRational):
        return format_gr(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if hasattr(obj, "tolist"):
        return jsonable(obj.tolist())
    if isinstance(obj, float):
        return obj
    if hasattr(obj, "item"):
        return obj.item()
    return obj


@dataclass
class Certificate:
    """Verdict for one property.

    ``scope`` names what was analysed (bipartition, group, indices),
    ``summary`` holds the headline numbers surfaced at top level in JSON
    (rank, bound, product index) and ``evidence`` the data needed to
    re-verify the verdict without redoing the expensive step.
    """

    property: str
    verdict: Verdict
    scope: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    evidence: dict = field(default_factory=dict)
    ms: float | None = None

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def fails(self) -> bool:
        return self.verdict is Verdict.FAILS

    def to_dict(self, timing: bool = True) -> dict:
        out = {"property": self.property, "verdict": self.verdict.value}
        out.update(jsonable(self.scope))
        out.update(jsonable(self.summary))
        out["evidence"] = jsonable(self.evidence)
        if timing and self.ms is not None:
            out["ms"] = round(self.ms, 3)
        return out

    def __str__(self):
        where = ", ".join(f"{k}={v}" for k, v in self.scope.items())
        head = ", ".join(f"{k}={v}" for k, v in self.summary.items())
        parts = [p for p in (where, head) if p]
        return f"{self.property}: {self.verdict.value}" + (f" ({'; '.join(parts)})" if parts else "")
