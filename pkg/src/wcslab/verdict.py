"""Three-valued decisions with their numerical evidence."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["CriterionVerdict", "Verdict", "jsonable"]


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


def jsonable(x):
    """Recursively convert numpy and complex values into JSON-friendly objects."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        return jsonable(z.real) if z.imag == 0 else [jsonable(z.real), jsonable(z.imag)]
    if isinstance(x, (float, np.floating)):
        v = float(x)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if hasattr(x, "as_dict"):
        return jsonable(x.as_dict())
    return x


@dataclass(frozen=True)
class CriterionVerdict:
    """Outcome of one numerical criterion.

    ``borderline`` names the quantity that kept an inconclusive verdict from
    being decided; it is mandatory in that case.
    """

    verdict: Verdict
    criterion_id: str
    evidence: dict
    tolerances: dict = field(default_factory=dict)
    note: str = ""
    borderline: dict | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "verdict", Verdict(self.verdict))
        if not self.evidence:
            raise ValueError("a verdict needs evidence")
        if self.verdict is Verdict.INCONCLUSIVE and not self.borderline:
            raise ValueError("an inconclusive verdict must carry the borderline quantity")

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def fails(self) -> bool:
        return self.verdict is Verdict.FAILS

    @property
    def definite(self) -> bool:
        return self.verdict is not Verdict.INCONCLUSIVE

    def as_dict(self) -> dict:
        return jsonable(
            {
                "criterion_id": self.criterion_id,
                "verdict": self.verdict.value,
                "note": self.note,
                "borderline": self.borderline,
                "tolerances": self.tolerances,
                "evidence": self.evidence,
            }
        )
