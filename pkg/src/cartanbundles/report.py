"""Check reports: failures are data, never exceptions."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class CheckReport:
    check: str
    anchor: str
    samples: int
    max_residual: float
    tolerance: float
    witness: dict[str, Any] | None = field(default=None)

    @property
    def passed(self) -> bool:
        return bool(self.max_residual < self.tolerance)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict[str, Any]:
        residual = self.max_residual
        if not math.isfinite(residual):
            residual = None  # JSON has no infinity; null means "not evaluable"
        return {
            "check": self.check,
            "anchor": self.anchor,
            "samples": self.samples,
            "max_residual": residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "witness": jsonable(self.witness),
        }

    def line(self) -> str:
        return (f"{self.verdict.upper():4s}  {self.check:32s} max_residual={self.max_residual:.3e}"
                f"  tol={self.tolerance:.1e}  n={self.samples}")


def jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(reports: list[CheckReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "check report list",
    "type": "array",
    "items": {
        "type": "object",
        "required": ["check", "anchor", "samples", "max_residual", "tolerance", "verdict", "witness"],
        "additionalProperties": False,
        "properties": {
            "check": {"type": "string"},
            "anchor": {"type": "string"},
            "samples": {"type": "integer", "minimum": 0},
            "max_residual": {"type": ["number", "null"]},
            "tolerance": {"type": "number", "exclusiveMinimum": 0},
            "verdict": {"enum": ["pass", "fail"]},
            "witness": {"type": ["object", "null"]},
        },
    },
}
