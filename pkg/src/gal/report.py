"""Check records and the JSON encoding shared by reports."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class Check:
    name: str
    ref: str
    lhs: object
    rhs: object
    residual: object
    passed: bool | None  # None marks numerical evidence that is not asserted

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "paper_ref": self.ref,
            "lhs": encode(self.lhs),
            "rhs": encode(self.rhs),
            "residual": encode(self.residual),
            "pass": self.passed,
        }


def check_le(name: str, ref: str, lhs, rhs, tol=0.0) -> Check:
    """``lhs <= rhs`` up to ``tol``; the residual is the slack ``rhs - lhs``."""
    slack = rhs - lhs
    return Check(name, ref, lhs, rhs, slack, bool(slack >= -tol))


def check_eq(name: str, ref: str, lhs, rhs, tol=0.0, relative: bool = False) -> Check:
    diff = abs(lhs - rhs)
    if relative and rhs:
        diff = diff / abs(rhs)
    return Check(name, ref, lhs, rhs, diff, bool(diff <= tol))


def evidence(name: str, ref: str, lhs, rhs) -> Check:
    return Check(name, ref, lhs, rhs, lhs - rhs, None)


def encode(x):
    """JSON-ready value: rationals as ``{"num", "den"}`` strings, floats to 9 digits."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return {"num": str(x.numerator), "den": str(x.denominator)}
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.9g}")
    if isinstance(x, np.ndarray):
        return [encode(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    if hasattr(x, "to_json"):
        return encode(x.to_json())
    raise TypeError(f"cannot encode {type(x).__name__}")


def dumps(doc) -> str:
    return json.dumps(encode(doc), indent=2, sort_keys=False, allow_nan=False) + "\n"
