"""Named checks and JSON-ready verification reports."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA_VERSION = "kpoint-report/1"


def jsonable(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if hasattr(v, "tolist"):  # numpy scalars and arrays
        return jsonable(v.tolist())
    if isinstance(v, Fraction):
        return float(v) if v.denominator != 1 else int(v)
    if isinstance(v, int):
        return v
    if isinstance(v, float) or hasattr(v, "__float__"):
        f = float(v)
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        if math.isnan(f):
            return "nan"
        return f
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    return str(v)


@dataclass
class Check:
    """``lhs relation rhs`` up to ``tolerance``; ``slack`` >= 0 iff it holds."""
    name: str
    lhs: object
    rhs: object
    relation: str = ">="
    tolerance: float = 0.0

    @property
    def slack(self):
        lhs, rhs, tol = self.lhs, self.rhs, self.tolerance
        if lhs == rhs and self.relation in (">=", "<=", "=="):
            return tol  # also covers inf == inf
        if self.relation == ">=":
            return lhs - rhs + tol
        if self.relation == "<=":
            return rhs - lhs + tol
        if self.relation == "==":
            return tol - abs(lhs - rhs)
        raise ValueError(f"unknown relation {self.relation!r}")

    @property
    def passed(self) -> bool:
        s = self.slack
        return bool(not (isinstance(s, float) and math.isnan(s)) and s >= 0)

    def to_dict(self) -> dict:
        out = {"name": self.name, "lhs": jsonable(self.lhs), "rhs": jsonable(self.rhs),
               "relation": self.relation, "tolerance": self.tolerance,
               "slack": jsonable(self.slack), "pass": self.passed}
        if isinstance(self.lhs, Fraction) or isinstance(self.rhs, Fraction):
            out["exact"] = {"lhs": str(self.lhs), "rhs": str(self.rhs)}
        return out


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, *args, **kwargs) -> Check:
        c = Check(*args, **kwargs)
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.lhs, c.rhs, c.relation, c.tolerance))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def lines(self) -> list[str]:
        return [f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.lhs} {c.relation} {c.rhs} "
                f"(tol {c.tolerance})" for c in self.checks]
