from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .program import DIAG, ConicError, ConicProgram

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"
ITERATION_LIMIT = "IterationLimit"
NUMERICAL_TROUBLE = "NumericalTrouble"


@dataclass
class Solution:
    status: str
    x: np.ndarray
    S: list
    Y: list
    primal_objective: float
    dual_objective: float
    iterations: int = 0
    residuals: dict = field(default_factory=dict)
    certificate: dict | None = None

    @property
    def value(self) -> float:
        return self.primal_objective

    @property
    def duality_gap(self) -> float:
        """dual - primal for maximisation, primal - dual for minimisation;
        weak duality makes this nonnegative up to solver accuracy."""
        return self.residuals.get("weak_duality_gap", math.nan)


def min_eig(B: np.ndarray) -> float:
    if B.ndim == 1:
        return float(B.min()) if B.size else 0.0
    return float(np.linalg.eigvalsh(B)[0])


def _block_norm(blocks) -> float:
    return math.sqrt(sum(float(np.sum(B * B)) for B in blocks))


def compute_residuals(p: ConicProgram, x, Y) -> dict:
    """Residuals recomputed from (x, Y) alone."""
    norm = p.normalized()
    S = p.slack(x)
    F0n = _block_norm(p.dense_blocks(p.F0))
    cvec = np.array([float(v) for v in norm.c])
    s_min = min((min_eig(B) for B in S), default=0.0)
    y_min = min((min_eig(B) for B in Y), default=0.0)
    pinf = max(0.0, -s_min) / (1.0 + F0n)
    eq = p.apply_adjoint(Y) - cvec
    dinf = max(float(np.linalg.norm(eq)) / (1.0 + float(np.linalg.norm(cvec))),
               max(0.0, -y_min) / (1.0 + F0n))
    pobj_n = float(cvec @ np.asarray(x, dtype=float))
    dobj_n = p.constant_inner(Y)
    rel_gap = abs(pobj_n - dobj_n) / (1.0 + abs(pobj_n) + abs(dobj_n))
    return {
        "primal_infeasibility": pinf,
        "dual_infeasibility": dinf,
        "gap": float(pobj_n - dobj_n),
        "rel_gap": float(rel_gap),
        "weak_duality_gap": float(pobj_n - dobj_n),
        "min_eig_primal_slack": s_min,
        "min_eig_dual": y_min,
    }


def objectives(p: ConicProgram, x, Y) -> tuple[float, float]:
    pobj = p.primal_value(x)
    dobj = p.constant_inner(Y)
    if p.sense == "max":
        dobj = -dobj
    return pobj, dobj


# -- residual report ----------------------------------------------------------

@dataclass
class ResidualItem:
    name: str
    value: float
    bound: float
    passed: bool

    def __post_init__(self):
        self.value, self.bound, self.passed = float(self.value), float(self.bound), bool(self.passed)


@dataclass
class ResidualReport:
    items: list[ResidualItem]
    objective: float

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.items)

    def item(self, name: str) -> ResidualItem:
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)

    def to_json(self) -> str:
        return json.dumps({"passed": self.passed, "objective": self.objective,
                           "items": [asdict(i) for i in self.items]}, sort_keys=True, indent=2)


def check_solution(p: ConicProgram, s: Solution, tol: float = 1e-6) -> ResidualReport:
    """Recompute every feasibility quantity of ``s`` against ``p``."""
    if len(s.x) != p.m or len(s.Y) != len(p.blocks):
        raise ConicError("solution shape does not match program")
    for blk, B in zip(p.blocks, s.Y):
        want = (blk.size,) if blk.kind == DIAG else (blk.size, blk.size)
        if B.shape != want:
            raise ConicError("dual block shape mismatch")
    items = []
    S = p.slack(s.x)
    for i, B in enumerate(S):
        e = min_eig(B)
        bound = -tol * (1.0 + float(np.linalg.norm(B)))
        items.append(ResidualItem(f"primal_slack_min_eig[{i}]", e, bound, e >= bound))
    for i, B in enumerate(s.Y):
        e = min_eig(B)
        bound = -tol * (1.0 + float(np.linalg.norm(B)))
        items.append(ResidualItem(f"dual_min_eig[{i}]", e, bound, e >= bound))
    norm = p.normalized()
    cvec = np.array([float(v) for v in norm.c])
    eq = p.apply_adjoint(s.Y) - cvec
    for i, r in enumerate(eq):
        items.append(ResidualItem(f"dual_equality[{i}]", abs(float(r)),
                                  tol * (1.0 + abs(cvec[i])), abs(float(r)) <= tol * (1.0 + abs(cvec[i]))))
    pobj, dobj = objectives(p, s.x, s.Y)
    obj_err = abs(pobj - s.primal_objective) if math.isfinite(s.primal_objective) else 0.0
    items.append(ResidualItem("objective_recomputation", obj_err, tol * (1 + abs(pobj)),
                              obj_err <= tol * (1 + abs(pobj))))
    gap = (pobj - dobj) if p.sense == "min" else (dobj - pobj)
    items.append(ResidualItem("weak_duality", gap, -tol * (1 + abs(pobj)), gap >= -tol * (1 + abs(pobj))))
    rel = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
    items.append(ResidualItem("relative_gap", rel, tol, rel <= tol))
    return ResidualReport(items, pobj)
