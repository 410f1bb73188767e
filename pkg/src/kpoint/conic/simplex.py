"""Exact rational simplex (two phases, Bland's rule) for pure-LP programs."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .program import ConicError, ConicProgram
from .solution import INFEASIBLE, OPTIMAL, UNBOUNDED


@dataclass
class StandardResult:
    status: str
    y: list[Fraction] | None
    duals: list[Fraction] | None
    objective: Fraction | None
    basis: list[int] | None


def _pivot(T: list[list[Fraction]], r: int, col: int):
    row = T[r]
    piv = row[col]
    if piv != 1:
        T[r] = row = [v / piv for v in row]
    for i, other in enumerate(T):
        if i != r and other[col] != 0:
            f = other[col]
            T[i] = [a - f * b for a, b in zip(other, row)]


def _run(T, basis, allowed):
    """Iterate on a tableau whose last row is the reduced-cost row z_j - c_j
    (maximisation: optimal when all allowed entries are >= 0)."""
    m = len(T) - 1
    while True:
        obj = T[-1]
        enter = next((j for j in allowed if obj[j] < 0), None)
        if enter is None:
            return OPTIMAL
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED
        r = best[1]
        _pivot(T, r, enter)
        basis[r] = enter


def simplex_standard(A, b, c) -> StandardResult:
    """max c^T y  s.t.  A y = b, y >= 0  over the rationals."""
    m = len(A)
    n = len(c)
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    sign = [1] * m
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
            sign[i] = -1
    # columns: n originals, m artificials, rhs
    T = [A[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = list(range(n, n + m))
    # phase 1: maximise -sum(artificials)
    obj = [Fraction(0)] * (n + m + 1)
    for j in range(n, n + m):
        obj[j] = Fraction(1)
    for i in range(m):
        obj = [o - v for o, v in zip(obj, T[i])]
    T.append(obj)
    _run(T, basis, list(range(n + m)))
    if T[-1][-1] != 0:
        return StandardResult(INFEASIBLE, None, None, None, None)
    # drive artificials out; rows that cannot be pivoted are redundant
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                continue
            _pivot(T, i, col)
            basis[i] = col
        keep.append(i)
    T = [T[i] for i in keep] + [T[-1]]
    basis = [basis[i] for i in keep]
    # phase 2 objective row: z_j - c_j with z = c_B B^-1 A
    cext = c + [Fraction(0)] * m
    obj = [-v for v in cext] + [Fraction(0)]
    for i, bv in enumerate(basis):
        cb = cext[bv]
        if cb:
            obj = [o + cb * v for o, v in zip(obj, T[i])]
    T[-1] = obj
    status = _run(T, basis, list(range(n)))
    if status == UNBOUNDED:
        return StandardResult(UNBOUNDED, None, None, None, basis)
    y = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        y[bv] = T[i][-1]
    duals = [T[-1][n + i] * sign[i] for i in range(m)]
    objective = sum((ci * yi for ci, yi in zip(c, y)), Fraction(0))
    return StandardResult(OPTIMAL, y, duals, objective, sorted(basis))


@dataclass
class RationalSolution:
    status: str
    x: list[Fraction] | None
    Y: list[list[Fraction]] | None
    objective: Fraction | float
    basis: list[int] | None

    @property
    def value(self):
        return self.objective


def _exact(v) -> Fraction:
    if isinstance(v, float) and not math.isfinite(v):
        raise ConicError("non-finite data in exact LP")
    return Fraction(v)


def solve_lp_exact(p: ConicProgram) -> RationalSolution:
    """Exact optimum of a program whose blocks are all diagonal.

    The dual side ``max <F_0, Y> s.t. <F_i, Y> = c_i, Y >= 0`` is solved in
    standard form; the primal vector is read from the simplex multipliers.
    """
    if not p.is_lp:
        raise ConicError("exact mode needs every block to be diagonal")
    norm = p.normalized()
    offsets = []
    total = 0
    for blk in p.blocks:
        offsets.append(total)
        total += blk.size
    A = [[Fraction(0)] * total for _ in range(p.m)]
    for i, f in enumerate(norm.F):
        for blk, q, _q, v in f:
            A[i][offsets[blk] + q] += _exact(v)
    cost = [Fraction(0)] * total
    for blk, q, _q, v in norm.F0:
        cost[offsets[blk] + q] += _exact(v)
    rhs = [_exact(v) for v in norm.c]
    res = simplex_standard(A, rhs, cost)
    worst = math.inf if p.sense == "min" else -math.inf
    if res.status == UNBOUNDED:
        return RationalSolution(INFEASIBLE, None, None, worst, None)
    if res.status == INFEASIBLE:
        if _primal_feasible(p, A, cost):
            return RationalSolution(UNBOUNDED, None, None, -worst, None)
        return RationalSolution(INFEASIBLE, None, None, worst, None)
    x = res.duals
    Y = [res.y[o:o + blk.size] for o, blk in zip(offsets, p.blocks)]
    objective = sum((_exact(ci) * xi for ci, xi in zip(p.c, x)), Fraction(0))
    return RationalSolution(OPTIMAL, x, Y, objective, res.basis)


def _primal_feasible(p: ConicProgram, A, cost) -> bool:
    """Is there x with sum_i x_i F_i - F_0 >= 0?  (phase 1 on x+ - x- - s = F_0)"""
    rows = len(cost)
    m = p.m
    At = [[A[i][j] for i in range(m)] + [-A[i][j] for i in range(m)]
          + [Fraction(-int(j == k)) for k in range(rows)] for j in range(rows)]
    res = simplex_standard(At, cost, [Fraction(0)] * (2 * m + rows))
    return res.status == OPTIMAL
