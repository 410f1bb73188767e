"""Dense primal-dual interior-point method for block SDP/LP.

Internally the SDPA pair is rewritten in the textbook standard form

    (P~)  min <C, X>  s.t. <A_i, X> = b_i,  X >= 0
    (D~)  max b^T y   s.t. sum_i y_i A_i + Z = C,  Z >= 0

with ``X = Y_sdpa``, ``C = -F_0``, ``A_i = F_i``, ``b = c`` (normalised) and
``x_sdpa = -y``. Search directions are HKM with a Mehrotra predictor-corrector;
the Schur complement is formed densely and factored by Cholesky.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .program import DIAG, ConicError, ConicProgram
from .solution import (INFEASIBLE, ITERATION_LIMIT, NUMERICAL_TROUBLE, OPTIMAL, UNBOUNDED,
                       Solution, compute_residuals, objectives)


@dataclass
class SolverOptions:
    tol: float = 1e-8
    max_iter: int = 200
    infeas_tol: float = 1e-8
    cert_tol: float = 1e-6
    step_fraction: float = 0.98
    shifts: tuple = (0.0, 1e-12, 1e-10)


class _Data:
    """Per-block dense copies of the problem data."""

    def __init__(self, p: ConicProgram):
        self.blocks = p.blocks
        self.m = p.m
        self.b = np.array([float(v) for v in p.c])
        self.C = [-B for B in p.dense_blocks(p.F0)]
        self.psd = {}
        self.diag = {}
        touching: dict[int, dict[int, list]] = {}
        for i, f in enumerate(p.F):
            for blk, pp, q, v in f:
                touching.setdefault(blk, {}).setdefault(i, []).append((pp, q, float(v)))
        for bi, blk in enumerate(self.blocks):
            cons = touching.get(bi, {})
            if blk.kind == DIAG:
                A = np.zeros((self.m, blk.size))
                for i, ents in cons.items():
                    for pp, _q, v in ents:
                        A[i, pp] += v
                self.diag[bi] = A
            else:
                idx = np.array(sorted(cons), dtype=int)
                A = np.zeros((len(idx), blk.size, blk.size))
                for row, i in enumerate(idx):
                    for pp, q, v in cons[i]:
                        A[row, pp, q] += v
                        if pp != q:
                            A[row, q, pp] += v
                self.psd[bi] = (idx, A)
        self.dims = sum(b.size for b in self.blocks)

    def A(self, X) -> np.ndarray:
        out = np.zeros(self.m)
        for bi, Ad in self.diag.items():
            out += Ad @ X[bi]
        for bi, (idx, A) in self.psd.items():
            if len(idx):
                out[idx] += np.einsum("ipq,pq->i", A, X[bi])
        return out

    def AT(self, y) -> list:
        out = [None] * len(self.blocks)
        for bi, Ad in self.diag.items():
            out[bi] = Ad.T @ y
        for bi, (idx, A) in self.psd.items():
            n = self.blocks[bi].size
            out[bi] = np.einsum("i,ipq->pq", y[idx], A) if len(idx) else np.zeros((n, n))
        return out


def _inner(U, V) -> float:
    return float(sum(np.sum(u * v) for u, v in zip(U, V)))


def _norm(U) -> float:
    return math.sqrt(_inner(U, U))


def _max_step(X, dX, chol) -> float:
    """Largest alpha with X + alpha dX >= 0, given Cholesky factors of X."""
    alpha = math.inf
    for Xb, dXb, L in zip(X, dX, chol):
        if Xb.ndim == 1:
            neg = dXb < 0
            if np.any(neg):
                alpha = min(alpha, float(np.min(-Xb[neg] / dXb[neg])))
        else:
            W = sla.solve_triangular(L, dXb, lower=True)
            W = sla.solve_triangular(L, W.T, lower=True)
            lam = float(np.linalg.eigvalsh((W + W.T) / 2)[0])
            if lam < 0:
                alpha = min(alpha, -1.0 / lam)
    return alpha


def _factor(X):
    """Cholesky factors per block (None for diagonal blocks); raises on failure."""
    return [None if B.ndim == 1 else np.linalg.cholesky(B) for B in X]


def _positive(X) -> bool:
    try:
        _factor(X)
    except np.linalg.LinAlgError:
        return False
    return all(np.all(B > 0) for B in X if B.ndim == 1)


def _schur(data: _Data, X, Zinv, Zd) -> np.ndarray:
    M = np.zeros((data.m, data.m))
    for bi, Ad in data.diag.items():
        M += (Ad * (X[bi] / Zd[bi])) @ Ad.T
    for bi, (idx, A) in data.psd.items():
        if not len(idx):
            continue
        G = A @ X[bi]
        H = A @ Zinv[bi]
        k = len(idx)
        Mb = G.reshape(k, -1) @ H.transpose(0, 2, 1).reshape(k, -1).T
        M[np.ix_(idx, idx)] += Mb
    return (M + M.T) / 2


def _cho(M, shifts):
    scale = max(1.0, float(np.max(np.abs(np.diag(M))))) if M.size else 1.0
    for s in shifts:
        try:
            return sla.cho_factor(M + s * scale * np.eye(len(M)), lower=True, check_finite=True)
        except (np.linalg.LinAlgError, ValueError):
            continue
    return None


def solve_conic(p: ConicProgram, opts: SolverOptions | None = None) -> Solution:
    """Solve the SDPA pair of ``p``; statuses refer to the primal (vector) side."""
    opts = opts or SolverOptions()
    p.check_caps()
    norm = p.normalized()
    data = _Data(norm)
    m = data.m
    blocks = data.blocks

    if m == 0:
        raise ConicError("program has no variables")

    # starting point
    X, Z = [], []
    bnorm = 1.0 + float(np.linalg.norm(data.b))
    Cnorm = 1.0 + _norm(data.C)
    for bi, blk in enumerate(blocks):
        n = blk.size
        if blk.kind == DIAG:
            colnorm = np.linalg.norm(data.diag[bi], axis=0).max() if m else 1.0
        else:
            idx, A = data.psd[bi]
            colnorm = max((np.linalg.norm(a) for a in A), default=1.0)
        xi = max(10.0, math.sqrt(n), n * float(np.max((1 + np.abs(data.b)) / (1 + colnorm))))
        eta = max(10.0, math.sqrt(n), float(np.linalg.norm(data.C[bi])), float(colnorm))
        if blk.kind == DIAG:
            X.append(np.full(n, xi))
            Z.append(np.full(n, eta))
        else:
            X.append(xi * np.eye(n))
            Z.append(eta * np.eye(n))
    y = np.zeros(m)

    status = ITERATION_LIMIT
    certificate = None
    it = 0
    for it in range(opts.max_iter + 1):
        AX = data.A(X)
        ATy = data.AT(y)
        Rp = data.b - AX
        Rd = [C - a - z for C, a, z in zip(data.C, ATy, Z)]
        pobj = _inner(data.C, X)
        dobj = float(data.b @ y)
        mu = _inner(X, Z) / data.dims
        pinf = float(np.linalg.norm(Rp)) / bnorm
        dinf = _norm(Rd) / Cnorm
        relgap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        if relgap <= opts.tol and pinf <= opts.tol and dinf <= opts.tol:
            status = OPTIMAL
            break

        # divergence-based infeasibility detection
        if pobj < 0:
            ratio = float(np.linalg.norm(AX)) / -pobj
            if ratio <= opts.infeas_tol:
                status = INFEASIBLE  # Farkas ray for the vector side
                certificate = {"Y": [B / -pobj for B in X]}
                break
        if dobj > 0:
            ray = [a + z for a, z in zip(ATy, Z)]
            if _norm(ray) / dobj <= opts.infeas_tol:
                status = UNBOUNDED
                certificate = {"x": -y / dobj}
                break
        if it == opts.max_iter:
            break

        try:
            Zchol = _factor(Z)
            Xchol = _factor(X)
        except np.linalg.LinAlgError:
            status = NUMERICAL_TROUBLE
            break
        Zinv = [None if B.ndim == 1 else sla.cho_solve((L, True), np.eye(len(B)))
                for B, L in zip(Z, Zchol)]
        Zd = {bi: Z[bi] for bi in data.diag}
        M = _schur(data, X, Zinv, Zd)
        fac = _cho(M, opts.shifts)
        if fac is None:
            status = NUMERICAL_TROUBLE
            break

        def recover(dy, Rc):
            ATdy = data.AT(dy)
            dZ = [r - a for r, a in zip(Rd, ATdy)]
            dX = []
            for bi, blk in enumerate(blocks):
                if blk.kind == DIAG:
                    d = -X[bi] - X[bi] * dZ[bi] / Z[bi]
                    if Rc is not None:
                        d = d + Rc[bi] / Z[bi]
                else:
                    d = -X[bi] - X[bi] @ dZ[bi] @ Zinv[bi]
                    if Rc is not None:
                        d = d + Rc[bi] @ Zinv[bi]
                    d = (d + d.T) / 2
                dX.append(d)
            return dX, dZ

        def direction(Rc):
            # Rc: complementarity target per block (matrix or vector), or None for 0
            h = data.b.copy()
            T = []
            for bi, blk in enumerate(blocks):
                if blk.kind == DIAG:
                    t = X[bi] * Rd[bi] / Z[bi]
                    if Rc is not None:
                        t = t - Rc[bi] / Z[bi]
                else:
                    t = X[bi] @ Rd[bi] @ Zinv[bi]
                    if Rc is not None:
                        t = t - Rc[bi] @ Zinv[bi]
                    t = (t + t.T) / 2
                T.append(t)
            h += data.A(T)
            dy = sla.cho_solve(fac, h)
            dX, dZ = recover(dy, Rc)
            return dX, dy, dZ

        dXa, dya, dZa = direction(None)
        ap = min(1.0, _max_step(X, dXa, Xchol))
        ad = min(1.0, _max_step(Z, dZa, Zchol))
        mu_aff = _inner([x + ap * d for x, d in zip(X, dXa)],
                        [z + ad * d for z, d in zip(Z, dZa)]) / data.dims
        sigma = min(1.0, max(0.0, mu_aff / mu) ** 3)
        Rc = []
        for bi, blk in enumerate(blocks):
            if blk.kind == DIAG:
                Rc.append(sigma * mu - dXa[bi] * dZa[bi])
            else:
                Rc.append(sigma * mu * np.eye(blk.size) - dXa[bi] @ dZa[bi])
        dX, dy, dZ = direction(Rc)
        ap = min(1.0, opts.step_fraction * _max_step(X, dX, Xchol))
        ad = min(1.0, opts.step_fraction * _max_step(Z, dZ, Zchol))
        if not (np.isfinite(ap) and np.isfinite(ad)) or max(ap, ad) < 1e-12:
            status = NUMERICAL_TROUBLE
            break
        for _ in range(30):
            Xn = [x + ap * d for x, d in zip(X, dX)]
            Zn = [z + ad * d for z, d in zip(Z, dZ)]
            if _positive(Xn) and _positive(Zn):
                break
            ap, ad = 0.8 * ap, 0.8 * ad
        else:
            status = NUMERICAL_TROUBLE
            break
        X, Z = Xn, Zn
        y = y + ad * dy

    return _package(p, status, X, y, it, certificate, opts)


def _package(p: ConicProgram, status, X, y, it, certificate, opts) -> Solution:
    x = -y
    Y = [B.copy() for B in X]
    if status == INFEASIBLE:
        Ycert = certificate["Y"]
        # Farkas: <F_i, Y> = 0, <F_0, Y> = 1, Y >= 0
        res = float(np.linalg.norm(p.apply_adjoint(Ycert)))
        ok = res <= opts.cert_tol and abs(p.constant_inner(Ycert) - 1.0) <= opts.cert_tol
        certificate["residual"] = res
        if not ok:
            status = NUMERICAL_TROUBLE
    elif status == UNBOUNDED:
        xr = certificate["x"]
        # ray: sum x_i F_i >= 0 and c^T x improving
        S = p.slack(xr)
        F0 = p.dense_blocks(p.F0)
        S = [s + f for s, f in zip(S, F0)]
        from .solution import min_eig
        neg = max(0.0, -min((min_eig(B) for B in S), default=0.0))
        cnorm = np.array([float(v) for v in p.normalized().c])
        ok = neg <= opts.cert_tol and float(cnorm @ xr) < 0
        certificate["residual"] = neg
        if not ok:
            status = NUMERICAL_TROUBLE

    residuals = compute_residuals(p, x, Y)
    pobj, dobj = objectives(p, x, Y)
    if status == INFEASIBLE:
        pobj = math.inf if p.sense == "min" else -math.inf
        dobj = pobj
    elif status == UNBOUNDED:
        pobj = -math.inf if p.sense == "min" else math.inf
        dobj = pobj
    S = p.slack(x)
    return Solution(status, x, S, Y, pobj, dobj, it, residuals, certificate)
