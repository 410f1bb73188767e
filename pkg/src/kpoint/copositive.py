"""Inner approximations C_r of the copositive cone and the interior point Z0.

A symmetric Z is in C_r when every multiset m of size r+2 over V has

    s(m) = sum_v m_v (m_v - 1) Z[v][v] + sum_{v != w} m_v m_w Z[v][w] >= 0,

which is T_r Z >= 0 with the tuple rows collapsed.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import families as fam
from .conic import DIAG, OPTIMAL, PSD, ProgramBuilder, SolverOptions, solve_conic
from .conic.solution import min_eig
from .exact import RATIONAL_DENOMINATOR, is_exact, rationalize
from .graphs import Graph
from .report import VerificationReport, jsonable

MEMBER = "Member"
NON_MEMBER = "NonMember"
MAX_MULTISETS = 2_000_000


class CopositiveError(ValueError):
    pass


@dataclass
class CopositivityCertificate:
    r: int
    mode: str
    verdict: str
    worst_multiset: tuple[int, ...]
    worst_sum: object
    checked: int

    @property
    def member(self) -> bool:
        return self.verdict == MEMBER

    def to_dict(self) -> dict:
        out = {"level": self.r, "mode": self.mode, "verdict": self.verdict,
               "worst_multiset": list(self.worst_multiset), "sum": jsonable(self.worst_sum),
               "multisets_checked": self.checked}
        if isinstance(self.worst_sum, Fraction):
            out["sum_exact"] = str(self.worst_sum)
        if self.mode == "exact":
            out["rational_denominator"] = RATIONAL_DENOMINATOR
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _square(Z) -> int:
    n = len(Z)
    if any(len(row) != n for row in Z):
        raise CopositiveError("matrix must be square")
    return n


def _symmetric(Z, exact: bool):
    n = _square(Z)
    if exact:
        M = [[rationalize(v) for v in row] for row in Z]
        if any(M[i][j] != M[j][i] for i in range(n) for j in range(i)):
            raise CopositiveError("matrix is not symmetric")
        return M
    M = np.asarray(Z, dtype=float)
    if not np.allclose(M, M.T, atol=1e-12, rtol=0):
        raise CopositiveError("matrix is not symmetric")
    return (M + M.T) / 2


def _check_cap(n: int, r: int):
    if r < 0:
        raise CopositiveError("level must be nonnegative")
    count = math.comb(n + r + 1, r + 2)
    if count > MAX_MULTISETS:
        raise CopositiveError(f"{count} multisets at level {r} exceeds the cap")
    return count


def multiset_sum(Z, m) -> object:
    """s(m) for one multiset (a sorted vertex tuple)."""
    counts = fam.multiplicities(m, len(Z))
    total = Z[0][0] * 0
    for v, cv in enumerate(counts):
        if not cv:
            continue
        total += cv * (cv - 1) * Z[v][v]
        for w, cw in enumerate(counts):
            if cw and w != v:
                total += cv * cw * Z[v][w]
    return total


def cr_membership(Z, r: int, mode: str = "float", tol: float = 1e-9) -> CopositivityCertificate:
    """Scan every multiset sum at level r; the worst multiset is the first
    minimiser in lexicographic order."""
    if mode not in ("float", "exact"):
        raise CopositiveError(f"unknown mode {mode!r}")
    n = _square(Z)
    count = _check_cap(n, r)
    space = fam.multisets(n, r + 2)
    if mode == "exact":
        M = _symmetric(Z, True)
        best, arg = None, None
        for m in space:
            s = multiset_sum(M, m)
            if best is None or s < best:
                best, arg = s, m
        verdict = MEMBER if best >= 0 else NON_MEMBER
        return CopositivityCertificate(r, mode, verdict, arg, best, count)
    M = _symmetric(Z, False)
    C = np.array([fam.multiplicities(m, n) for m in space], dtype=float)
    sums = np.einsum("iv,vw,iw->i", C, M, C) - C @ np.diag(M)
    j = int(np.argmin(sums))
    best = float(sums[j])
    verdict = MEMBER if best >= -tol else NON_MEMBER
    return CopositivityCertificate(r, mode, verdict, space[j], best, count)


def tuple_row_sums(Z, r: int):
    """Independent route: for every tuple x in V^{r+2}, sum_{i != j} Z(x_i, x_j)."""
    n = _square(Z)
    if n ** (r + 2) > fam.MAX_TUPLES:
        raise CopositiveError("tuple enumeration too large")
    M = [[rationalize(v) for v in row] for row in Z]
    for x in itertools.product(range(n), repeat=r + 2):
        yield x, sum((M[a][b] for i, a in enumerate(x) for j, b in enumerate(x) if i != j), Fraction(0))


def revalidate(Z, cert: CopositivityCertificate) -> bool:
    """Re-check a verdict without the multiset formula."""
    if cert.verdict == NON_MEMBER:
        M = [[rationalize(v) for v in row] for row in Z]
        m = cert.worst_multiset
        s = sum((M[a][b] for i, a in enumerate(m) for j, b in enumerate(m) if i != j), Fraction(0))
        return s < 0 if cert.mode == "exact" else float(s) < 0
    worst = min(s for _, s in tuple_row_sums(Z, cert.r))
    return worst >= 0 if cert.mode == "exact" else float(worst) >= -1e-9


@dataclass
class LevelSearch:
    rcap: int
    level: int | None
    certificates: list[CopositivityCertificate] = field(default_factory=list)
    nesting_ok: bool = True

    @property
    def found(self) -> bool:
        return self.level is not None

    def describe(self) -> str:
        return f"r = {self.level}" if self.found else f"NotFoundWithin({self.rcap})"

    def to_dict(self) -> dict:
        return {"rcap": self.rcap, "level": self.level, "found": self.found,
                "nesting_ok": self.nesting_ok,
                "certificates": [c.to_dict() for c in self.certificates]}


def min_r(Z, rcap: int = 6, mode: str = "float", tol: float = 1e-9) -> LevelSearch:
    """Smallest r <= rcap with Z in C_r. A hit below rcap is confirmed at r+1."""
    out = LevelSearch(rcap, None)
    for r in range(rcap + 1):
        cert = cr_membership(Z, r, mode, tol)
        out.certificates.append(cert)
        if cert.member:
            out.level = r
            if r < rcap:
                nxt = cr_membership(Z, r + 1, mode, tol)
                out.certificates.append(nxt)
                out.nesting_ok = nxt.member
            break
    return out


# -- the interior point Z0 ----------------------------------------------------------

def find_F(G: Graph, opts: SolverOptions | None = None) -> np.ndarray:
    """PSD F with F(x, y) <= -1 on non-edges, minimising the trace."""
    n = G.n
    ne = G.non_edges()
    if not ne:
        return np.zeros((n, n))
    pairs = fam.multisets(n, 2)
    b = ProgramBuilder("min")
    var = {p: b.add_var(1 if p[0] == p[1] else 0, f"F{p}") for p in pairs}
    psd = b.add_block(PSD, n)
    for (v, w), x in var.items():
        b.coeff(x, psd, v, w, 1)
    diag = b.add_block(DIAG, len(ne))
    for i, e in enumerate(ne):
        b.coeff(var[e], diag, i, i, -1)
        b.const(diag, i, i, -1)
    sol = solve_conic(b.build(), opts)
    if sol.status != OPTIMAL:
        raise CopositiveError(f"SDP for F ended with status {sol.status}")
    F = np.zeros((n, n))
    for (v, w), x in var.items():
        F[v, w] = F[w, v] = sol.x[x]
    return F


def check_F(G: Graph, F, tol_eig: float = 1e-7, tol_edge: float = 1e-6) -> VerificationReport:
    F = np.asarray(F, dtype=float)
    rep = VerificationReport()
    rep.add("F_min_eigenvalue", min_eig(F), 0, ">=", tol_eig * (1 + float(np.linalg.norm(F, 2))))
    ne = G.non_edges()
    if ne:
        rep.add("F_non_edge_max", max(F[u, v] for u, v in ne), -1, "<=", tol_edge)
    return rep


def build_Z0(F, theta=Fraction(1, 4), G: Graph | None = None, tol: float = 1e-6):
    """Z0 = theta J + (1 - theta) 2F; theta <= 1/3 keeps Z0 <= -1 where F <= -1.

    Returns the matrix and, when ``G`` is given, a report of the entrywise
    bounds on non-edges. Rational F and theta give a rational Z0.
    """
    if not 0 < theta < 1:
        raise CopositiveError("theta must lie in (0, 1)")
    if theta > Fraction(1, 3):
        raise CopositiveError(f"theta = {theta} > 1/3 does not keep non-edge entries <= -1")
    if is_exact([theta]) and is_exact([v for row in F for v in row]):
        F = np.array([[Fraction(v) for v in row] for row in F], dtype=object)
        th = Fraction(theta)
    else:
        F = np.asarray(F, dtype=float)
        th = float(theta)
    Z0 = th + (1 - th) * 2 * F
    rep = VerificationReport()
    if G is not None:
        ne = G.non_edges()
        if ne:
            worst = max(Z0[u, v] for u, v in ne)
            rep.add("Z0_non_edge_max", worst, -1, "<=", tol)
        rep.add("Z0_symmetric", max(abs(v) for v in (Z0 - Z0.T).flat), 0, "<=", tol)
    return Z0, rep


def perturb_certify(G: Graph, Z, lam, Z0, eps, rcap: int = 6, tol: float = 1e-6) -> tuple[LevelSearch, VerificationReport]:
    """W = eps Z0 + (1 - eps) Z keeps the xi-type constraints with
    lambda' = eps lambda0 + (1 - eps) lambda, where lambda0 = 1 + max diag Z0."""
    if not 0 <= eps <= 1:
        raise CopositiveError("eps must lie in [0, 1]")
    Z = np.asarray(Z, dtype=float)
    Z0 = np.asarray(Z0, dtype=float)
    e = float(eps)
    W = e * Z0 + (1 - e) * Z
    lam0 = 1 + float(np.max(np.diag(Z0)))
    lam_w = e * lam0 + (1 - e) * float(lam)
    rep = VerificationReport()
    rep.add("W_diagonal_bound", float(np.max(np.diag(W))), lam_w - 1, "<=", tol)
    ne = G.non_edges()
    if ne:
        rep.add("W_non_edge_max", max(W[u, v] for u, v in ne), -1, "<=", tol)
    return min_r(W, rcap), rep
