"""From a k-point witness nu to a feasible solution (beta, alpha) of xi_r.

Everything works over floats or, when nu is rational, exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import families as fam
from . import operators as op
from .exact import is_exact
from .graphs import Graph, popcount, surjection_count
from .hierarchies import MeasureVector, alpha_from_beta
from .report import VerificationReport


class DegenerateInput(ValueError):
    pass


@dataclass
class MomentVector:
    values: list

    def __getitem__(self, t):
        return self.values[t]

    def __len__(self):
        return len(self.values)


@dataclass
class TransferResult:
    beta: MeasureVector
    alpha: list[list]
    phi: MomentVector
    r: int

    @property
    def objective(self):
        return sum((sum(row) for row in self.alpha), self.alpha[0][0] * 0)


def _values(G: Graph, nu, k: int | None = None):
    if isinstance(nu, MeasureVector):
        if nu.family.kind != "IndependentSets":
            raise ValueError("nu must be a measure on independent sets")
        return nu.family, nu.values
    if k is None:
        raise ValueError("k is needed for a bare value list")
    sets = fam.independent_sets(G, k)
    if len(nu) != len(sets):
        raise ValueError("nu does not live on I_k")
    return sets, list(nu)


def phi_moments(G: Graph, nu, tmax: int, k: int | None = None) -> MomentVector:
    sets, vals = _values(G, nu, k)
    zero = vals[0] * 0
    out = []
    for t in range(tmax + 1):
        out.append(sum((surjection_count(t, popcount(I)) * v for I, v in zip(sets, vals) if v), zero))
    return MomentVector(out)


def transfer(G: Graph, nu: MeasureVector, r: int, tol: float = 1e-9) -> TransferResult:
    sets, vals = _values(G, nu)
    if sets.params[1] < r + 2:
        raise ValueError(f"nu must live on I_{r + 2} or larger")
    exact = is_exact(vals)
    phi = phi_moments(G, nu, r + 2)
    if phi[1] <= (0 if exact else tol):
        raise DegenerateInput("nu puts no mass on singletons")
    if phi[r + 1] <= (0 if exact else tol):
        raise DegenerateInput(f"Phi_{r + 1} is not positive")
    norm = phi[r + 1]
    space = fam.multisets(G.n, r + 2)
    beta = []
    for m in space:
        idx = sets.get(op.flatten(m))
        if idx is None or not vals[idx]:
            beta.append(Fraction(0) if exact else 0.0)
        else:
            beta.append(op.multinomial(m) * vals[idx] / norm)
    alpha = alpha_from_beta(G.n, r, beta, "multiset")
    return TransferResult(MeasureVector(space, beta), alpha, phi, r)


def verify_transfer(G: Graph, r: int, result: TransferResult, nu, tol: float = 1e-6) -> VerificationReport:
    _, vals = _values(G, nu)
    if len(result.alpha) != G.n or result.beta.family != fam.multisets(G.n, r + 2):
        raise ValueError("transfer result does not match the graph and level")
    a = result.alpha
    n = G.n
    obj = sum(v for I, v in zip(fam.independent_sets(G, 1), vals) if popcount(I) == 1)
    rep = VerificationReport()
    rep.add("beta_nonnegative", min(result.beta.values), 0, ">=", tol)
    rep.add("alpha_nonnegative", min(min(row) for row in a), 0, ">=", tol)
    rep.add("alpha_diagonal_mass", sum(a[v][v] for v in range(n)), 1, "==", tol)
    rep.add("alpha_edges_zero", max((abs(a[u][v]) for u, v in G.edges), default=0), 0, "<=", tol)
    rep.add("alpha_total_vs_objective", result.objective, obj, ">=", tol)
    return rep


def mu_matrix(G: Graph, nu: MeasureVector, r: int, t: int) -> list[list]:
    """mu(S, T) = sum over Q in I_r of N_t(Q) nu(S u T u Q), over I_1 x I_1."""
    if not 0 <= t <= r:
        raise ValueError("mu is only defined here for 0 <= t <= r")
    sets, vals = _values(G, nu)
    if sets.params[1] != r + 2:
        raise ValueError(f"nu must live on I_{r + 2}")
    slices = op.bk_slices(G, r + 2, vals)
    size = G.n + 1
    zero = vals[0] * 0
    M = [[zero] * size for _ in range(size)]
    for Q, S in slices.items():
        w = surjection_count(t, popcount(Q))
        if w:
            for i in range(size):
                for j in range(size):
                    M[i][j] += w * S[i][j]
    return M


def mu_block_sums(M) -> dict[tuple[int, int], object]:
    """mu(I_{=i} x I_{=j}) for i, j in {0, 1}; index 0 of I_1 is the empty set."""
    n = len(M) - 1
    ones = range(1, n + 1)
    return {(0, 0): M[0][0],
            (0, 1): sum((M[0][j] for j in ones), M[0][0] * 0),
            (1, 0): sum((M[i][0] for i in ones), M[0][0] * 0),
            (1, 1): sum((M[i][j] for i in ones for j in ones), M[0][0] * 0)}


def moment_psd_check(phi: MomentVector, r: int, tol: float = 1e-6) -> VerificationReport:
    if len(phi) < r + 3:
        raise ValueError(f"need moments up to Phi_{r + 2}")
    rep = VerificationReport()
    for t in range(r + 1):
        a, b, c = phi[t], phi[t + 1], phi[t + 2]
        rep.add(f"det_{t}", a * c - b * b, 0, ">=", tol)
        rep.add(f"trace_{t}", a + c, 0, ">=", tol)
    if phi[0] and phi[r + 1]:
        rep.add("ratio_chain", phi[r + 2] / phi[r + 1], phi[1] / phi[0], ">=", tol)
    return rep


def describe(result: TransferResult) -> dict:
    return {"r": result.r, "phi": list(result.phi.values),
            "beta_support": [list(m) for m, v in zip(result.beta.family, result.beta.values) if v],
            "alpha": result.alpha}

