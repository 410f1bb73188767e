"""The k-point bound Delta_k(G) and the copositive LP hierarchy xi_r(G)*, xi_r(G)."""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import families as fam
from . import operators as op
from .conic import (DIAG, INFEASIBLE, OPTIMAL, PSD, UNBOUNDED, ConicProgram, ProgramBuilder,
                    SolverOptions, check_solution, solve_conic, solve_lp_exact)
from .exact import is_exact, is_psd_exact
from .graphs import Graph, VertexSet, alpha_exact, maximum_independent_set, members, popcount
from .report import VerificationReport


@dataclass
class MeasureVector:
    family: fam.IndexedFamily
    values: list

    def __post_init__(self):
        if len(self.values) != len(self.family):
            raise ValueError("measure length does not match its family")

    def __getitem__(self, element):
        return self.values[self.family.index(element)]

    def mass_on_rank(self, r: int):
        return sum((v for e, v in zip(self.family, self.values) if popcount(e) == r),
                   self.values[0] * 0)


@dataclass
class BoundResult:
    name: str
    value: float
    status: str
    witness: object = None
    report: VerificationReport | None = None
    solution: object = None
    extra: dict = field(default_factory=dict)


@dataclass
class Formulation:
    program: ConicProgram
    meta: dict


# -- Delta_k ----------------------------------------------------------------------

def build_delta(G: Graph, k: int, reduce: bool = False) -> Formulation:
    """Delta_k(G) with nu as the vector of variables.

    Slack blocks: a diagonal block holding nu over I_k (nu(empty) fixed to 1),
    and for each Q in I_{k-2} a PSD block over I_1 whose (S, T) entry is
    nu(S u T u Q), or identically zero when that union is dependent.

    With ``reduce=True`` each Q-block keeps only the rows {} and {y} with
    y not in Q and Q + y independent. The dropped rows are either zero or
    copies of the {} row, so the feasible set is unchanged, but the reduced
    blocks admit positive definite points, which the interior-point method
    needs to converge cleanly. Blocks left with a single row are implied by
    nu >= 0 and are omitted.
    """
    if k < 2:
        raise ValueError("Delta_k needs k >= 2")
    sets = fam.independent_sets(G, k)
    base = fam.independent_sets(G, k - 2)
    i1 = fam.independent_sets(G, 1).elements
    b = ProgramBuilder("max")
    diag = b.add_block(DIAG, len(sets))
    var = [None] + [b.add_var(1 if popcount(I) == 1 else 0, f"nu{members(I)}") for I in sets.elements[1:]]
    b.const(diag, 0, 0, 1)
    for j in range(1, len(sets)):
        b.coeff(var[j], diag, j, j, 1)
    rows_of = {}
    for Q in base:
        if reduce:
            rows = [S for S in i1 if not S & Q and G.is_independent(S | Q)]
            if len(rows) < 2:
                continue
        else:
            rows = list(i1)
        blk = b.add_block(PSD, len(rows))
        rows_of[Q] = rows
        for a, S in enumerate(rows):
            for c in range(a, len(rows)):
                idx = sets.get(S | rows[c] | Q)
                if idx is None:
                    continue
                if idx == 0:
                    b.const(blk, a, c, 1)
                else:
                    b.coeff(var[idx], blk, a, c, 1)
    prog = b.build()
    prog.check_caps()
    return Formulation(prog, {"sets": sets, "base": base, "k": k, "rows": rows_of})


def dirac_solution(G: Graph, I: VertexSet, k: int) -> MeasureVector:
    if not G.is_independent(I):
        raise ValueError(f"{members(I)} is not independent")
    sets = fam.independent_sets(G, k)
    return MeasureVector(sets, [Fraction(int(R & ~I == 0)) for R in sets])


def verify_delta_feasible(G: Graph, k: int, nu: MeasureVector | list, tol: float = 1e-6) -> VerificationReport:
    sets = fam.independent_sets(G, k)
    values = nu.values if isinstance(nu, MeasureVector) else list(nu)
    if isinstance(nu, MeasureVector) and nu.family != sets:
        raise ValueError("measure family is not I_k for this graph")
    if len(values) != len(sets):
        raise ValueError("measure length does not match I_k")
    rep = VerificationReport()
    rep.add("nu_nonnegative", min(values), 0, ">=", tol)
    rep.add("nu_empty_is_one", values[0], 1, "==", tol)
    exact = tol == 0 and is_exact(values)
    for Q, M in op.bk_slices(G, k, values).items():
        name = f"slice_psd{members(Q)}"
        if exact:
            rep.add(name, 0 if is_psd_exact(M) else -1, 0, ">=", 0.0)
        else:
            A = np.array(M, dtype=float)
            lam = float(np.linalg.eigvalsh(A)[0])
            rep.add(name, lam, 0, ">=", tol * (1 + float(np.linalg.norm(A, 2))))
    return rep


def solve_delta(G: Graph, k: int, opts: SolverOptions | None = None, tol: float = 1e-6,
                reduce: bool = True) -> BoundResult:
    form = build_delta(G, k, reduce)
    sol = solve_conic(form.program, opts)
    sets = form.meta["sets"]
    nu = MeasureVector(sets, [1.0] + [float(v) for v in sol.x])
    rep = verify_delta_feasible(G, k, nu, tol)
    value = sol.primal_objective
    return BoundResult(f"Delta_{k}", value, sol.status, nu, rep, sol,
                       {"dual_bound": sol.dual_objective,
                        "residuals": check_solution(form.program, sol, tol)})


def restrict_measure(G: Graph, nu: MeasureVector, k: int) -> MeasureVector:
    """Restriction of a measure on I_{k'} (k' >= k) to I_k."""
    sets = fam.independent_sets(G, k)
    return MeasureVector(sets, [nu[I] for I in sets])


def delta_objective(nu: MeasureVector):
    return nu.mass_on_rank(1)


# -- xi_r(G)* and xi_r(G) ----------------------------------------------------------

def _tr_rows(n: int, r: int, form: str):
    T = op.op_Tr(n, r, form=form, pairs="symmetric")
    rows: dict[int, list] = {}
    for i, j, v in T.entries:
        rows.setdefault(i, []).append((j, v))
    return T, rows


def build_xi_dual(G: Graph, r: int, form: str = "multiset") -> Formulation:
    """min lambda s.t. Z(x,x) <= lambda-1, Z(x,y) <= -1 off edges, T_r Z >= 0."""
    n = G.n
    pairs = fam.multisets(n, 2)
    b = ProgramBuilder("min")
    lam = b.add_var(1, "lambda")
    z = [b.add_var(0, f"Z{p}") for p in pairs]
    dblk = b.add_block(DIAG, n)
    for v in range(n):
        b.coeff(lam, dblk, v, v, 1)
        b.coeff(z[pairs.index((v, v))], dblk, v, v, -1)
        b.const(dblk, v, v, -1)
    non_edges = G.non_edges()
    if non_edges:
        eblk = b.add_block(DIAG, len(non_edges))
        for i, (u, v) in enumerate(non_edges):
            b.coeff(z[pairs.index((u, v))], eblk, i, i, -1)
            b.const(eblk, i, i, -1)
    T, rows = _tr_rows(n, r, form)
    tblk = b.add_block(DIAG, len(T.row_space))
    for i, ents in rows.items():
        for j, v in ents:
            b.coeff(z[j], tblk, i, i, v)
    prog = b.build()
    prog.check_caps()
    return Formulation(prog, {"pairs": pairs, "r": r, "form": form, "T": T})


def build_xi_primal(G: Graph, r: int, form: str = "multiset") -> Formulation:
    """max alpha(V^2) s.t. alpha(Delta) = 1, alpha_E = 0, alpha = T_r^* beta, beta >= 0.

    Posed as the matrix (dual) side of an SDPA program: beta is the diagonal
    block, the equalities are <F_i, beta> = c_i and F_0 holds the objective.
    alpha = T_r^* beta is entrywise nonnegative for beta >= 0 because every
    T_r row is. The vector side carries one multiplier for alpha(Delta) and
    one per edge.
    """
    n = G.n
    T, rows = _tr_rows(n, r, form)
    scale = Fraction(1, (r + 2) * (r + 1)) if form == "multiset" else Fraction(1)
    pairs = T.col_space
    edges = G.sorted_edges()
    b = ProgramBuilder("min")
    diag_var = b.add_var(1, "alpha_diagonal")
    edge_var = {e: b.add_var(0, f"alpha_edge{e}") for e in edges}
    blk = b.add_block(DIAG, len(T.row_space))
    for i, ents in rows.items():
        total = Fraction(0)
        for j, v in ents:
            u, w = pairs[j]
            total += v
            if u == w:
                b.coeff(diag_var, blk, i, i, v * scale)
            elif (u, w) in edge_var:
                b.coeff(edge_var[u, w], blk, i, i, v * scale / 2)
        b.const(blk, i, i, -total * scale)  # F_0 entry = alpha(V^2) coefficient
    prog = b.build()
    prog.check_caps()
    return Formulation(prog, {"T": T, "scale": scale, "r": r, "form": form})


def alpha_from_beta(n: int, r: int, beta, form: str = "multiset"):
    """alpha = T_r^* beta as a symmetric n x n matrix (exact if beta is)."""
    T = op.op_Tr(n, r, form=form, pairs="symmetric")
    scale = Fraction(1, (r + 2) * (r + 1)) if form == "multiset" else Fraction(1)
    if is_exact(beta):
        vec = [v * scale for v in T.rapply(beta)]
    else:
        vec = list((T.to_dense().T @ np.asarray(beta, dtype=float)) * float(scale))
    return op.pairs_to_matrix(vec, n, measure=True)


def _finite_or_inf(status: str, value: float, minimise: bool) -> float:
    if status == INFEASIBLE:
        return math.inf if minimise else -math.inf
    if status == UNBOUNDED:
        return -math.inf if minimise else math.inf
    return value


def xi_dual_witness_checks(G: Graph, lam, Z, tol: float = 1e-6) -> VerificationReport:
    """Feasibility of (lambda, Z) for xi_r* and the bound lambda >= |I| on a
    maximum independent set I via 0 <= sum_{x,y in I} Z(x,y)."""
    n = G.n
    rep = VerificationReport()
    rep.add("diag_bound", float(lam) - 1 - max(float(Z[v][v]) for v in range(n)), 0, ">=", tol)
    ne = G.non_edges()
    if ne:
        rep.add("non_edge_bound", max(float(Z[u][v]) for u, v in ne), -1, "<=", tol)
    I = members(maximum_independent_set(G))
    block = sum(float(Z[x][y]) for x in I for y in I)
    rep.add("independent_block_sum", block, 0, ">=", tol * (1 + len(I) ** 2))
    rep.add("lambda_at_least_alpha", float(lam), len(I), ">=", tol)
    return rep


def solve_xi_dual(G: Graph, r: int, exact: bool = False, form: str = "multiset",
                  opts: SolverOptions | None = None, tol: float = 1e-6) -> BoundResult:
    f = build_xi_dual(G, r, form)
    if exact:
        rs = solve_lp_exact(f.program)
        if rs.status != OPTIMAL:
            return BoundResult(f"xi_{r}*", rs.objective, rs.status, solution=rs)
        lam, zvec = rs.x[0], rs.x[1:]
        Z = op.pairs_to_matrix(zvec, G.n, measure=False)
        rep = xi_dual_witness_checks(G, lam, Z, 0.0)
        return BoundResult(f"xi_{r}*", rs.objective, rs.status, {"lambda": lam, "Z": Z}, rep, rs)
    sol = solve_conic(f.program, opts)
    value = _finite_or_inf(sol.status, sol.primal_objective, True)
    if sol.status != OPTIMAL:
        return BoundResult(f"xi_{r}*", value, sol.status, solution=sol)
    lam, zvec = sol.x[0], list(sol.x[1:])
    Z = op.pairs_to_matrix(zvec, G.n, measure=False)
    rep = xi_dual_witness_checks(G, lam, Z, tol)
    return BoundResult(f"xi_{r}*", value, sol.status, {"lambda": float(lam), "Z": np.array(Z, dtype=float)},
                       rep, sol, {"residuals": check_solution(f.program, sol, tol)})


def xi_primal_witness_checks(G: Graph, r: int, beta, alpha, tol: float = 1e-6) -> VerificationReport:
    n = G.n
    rep = VerificationReport()
    rep.add("beta_nonnegative", min(beta), 0, ">=", tol)
    rep.add("alpha_nonnegative", min(min(row) for row in alpha), 0, ">=", tol)
    rep.add("alpha_diagonal_one", sum(alpha[v][v] for v in range(n)), 1, "==", tol)
    if G.edges:
        rep.add("alpha_edges_zero", max(abs(alpha[u][v]) for u, v in G.edges), 0, "<=", tol)
    return rep


def _beta_side(status: str) -> tuple[str, float]:
    """Status of the beta maximisation from the status of its vector dual."""
    if status == INFEASIBLE:
        return UNBOUNDED, math.inf
    if status == UNBOUNDED:
        return INFEASIBLE, -math.inf
    return status, math.nan


def solve_xi_primal(G: Graph, r: int, exact: bool = False, form: str = "multiset",
                    opts: SolverOptions | None = None, tol: float = 1e-6) -> BoundResult:
    f = build_xi_primal(G, r, form)
    name = f"xi_{r}"
    if exact:
        rs = solve_lp_exact(f.program)
        if rs.status != OPTIMAL:
            status, value = _beta_side(rs.status)
            return BoundResult(name, value, status, solution=rs)
        beta = rs.Y[0]
        alpha = alpha_from_beta(G.n, r, beta, form)
        value = sum((sum(row) for row in alpha), Fraction(0))
        rep = xi_primal_witness_checks(G, r, beta, alpha, 0.0)
        return BoundResult(name, value, rs.status, {"beta": beta, "alpha": alpha}, rep, rs)
    sol = solve_conic(f.program, opts)
    if sol.status != OPTIMAL:
        status, value = _beta_side(sol.status)
        return BoundResult(name, value, status, solution=sol)
    beta = list(sol.Y[0])
    alpha = alpha_from_beta(G.n, r, beta, form)
    rep = xi_primal_witness_checks(G, r, beta, alpha, tol)
    return BoundResult(name, sol.dual_objective, sol.status,
                       {"beta": np.array(beta), "alpha": np.array(alpha, dtype=float)}, rep, sol,
                       {"residuals": check_solution(f.program, sol, tol)})


# -- sweep -------------------------------------------------------------------------

@dataclass
class SweepRow:
    quantity: str
    index: int
    value: float
    status: str
    runtime: float


@dataclass
class SweepTable:
    alpha: int
    rows: list[SweepRow]
    report: VerificationReport

    def value(self, quantity: str, index: int) -> float:
        for row in self.rows:
            if row.quantity == quantity and row.index == index:
                return row.value
        raise KeyError((quantity, index))


def _cell(args):
    G, quantity, index, exact = args
    t0 = time.perf_counter()
    if quantity == "Delta":
        res = solve_delta(G, index)
    elif quantity == "xi*":
        res = solve_xi_dual(G, index, exact=exact)
    else:
        res = solve_xi_primal(G, index, exact=exact)
    return SweepRow(quantity, index, float(res.value), res.status, time.perf_counter() - t0)


def hierarchy_sweep(G: Graph, kmax: int, rmax: int, jobs: int = 1, exact: bool = False,
                    tol: float = 1e-5, mono_tol: float = 1e-6) -> SweepTable:
    cells = [(G, "Delta", k, exact) for k in range(2, kmax + 1)]
    cells += [(G, q, r, exact) for r in range(0, rmax + 1) for q in ("xi*", "xi")]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_cell, cells))
    else:
        rows = [_cell(c) for c in cells]
    alpha = alpha_exact(G)
    table = SweepTable(alpha, rows, VerificationReport())
    rep = table.report
    deltas = [table.value("Delta", k) for k in range(2, kmax + 1)]
    for k, (a, b) in enumerate(zip(deltas, deltas[1:]), start=2):
        rep.add(f"Delta_{k}>=Delta_{k + 1}", a, b, ">=", mono_tol)
    for k, d in enumerate(deltas, start=2):
        rep.add(f"Delta_{k}>=alpha", d, alpha, ">=", tol)
    xis = [table.value("xi*", r) for r in range(1, rmax + 1)]
    for r, (a, b) in enumerate(zip(xis, xis[1:]), start=1):
        if math.isfinite(a) or math.isfinite(b):
            rep.add(f"xi_{r}*>=xi_{r + 1}*", a, b, ">=", mono_tol)
    for r in range(0, rmax + 1):
        xs, xp = table.value("xi*", r), table.value("xi", r)
        if math.isfinite(xs) or math.isfinite(xp):
            rep.add(f"xi_{r}<=xi_{r}*", xp, xs, "<=", tol)
        if r + 2 <= kmax and math.isfinite(xp):
            rep.add(f"Delta_{r + 2}<=xi_{r}", table.value("Delta", r + 2), xp, "<=", tol)
    return table
