"""Quick invariant suite behind ``kpoint selftest``."""
from __future__ import annotations

import math
import random
from fractions import Fraction

from . import copositive as cop
from .conic import OPTIMAL, ProgramBuilder, DIAG, export_sdpa, import_sdpa, solve_conic, solve_lp_exact
from .graphs import alpha_enumerate, alpha_exact, complete, cycle, empty, gnp, kneser, is_isomorphic, petersen
from .hierarchies import (build_delta, dirac_solution, solve_delta, solve_xi_dual, solve_xi_primal,
                          verify_delta_feasible)
from .identities import operator_suite
from .report import VerificationReport
from .transfer import moment_psd_check, transfer, verify_transfer


def random_lp(rng: random.Random, m: int = 3, rows: int = 5):
    """max c^T x s.t. A x <= b, x >= 0 with small integer data (always feasible, bounded)."""
    b = ProgramBuilder("max")
    xs = [b.add_var(rng.randint(1, 5)) for _ in range(m)]
    blk = b.add_block(DIAG, rows + m)
    for i in range(rows):
        for x in xs:
            b.coeff(x, blk, i, i, -rng.randint(1, 6))
        b.const(blk, i, i, rng.randint(1, 20))
    for j, x in enumerate(xs):
        b.coeff(x, blk, rows + j, rows + j, 1)
    return b.build()


def run_selftest(seed: int = 0) -> VerificationReport:
    rep = VerificationReport()
    C5 = cycle(5)

    for G in (C5, empty(3), complete(3)):
        rep.extend(operator_suite(G, rmax=2, smax=3, seed=seed), f"{G.n}:{len(G.edges)}:")

    rep.add("alpha_petersen", alpha_exact(petersen()), 4, "==", 0)
    rep.add("alpha_vs_enumeration", alpha_exact(gnp(12, 0.3, seed)), alpha_enumerate(gnp(12, 0.3, seed)), "==", 0)
    rep.add("kneser_5_2_is_petersen", int(is_isomorphic(kneser(5, 2), petersen())), 1, "==", 0)

    d2 = solve_delta(C5, 2)
    rep.add("delta2_C5_sqrt5", d2.value, math.sqrt(5), "==", 1e-4)
    rep.extend(d2.report, "delta2_C5:")
    d4 = solve_delta(C5, 4)
    rep.add("delta4_C5_alpha", d4.value, 2, "==", 1e-4)
    rep.extend(verify_delta_feasible(C5, 3, dirac_solution(C5, 0b101, 3), 0), "dirac:")

    t = transfer(C5, d4.witness, 2)
    rep.extend(verify_transfer(C5, 2, t, d4.witness), "transfer:")
    rep.extend(moment_psd_check(t.phi, 2), "moments:")

    rep.add("xi0_C5_infinite", solve_xi_dual(C5, 0).value, math.inf, ">=", 0)
    xd, xp = solve_xi_dual(C5, 2, exact=True), solve_xi_primal(C5, 2, exact=True)
    rep.add("xi2_C5_strong_duality", xp.value, xd.value, "==", 0)
    rep.add("xi2_C5_above_delta4", xp.value, d4.value, ">=", 1e-5)
    rep.add("xi1_K4", solve_xi_dual(complete(4), 1).value, 1, "==", 1e-7)

    B = [[1, -1], [-1, 1]]
    for r in range(7):
        rep.add(f"boundary_nonmember_r{r}", int(cop.cr_membership(B, r, "exact").member), 0, "==", 0)
    rep.add("J_member", cop.min_r([[1] * 3] * 3, 3).level, 0, "==", 0)

    rng = random.Random(seed)
    for i in range(10):
        p = random_lp(rng)
        ex, fl = solve_lp_exact(p), solve_conic(p)
        rep.add(f"lp{i}_exact_vs_float", float(ex.objective), fl.primal_objective, "==", 1e-6)
        rep.add(f"lp{i}_weak_duality", fl.duality_gap if fl.status == OPTIMAL else 0.0, 0, ">=", 1e-6)

    text = export_sdpa(build_delta(C5, 3).program)
    rep.add("sdpa_round_trip", int(export_sdpa(import_sdpa(text)) == text), 1, "==", 0)
    rep.add("rational_sanity", Fraction(1, 3) * 3, 1, "==", 0)
    return rep
