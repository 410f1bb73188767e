"""Exact operator identities behind the finite-convergence argument.

Each function returns a report whose checks compare exact rationals with
zero tolerance.
"""
from __future__ import annotations

import random
from fractions import Fraction

from . import families as fam
from . import operators as op
from .graphs import Graph, popcount, surjection_count
from .hierarchies import MeasureVector
from .report import VerificationReport
from .transfer import mu_block_sums, mu_matrix, phi_moments


def random_measure(G: Graph, k: int, rng: random.Random, denominator: int = 7) -> MeasureVector:
    sets = fam.independent_sets(G, k)
    vals = [Fraction(1)] + [Fraction(rng.randint(0, 3 * denominator), denominator) for _ in sets.elements[1:]]
    return MeasureVector(sets, vals)


def adjoint_sum_identity(G: Graph, s: int, t: int, nu: MeasureVector) -> VerificationReport:
    """(Q_{s,t}^* nu)(V^t) = <N_s, nu>."""
    k = nu.family.params[1]
    Q = op.op_Qst(G, s, t, k)
    lhs = sum(Q.rapply(nu.values), Fraction(0))
    rhs = sum((n * v for n, v in zip(op.nt_vector(G, k, s), nu.values)), Fraction(0))
    rep = VerificationReport()
    rep.add(f"Qst_adjoint_mass[s={s},t={t}]", lhs, rhs, "==", 0)
    return rep


def symmetrisation_identity(G: Graph, s: int, t: int) -> VerificationReport:
    """Q_{s,t+2} T_t = Q_{s,2} as matrices (T_t on ordered pairs)."""
    k = min(s, G.n)
    left = op.op_Qst(G, s, t + 2, k).compose(op.op_Tr(G.n, t, form="tuple", pairs="ordered"))
    right = op.op_Qst(G, s, 2, k)
    diff = left.to_dict()
    for key, v in right.to_dict().items():
        diff[key] = diff.get(key, 0) - v
    worst = max((abs(v) for v in diff.values()), default=Fraction(0))
    rep = VerificationReport()
    rep.add(f"QT_equals_Q2[s={s},t={t}]", worst, 0, "==", 0)
    return rep


def b_evaluations(G: Graph, r: int, t: int) -> VerificationReport:
    """B_{r+2} on chi_A (x) chi_B (x) N_t gives N_t, N_{t+1}, N_{t+2}."""
    k = r + 2
    B = op.op_Bk(G, k)
    rep = VerificationReport()

    def ind(S, which):
        return int(popcount(S) == which)

    for a, b, shift in ((0, 0, 0), (0, 1, 1), (1, 1, 2)):
        kernel = op.fold_kernel(G, k, lambda S, T, Q: ind(S, a) * ind(T, b) * surjection_count(t, popcount(Q)))
        got = B.apply(kernel)
        want = op.nt_vector(G, k, t + shift)
        bad = sum(1 for x, y in zip(got, want) if x != y)
        rep.add(f"B_eval[r={r},t={t},N_{t + shift}]", bad, 0, "==", 0)
    return rep


def mu_moment_identity(G: Graph, r: int, t: int, nu: MeasureVector) -> VerificationReport:
    """mu(I_{=i} x I_{=j}) = Phi_{t+i+j}."""
    phi = phi_moments(G, nu, t + 2)
    sums = mu_block_sums(mu_matrix(G, nu, r, t))
    rep = VerificationReport()
    for (i, j), v in sums.items():
        rep.add(f"mu_block[r={r},t={t},{i}{j}]", v, phi[t + i + j], "==", 0)
    return rep


def operator_suite(G: Graph, rmax: int = 3, smax: int = 4, seed: int = 0) -> VerificationReport:
    rng = random.Random(seed)
    rep = VerificationReport()
    kmax = min(smax, G.n) if G.n else 0
    nu = random_measure(G, max(kmax, 0), rng)
    for s in range(1, smax + 1):
        if G.n ** s > fam.MAX_TUPLES:
            break
        for t in range(s + 1):
            rep.extend(adjoint_sum_identity(G, s, t, nu))
        for t in range(s - 1):
            rep.extend(symmetrisation_identity(G, s, t))
    for r in range(rmax + 1):
        nur = random_measure(G, r + 2, rng)
        for t in range(r + 1):
            rep.extend(b_evaluations(G, r, t))
            rep.extend(mu_moment_identity(G, r, t, nur))
    return rep
