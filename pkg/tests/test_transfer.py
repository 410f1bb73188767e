import random

import numpy as np
import pytest

from conftest import random_graphs
from kpoint import families as fam
from kpoint.graphs import complete, cycle, empty, gnp, mask_of, popcount
from kpoint.hierarchies import MeasureVector, dirac_solution, solve_delta, solve_xi_primal
from kpoint.identities import mu_moment_identity, random_measure
from kpoint.transfer import (DegenerateInput, MomentVector, moment_psd_check, mu_block_sums, mu_matrix,
                             phi_moments, transfer, verify_transfer)


def scaled(nu, c):
    return MeasureVector(nu.family, [c * v for v in nu.values])


class TestPhi:
    def test_dirac_powers_of_two(self):
        nu = dirac_solution(empty(2), mask_of([0, 1]), 3)
        assert phi_moments(empty(2), nu, 3).values == [1, 2, 4, 8]

    def test_delta_at_empty(self):
        nu = dirac_solution(cycle(5), 0, 2)
        assert phi_moments(cycle(5), nu, 4).values == [1, 0, 0, 0, 0]

    def test_dirac_closed_form(self):
        for G in (empty(4), cycle(5), gnp(6, 0.3, 4)):
            for I in fam.independent_sets(G, 4):
                nu = dirac_solution(G, I, 4)
                m = popcount(I)
                assert phi_moments(G, nu, 5).values == [m ** t for t in range(6)]

    def test_solver_witness_phi0(self):
        nu = solve_delta(cycle(5), 3).witness
        assert phi_moments(cycle(5), nu, 2)[0] == pytest.approx(1, abs=1e-8)

    def test_bare_list_needs_k(self):
        with pytest.raises(ValueError):
            phi_moments(cycle(5), [1] * 11, 2)
        # only singletons have a surjection from one coordinate
        assert phi_moments(cycle(5), [1] * 11, 1, k=2).values == [1, 5]


class TestTransfer:
    def test_dirac_exact(self):
        for G in (empty(4), cycle(5), gnp(6, 0.3, 8)):
            for I in fam.independent_sets(G, 4):
                m = popcount(I)
                if m == 0:
                    continue
                for r in range(4):
                    if m > r + 2:
                        continue
                    nu = dirac_solution(G, I, r + 2)
                    t = transfer(G, nu, r)
                    assert t.objective == m
                    assert t.phi[r + 2] / t.phi[r + 1] == m
                    rep = verify_transfer(G, r, t, nu, 0)
                    assert rep.passed
                    assert rep["alpha_diagonal_mass"].slack == 0

    def test_dirac_m2_r1_zero_slack(self):
        G = empty(2)
        nu = dirac_solution(G, mask_of([0, 1]), 3)
        rep = verify_transfer(G, 1, transfer(G, nu, 1), nu, 0)
        assert rep.passed
        assert all(c.slack == 0 for c in rep.checks if c.name != "beta_nonnegative" and c.name != "alpha_nonnegative")

    @pytest.mark.parametrize("k", [3, 4])
    def test_solver_witness(self, k):
        G = cycle(5)
        d = solve_delta(G, k)
        t = transfer(G, d.witness, k - 2)
        assert verify_transfer(G, k - 2, t, d.witness, 1e-6).passed
        assert moment_psd_check(t.phi, k - 2, 1e-6).passed

    def test_alpha_edges_zero_and_symmetric(self):
        G = cycle(5)
        t = transfer(G, solve_delta(G, 3).witness, 1)
        A = np.array(t.alpha, dtype=float)
        assert np.allclose(A, A.T)
        for u, v in G.edges:
            assert A[u, v] == 0

    def test_transfer_is_xi_primal_feasible(self):
        G = cycle(5)
        d = solve_delta(G, 3)
        t = transfer(G, d.witness, 1)
        xi = solve_xi_primal(G, 1).value
        assert float(t.objective) <= xi + 1e-6
        assert float(t.objective) >= d.value - 1e-6

    def test_doubled_measure_fails_objective(self):
        G = empty(2)
        nu = scaled(dirac_solution(G, mask_of([0, 1]), 3), 2)
        rep = verify_transfer(G, 1, transfer(G, nu, 1), nu, 0)
        assert rep["alpha_diagonal_mass"].passed
        assert not rep["alpha_total_vs_objective"].passed

    def test_degenerate(self):
        with pytest.raises(DegenerateInput):
            transfer(cycle(5), dirac_solution(cycle(5), 0, 3), 1)

    def test_level_too_low(self):
        with pytest.raises(ValueError):
            transfer(cycle(5), dirac_solution(cycle(5), 1, 2), 1)


class TestMu:
    def test_block_sums_dirac(self):
        for G in (empty(3), cycle(5)):
            for I in fam.independent_sets(G, 3):
                for r in range(4):
                    nu = dirac_solution(G, I, r + 2)
                    phi = phi_moments(G, nu, r + 4)
                    for t in range(r + 1):
                        sums = mu_block_sums(mu_matrix(G, nu, r, t))
                        for (i, j), v in sums.items():
                            assert v == phi[t + i + j]

    def test_block_sums_random(self):
        rng = random.Random(5)
        for G in (cycle(5), gnp(5, 0.3, 2), complete(3)):
            for r in range(3):
                nu = random_measure(G, r + 2, rng)
                for t in range(r + 1):
                    assert mu_moment_identity(G, r, t, nu).passed

    def test_empty_entry(self):
        G = cycle(5)
        nu = random_measure(G, 4, random.Random(1))
        phi = phi_moments(G, nu, 2)
        for t in range(3):
            assert mu_matrix(G, nu, 2, t)[0][0] == phi[t]

    def test_psd_for_feasible(self):
        G = cycle(5)
        nu = solve_delta(G, 4).witness
        for t in range(3):
            M = np.array(mu_matrix(G, nu, 2, t), dtype=float)
            assert np.linalg.eigvalsh(M)[0] >= -1e-7 * (1 + np.linalg.norm(M, 2))

    def test_t_beyond_r(self):
        nu = dirac_solution(cycle(5), 1, 3)
        with pytest.raises(ValueError):
            mu_matrix(cycle(5), nu, 1, 2)
        with pytest.raises(ValueError):
            mu_matrix(cycle(5), nu, 1, -1)


class TestMomentCheck:
    def test_geometric(self):
        rep = moment_psd_check(MomentVector([1, 2, 4, 8]), 1, 0)
        assert rep.passed
        assert rep["det_0"].lhs == 0 and rep["det_1"].lhs == 0

    def test_linear_fails(self):
        rep = moment_psd_check(MomentVector([1, 2, 3]), 0, 1e-6)
        assert rep["det_0"].lhs == -1
        assert not rep.passed

    def test_too_short(self):
        with pytest.raises(ValueError):
            moment_psd_check(MomentVector([1, 2]), 0)

    def test_random_feasible_chain(self):
        for G in random_graphs(6, 4, 6, p=0.5, seed0=70):
            d = solve_delta(G, 4)
            phi = phi_moments(G, d.witness, 4)
            assert moment_psd_check(phi, 2, 1e-6).passed
