import json
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from kpoint import copositive as cop
from kpoint.graphs import complete, cycle, empty
from kpoint.hierarchies import solve_xi_dual

BOUNDARY = [[1, -1], [-1, 1]]


def random_symmetric(rng, n, lo=-3, hi=5):
    Z = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            Z[i][j] = Z[j][i] = rng.randint(lo, hi)
    return Z


class TestMembership:
    def test_all_ones(self):
        J = [[1] * 3] * 3
        for r in range(5):
            c = cop.cr_membership(J, r, "exact")
            assert c.member and c.worst_sum == (r + 2) * (r + 1)

    def test_off_diagonal_ones(self):
        c = cop.cr_membership([[0, 1], [1, 0]], 0, "exact")
        assert c.member and c.worst_sum == 0

    @pytest.mark.parametrize("r", range(7))
    def test_boundary_nonmember(self, r):
        c = cop.cr_membership(BOUNDARY, r, "exact")
        assert not c.member and c.worst_sum < 0
        assert cop.revalidate(BOUNDARY, c)

    def test_boundary_against_polynomial(self):
        # coefficients of (x1 + x2)^r (x1 - x2)^2 carry the sign pattern of the multiset sums
        for r in range(7):
            poly = np.convolve([math.comb(r, i) for i in range(r + 1)], [1, -2, 1])
            assert poly.min() < 0
            assert not cop.cr_membership(BOUNDARY, r, "exact").member

    def test_float_and_exact_agree(self):
        rng = random.Random(11)
        for _ in range(40):
            Z = random_symmetric(rng, rng.randint(2, 4))
            r = rng.randint(0, 3)
            a, b = cop.cr_membership(Z, r, "exact"), cop.cr_membership(Z, r, "float")
            assert a.verdict == b.verdict
            assert a.worst_multiset == b.worst_multiset
            assert float(a.worst_sum) == pytest.approx(b.worst_sum)

    def test_multiset_sum_matches_tuples(self):
        rng = random.Random(3)
        Z = random_symmetric(rng, 3)
        for r in range(3):
            by_tuple = {}
            for x, s in cop.tuple_row_sums(Z, r):
                by_tuple.setdefault(tuple(sorted(x)), set()).add(s)
            for m, sums in by_tuple.items():
                assert sums == {cop.multiset_sum(Z, m)}

    def test_errors(self):
        with pytest.raises(cop.CopositiveError):
            cop.cr_membership([[1, 2], [3, 1]], 0, "exact")
        with pytest.raises(cop.CopositiveError):
            cop.cr_membership([[1, 2]], 0)
        with pytest.raises(cop.CopositiveError):
            cop.cr_membership(BOUNDARY, 0, "symbolic")
        with pytest.raises(cop.CopositiveError):
            cop.cr_membership(np.eye(30), 10)

    def test_certificate_json(self):
        c = cop.cr_membership(BOUNDARY, 1, "exact")
        d = json.loads(c.to_json())
        assert d["verdict"] == cop.NON_MEMBER and d["level"] == 1 and d["mode"] == "exact"
        assert d["worst_multiset"] == list(c.worst_multiset)

    def test_exact_rationalizes_floats(self):
        c = cop.cr_membership([[0.1234564, 1], [1, 0.1234564]], 0, "exact")
        assert c.worst_sum == Fraction(2 * 123456, 10 ** 6)


class TestProperties:
    def test_nesting(self):
        rng = random.Random(0)
        members = 0
        while members < 200:
            n = rng.randint(2, 4)
            Z = random_symmetric(rng, n, -2, 6)
            for r in range(3):
                if cop.cr_membership(Z, r, "exact").member:
                    members += 1
                    assert cop.cr_membership(Z, r + 1, "exact").member

    def test_revalidation_by_tuples(self):
        rng = random.Random(1)
        for _ in range(60):
            Z = random_symmetric(rng, rng.randint(1, 3), -2, 5)
            for r in range(4):
                cert = cop.cr_membership(Z, r, "exact")
                assert cop.revalidate(Z, cert)

    def test_members_are_copositive_on_samples(self):
        rng = random.Random(2)
        nrng = np.random.default_rng(2)
        found = 0
        while found < 20:
            n = rng.randint(2, 4)
            Z = random_symmetric(rng, n, -3, 6)
            if not any(cop.cr_membership(Z, r, "exact").member for r in range(4)):
                continue
            found += 1
            M = np.array(Z, dtype=float)
            Y = nrng.random((1000, n))
            assert np.all(np.einsum("iv,vw,iw->i", Y, M, Y) >= -1e-12)


class TestMinR:
    def test_all_ones(self):
        s = cop.min_r([[1] * 3] * 3, 6)
        assert s.level == 0 and s.nesting_ok and s.describe() == "r = 0"

    def test_boundary(self):
        s = cop.min_r(BOUNDARY, 6, "exact")
        assert not s.found and s.describe() == "NotFoundWithin(6)"
        assert len(s.certificates) == 7

    def test_level_above_zero(self):
        # strictly copositive, but the size-2 multiset {0, 1} has sum -2
        Z = [[2, -1], [-1, 2]]
        s = cop.min_r(Z, 8, "exact")
        assert s.found and s.level > 0 and s.nesting_ok
        assert not cop.cr_membership(Z, s.level - 1, "exact").member


class TestZ0:
    def test_find_F_complete(self):
        assert np.array_equal(cop.find_F(complete(4)), np.zeros((4, 4)))

    def test_find_F_empty2(self):
        F = cop.find_F(empty(2))
        assert cop.check_F(empty(2), F).passed
        assert cop.check_F(empty(2), BOUNDARY).passed

    def test_find_F_c5(self):
        F = cop.find_F(cycle(5))
        rep = cop.check_F(cycle(5), F)
        assert rep.passed
        assert rep["F_min_eigenvalue"].lhs >= -1e-7
        assert rep["F_non_edge_max"].lhs <= -1 + 1e-6

    def test_theta_third_exact(self):
        Z0, rep = cop.build_Z0(BOUNDARY, Fraction(1, 3), empty(2))
        assert Z0[0, 1] == -1 and rep.passed

    @pytest.mark.parametrize("theta", [Fraction(1, 2), 0, 1, Fraction(3, 2)])
    def test_theta_rejected(self, theta):
        with pytest.raises(cop.CopositiveError):
            cop.build_Z0(BOUNDARY, theta)

    def test_c5_bounds(self):
        G = cycle(5)
        F = cop.find_F(G)
        Z0, rep = cop.build_Z0(F, Fraction(1, 4), G)
        assert rep.passed
        for u, v in G.non_edges():
            assert Z0[u, v] == pytest.approx(-1.25 + 1.5 * (F[u, v] + 1), abs=1e-12)
            assert Z0[u, v] <= -1 + 1e-6

    def test_c5_level_regression(self):
        # measured: the min-trace F gives Z0 in C_7 but not C_6 at theta = 1/4
        G = cycle(5)
        Z0, _ = cop.build_Z0(cop.find_F(G), Fraction(1, 4), G)
        assert not cop.min_r(Z0, 6).found
        s = cop.min_r(Z0, 8)
        assert s.level == 7 and s.nesting_ok

    def test_c5_worst_sums_regression(self):
        G = cycle(5)
        Z0, _ = cop.build_Z0(cop.find_F(G), Fraction(1, 4), G)
        worst = [cop.cr_membership(Z0, r).worst_sum for r in range(8)]
        assert worst == pytest.approx([-2.5, -3.354, -4.146, -4.271, -3.354, -2.375, -0.729, 1.584], abs=2e-3)


class TestPerturb:
    def test_eps_one_is_min_r_of_Z0(self):
        G = cycle(5)
        Z0, _ = cop.build_Z0(cop.find_F(G), Fraction(1, 4), G)
        s, rep = cop.perturb_certify(G, np.zeros((5, 5)), 0, Z0, 1, rcap=8)
        assert s.level == cop.min_r(Z0, 8).level
        assert rep.passed

    def test_xi3_witness(self):
        G = cycle(5)
        res = solve_xi_dual(G, 3)
        Z0, _ = cop.build_Z0(cop.find_F(G), Fraction(1, 4), G)
        s, rep = cop.perturb_certify(G, res.witness["Z"], res.witness["lambda"], Z0, 0.1)
        assert rep.passed
        assert s.found and s.level <= 3

    def test_eps_zero_report_only(self):
        s, rep = cop.perturb_certify(empty(2), BOUNDARY, 2, BOUNDARY, 0, rcap=3)
        assert not s.found and rep.passed

    def test_eps_range(self):
        with pytest.raises(cop.CopositiveError):
            cop.perturb_certify(empty(2), BOUNDARY, 2, BOUNDARY, 1.5)
