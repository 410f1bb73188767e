import itertools
import math

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_graphs, random_graphs
from kpoint import families as fam
from kpoint.graphs import (DimacsError, Graph, GraphError, alpha_enumerate, alpha_exact, canonical_form,
                           complete, cycle, empty, generate, gnp, is_isomorphic, kneser, lcg_uniforms,
                           maximum_independent_set, members, parse_dimacs, parse_graph_spec, path,
                           petersen, popcount, surjection_count, write_dimacs)


def to_nx(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges)
    return H


def nx_alpha(G):
    return max((len(c) for c in nx.find_cliques(nx.complement(to_nx(G)))), default=0)


class TestDimacs:
    def test_path(self):
        G = parse_dimacs("p edge 3 2\ne 1 2\ne 2 3\n")
        assert G.n == 3 and G.sorted_edges() == [(0, 1), (1, 2)]

    def test_edgeless(self):
        G = parse_dimacs("c nothing here\np edge 2 0\n")
        assert G.n == 2 and not G.edges

    def test_duplicate_edges_collapse(self):
        assert len(parse_dimacs("p edge 3 3\ne 1 2\ne 2 1\ne 1 2\n").edges) == 1

    @pytest.mark.parametrize("text,line", [
        ("p edge 3 1\ne 1 5\n", "line 2"),
        ("p edge 3 1\ne 2 2\n", "line 2"),
        ("p edge x 1\n", "line 1"),
        ("e 1 2\n", "line 1"),
        ("p edge 3 1\nq 1 2\n", "line 2"),
    ])
    def test_errors_name_the_line(self, text, line):
        with pytest.raises(DimacsError, match=line):
            parse_dimacs(text)

    def test_missing_header(self):
        with pytest.raises(DimacsError):
            parse_dimacs("c only a comment\n")

    def test_round_trip(self):
        for G in (petersen(), cycle(7), gnp(9, 0.5, 3)):
            assert parse_dimacs(write_dimacs(G)) == G


class TestGenerators:
    def test_cycle(self):
        G = cycle(5)
        assert G.n == 5 and len(G.edges) == 5

    def test_petersen(self):
        G = petersen()
        assert G.n == 10 and len(G.edges) == 15
        assert all(G.degree(v) == 3 for v in range(10))

    def test_kneser_is_petersen(self):
        assert is_isomorphic(kneser(5, 2), petersen())
        assert nx.is_isomorphic(to_nx(kneser(5, 2)), to_nx(petersen()))

    @pytest.mark.parametrize("bad", [lambda: cycle(2), lambda: complete(0), lambda: kneser(3, 4),
                                     lambda: gnp(4, 1.5, 0), lambda: generate("nope", 3)])
    def test_invalid(self, bad):
        with pytest.raises(GraphError):
            bad()

    def test_gnp_reproducible(self):
        assert gnp(12, 0.3, 42) == gnp(12, 0.3, 42)
        assert gnp(12, 0.3, 42) != gnp(12, 0.3, 43)

    def test_lcg_first_values(self):
        # state_1 = 1 * a + c mod 2^64, deviate = top 53 bits
        a, c = 6364136223846793005, 1442695040888963407
        s1 = (a + c) % 2 ** 64
        s2 = (s1 * a + c) % 2 ** 64
        u = lcg_uniforms(1)
        assert next(u) == (s1 >> 11) / 2 ** 53
        assert next(u) == (s2 >> 11) / 2 ** 53

    def test_gnp_extremes(self):
        assert gnp(6, 0.0, 5) == empty(6)
        assert gnp(6, 1.0, 5) == complete(6)

    def test_specs(self):
        assert parse_graph_spec("cycle:5") == cycle(5)
        assert parse_graph_spec("path:3") == path(3)
        assert parse_graph_spec("gnp:7,0.4,11") == gnp(7, 0.4, 11)
        assert parse_graph_spec("petersen") == petersen()
        with pytest.raises(GraphError):
            parse_graph_spec("cycle:x")
        with pytest.raises(GraphError):
            parse_graph_spec("no_such_thing")

    def test_spec_from_file(self, tmp_path):
        f = tmp_path / "g.col"
        f.write_text(write_dimacs(cycle(6)))
        assert parse_graph_spec(str(f)) == cycle(6)


class TestGraph:
    def test_vertex_cap(self):
        with pytest.raises(GraphError):
            Graph(33, frozenset())

    def test_loops_rejected(self):
        with pytest.raises(GraphError):
            Graph.from_edges(3, [(1, 1)])

    def test_non_edges_complement(self):
        for G in all_graphs(4):
            ne = set(G.non_edges())
            assert ne | G.edges == set(itertools.combinations(range(G.n), 2))
            assert not ne & G.edges


class TestAlpha:
    def test_known(self):
        assert alpha_exact(cycle(5)) == 2
        assert alpha_exact(petersen()) == 4
        assert alpha_exact(complete(7)) == 1
        assert alpha_exact(empty(9)) == 9

    def test_against_enumeration(self):
        for G in random_graphs(40, 6, 16, p=0.35):
            assert alpha_exact(G) == alpha_enumerate(G)

    def test_against_networkx(self):
        for G in random_graphs(15, 15, 26, p=0.3, seed0=500):
            assert alpha_exact(G) == nx_alpha(G)

    def test_witness(self):
        for G in random_graphs(10, 5, 12):
            I = maximum_independent_set(G)
            assert G.is_independent(I) and popcount(I) == alpha_exact(G)


class TestSurjections:
    def test_examples(self):
        assert surjection_count(0, 0) == 1
        assert surjection_count(3, 2) == 6
        assert surjection_count(2, 3) == 0

    def test_brute_force(self):
        for t in range(6):
            for m in range(5):
                brute = sum(1 for v in itertools.product(range(m), repeat=t) if len(set(v)) == m)
                assert surjection_count(t, m) == brute

    def test_zero_pattern(self):
        for t in range(7):
            for m in range(7):
                zero = m > t or (m == 0 and t >= 1)
                assert (surjection_count(t, m) == 0) == zero

    def test_total_functions(self):
        for size in range(5):
            for t in range(7):
                total = sum(math.comb(size, m) * surjection_count(t, m) for m in range(size + 1))
                assert total == size ** t


class TestFamilies:
    def test_counts(self):
        assert len(fam.independent_sets(cycle(5), 2)) == 11
        assert len(fam.independent_sets(empty(3), 3)) == 8
        for G in (cycle(5), petersen(), complete(3)):
            assert fam.independent_sets(G, 0).elements == (0,)

    def test_order_and_round_trip(self):
        sets = fam.independent_sets(petersen(), 4)
        keys = [(popcount(I), members(I)) for I in sets]
        assert keys == sorted(keys)
        assert sets[0] == 0
        assert all(sets.index(I) == i for i, I in enumerate(sets))

    def test_members_independent_and_complete(self):
        for G in all_graphs(4):
            for k in range(5):
                sets = fam.independent_sets(G, k)
                brute = {m for m in range(1 << G.n) if popcount(m) <= k and G.is_independent(m)}
                assert set(sets) == brute and len(sets) == len(brute)
                assert sum(sets.size_of_rank(r) for r in range(k + 1)) == len(sets)

    def test_stabilises(self):
        for G in random_graphs(5, 5, 9):
            a = alpha_exact(G)
            assert fam.independent_sets(G, a + 3).elements == fam.independent_sets(G, a).elements

    def test_tuples_and_multisets(self):
        assert fam.tuples(2, 2).elements == ((0, 0), (0, 1), (1, 0), (1, 1))
        ms = fam.multisets(5, 5)
        assert len(ms) == math.comb(9, 5)
        assert list(ms) == sorted(ms)
        with pytest.raises(fam.FamilyTooLarge):
            fam.tuples(30, 5)

    def test_set_pairs_with_base(self):
        assert len(fam.set_pairs_with_base(cycle(5), 3)) == 126


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.floats(0, 1), st.integers(0, 2 ** 32))
def test_canonical_form_matches_networkx(n, p, seed):
    G = gnp(n, p, seed)
    perm = list(range(n))[::-1]
    H = Graph.from_edges(n, [(perm[u], perm[v]) for u, v in G.edges])
    assert canonical_form(G) == canonical_form(H)
    other = gnp(n, p, seed + 1)
    assert is_isomorphic(G, other) == nx.is_isomorphic(to_nx(G), to_nx(other))
