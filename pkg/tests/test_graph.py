import pytest
from hypothesis import given, strategies as st

from eqsplit.graph import (
    EdgeListError,
    Graph,
    complete_graph,
    contract_pairs,
    cross_edge_count,
    degree,
    degree_difference,
    degree_sum,
    difference_neighbourhood,
    induced_edge_count,
    induced_subgraph,
    is_clone_pair,
    multigraph_difference_count,
    multigraph_disagree,
    parse_edge_list,
    to_edge_list_text,
)


def star(k):
    # K_{1,k} with centre 0
    return Graph(k + 1, [(0, i) for i in range(1, k + 1)])


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


class TestConstruction:
    def test_rejects_loop(self):
        with pytest.raises(ValueError):
            Graph(3, [(1, 1)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Graph(3, [(0, 3)])

    def test_rejects_duplicate_either_orientation(self):
        with pytest.raises(ValueError):
            Graph(3, [(0, 1), (1, 0)])

    def test_empty(self):
        g = Graph(0)
        assert g.n == 0 and not g.edges


class TestDegree:
    def test_star_centre(self):
        assert degree(star(3), 0) == 3

    def test_empty_graph(self):
        assert degree(Graph(5), 2) == 0

    def test_k5(self):
        g = complete_graph(5)
        assert all(degree(g, v) == 4 for v in range(5))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            degree(Graph(2), 2)


class TestInducedEdgeCount:
    def test_k4_three_vertices(self):
        assert induced_edge_count(complete_graph(4), {0, 1, 2}) == 3

    def test_path_nonadjacent(self):
        assert induced_edge_count(path(4), {0, 2}) == 0

    def test_c5_arc(self):
        assert induced_edge_count(cycle(5), {0, 1, 2}) == 2

    def test_matches_bruteforce_on_random_sets(self):
        import random

        rnd = random.Random(7)
        for _ in range(200):
            n = rnd.randrange(1, 12)
            edges = [
                (u, v)
                for u in range(n)
                for v in range(u + 1, n)
                if rnd.random() < 0.5
            ]
            g = Graph(n, edges)
            u = {v for v in range(n) if rnd.random() < 0.5}
            expected = sum(1 for a, b in edges if a in u and b in u)
            assert induced_edge_count(g, u) == expected


class TestDegreeSumAndCross:
    def test_k4_pair(self):
        assert degree_sum(complete_graph(4), {0, 1}) == 6

    def test_empty(self):
        assert degree_sum(Graph(4), {0, 1, 2}) == 0

    def test_star_centre_leaf(self):
        assert degree_sum(star(3), {0, 1}) == 4

    def test_cross_k4(self):
        assert cross_edge_count(complete_graph(4), {0, 1}, {2, 3}) == 4

    def test_cross_disjoint_triangles(self):
        g = Graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])
        assert cross_edge_count(g, {0, 1, 2}, {3, 4, 5}) == 0

    def test_cross_c4_opposite(self):
        assert cross_edge_count(cycle(4), {0, 2}, {1, 3}) == 4

    def test_cross_rejects_overlap(self):
        with pytest.raises(ValueError):
            cross_edge_count(complete_graph(4), {0, 1}, {1, 2})


class TestDifferences:
    def test_star_pair(self):
        assert degree_difference(star(3), 0, 1) == 2

    def test_regular_zero(self):
        assert degree_difference(cycle(6), 1, 4) == 0

    def test_k4_minus_edge(self):
        g = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
        assert degree_difference(g, 0, 2) == 1

    def test_gamma_star(self):
        assert difference_neighbourhood(star(3), 0, 1) == {2, 3}

    def test_gamma_complete_empty(self):
        g = complete_graph(6)
        assert difference_neighbourhood(g, 2, 5) == frozenset()

    def test_gamma_path_ends(self):
        assert difference_neighbourhood(path(4), 0, 3) == {1, 2}

    def test_delta_bounds_small_delta(self):
        # |d(x)-d(y)| <= |Gamma(x,y)| on seeded random graphs
        import random

        rnd = random.Random(1)
        for _ in range(100):
            n = rnd.randrange(2, 15)
            edges = [
                (u, v)
                for u in range(n)
                for v in range(u + 1, n)
                if rnd.random() < 0.4
            ]
            g = Graph(n, edges)
            x, y = rnd.sample(range(n), 2)
            assert degree_difference(g, x, y) <= len(difference_neighbourhood(g, x, y))


class TestClonePairs:
    def test_complete_all_clones(self):
        g = complete_graph(5)
        assert is_clone_pair(g, range(5), 0, 3)

    def test_star_leaves(self):
        assert is_clone_pair(star(3), range(4), 1, 2)

    def test_path_adjacent_not_clones(self):
        assert not is_clone_pair(path(4), range(4), 0, 1)

    def test_no_clone_pair_in_p4(self):
        from itertools import combinations

        g = path(4)
        assert not any(is_clone_pair(g, range(4), x, y) for x, y in combinations(range(4), 2))


class TestContraction:
    def test_triangle(self):
        g = complete_graph(3)
        m = contract_pairs(g, [(0, 1)])
        assert m.n_nodes == 2
        merged = m.origin.index((0, 1))
        other = m.origin.index(2)
        assert m.multiplicity(merged, other) == 2

    def test_empty_graph(self):
        m = contract_pairs(Graph(3), [(0, 1)])
        assert not m.multiplicities

    def test_c4_opposite(self):
        m = contract_pairs(cycle(4), [(0, 2)])
        merged = m.origin.index((0, 2))
        assert m.multiplicity(merged, m.origin.index(1)) == 2
        assert m.multiplicity(merged, m.origin.index(3)) == 2

    def test_overlapping_pairs_rejected(self):
        with pytest.raises(ValueError):
            contract_pairs(complete_graph(4), [(0, 1), (1, 2)])

    def test_multiplicity_over_two_rejected(self):
        # contracting two pairs of K4 would give multiplicity 4 between the nodes
        with pytest.raises(ValueError):
            contract_pairs(complete_graph(4), [(0, 1), (2, 3)])

    def test_disagreement(self):
        m = contract_pairs(complete_graph(3), [(0, 1)])
        a, b = m.origin.index((0, 1)), m.origin.index(2)
        assert multigraph_difference_count(m, a, b) == 0
        m2 = contract_pairs(cycle(4), [(0, 2)])
        x = m2.origin.index((0, 2))
        # v3 sees the merged node twice and v1 zero times: it disagrees about them
        assert multigraph_disagree(m2, x, m2.origin.index(1), m2.origin.index(3))
        # but v1 and v3 agree about the merged node (multiplicity 2 both ways)
        assert multigraph_difference_count(m2, m2.origin.index(1), m2.origin.index(3)) == 0


class TestInducedSubgraph:
    def test_relabels_densely(self):
        g = complete_graph(5)
        sub, table = induced_subgraph(g, {1, 3, 4})
        assert sub.n == 3 and len(sub.edges) == 3
        assert sorted(table) == [1, 3, 4]
        assert sorted(table.values()) == [0, 1, 2]

    def test_numpy_and_python_paths_agree(self):
        import random

        rnd = random.Random(3)
        n = 120
        edges = [
            (u, v) for u in range(n) for v in range(u + 1, n) if rnd.random() < 0.9
        ]
        g = Graph(n, edges)  # ~6400 edges: numpy path
        keep = set(range(0, n, 2))
        sub, table = induced_subgraph(g, keep)
        expected = {
            (min(table[u], table[v]), max(table[u], table[v]))
            for u, v in edges
            if u in keep and v in keep
        }
        assert sub.edges == expected


class TestEdgeListFormat:
    def test_round_trip(self):
        g = Graph(4, [(0, 1), (2, 3), (0, 3)])
        assert parse_edge_list(to_edge_list_text(g)) == g

    def test_header_count_mismatch(self):
        with pytest.raises(EdgeListError):
            parse_edge_list("3 2\n0 1\n")

    def test_error_carries_line_number(self):
        with pytest.raises(EdgeListError) as err:
            parse_edge_list("3 2\n0 1\n1 0\n")
        assert err.value.lineno == 3

    def test_requires_u_less_than_v(self):
        with pytest.raises(EdgeListError):
            parse_edge_list("3 1\n2 1\n")

    @given(
        st.integers(min_value=0, max_value=8).flatmap(
            lambda n: st.builds(
                Graph,
                st.just(n),
                st.lists(
                    st.tuples(
                        st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0))
                    ).filter(lambda e: e[0] < e[1]),
                    unique=True,
                )
                if n >= 2
                else st.just([]),
            )
        )
    )
    def test_round_trip_property(self, g):
        assert parse_edge_list(to_edge_list_text(g)) == g
