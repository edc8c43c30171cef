import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_connected_graph
from tomobound.fixtures import load_instance
from tomobound.identifiability import column_run_counts, path_matrix, testing_matrix
from tomobound.model import PathSet, build_graph
from tomobound.routing import (
    Segmentation,
    check_consistency,
    consistent_shortest_paths,
    q_lower_bound,
    verify_segmentation,
)


class TestCheckConsistency:
    def test_consistent_fixture(self):
        _, ps = load_instance("consistent10")
        report = check_consistency(ps)
        assert report.consistent
        assert report.violations == ()

    def test_inconsistent_fixture_pinpoints_divergence(self):
        g, ps = load_instance("inconsistent10")
        report = check_consistency(ps)
        assert not report.consistent
        t = testing_matrix(ps, g.node_count)
        by_encoding = {t.encoding(j).to01(): j for j in range(t.n)}
        named = {
            (v.path_i, v.path_j, frozenset((v.u, v.v))) for v in report.violations
        }
        expected = frozenset((by_encoding["1110"], by_encoding["1010"]))
        assert (0, 2, expected) in named

    def test_node_disjoint_paths(self):
        ps = PathSet.from_sequences([[0, 1], [2, 3], [4]])
        assert check_consistency(ps).consistent

    def test_single_shared_node_is_fine(self):
        ps = PathSet.from_sequences([[0, 1, 2], [3, 1, 4]])
        assert check_consistency(ps).consistent

    def test_opposite_direction_same_route(self):
        ps = PathSet.from_sequences([[0, 1, 2, 3], [3, 2, 1, 5]])
        assert check_consistency(ps).consistent

    def test_divergent_subpaths_detected(self):
        ps = PathSet.from_sequences([[0, 1, 2], [0, 3, 2]])
        report = check_consistency(ps)
        assert not report.consistent
        v = report.violations[0]
        assert (v.u, v.v) == (0, 2)
        assert v.sub_i == (0, 1, 2)
        assert v.sub_j == (0, 3, 2)

    def test_non_simple_rejected(self):
        with pytest.raises(ValueError, match="simple"):
            check_consistency(PathSet.from_sequences([[0, 1, 0]]))

    def test_interleaved_shared_segment(self):
        # shared nodes must appear as one identical stretch; skipping a node
        # in between is a violation even with equal endpoints order
        ps = PathSet.from_sequences([[0, 1, 2, 3, 4], [5, 1, 2, 4, 6]])
        report = check_consistency(ps)
        assert not report.consistent


class TestSegmentation:
    def test_fat_tree_upper_node_cuts(self):
        from tomobound.construct import fat_tree, fat_tree_all_pair_paths

        ft = fat_tree(4)
        ps = fat_tree_all_pair_paths(ft)
        assert verify_segmentation(ps, Segmentation.at_midpoints(ps), 2) is True

    def test_consistent_set_no_cuts_q1(self):
        _, ps = load_instance("consistent10")
        assert verify_segmentation(ps, Segmentation.no_cuts(ps), 1) is True

    def test_inconsistent_set_no_cuts_q1(self):
        _, ps = load_instance("inconsistent10")
        assert verify_segmentation(ps, Segmentation.no_cuts(ps), 1) is False

    def test_too_many_segments(self):
        ps = PathSet.from_sequences([[0, 1, 2, 3]])
        seg = Segmentation(cuts=((1, 2),))
        assert verify_segmentation(ps, seg, 2) is False
        assert verify_segmentation(ps, seg, 3) is True

    def test_malformed_cuts(self):
        ps = PathSet.from_sequences([[0, 1, 2]])
        with pytest.raises(ValueError, match="increasing"):
            verify_segmentation(ps, Segmentation(cuts=((2, 1),)), 3)
        with pytest.raises(ValueError, match="bounds"):
            verify_segmentation(ps, Segmentation(cuts=((5,),)), 3)
        with pytest.raises(ValueError, match="covers"):
            verify_segmentation(ps, Segmentation(cuts=()), 3)

    def test_no_cuts_matches_check_consistency(self):
        rng = random.Random(23)
        for _ in range(20):
            g = random_connected_graph(rng, max_n=15)
            nodes = list(range(g.node_count))
            pairs = [tuple(rng.sample(nodes, 2)) for _ in range(3)]
            ps = consistent_shortest_paths(g, pairs)
            assert verify_segmentation(ps, Segmentation.no_cuts(ps), 1) is True

    def test_cut_node_shared_by_adjacent_segments(self):
        ps = PathSet.from_sequences([[0, 1, 2, 3, 4]])
        seg = Segmentation(cuts=((2,),))
        assert seg.segments_of(ps, 0) == [(0, 1, 2), (2, 3, 4)]


class TestQLowerBound:
    def test_consistent_fixture(self):
        _, ps = load_instance("consistent10")
        assert q_lower_bound(ps) == 1

    def test_fat_tree_at_most_two(self):
        from tomobound.construct import fat_tree, fat_tree_all_pair_paths

        ps = fat_tree_all_pair_paths(fat_tree(4))
        assert q_lower_bound(ps) == 2

    def test_single_path(self):
        assert q_lower_bound(PathSet.from_sequences([[0, 1, 2]])) == 1

    def test_split_run(self):
        ps = PathSet.from_sequences([[0, 1, 2], [0, 2]])
        assert q_lower_bound(ps) == 2


def path_is_shortest(g, path):
    """BFS distance check: the returned path must be a shortest route."""
    from collections import deque

    src, dst = path.nodes[0], path.nodes[-1]
    adj = g.adjacency()
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return len(path.nodes) - 1 == dist[dst]


class TestConsistentShortestPaths:
    def test_line_graph(self):
        g = build_graph([(0, 1), (1, 2)])
        ps = consistent_shortest_paths(g, [(0, 2)])
        assert ps.paths[0].nodes == (0, 1, 2)

    def test_four_cycle(self):
        g = build_graph([(0, 1), (1, 2), (2, 3), (0, 3)])
        ps = consistent_shortest_paths(g, [(0, 2), (1, 3)])
        assert check_consistency(ps).consistent
        for p in ps.paths:
            assert path_is_shortest(g, p)

    def test_two_route_trap(self):
        # two equal-length routes between 0 and 1; per-source predecessor
        # tie-breaking would route them differently from each side
        g = build_graph([(0, 2), (2, 5), (5, 1), (0, 3), (3, 4), (4, 1), (6, 0), (7, 1)])
        ps = consistent_shortest_paths(g, [(6, 1), (7, 0)])
        assert check_consistency(ps).consistent

    def test_symmetry(self):
        rng = random.Random(3)
        for _ in range(10):
            g = random_connected_graph(rng, max_n=20)
            a, b = rng.sample(range(g.node_count), 2)
            fwd = consistent_shortest_paths(g, [(a, b)]).paths[0].nodes
            rev = consistent_shortest_paths(g, [(b, a)]).paths[0].nodes
            assert fwd == tuple(reversed(rev))

    def test_disconnected_pair(self):
        g = build_graph([(0, 1), (2, 3)])
        with pytest.raises(ValueError, match="disconnected"):
            consistent_shortest_paths(g, [(0, 3)])

    def test_isp_fixture_100_random_pairs(self):
        from tomobound.fixtures import load_graph

        g = load_graph("isp108")
        rng = random.Random(7)
        pairs = [tuple(rng.sample(range(g.node_count), 2)) for _ in range(100)]
        ps = consistent_shortest_paths(g, pairs)
        assert check_consistency(ps).consistent
        assert q_lower_bound(ps) == 1
        for p in ps.paths:
            assert path_is_shortest(g, p)

    def test_consistent_sets_have_single_runs(self):
        rng = random.Random(31)
        for _ in range(15):
            g = random_connected_graph(rng, max_n=25)
            pairs = [tuple(rng.sample(range(g.node_count), 2)) for _ in range(4)]
            ps = consistent_shortest_paths(g, pairs)
            t = testing_matrix(ps, g.node_count)
            for i in range(ps.m):
                assert max(column_run_counts(path_matrix(ps, t, i))) <= 1


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_router_always_consistent_property(seed):
    rng = random.Random(seed)
    g = random_connected_graph(rng, max_n=30)
    nodes = list(range(g.node_count))
    pairs = [tuple(rng.sample(nodes, 2)) for _ in range(rng.randint(1, 6))]
    ps = consistent_shortest_paths(g, pairs)
    assert check_consistency(ps).consistent
    assert q_lower_bound(ps) == 1
