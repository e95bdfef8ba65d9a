import math

import numpy as np
import pytest

from toruscm.components import (
    blocking_compartments,
    census,
    compartment_spread,
    connected_components,
    largest_blocker_gap,
    span_check,
    summary_row,
)
from toruscm.degree_model import DegreeDistribution, DegreeSequence, sample_degree_sequence
from toruscm.torus_graph import MultiGraph, TorusLattice, generate


def graph_from_edges(edges, degrees, d, k, m):
    lat = TorusLattice(d, k)
    edges = np.array(edges, dtype=np.int64).reshape(-1, 2)
    seq = DegreeSequence(np.array(degrees, dtype=np.int64), lat, m)
    realized = np.bincount(edges.ravel(), minlength=m * lat.n_compartments)
    return MultiGraph(lat, m, edges, seq, realized, np.zeros(lat.n_compartments, dtype=np.int64))


class TestConnectedComponents:
    def test_empty_edges(self):
        g = graph_from_edges([], [0] * 6, 1, 3, 2)
        report = connected_components(g)
        assert report.n_components == 6
        assert report.L1 == 1
        assert np.all(report.sizes == 1)

    def test_single_cycle(self):
        n = 8
        edges = [(i, (i + 1) % n) for i in range(n)]
        g = graph_from_edges(edges, [2] * n, 1, 4, 2)
        report = connected_components(g)
        assert report.n_components == 1
        assert report.L1 == n

    def test_two_pairs_fixture(self):
        g = graph_from_edges([(0, 1), (2, 3)], [1, 1, 1, 1, 0, 0], 1, 3, 2)
        report = connected_components(g)
        assert sorted(report.sizes.tolist(), reverse=True) == [2, 2, 1, 1]
        assert report.L1 == 2
        assert report.L2 == 2

    def test_self_loops_and_multiedges_inert(self):
        plain = graph_from_edges([(0, 1)], [1, 1, 0, 0], 1, 2, 2)
        noisy = graph_from_edges([(0, 1), (0, 1), (2, 2)], [2, 2, 2, 0], 1, 2, 2)
        a = connected_components(plain)
        b = connected_components(noisy)
        assert sorted(a.sizes.tolist()) == sorted(b.sizes.tolist())

    def test_simplification_invariance_on_generated(self):
        rng = np.random.default_rng(31)
        dist = DegreeDistribution({0: 0.2, 1: 0.2, 2: 0.3, 4: 0.3})
        for _ in range(20):
            lat = TorusLattice(1, 4)
            seq = sample_degree_sequence(dist, lat, 4, rng)
            g = generate(seq, lat, rng)
            e = g.edges
            simple = np.unique(e[e[:, 0] != e[:, 1]], axis=0)
            stripped = MultiGraph(
                g.lattice, g.m, simple, g.prescribed,
                np.bincount(simple.ravel(), minlength=g.n), g.leftover,
            )
            a = connected_components(g)
            b = connected_components(stripped)
            assert sorted(a.sizes.tolist()) == sorted(b.sizes.tolist())


class TestCompartmentSpread:
    def test_singleton(self):
        g = graph_from_edges([], [0] * 6, 1, 3, 2)
        report = connected_components(g)
        spread = compartment_spread(report, report.component_of(3), g.lattice, g.m)
        assert spread.sum() == 1
        assert np.count_nonzero(spread) == 1

    def test_full_circle(self):
        n, m = 12, 3
        edges = [(i, (i + 1) % n) for i in range(n)]
        g = graph_from_edges(edges, [2] * n, 1, 4, m)
        report = connected_components(g)
        spread = compartment_spread(report, report.largest_id, g.lattice, m)
        assert spread.tolist() == [3, 3, 3, 3]

    def test_bad_id(self):
        g = graph_from_edges([], [0] * 4, 1, 2, 2)
        report = connected_components(g)
        with pytest.raises(ValueError):
            compartment_spread(report, 99, g.lattice, g.m)


class TestCensus:
    def test_all_singletons(self):
        g = graph_from_edges([], [0] * 8, 1, 4, 2)
        report = connected_components(g)
        out = census(report, beta=10.0, m=2)
        assert out.threshold > 1
        assert out.census_size == 0
        assert not out.matches_L1

    def test_single_component(self):
        n = 8
        edges = [(i, (i + 1) % n) for i in range(n)]
        g = graph_from_edges(edges, [2] * n, 1, 4, 2)
        report = connected_components(g)
        out = census(report, beta=10.0, m=2)
        assert out.census_size == n
        assert out.matches_L1

    def test_degenerate_thresholds(self):
        g = graph_from_edges([(0, 1), (2, 3)], [1, 1, 1, 1, 0, 0], 1, 3, 2)
        report = connected_components(g)
        huge = census(report, beta=100.0, m=2)
        assert huge.census_size == 0
        tiny = census(report, beta=1e-9, m=2)
        assert tiny.census_size == g.n

    def test_tie_is_not_a_match(self):
        g = graph_from_edges([(0, 1), (2, 3)], [1, 1, 1, 1, 0, 0], 1, 3, 2)
        report = connected_components(g)
        out = census(report, beta=1e-9, m=2)
        assert not out.matches_L1  # both pairs pass the threshold


class TestBlockingCompartments:
    def test_no_blockers(self):
        g = graph_from_edges([], [2] * 10, 1, 5, 2)
        assert blocking_compartments(g).size == 0

    def test_all_blockers(self):
        g = graph_from_edges([], [0] * 10, 1, 5, 2)
        assert blocking_compartments(g).tolist() == [0, 1, 2, 3, 4]

    def test_fixture(self):
        degrees = [0, 1, 3, 3, 1, 1, 3, 0, 2, 2]
        g = graph_from_edges([], degrees, 1, 5, 2)
        assert blocking_compartments(g).tolist() == [0, 2]

    def test_requires_circle(self):
        g = graph_from_edges([], [0] * 8, 2, 2, 2)
        with pytest.raises(ValueError):
            blocking_compartments(g)


class TestSpanCheck:
    def test_no_blockers_true(self):
        n = 10
        edges = [(i, (i + 1) % n) for i in range(n)]
        g = graph_from_edges(edges, [2] * n, 1, 5, 2)
        assert span_check(g, connected_components(g))

    def test_singletons_true(self):
        g = graph_from_edges([], [0] * 10, 1, 5, 2)
        assert span_check(g, connected_components(g))

    def test_crossing_component_detected(self):
        # compartment 1 is blocking but a hand-built edge list crosses it
        degrees = [2, 2, 1, 1, 2, 2]
        edges = [(0, 2), (3, 4)]  # 0-1 adjacent, 1-2 adjacent: both legal
        g = graph_from_edges(edges, degrees, 1, 3, 2)
        # component {0, 2} spans compartments 0 and 1; component {3, 4} spans 1 and 2;
        # merge them through an edge inside compartment 1 and it must cross
        crossing = graph_from_edges([(0, 2), (2, 5)], [1, 0, 1, 0, 0, 1], 1, 3, 2)
        assert blocking_compartments(crossing).size == 3
        assert not span_check(crossing, connected_components(crossing))
        assert span_check(g, connected_components(g))

    def test_generated_instances_never_cross(self):
        rng = np.random.default_rng(21)
        dist = DegreeDistribution({0: 0.35, 1: 0.3, 2: 0.2, 3: 0.15})
        for k, m in ((5, 3), (7, 2), (3, 4), (2, 3)):
            lat = TorusLattice(1, k)
            for _ in range(50):
                seq = sample_degree_sequence(dist, lat, m, rng)
                g = generate(seq, lat, rng)
                assert span_check(g, connected_components(g))

    def test_size_bound_from_gaps(self):
        rng = np.random.default_rng(22)
        dist = DegreeDistribution({0: 0.4, 1: 0.2, 3: 0.4})
        lat = TorusLattice(1, 12)
        found = 0
        for _ in range(200):
            seq = sample_degree_sequence(dist, lat, 2, rng)
            g = generate(seq, lat, rng)
            if blocking_compartments(g).size >= 2:
                found += 1
                report = connected_components(g)
                bound = g.m * (largest_blocker_gap(g) + 2)
                assert report.L1 <= bound
        assert found > 50


class TestSummaryRow:
    def test_keys_and_consistency(self):
        n = 8
        edges = [(i, (i + 1) % n) for i in range(n)]
        g = graph_from_edges(edges, [2] * n, 1, 4, 2)
        row = summary_row(g, connected_components(g), beta=10.0)
        assert row["n"] == n
        assert row["L1"] == n
        assert row["L2"] == 0
        assert row["matches_L1"]
        assert row["spread_min"] == 2 and row["spread_max"] == 2
