import numpy as np
import pytest

from oracles import edge_multiset_key, empirical_total_variation, enumerate_matchings
from toruscm.degree_model import DegreeDistribution, DegreeSequence, sample_degree_sequence
from toruscm.torus_graph import (
    MultiGraph,
    StubPool,
    TorusLattice,
    generate,
    percolate,
    read_edge_list,
    termination_check,
    write_edge_list,
)


def make_graph(degrees, d, k, m, seed=0):
    lat = TorusLattice(d, k)
    seq = DegreeSequence(np.array(degrees, dtype=np.int64), lat, m)
    return generate(seq, lat, np.random.default_rng(seed))


def check_structure(graph):
    lat, m = graph.lattice, graph.m
    for u, v in graph.edges:
        assert v // m in lat.neighbors(int(u // m)), "locality violated"
    assert 2 * graph.n_edges + graph.leftover.sum() == graph.prescribed.degrees.sum()
    assert termination_check(graph)
    assert np.all(graph.realized <= graph.prescribed.degrees)


class TestLattice:
    def test_circle_neighbors(self):
        lat = TorusLattice(1, 5)
        assert lat.neighbors(0) == (0, 1, 4)

    def test_torus_neighbors(self):
        lat = TorusLattice(2, 4)
        i = lat.index((0, 0))
        expected = {lat.index(c) for c in [(0, 0), (1, 0), (3, 0), (0, 1), (0, 3)]}
        assert set(lat.neighbors(i)) == expected
        assert len(lat.neighbors(i)) == 5

    def test_k2_dedup(self):
        assert TorusLattice(1, 2).neighbors(0) == (0, 1)

    def test_k1_single(self):
        assert TorusLattice(1, 1).neighbors(0) == (0,)
        assert TorusLattice(2, 1).neighbors(0) == (0,)

    def test_symmetry(self):
        for d, k in ((1, 5), (2, 3), (2, 2), (3, 3)):
            lat = TorusLattice(d, k)
            for i in range(lat.n_compartments):
                for j in lat.neighbors(i):
                    assert i in lat.neighbors(j)

    def test_coords_roundtrip(self):
        lat = TorusLattice(2, 4)
        for i in range(16):
            assert lat.index(lat.coords(i)) == i


class TestGenerate:
    def test_all_zero_degrees(self):
        g = make_graph([0] * 6, 1, 3, 2)
        assert g.n_edges == 0
        assert np.all(g.leftover == 0)
        assert termination_check(g)

    def test_single_compartment_pair(self):
        for seed in range(20):
            g = make_graph([1, 1], 1, 1, 2, seed=seed)
            assert g.n_edges == 1
            assert tuple(g.edges[0]) == (0, 1)

    def test_single_compartment_odd_stub(self):
        for seed in range(20):
            g = make_graph([1, 1, 1], 1, 1, 3, seed=seed)
            assert g.n_edges == 1
            assert g.leftover.sum() == 1

    def test_initial_pair_count(self):
        # free stubs (2, 3, 1) on the k=3 circle: all compartment pairs are
        # adjacent, so the allowed pairs are all C(6, 2) = 15
        lat = TorusLattice(1, 3)
        seq = DegreeSequence(np.array([1, 1, 0, 1, 1, 1, 1, 0, 0]), lat, 3)
        pool = StubPool(seq)
        assert pool.total_pairs == 15
        within = sum(
            pool.pair_counts[b] for b, (x, y) in enumerate(pool.bucket_pairs) if x == y
        )
        assert within == 1 + 3 + 0

    def test_structure_random_instances(self):
        rng = np.random.default_rng(11)
        dist = DegreeDistribution({0: 0.2, 1: 0.3, 2: 0.3, 3: 0.2})
        for d, k, m in ((1, 5, 4), (2, 3, 3), (1, 2, 5), (2, 2, 2), (1, 1, 6)):
            lat = TorusLattice(d, k)
            seq = sample_degree_sequence(dist, lat, m, rng)
            g = generate(seq, lat, rng)
            check_structure(g)

    def test_mismatched_lattice_rejected(self):
        lat = TorusLattice(1, 3)
        seq = DegreeSequence(np.zeros(6, dtype=np.int64), lat, 2)
        with pytest.raises(ValueError):
            generate(seq, TorusLattice(1, 4), np.random.default_rng(0))


class TestTermination:
    def test_all_zero(self):
        g = make_graph([0] * 4, 1, 2, 2)
        assert termination_check(g)

    def test_two_leftover_in_compartment(self):
        g = make_graph([0] * 10, 1, 5, 2)
        bad = MultiGraph(
            g.lattice, g.m, g.edges, g.prescribed, g.realized,
            np.array([2, 0, 0, 0, 0]),
        )
        assert not termination_check(bad)

    def test_nonadjacent_leftovers_ok(self):
        g = make_graph([0] * 10, 1, 5, 2)
        ok = MultiGraph(
            g.lattice, g.m, g.edges, g.prescribed, g.realized,
            np.array([1, 0, 1, 0, 0]),
        )
        assert termination_check(ok)
        bad = MultiGraph(
            g.lattice, g.m, g.edges, g.prescribed, g.realized,
            np.array([1, 1, 0, 0, 0]),
        )
        assert not termination_check(bad)


class TestStubPool:
    def test_incremental_counts_match_scratch(self):
        rng = np.random.default_rng(3)
        dist = DegreeDistribution({0: 0.25, 1: 0.25, 2: 0.25, 3: 0.25})
        for d, k, m in ((1, 4, 3), (2, 2, 2), (1, 2, 4)):
            lat = TorusLattice(d, k)
            seq = sample_degree_sequence(dist, lat, m, rng)
            pool = StubPool(seq)
            while True:
                assert pool.pair_counts == pool.pair_counts_from_scratch()
                if pool.step(rng) is None:
                    break

    def test_run_matches_kernel_invariants(self):
        rng = np.random.default_rng(4)
        lat = TorusLattice(1, 4)
        seq = DegreeSequence(np.array([2, 1, 1, 0, 3, 1, 2, 2]), lat, 2)
        edges = StubPool(seq).run(rng)
        assert 2 * len(edges) + StubPool(seq).total_pairs >= 0  # smoke
        total = sum(seq.degrees)
        leftover = total - 2 * len(edges)
        assert leftover >= 0


class TestUniformity:
    def test_kernel_matches_enumeration_small(self):
        # binding constraints: k=4 circle, compartments 0-2 and 1-3 not adjacent
        lat = TorusLattice(1, 4)
        seq = DegreeSequence(np.ones(8, dtype=np.int64), lat, 2)
        exact = enumerate_matchings(seq)
        rng = np.random.default_rng(42)
        samples = []
        for _ in range(20000):
            g = generate(seq, lat, rng)
            samples.append(edge_multiset_key(g.edges))
        tv = empirical_total_variation(samples, exact)
        assert tv <= 0.03, f"TV {tv} vs enumeration"

    def test_stub_pool_matches_enumeration_small(self):
        lat = TorusLattice(1, 4)
        seq = DegreeSequence(np.ones(8, dtype=np.int64), lat, 2)
        exact = enumerate_matchings(seq)
        rng = np.random.default_rng(43)
        samples = []
        for _ in range(20000):
            edges = StubPool(seq).run(rng)
            samples.append(tuple(sorted(edges)))
        tv = empirical_total_variation(samples, exact)
        assert tv <= 0.03, f"TV {tv} vs enumeration"


class TestPercolate:
    def test_keep_all(self):
        g = make_graph([2, 2, 2, 2, 2, 2], 1, 3, 2, seed=9)
        kept = percolate(g, 1.0, np.random.default_rng(0))
        assert np.array_equal(kept.edges, g.edges)
        assert np.array_equal(kept.realized, g.realized)

    def test_keep_none(self):
        g = make_graph([2, 2, 2, 2, 2, 2], 1, 3, 2, seed=9)
        kept = percolate(g, 0.0, np.random.default_rng(0))
        assert kept.n_edges == 0
        assert np.all(kept.realized == 0)
        assert np.array_equal(kept.prescribed.degrees, g.prescribed.degrees)

    def test_binomial_concentration(self):
        dist = DegreeDistribution.point_mass(4)
        lat = TorusLattice(1, 10)
        seq = sample_degree_sequence(dist, lat, 100, np.random.default_rng(1))
        g = generate(seq, lat, np.random.default_rng(1))
        e = g.n_edges
        kept = percolate(g, 0.5, np.random.default_rng(2))
        assert abs(kept.n_edges - e / 2) <= 3 * np.sqrt(e * 0.25)


class TestEdgeListIO:
    def test_empty_roundtrip(self, tmp_path):
        g = make_graph([0] * 6, 1, 3, 2)
        path = tmp_path / "edges.csv"
        write_edge_list(g, path)
        back = read_edge_list(path, g.lattice, g.m)
        assert back.n_edges == 0
        assert np.array_equal(back.prescribed.degrees, g.prescribed.degrees)

    def test_generated_roundtrip(self, tmp_path):
        dist = DegreeDistribution({1: 0.5, 3: 0.5})
        lat = TorusLattice(2, 3)
        seq = sample_degree_sequence(dist, lat, 4, np.random.default_rng(5))
        g = generate(seq, lat, np.random.default_rng(5))
        path = tmp_path / "edges.csv"
        write_edge_list(g, path)
        back = read_edge_list(path, lat, 4)
        assert np.array_equal(back.edges, g.edges)
        assert np.array_equal(back.leftover, g.leftover)
        assert np.array_equal(back.prescribed.degrees, g.prescribed.degrees)
        assert back.seed == g.seed

    def test_locality_violation_names_row(self, tmp_path):
        g = make_graph([1] * 10, 1, 5, 2)
        path = tmp_path / "edges.csv"
        write_edge_list(g, path)
        # vertex 0 is in compartment 0, vertex 5 in compartment 2: not adjacent
        with open(path) as fh:
            lines = fh.read().splitlines()
        lines.insert(1, "0,5")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        with pytest.raises(ValueError, match="line 2"):
            read_edge_list(path, g.lattice, g.m)

    def test_malformed_row_names_row(self, tmp_path):
        path = tmp_path / "edges.csv"
        path.write_text("u,v\n0,1\n2\n")
        sidecar = tmp_path / "edges.csv.json"
        sidecar.write_text(
            '{"d": 1, "k": 1, "m": 4, "leftover": [0], '
            '"prescribed": [1, 1, 1, 1], "seed": null}'
        )
        with pytest.raises(ValueError, match="line 3"):
            read_edge_list(path, TorusLattice(1, 1), 4)

    def test_sidecar_mismatch(self, tmp_path):
        g = make_graph([0] * 6, 1, 3, 2)
        path = tmp_path / "edges.csv"
        write_edge_list(g, path)
        with pytest.raises(ValueError, match="sidecar"):
            read_edge_list(path, TorusLattice(1, 6), 2)
