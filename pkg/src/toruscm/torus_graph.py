"""Compartment lattice on the d-torus and the constrained multigraph generator.

Compartments are the cells of a cubic lattice on the d-dimensional torus,
indexed 0..k^d-1 in row-major order.  Each compartment holds m vertices
(vertex v lives in compartment v // m) and an edge may only join vertices of
the same or l1-adjacent compartments.  The generator repeatedly draws an
unordered pair of half-edges uniformly among all currently allowed pairs
until no allowed pair remains; self-loops and multi-edges are kept.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from toruscm._kernels import match_kernel
from toruscm.degree_model import DegreeSequence


@dataclass(frozen=True)
class TorusLattice:
    """Cubic lattice of k^d compartments on the d-torus."""

    d: int
    k: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be at least 1")
        if self.k < 1:
            raise ValueError("side length must be at least 1")

    @property
    def n_compartments(self) -> int:
        return self.k**self.d

    def coords(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.n_compartments:
            raise ValueError(f"compartment id {i} out of range")
        out = []
        for _ in range(self.d):
            i, r = divmod(i, self.k)
            out.append(r)
        return tuple(reversed(out))

    def index(self, coords) -> int:
        if len(coords) != self.d:
            raise ValueError("coordinate arity does not match dimension")
        i = 0
        for c in coords:
            i = i * self.k + (int(c) % self.k)
        return i

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Closed neighborhood of compartment i, deduplicated and sorted.

        Contains i itself plus the wrap-around l1-neighbors; its size is
        min(2d+1, k^d) and equals 2d+1 whenever k >= 3.
        """
        c = self.coords(i)
        out = {i}
        for ax in range(self.d):
            for s in (-1, 1):
                cc = list(c)
                cc[ax] = (cc[ax] + s) % self.k
                out.add(self.index(cc))
        return tuple(sorted(out))

    def adjacent_pairs(self) -> np.ndarray:
        """All unordered allowed compartment pairs {i, j}, including i == j."""
        ba, bb, _, _ = _bucket_structure(self.d, self.k)
        return np.stack([ba, bb], axis=1)


@lru_cache(maxsize=32)
def _bucket_structure(d: int, k: int):
    """Bucket arrays for the matcher: pair list plus compartment->bucket CSR."""
    shape = (k,) * d
    n_comp = k**d
    ids = np.arange(n_comp, dtype=np.int64)
    coords = np.stack(np.unravel_index(ids, shape), axis=1)
    cols = [ids]
    for ax in range(d):
        for s in (-1, 1):
            cc = coords.copy()
            cc[:, ax] = (cc[:, ax] + s) % k
            cols.append(np.ravel_multi_index(tuple(cc.T), shape).astype(np.int64))
    a = np.repeat(ids, len(cols))
    b = np.stack(cols, axis=1).ravel()
    pairs = np.unique(np.stack([np.minimum(a, b), np.maximum(a, b)], axis=1), axis=0)
    bucket_a = np.ascontiguousarray(pairs[:, 0])
    bucket_b = np.ascontiguousarray(pairs[:, 1])
    bids = np.arange(pairs.shape[0], dtype=np.int64)
    cross = bucket_a != bucket_b
    comps = np.concatenate([bucket_a, bucket_b[cross]])
    members = np.concatenate([bids, bids[cross]])
    order = np.argsort(comps, kind="stable")
    comps, members = comps[order], members[order]
    indptr = np.zeros(n_comp + 1, dtype=np.int64)
    indptr[1:] = np.cumsum(np.bincount(comps, minlength=n_comp))
    return bucket_a, bucket_b, indptr, np.ascontiguousarray(members)


@dataclass
class MultiGraph:
    """Multigraph on a compartment lattice; immutable once constructed.

    `edges` is an (E, 2) array of vertex ids with u <= v per row; self-loops
    appear as u == v and contribute 2 to the realized degree.  `leftover`
    counts the unmatched half-edges per compartment.
    """

    lattice: TorusLattice
    m: int
    edges: np.ndarray
    prescribed: DegreeSequence
    realized: np.ndarray
    leftover: np.ndarray
    seed: int | None = None
    _adjacency: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        self.realized = np.asarray(self.realized, dtype=np.int64)
        self.leftover = np.asarray(self.leftover, dtype=np.int64)
        if self.realized.size != self.n:
            raise ValueError("realized degree array has wrong length")
        if self.leftover.size != self.lattice.n_compartments:
            raise ValueError("leftover array has wrong length")

    @property
    def n(self) -> int:
        return self.m * self.lattice.n_compartments

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    def compartment_of(self, v) -> np.ndarray | int:
        return v // self.m

    def vertex_compartments(self) -> np.ndarray:
        return np.arange(self.n, dtype=np.int64) // self.m


class StubPool:
    """Step-by-step reference implementation of the matching process.

    Keeps per-compartment lists of free half-edges and, for every allowed
    compartment pair, the current number of allowed stub pairs, maintained
    incrementally under matches.  `match_kernel` is the compiled equivalent;
    this class exists for small instances, tests and enumeration oracles.
    """

    def __init__(self, seq: DegreeSequence):
        self.lattice = seq.lattice
        self.m = seq.m
        ba, bb, indptr, members = _bucket_structure(self.lattice.d, self.lattice.k)
        self.bucket_pairs = [(int(x), int(y)) for x, y in zip(ba, bb)]
        self._comp_buckets = [
            [int(b) for b in members[indptr[c] : indptr[c + 1]]]
            for c in range(self.lattice.n_compartments)
        ]
        per = seq.per_compartment()
        self.stubs = [
            [int(c * self.m + v) for v in range(self.m) for _ in range(int(per[c, v]))]
            for c in range(self.lattice.n_compartments)
        ]
        self.pair_counts = [self._count(b) for b in range(len(self.bucket_pairs))]

    def _count(self, b: int) -> int:
        a, c = self.bucket_pairs[b]
        if a == c:
            s = len(self.stubs[a])
            return s * (s - 1) // 2
        return len(self.stubs[a]) * len(self.stubs[c])

    def pair_counts_from_scratch(self) -> list[int]:
        return [self._count(b) for b in range(len(self.bucket_pairs))]

    @property
    def total_pairs(self) -> int:
        return sum(self.pair_counts)

    def free_counts(self) -> np.ndarray:
        return np.array([len(s) for s in self.stubs], dtype=np.int64)

    def step(self, rng: np.random.Generator) -> tuple[int, int] | None:
        """Match one uniformly chosen allowed pair; None when exhausted."""
        total = self.total_pairs
        if total == 0:
            return None
        r = int(rng.integers(total))
        b = 0
        while r >= self.pair_counts[b]:
            r -= self.pair_counts[b]
            b += 1
        a, c = self.bucket_pairs[b]
        if a == c:
            s = len(self.stubs[a])
            i = int(rng.integers(s))
            j = int(rng.integers(s))
            while j == i:  # reject the degenerate same-stub draw
                j = int(rng.integers(s))
            u, v = self.stubs[a][i], self.stubs[a][j]
            for idx in sorted((i, j), reverse=True):
                self.stubs[a][idx] = self.stubs[a][-1]
                self.stubs[a].pop()
        else:
            i = int(rng.integers(len(self.stubs[a])))
            j = int(rng.integers(len(self.stubs[c])))
            u, v = self.stubs[a][i], self.stubs[c][j]
            self.stubs[a][i] = self.stubs[a][-1]
            self.stubs[a].pop()
            self.stubs[c][j] = self.stubs[c][-1]
            self.stubs[c].pop()
        touched = {a, c}
        for x in touched:
            for bb in self._comp_buckets[x]:
                self.pair_counts[bb] = self._count(bb)
        return (u, v) if u <= v else (v, u)

    def run(self, rng: np.random.Generator) -> list[tuple[int, int]]:
        edges = []
        while True:
            e = self.step(rng)
            if e is None:
                return edges
            edges.append(e)


def generate(seq: DegreeSequence, lattice: TorusLattice, rng: np.random.Generator) -> MultiGraph:
    """Generate a constrained multigraph by uniform matching over allowed pairs.

    Terminates when no allowed pair remains, which leaves at most one
    unmatched half-edge per compartment; leftovers are recorded per
    compartment and otherwise discarded.
    """
    if seq.lattice != lattice:
        raise ValueError("degree sequence was built for a different lattice")
    degrees = seq.degrees
    n = seq.n
    per_comp = seq.per_compartment().sum(axis=1)
    stub_vertex = np.repeat(np.arange(n, dtype=np.int64), degrees)
    seg_start = np.zeros(lattice.n_compartments, dtype=np.int64)
    seg_start[1:] = np.cumsum(per_comp)[:-1]
    free = per_comp.astype(np.int64)
    cap = int(stub_vertex.size // 2)
    eu = np.empty(cap, dtype=np.int64)
    ev = np.empty(cap, dtype=np.int64)
    ba, bb, indptr, members = _bucket_structure(lattice.d, lattice.k)
    seed = int(rng.integers(0, 2**63))
    n_edges = match_kernel(seed, stub_vertex, seg_start, free, ba, bb, indptr, members, eu, ev)
    eu, ev = eu[:n_edges], ev[:n_edges]
    edges = np.stack([np.minimum(eu, ev), np.maximum(eu, ev)], axis=1)
    realized = np.bincount(np.concatenate([eu, ev]), minlength=n).astype(np.int64)
    return MultiGraph(lattice, seq.m, edges, seq, realized, free, seed=seed)


def termination_check(graph: MultiGraph) -> bool:
    """True iff no allowed half-edge pair remains among the leftovers.

    Requires every compartment to hold at most one leftover stub and no two
    adjacent compartments to both hold one.
    """
    leftover = graph.leftover
    if np.any(leftover > 1):
        return False
    for i in np.flatnonzero(leftover == 1):
        for j in graph.lattice.neighbors(int(i)):
            if j != i and leftover[j] == 1:
                return False
    return True


def percolate(graph: MultiGraph, p_keep: float, rng: np.random.Generator) -> MultiGraph:
    """Keep each edge independently with probability ``p_keep``.

    Prescribed degrees and leftovers are carried over unchanged; realized
    degrees are recomputed from the retained edges.
    """
    if not 0.0 <= p_keep <= 1.0:
        raise ValueError("p_keep must lie in [0, 1]")
    mask = rng.random(graph.n_edges) < p_keep
    edges = graph.edges[mask]
    realized = np.bincount(edges.ravel(), minlength=graph.n).astype(np.int64)
    return MultiGraph(
        graph.lattice, graph.m, edges, graph.prescribed, realized,
        graph.leftover.copy(), seed=graph.seed,
    )


def _sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def write_edge_list(graph: MultiGraph, destination) -> None:
    """Write the edge list as CSV (header ``u,v``) plus a JSON sidecar.

    The sidecar carries d, k, m, the prescribed degrees, the per-compartment
    leftover counts and the generator seed, so a read round-trips the graph.
    """
    path = Path(destination)
    with open(path, "w") as fh:
        fh.write("u,v\n")
        if graph.n_edges:
            np.savetxt(fh, graph.edges, fmt="%d", delimiter=",")
    meta = {
        "d": graph.lattice.d,
        "k": graph.lattice.k,
        "m": graph.m,
        "leftover": graph.leftover.tolist(),
        "prescribed": graph.prescribed.degrees.tolist(),
        "seed": graph.seed,
    }
    with open(_sidecar_path(path), "w") as fh:
        json.dump(meta, fh)


def read_edge_list(source, lattice: TorusLattice, m: int) -> MultiGraph:
    """Read an edge-list CSV plus sidecar back into a MultiGraph.

    Malformed rows and edges between non-adjacent compartments are rejected
    with the offending 1-based line number.
    """
    path = Path(source)
    with open(_sidecar_path(path)) as fh:
        meta = json.load(fh)
    if (meta["d"], meta["k"], meta["m"]) != (lattice.d, lattice.k, m):
        raise ValueError(
            f"sidecar lattice (d={meta['d']}, k={meta['k']}, m={meta['m']}) does not "
            f"match requested (d={lattice.d}, k={lattice.k}, m={m})"
        )
    n = m * lattice.n_compartments
    neighbor_cache: dict[int, tuple[int, ...]] = {}
    rows = []
    with open(path) as fh:
        header = fh.readline()
        if header.strip() != "u,v":
            raise ValueError("line 1: expected header 'u,v'")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected two comma-separated fields")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"line {lineno}: non-integer vertex id") from None
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"line {lineno}: vertex id out of range")
            cu, cv = u // m, v // m
            if cu not in neighbor_cache:
                neighbor_cache[cu] = lattice.neighbors(cu)
            if cv not in neighbor_cache[cu]:
                raise ValueError(
                    f"line {lineno}: edge ({u}, {v}) joins non-adjacent compartments "
                    f"{cu} and {cv}"
                )
            rows.append((min(u, v), max(u, v)))
    edges = np.array(rows, dtype=np.int64).reshape(-1, 2)
    prescribed = DegreeSequence(np.array(meta["prescribed"], dtype=np.int64), lattice, m)
    realized = np.bincount(edges.ravel(), minlength=n).astype(np.int64)
    return MultiGraph(
        lattice, m, edges, prescribed, realized,
        np.array(meta["leftover"], dtype=np.int64), seed=meta.get("seed"),
    )
