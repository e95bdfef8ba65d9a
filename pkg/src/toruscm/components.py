"""Connected-component analysis of generated multigraphs.

Covers component sizes and the largest/second-largest statistics, the
per-compartment spread of a component, the size census used to identify the
giant component, and the circle-specific blocking-compartment structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from toruscm._kernels import component_labels
from toruscm.torus_graph import MultiGraph, TorusLattice


@dataclass
class ComponentReport:
    """Component id per vertex plus per-component sizes."""

    labels: np.ndarray
    sizes: np.ndarray  # size per component id

    @property
    def n_components(self) -> int:
        return int(self.sizes.size)

    @property
    def sizes_desc(self) -> np.ndarray:
        return np.sort(self.sizes)[::-1]

    @property
    def largest_id(self) -> int:
        return int(np.argmax(self.sizes))

    @property
    def L1(self) -> int:
        return int(self.sizes.max()) if self.sizes.size else 0

    @property
    def L2(self) -> int:
        if self.sizes.size < 2:
            return 0
        return int(self.sizes_desc[1])

    def component_of(self, v: int) -> int:
        return int(self.labels[v])

    def vertices_of(self, component_id: int) -> np.ndarray:
        return np.flatnonzero(self.labels == component_id)


@dataclass(frozen=True)
class CensusReport:
    """Vertices living in components at least beta * log(m) large."""

    beta: float
    threshold: float
    census_size: int
    matches_L1: bool


def connected_components(graph: MultiGraph) -> ComponentReport:
    """Exact components under edge connectivity (self-loops are inert)."""
    labels, n_comp = component_labels(graph.n, graph.edges[:, 0], graph.edges[:, 1])
    sizes = np.bincount(labels, minlength=n_comp).astype(np.int64)
    return ComponentReport(labels, sizes)


def compartment_spread(
    report: ComponentReport, component_id: int, lattice: TorusLattice, m: int
) -> np.ndarray:
    """Number of the component's vertices in each compartment."""
    if not 0 <= component_id < report.n_components:
        raise ValueError(f"component id {component_id} out of range")
    verts = report.vertices_of(component_id)
    return np.bincount(verts // m, minlength=lattice.n_compartments).astype(np.int64)


def census(report: ComponentReport, beta: float, m: int) -> CensusReport:
    """Census {x : |C_x| >= beta log m} and whether it equals the largest component."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    if m < 2:
        raise ValueError("m must be at least 2")
    threshold = beta * math.log(m)
    big = report.sizes >= threshold
    census_size = int(report.sizes[big].sum())
    matches = bool(big.sum() == 1 and big[report.largest_id])
    return CensusReport(beta, threshold, census_size, matches)


def blocking_compartments(graph: MultiGraph) -> np.ndarray:
    """Compartments (d=1 only) whose prescribed degrees are all at most 1.

    No component can cross such a compartment on the circle: its vertices
    have at most one incident edge, so a path entering one ends there.
    """
    if graph.lattice.d != 1:
        raise ValueError("blocking compartments are defined on the circle (d=1)")
    per = graph.prescribed.per_compartment()
    return np.flatnonzero(per.max(axis=1) <= 1).astype(np.int64)


def _window_of(blockers: np.ndarray, c: int) -> int:
    # index i such that c lies circularly in the open arc (blockers[i], blockers[i+1])
    idx = int(np.searchsorted(blockers, c, side="right")) - 1
    return idx % blockers.size


def span_check(graph: MultiGraph, report: ComponentReport) -> bool:
    """Check that no component's covering arc strictly contains a blocker.

    Every component must fit inside a single arc delimited by circularly
    consecutive blocking compartments; the arc's endpoints themselves may be
    touched (their degree-<=1 vertices can attach to the component without
    letting it cross).  Vacuously true with no blockers.
    """
    if graph.lattice.d != 1:
        raise ValueError("span check is defined on the circle (d=1)")
    blockers = blocking_compartments(graph)
    if blockers.size == 0:
        return True
    k = graph.lattice.k
    blocker_set = set(blockers.tolist())
    nb = blockers.size

    comp_of_vertex = graph.vertex_compartments()
    touched = [set() for _ in range(report.n_components)]
    for label, comp in zip(report.labels, comp_of_vertex):
        touched[label].add(int(comp))

    for comps in touched:
        if len(comps) <= 1:
            continue
        plain = [c for c in comps if c not in blocker_set]
        hit_blockers = [c for c in comps if c in blocker_set]
        if not plain:
            # only blocking compartments: a single edge can join two adjacent ones
            if len(comps) != 2:
                return False
            a, b = sorted(comps)
            if (b - a) % k != 1 and (a - b) % k != 1:
                return False
            continue
        windows = {_window_of(blockers, c) for c in plain}
        if len(windows) > 1:
            return False
        w = windows.pop()
        endpoints = {int(blockers[w]), int(blockers[(w + 1) % nb])}
        if any(c not in endpoints for c in hit_blockers):
            return False
    return True


def largest_blocker_gap(graph: MultiGraph) -> int:
    """Largest circular run of non-blocking compartments (d=1, >= 1 blocker)."""
    blockers = blocking_compartments(graph)
    if blockers.size == 0:
        raise ValueError("no blocking compartments")
    k = graph.lattice.k
    if blockers.size == 1:
        return k - 1
    gaps = np.diff(blockers) - 1
    wrap = (blockers[0] - blockers[-1] - 1) % k
    return int(max(gaps.max(initial=0), wrap))


def summary_row(graph: MultiGraph, report: ComponentReport, beta: float) -> dict:
    """One-row summary used by the experiment CSVs."""
    cen = census(report, beta, graph.m)
    spread = compartment_spread(report, report.largest_id, graph.lattice, graph.m)
    return {
        "n": graph.n,
        "L1": report.L1,
        "L2": report.L2,
        "census_size": cen.census_size,
        "matches_L1": cen.matches_L1,
        "spread_min": int(spread.min()),
        "spread_max": int(spread.max()),
    }
