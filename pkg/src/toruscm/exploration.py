"""Generation-synchronous exploration of components with compartment tracking.

An exploration keeps, per compartment, the explored / active / unseen
partition of vertices.  Each step reveals all unseen neighbors of the whole
active set at once, which matches the process the branching machinery
dominates.  Multi-edges and self-loops are ignored: neighbor sets per
generation are sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from toruscm.torus_graph import MultiGraph

UNSEEN, ACTIVE, EXPLORED = 0, 1, 2

DIED = "died"
REACHED_THRESHOLD = "reached_threshold"
BUDGET_EXHAUSTED = "budget_exhausted"


def _adjacency(graph: MultiGraph) -> tuple[np.ndarray, np.ndarray]:
    """CSR adjacency with per-vertex deduplicated neighbors, self-loops dropped."""
    if graph._adjacency is not None:
        return graph._adjacency
    e = graph.edges
    e = e[e[:, 0] != e[:, 1]]
    both = np.concatenate([e, e[:, ::-1]], axis=0)
    if both.size:
        both = np.unique(both, axis=0)
    indptr = np.zeros(graph.n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum(np.bincount(both[:, 0], minlength=graph.n))
    graph._adjacency = (indptr, np.ascontiguousarray(both[:, 1]))
    return graph._adjacency


@dataclass
class ExplorationState:
    """State of one exploration run; owned exclusively by its caller.

    `status` partitions the vertex set into unseen / active / explored, so
    the per-compartment triples are views on it.  `exposed` counts every
    vertex ever activated, i.e. the running sum of generation sizes.
    """

    graph: MultiGraph
    status: np.ndarray
    active: np.ndarray
    generation: int = 0
    exposed: int = 0
    collisions: int = 0
    trace: list = field(default_factory=list)
    # reveal instances that produced the current active set; the same number
    # of backward edges is expected when it is explored
    _active_reveals: int = 0

    @property
    def total_active(self) -> int:
        return int(self.active.size)

    def active_counts(self) -> np.ndarray:
        """Vector |A_l(i)| over compartments."""
        return np.bincount(
            self.active // self.graph.m, minlength=self.graph.lattice.n_compartments
        ).astype(np.int64)

    def vertices_with_status(self, which: int, compartment: int | None = None) -> np.ndarray:
        verts = np.flatnonzero(self.status == which)
        if compartment is not None:
            verts = verts[verts // self.graph.m == compartment]
        return verts

    def revealed_vertices(self) -> np.ndarray:
        """Everything exposed so far; after death this is the start component."""
        return np.flatnonzero(self.status != UNSEEN)

    def _log(self):
        self.trace.append((self.generation, self.total_active, self.exposed, self.collisions))


def start(graph: MultiGraph, v: int) -> ExplorationState:
    """Fresh exploration with the single vertex v active."""
    if not 0 <= v < graph.n:
        raise ValueError(f"vertex {v} out of range")
    status = np.zeros(graph.n, dtype=np.int8)
    status[v] = ACTIVE
    state = ExplorationState(graph, status, np.array([v], dtype=np.int64), exposed=1)
    state._log()
    return state


def step(state: ExplorationState, graph: MultiGraph | None = None) -> ExplorationState:
    """Advance one generation: activate all unseen neighbors of the active set.

    Within-generation duplicates are deduplicated; they and the revisits of
    already-exposed vertices beyond the one discovery edge per active vertex
    are counted as collisions.  Mutates and returns the state.
    """
    if graph is not None and graph is not state.graph:
        raise ValueError("state belongs to a different graph")
    if state.total_active == 0:
        raise ValueError("exploration already terminated")
    indptr, indices = _adjacency(state.graph)
    act = state.active
    starts = indptr[act]
    lens = indptr[act + 1] - starts
    total = int(lens.sum())
    if total:
        cum = np.cumsum(lens)
        pos = np.arange(total) - np.repeat(cum - lens, lens) + np.repeat(starts, lens)
        cand = indices[pos]
    else:
        cand = np.empty(0, dtype=np.int64)
    seen = state.status[cand] != UNSEEN
    backward = int(seen.sum())
    fresh = cand[~seen]
    new = np.unique(fresh)
    state.collisions += (fresh.size - new.size) + max(0, backward - state._active_reveals)
    state._active_reveals = int(fresh.size)
    state.status[act] = EXPLORED
    state.status[new] = ACTIVE
    state.active = new
    state.generation += 1
    state.exposed += int(new.size)
    state._log()
    return state


def explore_until(
    graph: MultiGraph, v: int, active_threshold: int, exposed_budget: int
) -> tuple[str, ExplorationState]:
    """Explore from v until death, the exposure threshold, or the budget.

    Returns (outcome, state) where outcome is one of DIED,
    REACHED_THRESHOLD (cumulative exposure reached `active_threshold`) or
    BUDGET_EXHAUSTED (exposure exceeded `exposed_budget` first).
    """
    if active_threshold < 1 or exposed_budget < 1:
        raise ValueError("thresholds must be at least 1")
    state = start(graph, v)
    while True:
        if state.exposed >= active_threshold:
            return REACHED_THRESHOLD, state
        if state.total_active == 0:
            return DIED, state
        if state.exposed > exposed_budget:
            return BUDGET_EXHAUSTED, state
        step(state)


def trace_csv(state: ExplorationState) -> str:
    """Per-generation trace (generation, active size, exposed, collisions) as CSV."""
    lines = ["generation,active,exposed,collisions"]
    lines.extend(f"{g},{a},{e},{c}" for g, a, e, c in state.trace)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RepeatedExplorationResult:
    outcome: str
    attempts: int
    exposed: int


def repeated_exploration(
    graph: MultiGraph,
    compartment: int,
    active_threshold: int,
    exposed_budget: int,
    rng: np.random.Generator,
) -> RepeatedExplorationResult:
    """Restart explorations at fresh vertices of one compartment.

    Each attempt starts at a uniformly chosen never-exposed vertex of the
    compartment; the exposure budget is shared across attempts.  Stops at
    the first attempt reaching the threshold, when the budget is spent, or
    when no fresh start vertex remains.
    """
    if not 0 <= compartment < graph.lattice.n_compartments:
        raise ValueError(f"compartment {compartment} out of range")
    if graph.m < 1:
        raise ValueError("compartment is empty")
    ever_exposed = np.zeros(graph.n, dtype=bool)
    comp_vertices = np.arange(compartment * graph.m, (compartment + 1) * graph.m)
    used = 0
    attempts = 0
    while True:
        fresh = comp_vertices[~ever_exposed[comp_vertices]]
        if fresh.size == 0 or used >= exposed_budget:
            return RepeatedExplorationResult(BUDGET_EXHAUSTED, attempts, used)
        v = int(fresh[rng.integers(fresh.size)])
        attempts += 1
        outcome, state = explore_until(graph, v, active_threshold, exposed_budget - used)
        used += state.exposed
        if outcome == REACHED_THRESHOLD:
            return RepeatedExplorationResult(REACHED_THRESHOLD, attempts, used)
        if outcome == BUDGET_EXHAUSTED:
            return RepeatedExplorationResult(BUDGET_EXHAUSTED, attempts, used)
        ever_exposed |= state.status != UNSEEN
