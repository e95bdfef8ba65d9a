"""Configuration model with geometric compartment constraints on a d-torus.

Vertices live in the cells of a cubic lattice on the d-dimensional torus and
edges are only allowed inside a cell or between l1-adjacent cells.  The
package provides the half-edge matching generator, connected-component
analysis, the compartment-tracking exploration process, Galton-Watson and
multitype branching simulators, concentration-bound evaluators, and a
configuration-driven Monte Carlo experiment harness with a CLI.
"""

from toruscm.degree_model import (
    ConvergenceReport,
    DegreeDistribution,
    DegreeSequence,
    check_convergence,
    extinction_probability,
    sample_degree_sequence,
    truncated_quantile_sample,
)
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
from toruscm.components import (
    CensusReport,
    ComponentReport,
    blocking_compartments,
    census,
    compartment_spread,
    connected_components,
    span_check,
)
from toruscm.exploration import (
    ExplorationState,
    explore_until,
    repeated_exploration,
    start,
    step,
)
from toruscm.branching import (
    DominatedOffspring,
    LazyWalkPmf,
    TypeHistogram,
    dominated_offspring,
    gw_simulate,
    lazy_walk_pmf,
    martingale_rate,
    multitype_step,
    ratio_check,
    rw_representation,
    survival_estimate,
)
from toruscm.concentration import BoundedDifferenceSpec, empirical_tail_check, mcdiarmid_bound

__all__ = [
    "BoundedDifferenceSpec",
    "CensusReport",
    "ComponentReport",
    "ConvergenceReport",
    "DegreeDistribution",
    "DegreeSequence",
    "DominatedOffspring",
    "ExplorationState",
    "LazyWalkPmf",
    "MultiGraph",
    "StubPool",
    "TorusLattice",
    "TypeHistogram",
    "blocking_compartments",
    "census",
    "check_convergence",
    "compartment_spread",
    "connected_components",
    "dominated_offspring",
    "empirical_tail_check",
    "explore_until",
    "extinction_probability",
    "generate",
    "gw_simulate",
    "lazy_walk_pmf",
    "martingale_rate",
    "mcdiarmid_bound",
    "multitype_step",
    "percolate",
    "ratio_check",
    "read_edge_list",
    "repeated_exploration",
    "rw_representation",
    "sample_degree_sequence",
    "span_check",
    "start",
    "step",
    "survival_estimate",
    "termination_check",
    "truncated_quantile_sample",
    "write_edge_list",
]

__version__ = "0.1.0"
