"""Configuration-driven Monte Carlo scenarios at desk scale.

Each scenario samples degree sequences, generates constrained multigraphs
and aggregates component statistics next to the analytic target they chase:
the giant fraction 1 - rho, the census identification rate, the fixed-m
counterexample decay, the conjecture and percolation scans, and the
exploration-success probability against its closed-form lower bound.  Every
summary carries the analytic value alongside the empirical one; bounds are
only ever asserted one-sidedly.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np

from toruscm import branching, components, exploration, torus_graph
from toruscm.degree_model import (
    DegreeDistribution,
    extinction_probability,
    sample_degree_sequence,
)

SCENARIOS = (
    "giant",
    "counterexample",
    "conjecture",
    "percolation",
    "extinction",
    "explore",
)


def replicate_rng(master_seed: int, *index: int) -> np.random.Generator:
    """Independent, order-insensitive stream for (master seed, replicate index)."""
    return np.random.default_rng(np.random.SeedSequence((master_seed, *map(int, index))))


@dataclass
class ScenarioConfig:
    """Parameters of one scenario run; unused fields are ignored per scenario."""

    scenario: str
    dist: DegreeDistribution
    d: int = 1
    k: int | None = None
    m: int | None = None
    replicates: int = 10
    seed: int = 0
    beta: float = 10.0
    threads: int = 1
    n_schedule: list[int] = field(default_factory=list)   # counterexample / conjecture
    lambda_grid: list[float] = field(default_factory=list)  # conjecture
    p_keep_grid: list[float] = field(default_factory=list)  # percolation
    roots: int = 10_000          # extinction convergence
    delta: float = 0.1           # exploration budget fraction
    eta: float = 0.01            # exposure fraction for the dominated law
    epsilon: float = 0.01        # mean slack for the dominated law
    k_exponent: float = 2.0      # moment exponent in the 2 m^-k failure term

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; choose from {SCENARIOS}")
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    @classmethod
    def from_dict(cls, obj: dict) -> "ScenarioConfig":
        obj = dict(obj)
        dist = obj.pop("dist", None)
        if dist is None:
            raise ValueError("config needs a 'dist' entry")
        obj["dist"] = DegreeDistribution.from_json(json.dumps(dist) if isinstance(dist, dict) else dist)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)

    @classmethod
    def from_json(cls, text: str) -> "ScenarioConfig":
        return cls.from_dict(json.loads(text))

    def params(self) -> dict:
        out = {name: getattr(self, name) for name in self.__dataclass_fields__}
        out["dist"] = self.dist.as_dict()
        return out


def schedule_lattice(d: int, m: int, n: int) -> torus_graph.TorusLattice:
    """Lattice whose vertex count best matches n at fixed m.

    The entry must be consistent within one rounding unit, i.e. half a
    compartment of vertices for d = 1.
    """
    k = max(1, round((n / m) ** (1.0 / d)))
    actual = m * k**d
    if d == 1 and abs(actual - n) > m / 2:
        raise ValueError(f"schedule entry n={n} is not reachable with m={m}")
    return torus_graph.TorusLattice(d, k)


def _rho(dist: DegreeDistribution) -> float:
    """Two-stage extinction probability; a zero-mean law dies at the root."""
    if dist.mean() == 0:
        return 1.0
    return extinction_probability(dist, dist.offspring())


def regime_warnings(config: ScenarioConfig) -> list[str]:
    """Trend checks of the theorem's asymptotic conditions over a schedule."""
    warnings = []
    if config.scenario in ("counterexample", "percolation") and config.m is not None:
        warnings.append(
            f"m fixed at {config.m}: the giant-component theorem requires m(n) -> infinity"
        )
    if config.scenario == "conjecture" and config.n_schedule:
        warnings.append("m(n) = lambda log n grows too slowly for the theorem's n/m^k -> 0")
    return warnings


# ---------------------------------------------------------------------------
# closed-form bound evaluators

@dataclass(frozen=True)
class BoundInputs:
    """Inputs of the local-component probability bounds."""

    m: int
    k_exponent: float
    delta: float
    beta: float
    p: float
    epsilon: float
    tau: float
    big_c: float
    d: int
    k_side: int = 1  # k(n), used only by the combined bound

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("m must be at least 2")
        for name in ("k_exponent", "beta", "epsilon", "big_c"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if not 0.0 < self.tau <= 1.0 / 6.0:
            raise ValueError("tau must lie in (0, 1/6]")
        if self.d < 1 or self.k_side < 1:
            raise ValueError("d and k_side must be at least 1")


def bound_a_n(b: BoundInputs) -> float:
    """Chance that repeated exploration finds an m^(2/3) component in budget delta*m."""
    tries = b.delta * b.m / (b.beta * math.log(b.m))
    return (1.0 - 2.0 * b.m ** (-b.k_exponent)) ** tries * (1.0 - (1.0 - b.p) ** tries)


def bound_b_n(b: BoundInputs) -> float:
    """Chance that a found component spreads epsilon * m^(2/3 - tau) into its cell."""
    first = 1.0 - 2.0 * math.exp(-(b.epsilon**2) * b.m ** (2.0 / 3.0 - 2.0 * b.tau) / 8.0)
    second = 1.0 - 2.0 * math.exp(-2.0 * b.m ** (2.0 * b.tau / b.d))
    return first * second


def bound_c_n(b: BoundInputs) -> float:
    """Chance that two neighbouring spread components are joined by an edge."""
    return 1.0 - math.exp(-b.big_c * b.epsilon**2 * b.m ** (1.0 / 3.0 - 2.0 * b.tau))


def combined_bound(b: BoundInputs) -> float:
    """Lower bound for a component spreading through every compartment.

    Evaluates (1 - k^d(1 - a_n b_n)) * (1 - d*k*f_n) where f_n = 1 - c_n is
    the connection-failure probability; the displayed form writes the
    failure term in the second factor.
    """
    ab = bound_a_n(b) * bound_b_n(b)
    fail = 1.0 - bound_c_n(b)
    return (1.0 - b.k_side**b.d * (1.0 - ab)) * (1.0 - b.d * b.k_side * fail)


# ---------------------------------------------------------------------------
# replicate plumbing

def _replicate_call(worker, config, args, index):
    return worker(config, index, *args)


def _run_replicates(worker, config: ScenarioConfig, args: tuple = ()) -> list[dict]:
    """Run `worker(config, rep_index, *args)` per replicate, rows sorted by index."""
    fn = partial(_replicate_call, worker, config, args)
    if config.threads == 1:
        rows = [fn(i) for i in range(config.replicates)]
    else:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            rows = list(pool.map(fn, range(config.replicates)))
    return sorted(rows, key=lambda r: r["replicate"])


def _mean_se(values) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size < 2:
        return float(arr.mean()), 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size))


@dataclass
class ScenarioResult:
    scenario: str
    params: dict
    rows: list[dict]
    summary: dict
    warnings: list[str] = field(default_factory=list)


def write_scenario_csv(path, result: ScenarioResult) -> None:
    """Schema-versioned CSV: params echo, replicate rows, summary comment."""
    columns: list[str] = []
    for row in result.rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    lines = [
        f"# toruscm scenario={result.scenario} schema=1",
        "# params " + json.dumps(result.params, sort_keys=True),
    ]
    lines.extend(f"# warning {w}" for w in result.warnings)
    lines.append(",".join(columns))
    for row in result.rows:
        lines.append(",".join(_csv_cell(row.get(c)) for c in columns))
    lines.append("# summary " + json.dumps(result.summary, sort_keys=True))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


# ---------------------------------------------------------------------------
# scenarios

def _giant_replicate(config: ScenarioConfig, rep: int) -> dict:
    rng = replicate_rng(config.seed, rep)
    lattice = torus_graph.TorusLattice(config.d, config.k)
    seq = sample_degree_sequence(config.dist, lattice, config.m, rng)
    graph = torus_graph.generate(seq, lattice, rng)
    report = components.connected_components(graph)
    row = {"replicate": rep, **components.summary_row(graph, report, config.beta)}
    row["L1_over_n"] = row["L1"] / graph.n
    return row


def run_giant_component(config: ScenarioConfig) -> ScenarioResult:
    """Mean L1/n across replicates against the analytic target 1 - rho."""
    if config.k is None or config.m is None:
        raise ValueError("giant scenario needs k and m")
    rows = _run_replicates(_giant_replicate, config)
    rho = _rho(config.dist)
    mean, se = _mean_se([r["L1_over_n"] for r in rows])
    summary = {
        "mean_L1_over_n": mean,
        "se_L1_over_n": se,
        "std_L1_over_n": float(np.std([r["L1_over_n"] for r in rows], ddof=1))
        if len(rows) > 1
        else 0.0,
        "mean_L2": float(np.mean([r["L2"] for r in rows])),
        "census_match_rate": float(np.mean([r["matches_L1"] for r in rows])),
        "rho": rho,
        "target_fraction": 1.0 - rho,
    }
    return ScenarioResult("giant", config.params(), rows, summary, regime_warnings(config))


def _extinction_replicate(config: ScenarioConfig, rep: int) -> dict:
    rng = replicate_rng(config.seed, rep)
    lattice = torus_graph.TorusLattice(config.d, config.k)
    seq = sample_degree_sequence(config.dist, lattice, config.m, rng)
    graph = torus_graph.generate(seq, lattice, rng)
    report = components.connected_components(graph)
    threshold = config.beta * math.log(config.m)
    roots = rng.integers(0, graph.n, size=config.roots)
    small = report.sizes[report.labels[roots]] <= threshold
    return {"replicate": rep, "n": graph.n, "small_fraction": float(small.mean())}


def run_extinction_convergence(config: ScenarioConfig) -> ScenarioResult:
    """Empirical P(|C_v| <= beta log m) over random roots, against rho."""
    if config.k is None or config.m is None:
        raise ValueError("extinction scenario needs k and m")
    rows = _run_replicates(_extinction_replicate, config)
    rho = _rho(config.dist)
    mean, se = _mean_se([r["small_fraction"] for r in rows])
    summary = {
        "mean_small_fraction": mean,
        "se_small_fraction": se,
        "rho": rho,
        "threshold": config.beta * math.log(config.m),
        "roots": config.roots,
    }
    return ScenarioResult("extinction", config.params(), rows, summary, regime_warnings(config))


def _counterexample_replicate(config: ScenarioConfig, rep: int, n: int) -> dict:
    rng = replicate_rng(config.seed, n, rep)
    lattice = schedule_lattice(1, config.m, n)
    seq = sample_degree_sequence(config.dist, lattice, config.m, rng)
    graph = torus_graph.generate(seq, lattice, rng)
    report = components.connected_components(graph)
    blockers = components.blocking_compartments(graph)
    row = {
        "replicate": rep,
        "n": graph.n,
        "L1": report.L1,
        "L1_over_n": report.L1 / graph.n,
        "blockers": int(blockers.size),
    }
    if blockers.size:
        gap = components.largest_blocker_gap(graph)
        row["max_gap"] = gap
        row["gap_bound"] = config.m * (gap + 2)
    else:
        row["max_gap"] = None
        row["gap_bound"] = None
    return row


def run_counterexample(config: ScenarioConfig) -> ScenarioResult:
    """Fixed-m circle schedule: mean L1/n per n plus the blocker-gap bound."""
    if config.d != 1:
        raise ValueError("the counterexample is defined on the circle (d=1)")
    if config.m is None or not config.n_schedule:
        raise ValueError("counterexample scenario needs m and an n schedule")
    all_rows = []
    means = []
    for n in config.n_schedule:
        rows = _run_replicates(_counterexample_replicate, config, (n,))
        all_rows.extend(rows)
        means.append(float(np.mean([r["L1_over_n"] for r in rows])))
    rho = _rho(config.dist)
    summary = {
        "n_schedule": list(config.n_schedule),
        "mean_L1_over_n": means,
        "strictly_decreasing": all(a > b for a, b in zip(means, means[1:])),
        "unconstrained_fraction": 1.0 - rho,
    }
    return ScenarioResult(
        "counterexample", config.params(), all_rows, summary, regime_warnings(config)
    )


def _conjecture_cell(config: ScenarioConfig, cell: int, lam: float, n: int) -> dict:
    m = max(1, round(lam * math.log(n)))
    lattice = schedule_lattice(1, m, n)
    fractions = []
    for rep in range(config.replicates):
        rng = replicate_rng(config.seed, cell, rep)
        seq = sample_degree_sequence(config.dist, lattice, m, rng)
        graph = torus_graph.generate(seq, lattice, rng)
        report = components.connected_components(graph)
        fractions.append(report.L1 / graph.n)
    mean, se = _mean_se(fractions)
    return {"lambda": lam, "n": n, "m": m, "k": lattice.k, "mean_L1_over_n": mean, "se": se}


def run_conjecture_scan(config: ScenarioConfig) -> ScenarioResult:
    """Grid of lambda x n with m = round(lambda log n) compartment sizes.

    Cells with lambda below -1/log P(D <= 1) sit in the regime where no
    giant component can appear; the flag marks them.
    """
    if config.d != 1:
        raise ValueError("the conjecture scan is defined on the circle (d=1)")
    if not config.lambda_grid or not config.n_schedule:
        raise ValueError("conjecture scenario needs lambda_grid and n_schedule")
    p_low = sum(config.dist.prob(j) for j in (0, 1))
    lam_crit = -1.0 / math.log(p_low) if 0.0 < p_low < 1.0 else None
    rows = []
    for li, lam in enumerate(config.lambda_grid):
        for ni, n in enumerate(config.n_schedule):
            cell = _conjecture_cell(config, li * len(config.n_schedule) + ni, lam, n)
            cell["remark_regime"] = bool(lam_crit is not None and lam < lam_crit)
            rows.append(cell)
    summary = {"p_degree_le_1": p_low, "lambda_critical": lam_crit}
    return ScenarioResult("conjecture", config.params(), rows, summary, regime_warnings(config))


def _percolation_replicate(config: ScenarioConfig, rep: int) -> list[dict]:
    rng = replicate_rng(config.seed, rep)
    lattice = torus_graph.TorusLattice(1, config.k)
    seq = sample_degree_sequence(config.dist, lattice, config.m, rng)
    base = torus_graph.generate(seq, lattice, rng)
    out = []
    for p_keep in config.p_keep_grid:
        thinned = torus_graph.percolate(base, p_keep, rng)
        report = components.connected_components(thinned)
        out.append(
            {
                "replicate": rep,
                "p_keep": p_keep,
                "L1": report.L1,
                "L1_over_n": report.L1 / thinned.n,
                "edges_kept": thinned.n_edges,
            }
        )
    return out


def run_percolation(config: ScenarioConfig) -> ScenarioResult:
    """Edge percolation on a fixed-m circle: mean L1/n per keep probability."""
    if config.d != 1:
        raise ValueError("the percolation scan is defined on the circle (d=1)")
    if config.k is None or config.m is None or not config.p_keep_grid:
        raise ValueError("percolation scenario needs k, m and p_keep_grid")
    rows = []
    for rep in range(config.replicates):
        rows.extend(_percolation_replicate(config, rep))
    by_p = {}
    for row in rows:
        by_p.setdefault(row["p_keep"], []).append(row["L1_over_n"])
    summary = {
        "p_keep": sorted(by_p),
        "mean_L1_over_n": [float(np.mean(by_p[p])) for p in sorted(by_p)],
        "percolation_threshold_note": "fixed-size compartments push the threshold to 1",
    }
    return ScenarioResult("percolation", config.params(), rows, summary, regime_warnings(config))


def _explore_replicate(config: ScenarioConfig, rep: int) -> dict:
    rng = replicate_rng(config.seed, rep)
    lattice = torus_graph.TorusLattice(config.d, config.k)
    seq = sample_degree_sequence(config.dist, lattice, config.m, rng)
    graph = torus_graph.generate(seq, lattice, rng)
    target = math.ceil(config.m ** (2.0 / 3.0))
    budget = max(1, math.floor(config.delta * config.m))
    res = exploration.repeated_exploration(graph, 0, target, budget, rng)
    return {
        "replicate": rep,
        "outcome": res.outcome,
        "attempts": res.attempts,
        "exposed": res.exposed,
        "success": res.outcome == exploration.REACHED_THRESHOLD,
    }


def run_exploration_success(config: ScenarioConfig) -> ScenarioResult:
    """Frequency of finding an m^(2/3) component in budget delta*m vs the bound."""
    if config.k is None or config.m is None:
        raise ValueError("explore scenario needs k and m")
    rows = _run_replicates(_explore_replicate, config)
    freq = float(np.mean([r["success"] for r in rows]))
    se = math.sqrt(freq * (1.0 - freq) / len(rows))
    try:
        dom = branching.dominated_offspring(config.dist, config.eta, config.delta, config.epsilon)
    except ValueError:
        # delta too large for the collision-thinned law: the analytic bound
        # is vacuous, but the empirical frequency is still worth reporting
        dom = None
    if dom is None:
        p_hat = 0.0
    else:
        surv_rng = replicate_rng(config.seed, 2**33)
        p_hat, _ = branching.survival_estimate(dom.pmf, surv_rng, replicates=4000, total_cap=10**4)
    bound = bound_a_n(
        BoundInputs(
            m=config.m,
            k_exponent=config.k_exponent,
            delta=config.delta,
            beta=config.beta,
            p=p_hat,
            epsilon=max(config.epsilon, 1e-9),
            tau=0.1,
            big_c=1.0,
            d=config.d,
            k_side=config.k,
        )
    )
    summary = {
        "success_frequency": freq,
        "se": se,
        "bound_a_n": bound,
        "survival_p": p_hat,
        "domination_feasible": dom is not None,
        "dominated": freq >= bound - 3.0 * se,
    }
    return ScenarioResult("explore", config.params(), rows, summary, regime_warnings(config))


RUNNERS = {
    "giant": run_giant_component,
    "counterexample": run_counterexample,
    "conjecture": run_conjecture_scan,
    "percolation": run_percolation,
    "extinction": run_extinction_convergence,
    "explore": run_exploration_success,
}


def run_scenario(config: ScenarioConfig, out_dir: str | None = None) -> ScenarioResult:
    """Dispatch to the scenario runner; optionally write `<out>/<scenario>.csv`."""
    result = RUNNERS[config.scenario](config)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        write_scenario_csv(os.path.join(out_dir, f"{config.scenario}.csv"), result)
    return result


def config_with_overrides(config: ScenarioConfig, **overrides) -> ScenarioConfig:
    clean = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **clean) if clean else config
