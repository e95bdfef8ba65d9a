"""Degree distributions and degree sequences.

A degree distribution is a finite-support pmf over the nonnegative integers.
It is the source of the size-biased transform, the offspring law of the
exploration-limit tree, probability generating functions and the extinction
probability that determines the asymptotic giant-component fraction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from toruscm.torus_graph import TorusLattice

MASS_TOL = 1e-12
FIXED_POINT_TOL = 1e-10
FIXED_POINT_MAX_ITER = 10**6

# Poisson pmfs are truncated where the remaining tail mass drops below this.
POISSON_TAIL = 1e-12


class DegreeDistribution:
    """Finite-support pmf over nonnegative integer degrees.

    Masses must be nonnegative and sum to 1 within ``1e-12``.  Values with
    zero mass are dropped from the support.
    """

    def __init__(self, pmf: dict[int, float]):
        items = sorted((int(j), float(p)) for j, p in pmf.items() if float(p) != 0.0)
        if not items:
            raise ValueError("pmf has no mass")
        support = np.array([j for j, _ in items], dtype=np.int64)
        probs = np.array([p for _, p in items], dtype=np.float64)
        if support[0] < 0:
            raise ValueError("degrees must be nonnegative")
        if np.any(probs < 0):
            raise ValueError("pmf masses must be nonnegative")
        total = float(probs.sum())
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"pmf masses sum to {total}, not 1")
        self.support = support
        self.probs = probs

    @classmethod
    def point_mass(cls, c: int) -> "DegreeDistribution":
        return cls({int(c): 1.0})

    @classmethod
    def poisson(cls, mu: float) -> "DegreeDistribution":
        """Poisson(mu) truncated where the tail mass falls below 1e-12."""
        if mu < 0:
            raise ValueError("mu must be nonnegative")
        if mu == 0:
            return cls.point_mass(0)
        pmf = {}
        p = math.exp(-mu)
        j, cum = 0, 0.0
        while cum < 1.0 - POISSON_TAIL:
            pmf[j] = p
            cum += p
            j += 1
            p = p * mu / j
        # renormalize the truncation remainder onto the retained support
        scale = 1.0 / cum
        return cls({k: v * scale for k, v in pmf.items()})

    @classmethod
    def from_json(cls, text: str) -> "DegreeDistribution":
        """Parse ``{"pmf": {"0": 0.5, "3": 0.5}}`` or ``{"poisson": {"mu": 2.0}}``."""
        obj = json.loads(text) if isinstance(text, str) else text
        if not isinstance(obj, dict):
            raise ValueError("distribution literal must be a JSON object")
        if "pmf" in obj:
            return cls({int(j): float(p) for j, p in obj["pmf"].items()})
        if "poisson" in obj:
            return cls.poisson(float(obj["poisson"]["mu"]))
        raise ValueError("distribution literal needs a 'pmf' or 'poisson' key")

    def as_dict(self) -> dict[int, float]:
        return {int(j): float(p) for j, p in zip(self.support, self.probs)}

    def mean(self) -> float:
        return float(self.probs @ self.support)

    def second_moment(self) -> float:
        return float(self.probs @ (self.support.astype(np.float64) ** 2))

    def mean_d_d_minus_2(self) -> float:
        """E(D(D-2)), positive exactly in the supercritical regime."""
        s = self.support.astype(np.float64)
        return float(self.probs @ (s * (s - 2.0)))

    def prob(self, j: int) -> float:
        idx = np.searchsorted(self.support, j)
        if idx < len(self.support) and self.support[idx] == j:
            return float(self.probs[idx])
        return 0.0

    def pgf(self, x: float) -> float:
        """Generating function sum_j P(D=j) x^j for x in [0, 1]."""
        if not 0.0 <= x <= 1.0:
            raise ValueError("x must lie in [0, 1]")
        return float(self.probs @ np.power(float(x), self.support.astype(np.float64)))

    def size_biased(self) -> "DegreeDistribution":
        """Transform with P(D*=i) = i P(D=i) / E(D); mass at 0 vanishes."""
        mu = self.mean()
        if mu <= 0:
            raise ValueError("size biasing needs E(D) > 0")
        return DegreeDistribution(
            {int(j): float(j * p / mu) for j, p in zip(self.support, self.probs) if j > 0}
        )

    def offspring(self) -> "DegreeDistribution":
        """Offspring law of non-root individuals: size-biased shifted down by 1."""
        sb = self.size_biased()
        return DegreeDistribution({int(j - 1): float(p) for j, p in zip(sb.support, sb.probs)})

    def quantile(self, u: float) -> int:
        """Non-decreasing quantile function on (0, 1)."""
        cum = np.cumsum(self.probs)
        idx = int(np.searchsorted(cum, u, side="right"))
        return int(self.support[min(idx, len(self.support) - 1)])

    def truncated(self, eta: float) -> "DegreeDistribution":
        """Distribution with the top ``eta`` quantile mass removed and renormalized.

        This is the law of the quantile function restricted to (0, 1 - eta),
        so it is stochastically dominated by the original distribution.
        """
        if not 0.0 <= eta < 1.0:
            raise ValueError("eta must lie in [0, 1)")
        if eta == 0.0:
            return DegreeDistribution(self.as_dict())
        keep = 1.0 - eta
        pmf = {}
        lo = 0.0
        for j, p in zip(self.support, self.probs):
            hi = lo + p
            mass = min(hi, keep) - lo
            if mass > 0:
                pmf[int(j)] = mass / keep
            lo = hi
            if lo >= keep:
                break
        return DegreeDistribution(pmf)

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw i.i.d. values; returns an int or an int64 array."""
        if size is None:
            return int(self.support[rng.choice(len(self.probs), p=self.probs)])
        idx = rng.choice(len(self.probs), size=size, p=self.probs)
        return self.support[idx]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DegreeDistribution)
            and np.array_equal(self.support, other.support)
            and np.array_equal(self.probs, other.probs)
        )

    def __repr__(self) -> str:
        return f"DegreeDistribution({self.as_dict()!r})"


@dataclass
class DegreeSequence:
    """Prescribed degrees, one per vertex, in compartment-major order.

    Vertex ``v`` lives in compartment ``v // m``; the slice of a compartment
    is contiguous, so per-compartment views are just a reshape.
    """

    degrees: np.ndarray
    lattice: "TorusLattice"
    m: int

    def __post_init__(self):
        self.degrees = np.asarray(self.degrees, dtype=np.int64)
        expected = self.m * self.lattice.n_compartments
        if self.degrees.shape != (expected,):
            raise ValueError(
                f"degree sequence has length {self.degrees.size}, expected {expected}"
            )
        if np.any(self.degrees < 0):
            raise ValueError("degrees must be nonnegative")

    @property
    def n(self) -> int:
        return int(self.degrees.size)

    def per_compartment(self) -> np.ndarray:
        """View of shape (k^d, m): row i is compartment i's degrees."""
        return self.degrees.reshape(self.lattice.n_compartments, self.m)


@dataclass(frozen=True)
class ConvergenceReport:
    """Worst-case deviations of a degree sequence from its target distribution."""

    max_pmf_deviation: float
    max_mu_deviation: float
    passed: bool


def sample_degree_sequence(
    dist: DegreeDistribution,
    lattice: "TorusLattice",
    m: int,
    rng: np.random.Generator,
) -> DegreeSequence:
    """Draw every vertex degree i.i.d. from ``dist``.

    No parity adjustment is made; stubs that cannot be matched are handled
    (and recorded) by the graph generator.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    n = m * lattice.n_compartments
    return DegreeSequence(dist.sample(rng, size=n), lattice, m)


def check_convergence(
    seq: DegreeSequence, dist: DegreeDistribution, epsilon: float
) -> ConvergenceReport:
    """Check both convergent-degree-sequence conditions at tolerance ``epsilon``.

    Condition 1 compares per-compartment degree frequencies n_j/m against
    P(D=j) for every degree j; condition 2 compares the per-compartment
    half-edge count mu/m against E(D)/2.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    per = seq.per_compartment()
    m = float(seq.m)
    degrees_seen = np.union1d(np.unique(per), dist.support)
    max_pmf = 0.0
    for j in degrees_seen:
        counts = (per == j).sum(axis=1) / m
        dev = np.abs(counts - dist.prob(int(j))).max()
        max_pmf = max(max_pmf, float(dev))
    mu = per.sum(axis=1) / (2.0 * m)
    max_mu = float(np.abs(mu - dist.mean() / 2.0).max())
    return ConvergenceReport(max_pmf, max_mu, passed=(max_pmf < epsilon and max_mu < epsilon))


def truncated_quantile_sample(
    dist: DegreeDistribution, eta: float, rng: np.random.Generator
) -> int:
    """One draw from the quantile function restricted to (0, 1 - eta)."""
    if not 0.0 <= eta < 1.0:
        raise ValueError("eta must lie in [0, 1)")
    u = rng.uniform(0.0, 1.0 - eta)
    return dist.quantile(u)


def pgf_fixed_point(
    offspring: DegreeDistribution,
    tol: float = FIXED_POINT_TOL,
    max_iter: int = FIXED_POINT_MAX_ITER,
) -> float:
    """Smallest fixed point in [0, 1] of the offspring pgf.

    Monotone iteration from 0 converges to the extinction probability of the
    single-type Galton-Watson tree; it equals 1 iff the mean is at most 1.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = 0.0
    for _ in range(max_iter):
        nxt = offspring.pgf(x)
        if abs(nxt - x) < tol:
            return nxt
        x = nxt
    raise RuntimeError(f"fixed-point iteration did not converge within {max_iter} steps")


def extinction_probability(
    root_dist: DegreeDistribution,
    offspring_dist: DegreeDistribution,
    tol: float = FIXED_POINT_TOL,
) -> float:
    """Extinction probability of the two-stage tree (root law, then offspring law).

    Computes the minimal offspring-pgf fixed point rho* and returns the root
    generating function evaluated there.
    """
    rho_star = pgf_fixed_point(offspring_dist, tol=tol)
    return root_dist.pgf(min(rho_star, 1.0))
