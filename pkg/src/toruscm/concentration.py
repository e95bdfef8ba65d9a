"""Bounded-difference (McDiarmid) tail bounds, scalar and vector-valued.

The vector form bounds the sup-norm deviation of a d-dimensional function of
independent inputs; the scalar theorem is the d=1 case.  An empirical
checker estimates the tail frequency of a certified sampler for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class BoundedDifferenceSpec:
    """Per-coordinate bounded-difference constants plus the output dimension."""

    c: tuple[float, ...]
    d_out: int = 1

    def __post_init__(self):
        if self.d_out < 1:
            raise ValueError("output dimension must be at least 1")
        if len(self.c) == 0:
            raise ValueError("at least one coordinate constant is required")
        if any(x < 0 for x in self.c):
            raise ValueError("constants must be nonnegative")
        if all(x == 0 for x in self.c):
            raise ValueError("at least one constant must be positive")

    @property
    def sum_sq(self) -> float:
        return float(sum(x * x for x in self.c))


def mcdiarmid_bound(spec: BoundedDifferenceSpec, epsilon: float) -> float:
    """min(1, 2 d exp(-eps^2 / (2 sum c_i^2))); d=1 recovers the scalar bound."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return min(1.0, 2.0 * spec.d_out * math.exp(-(epsilon**2) / (2.0 * spec.sum_sq)))


@dataclass(frozen=True)
class TailCheckReport:
    empirical: float
    bound: float
    dominated: bool
    epsilon: float
    replicates: int
    calibration_replicates: int
    calibration_mean: np.ndarray


def empirical_tail_check(
    sampler: Callable[[np.random.Generator], np.ndarray],
    spec: BoundedDifferenceSpec,
    epsilon: float,
    replicates: int,
    rng: np.random.Generator,
    calibration_factor: int = 10,
) -> TailCheckReport:
    """Estimate P(||F - E F||_inf >= eps) and compare with the analytic bound.

    The unknown mean is replaced by an empirical mean over
    `calibration_factor` times as many draws; the report carries that
    calibration size since the substitution biases the deviation slightly.
    The sampler's bounded-difference constants are the caller's certificate.
    """
    if replicates < 1:
        raise ValueError("replicates must be at least 1")
    bound = mcdiarmid_bound(spec, epsilon)
    cal_n = calibration_factor * replicates
    first = np.atleast_1d(np.asarray(sampler(rng), dtype=np.float64))
    if first.shape != (spec.d_out,):
        raise ValueError(f"sampler output shape {first.shape} != ({spec.d_out},)")
    cal = np.empty((cal_n, spec.d_out))
    cal[0] = first
    for i in range(1, cal_n):
        cal[i] = sampler(rng)
    mean = cal.mean(axis=0)
    hits = 0
    for _ in range(replicates):
        dev = np.abs(np.atleast_1d(sampler(rng)) - mean).max()
        if dev >= epsilon:
            hits += 1
    empirical = hits / replicates
    se = math.sqrt(empirical * (1.0 - empirical) / replicates)
    return TailCheckReport(
        empirical, bound, empirical <= bound + 3.0 * se, epsilon, replicates, cal_n, mean
    )
