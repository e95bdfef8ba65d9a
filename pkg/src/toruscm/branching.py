"""Galton-Watson and multitype branching simulators with exact companions.

Includes the plain generation-size process, the multitype process whose
children are assigned uniformly to the 2d+1 closed-neighborhood types, the
independent-walk construction of the same type histogram, exact lazy-walk
probability tables, the collision-thinned dominated offspring law, the
exponential martingale rate for downward-crossing bounds, and the Monte
Carlo experiments that sit beside the corresponding analytic bounds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from toruscm.degree_model import DegreeDistribution

MAX_TABLE_ENTRIES = 10**8
_BATCH_GUARD = 2 * 10**8


def _as_arrays(pmf) -> tuple[np.ndarray, np.ndarray]:
    """Accept a DegreeDistribution or a plain {value: mass} dict (ints, possibly negative)."""
    if isinstance(pmf, DegreeDistribution):
        return pmf.support, pmf.probs
    items = sorted((int(v), float(p)) for v, p in pmf.items() if float(p) != 0.0)
    support = np.array([v for v, _ in items], dtype=np.int64)
    probs = np.array([p for _, p in items], dtype=np.float64)
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
        raise ValueError("pmf masses must be nonnegative and sum to 1")
    return support, probs


def _generation_totals(sizes: np.ndarray, support, probs, rng) -> np.ndarray:
    """Total offspring of `sizes` independent individuals, per entry.

    Sums of i.i.d. draws are aggregated through one multinomial per entry,
    which is distribution-identical to per-individual draws.
    """
    counts = rng.multinomial(sizes, probs)
    return counts @ support


@dataclass(frozen=True)
class GWTrajectory:
    generations: list[int]
    total: int
    extinct: bool


def gw_simulate(
    root: DegreeDistribution,
    offspring: DegreeDistribution,
    rng: np.random.Generator,
    *,
    max_generations: int = 10**4,
    max_total: int = 10**6,
) -> GWTrajectory:
    """One Galton-Watson trajectory: root law for generation 1, offspring after.

    Stops at extinction or at either cap; `extinct` is True iff a generation
    of size 0 was reached within the caps.
    """
    if max_generations < 1 or max_total < 1:
        raise ValueError("caps must be positive")
    z = int(root.sample(rng))
    gens = [1, z]
    total = 1 + z
    while gens[-1] > 0 and len(gens) - 1 < max_generations and total < max_total:
        nxt = int(_generation_totals(np.array([gens[-1]]), offspring.support, offspring.probs, rng)[0])
        gens.append(nxt)
        total += nxt
    return GWTrajectory(gens, total, extinct=(gens[-1] == 0))


def survival_estimate(
    offspring,
    rng: np.random.Generator,
    *,
    replicates: int = 10**4,
    total_cap: int = 10**5,
    max_generations: int = 10**5,
) -> tuple[float, float]:
    """Estimate the survival probability as the chance of reaching `total_cap`.

    `offspring` may be a DegreeDistribution or a plain pmf dict; negative
    offspring values kill the process when a generation total drops to 0 or
    below.  Returns (p_hat, binomial standard error).
    """
    support, probs = _as_arrays(offspring)
    sizes = np.ones(replicates, dtype=np.int64)
    totals = np.ones(replicates, dtype=np.int64)
    for _ in range(max_generations):
        live = (sizes > 0) & (totals < total_cap)
        if not live.any():
            break
        z = _generation_totals(sizes[live], support, probs, rng)
        z = np.maximum(z, 0)
        sizes[live] = z
        totals[live] += z
    p_hat = float((totals >= total_cap).mean())
    se = math.sqrt(p_hat * (1.0 - p_hat) / replicates)
    return p_hat, se


# ---------------------------------------------------------------------------
# multitype process and the independent-walk construction

@dataclass
class TypeHistogram:
    """Sparse counts of individuals per lattice type (tuples in Z^d)."""

    d: int
    counts: dict

    def __post_init__(self):
        norm = {}
        for t, c in self.counts.items():
            key = (int(t),) if isinstance(t, (int, np.integer)) else tuple(int(x) for x in t)
            if len(key) != self.d:
                raise ValueError(f"type {t} has arity {len(key)}, expected {self.d}")
            if c < 0:
                raise ValueError("counts must be nonnegative")
            if c:
                norm[key] = int(c)
        self.counts = norm

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def get(self, t) -> int:
        key = (int(t),) if isinstance(t, (int, np.integer)) else tuple(int(x) for x in t)
        return self.counts.get(key, 0)

    def key(self) -> tuple:
        return tuple(sorted(self.counts.items()))

    @classmethod
    def origin(cls, d: int, count: int = 1) -> "TypeHistogram":
        return cls(d, {(0,) * d: count} if count else {})


def _displacements(d: int) -> np.ndarray:
    # option 0 stays, option 1+2ax is +e_ax, option 2+2ax is -e_ax
    disp = np.zeros((2 * d + 1, d), dtype=np.int64)
    for ax in range(d):
        disp[1 + 2 * ax, ax] = 1
        disp[2 + 2 * ax, ax] = -1
    return disp


def multitype_step(hist: TypeHistogram, offspring, rng: np.random.Generator) -> TypeHistogram:
    """One generation: every individual of type i draws its offspring count and
    each child lands independently and uniformly on one of the 2d+1 types j
    with |j - i|_1 <= 1.

    Offspring totals per type are drawn in aggregate and split with a single
    multinomial, which matches the per-individual law exactly.
    """
    support, probs = _as_arrays(offspring)
    if support.size and support[0] < 0:
        raise ValueError("multitype offspring counts must be nonnegative")
    d = hist.d
    arity = 2 * d + 1
    uniform = np.full(arity, 1.0 / arity)
    disp = _displacements(d)
    out: dict[tuple, int] = {}
    for t in sorted(hist.counts):
        c = hist.counts[t]
        children = int(_generation_totals(np.array([c]), support, probs, rng)[0])
        if children == 0:
            continue
        split = rng.multinomial(children, uniform)
        for opt in range(arity):
            if split[opt]:
                target = tuple(int(x) for x in (np.array(t) + disp[opt]))
                out[target] = out.get(target, 0) + int(split[opt])
    return TypeHistogram(d, out)


def rw_representation(n: int, count: int, d: int, rng: np.random.Generator) -> TypeHistogram:
    """Histogram of `count` independent n-step lazy-walk endpoints from 0."""
    if n < 0 or count < 0:
        raise ValueError("n and count must be nonnegative")
    if count == 0:
        return TypeHistogram(d, {})
    disp = _displacements(d)
    choices = rng.integers(0, 2 * d + 1, size=(count, n))
    ends = disp[choices].sum(axis=1) if n else np.zeros((count, d), dtype=np.int64)
    uniq, cnt = np.unique(ends, axis=0, return_counts=True)
    return TypeHistogram(d, {tuple(int(x) for x in row): int(c) for row, c in zip(uniq, cnt)})


# ---------------------------------------------------------------------------
# exact lazy-walk tables

@dataclass
class LazyWalkPmf:
    """Exact n-step lazy-walk distribution on the box [-n, n]^d.

    `counts` holds exact integer path counts; probabilities are
    counts / (2d+1)^n, so entries sum to 1 exactly.
    """

    d: int
    n: int
    counts: np.ndarray  # object dtype, exact integers
    denominator: int

    def _index(self, v) -> tuple | None:
        key = (int(v),) if isinstance(v, (int, np.integer)) else tuple(int(x) for x in v)
        if len(key) != self.d:
            raise ValueError(f"point {v} has arity {len(key)}, expected {self.d}")
        if any(abs(x) > self.n for x in key):
            return None
        return tuple(x + self.n for x in key)

    def prob_exact(self, v) -> Fraction:
        idx = self._index(v)
        if idx is None:
            return Fraction(0)
        return Fraction(int(self.counts[idx]), self.denominator)

    def prob(self, v) -> float:
        idx = self._index(v)
        if idx is None:
            return 0.0
        return int(self.counts[idx]) / self.denominator

    def table(self) -> np.ndarray:
        out = np.empty(self.counts.shape, dtype=np.float64)
        for idx, c in np.ndenumerate(self.counts):
            out[idx] = int(c) / self.denominator
        return out


def lazy_walk_pmf(n: int, d: int) -> LazyWalkPmf:
    """Exact dynamic-programming convolution of the (2d+1)-point step law."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if d < 1:
        raise ValueError("d must be at least 1")
    width = 2 * n + 1
    if width**d > MAX_TABLE_ENTRIES:
        raise ValueError(f"pmf table would need {width**d} entries (guard at {MAX_TABLE_ENTRIES})")
    cur = np.zeros((width,) * d, dtype=object)
    cur[(n,) * d] = 1
    for _ in range(n):
        nxt = cur.copy()
        for ax in range(d):
            up = [slice(None)] * d
            lo = [slice(None)] * d
            up[ax] = slice(1, None)
            lo[ax] = slice(0, -1)
            nxt[tuple(up)] += cur[tuple(lo)]
            nxt[tuple(lo)] += cur[tuple(up)]
        cur = nxt
    return LazyWalkPmf(d, n, cur, (2 * d + 1) ** n)


def ratio_check(pmf: LazyWalkPmf, r: int) -> float:
    """Minimal P(S_n = v) / P(S_n = 0) over the l1-ball of radius r; exact."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r > pmf.n:
        raise ValueError("radius must not exceed the step count")
    center = int(pmf.counts[(pmf.n,) * pmf.d])
    best = None
    for v in itertools.product(range(-r, r + 1), repeat=pmf.d):
        if sum(abs(x) for x in v) > r:
            continue
        ratio = Fraction(int(pmf.counts[tuple(x + pmf.n for x in v)]), center)
        if best is None or ratio < best:
            best = ratio
    return float(best)


# ---------------------------------------------------------------------------
# type concentration experiment

@dataclass(frozen=True)
class ConcentrationReport:
    frequency: float | None  # None when the conditioning event never occurred
    bound: float
    conditioning_events: int
    replicates: int
    threshold: float


def concentration_experiment(
    offspring,
    d: int,
    n: int,
    size_threshold: int,
    radius: int,
    delta: float,
    replicates: int,
    rng: np.random.Generator,
) -> ConcentrationReport:
    """Estimate P(Z_n(k) >= delta M / n^{d/2} for all |k|_1 <= r | |Z_n| >= M).

    Reports the empirical conditional frequency next to the analytic lower
    bound 1 - 2 (2r+1)^d exp(-delta^2 M / (8 n^d)); the bound is often
    vacuous at desk scale, so only one-sided domination is meaningful.
    """
    if replicates < 1:
        raise ValueError("replicates must be at least 1")
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0 <= radius <= n:
        raise ValueError("radius must lie in [0, n]")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    support, probs = _as_arrays(offspring)
    if support.size and support[0] < 0:
        raise ValueError("offspring counts must be nonnegative")
    width = 2 * n + 1
    cells = width**d
    if replicates * cells * max(support.size, 2 * d + 1) > _BATCH_GUARD:
        raise ValueError("experiment too large; lower replicates or n")
    arity = 2 * d + 1
    uniform = np.full(arity, 1.0 / arity)

    state = np.zeros((replicates,) + (width,) * d, dtype=np.int64)
    state[(slice(None),) + (n,) * d] = 1
    for _ in range(n):
        children = rng.multinomial(state, probs) @ support
        split = rng.multinomial(children, uniform)
        nxt = split[..., 0].copy()
        for ax in range(d):
            axis = 1 + ax
            for sign, opt in ((1, 1 + 2 * ax), (-1, 2 + 2 * ax)):
                dst = [slice(None)] * (d + 1)
                src = [slice(None)] * (d + 1)
                if sign == 1:
                    dst[axis] = slice(1, None)
                    src[axis] = slice(0, -1)
                else:
                    dst[axis] = slice(0, -1)
                    src[axis] = slice(1, None)
                nxt[tuple(dst)] += split[..., opt][tuple(src)]
        state = nxt

    flat = state.reshape(replicates, -1)
    totals = flat.sum(axis=1)
    conditioned = totals >= size_threshold
    grids = np.indices((width,) * d)
    l1 = np.abs(grids - n).sum(axis=0).ravel()
    ball = l1 <= radius
    threshold = delta * size_threshold / n ** (d / 2.0)
    success = flat[:, ball].min(axis=1) >= threshold
    events = int(conditioned.sum())
    frequency = float(success[conditioned].mean()) if events else None
    bound = 1.0 - 2.0 * (2 * radius + 1) ** d * math.exp(
        -(delta**2) * size_threshold / (8.0 * n**d)
    )
    return ConcentrationReport(frequency, bound, events, replicates, threshold)


# ---------------------------------------------------------------------------
# dominated offspring construction

@dataclass(frozen=True)
class DominatedOffspring:
    """Collision-thinned offspring law dominating the exploration from below.

    N is distributed as W - 2 Bin(W, gamma_delta) where W is the base
    offspring law with the top 2*eta quantile mass removed; gamma_delta
    bounds the chance that a revealed neighbor was already exposed.
    """

    base: DegreeDistribution
    eta: float
    delta: float
    epsilon: float
    truncated: DegreeDistribution
    top: int
    gamma_delta: float
    pmf: dict[int, float]
    mean: float


def dominated_offspring(
    dist: DegreeDistribution, eta: float, delta: float, epsilon: float
) -> DominatedOffspring:
    """Build the dominated offspring law from the degree distribution.

    Requires E(D)/2 - epsilon - L*delta > 0 where L is the top retained
    offspring value; otherwise the domination is infeasible.
    """
    q = dist.offspring()
    w = q.truncated(2.0 * eta)
    top = int(w.support.max())
    margin = dist.mean() / 2.0 - epsilon - top * delta
    if margin <= 0:
        raise ValueError(
            f"domination infeasible: E(D)/2 - epsilon - L*delta = {margin:.6g} must be positive"
        )
    gamma = top * delta / margin
    if gamma > 1.0:
        raise ValueError(f"domination infeasible: collision bound gamma = {gamma:.6g} exceeds 1")
    pmf: dict[int, float] = {}
    for wv, pw in zip(w.support, w.probs):
        wv = int(wv)
        for j in range(wv + 1):
            mass = float(pw) * math.comb(wv, j) * gamma**j * (1.0 - gamma) ** (wv - j)
            if mass:
                pmf[wv - 2 * j] = pmf.get(wv - 2 * j, 0.0) + mass
    mean = float(w.mean() * (1.0 - 2.0 * gamma))
    return DominatedOffspring(q, eta, delta, epsilon, w, top, gamma, pmf, mean)


# ---------------------------------------------------------------------------
# martingale rate and the ruin bound

def martingale_rate(pmf: dict[int, float], tol: float = 1e-10, max_iter: int = 10_000) -> float:
    """The lambda > 0 with E(exp(-lambda X)) = 1.

    X must be integer valued with X >= -1, P(X = -1) > 0 and E(X) > 0;
    exp(-lambda S_n) is then a martingale for the associated process and
    e^{-lambda x} bounds the probability of ever hitting 0 from x.
    """
    support, probs = _as_arrays(pmf)
    if support.min() < -1:
        raise ValueError("X must be bounded below by -1")
    if probs[support == -1].sum() <= 0:
        raise ValueError("X must put positive mass on -1")
    if float(probs @ support) <= 0:
        raise ValueError("X must have positive mean")
    s = support.astype(np.float64)

    def g(lam: float) -> float:
        return float(probs @ np.exp(-lam * s)) - 1.0

    hi = 1.0
    for _ in range(200):
        if g(hi) > 0:
            break
        hi *= 2.0
    else:
        raise RuntimeError("failed to bracket the martingale rate")
    lo = 0.0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        val = g(mid)
        if abs(val) < tol:
            return mid
        if val <= 0:
            lo = mid
        else:
            hi = mid
    raise RuntimeError(f"bisection did not reach tolerance {tol}")


@dataclass(frozen=True)
class RuinCheck:
    ruin_frequency: float
    std_error: float
    bound: float
    dominated: bool
    rate: float
    undecided: int


def ruin_check(
    pmf: dict[int, float],
    x0: int,
    rng: np.random.Generator,
    *,
    replicates: int = 10**4,
    size_cap: int = 10**5,
    max_generations: int = 10**5,
) -> RuinCheck:
    """Empirical P(T(x0) < infinity) against the analytic bound e^{-lambda x0}.

    The process adds, per step, one increment of X for every current unit,
    so it is a Galton-Watson process with offspring 1 + X; trajectories
    reaching `size_cap` are counted as never hitting 0.
    """
    if x0 < 1:
        raise ValueError("x0 must be positive")
    lam = martingale_rate(pmf)
    support, probs = _as_arrays(pmf)
    osupp = support + 1
    sizes = np.full(replicates, x0, dtype=np.int64)
    for _ in range(max_generations):
        live = (sizes > 0) & (sizes < size_cap)
        if not live.any():
            break
        sizes[live] = _generation_totals(sizes[live], osupp, probs, rng)
    ruined = sizes <= 0
    undecided = int(((sizes > 0) & (sizes < size_cap)).sum())
    p_hat = float(ruined.mean())
    se = math.sqrt(p_hat * (1.0 - p_hat) / replicates)
    bound = math.exp(-lam * x0)
    return RuinCheck(p_hat, se, bound, p_hat <= bound + 3.0 * se, lam, undecided)


# ---------------------------------------------------------------------------
# exponential growth-time experiment

@dataclass(frozen=True)
class GrowthTimeReport:
    frequency: float | None
    bound: float
    reached: int
    replicates: int
    generation_limit: int


def growth_time_experiment(
    offspring: DegreeDistribution,
    size_threshold: int,
    tau: float,
    growth_factor: float,
    replicates: int,
    rng: np.random.Generator,
) -> GrowthTimeReport:
    """Frequency of {first generation p with Z_p >= M has p <= L * M^tau}.

    Conditioned on ever reaching M within the simulated horizon; reported
    beside the analytic bound 1 - 2 exp(-2 (L-1) M^tau).
    """
    if not 0 < tau < 1:
        raise ValueError("tau must lie in (0, 1)")
    if growth_factor <= 1:
        raise ValueError("growth factor L must exceed 1")
    # the bound is meaningful for supercritical offspring; laws that never
    # reach the threshold simply report an indeterminate frequency
    deadline = growth_factor * size_threshold**tau
    gen_limit = max(int(4 * deadline) + 1, 64)
    sizes = np.ones(replicates, dtype=np.int64)
    first_reach = np.full(replicates, -1, dtype=np.int64)
    if size_threshold <= 1:
        first_reach[:] = 0
    for g in range(1, gen_limit + 1):
        live = (sizes > 0) & (first_reach < 0)
        if not live.any():
            break
        sizes[live] = _generation_totals(sizes[live], offspring.support, offspring.probs, rng)
        hit = live & (sizes >= size_threshold)
        first_reach[hit] = g
    reached = first_reach >= 0
    n_reached = int(reached.sum())
    frequency = float((first_reach[reached] <= deadline).mean()) if n_reached else None
    bound = 1.0 - 2.0 * math.exp(-2.0 * (growth_factor - 1.0) * size_threshold**tau)
    return GrowthTimeReport(frequency, bound, n_reached, replicates, gen_limit)


# ---------------------------------------------------------------------------
# exact enumeration of the two type-histogram constructions

def _as_fraction_pmf(pmf) -> dict[int, Fraction]:
    if isinstance(pmf, DegreeDistribution):
        items = zip(pmf.support, pmf.probs)
    else:
        items = pmf.items()
    out = {int(v): Fraction(p) for v, p in items}
    if sum(out.values()) != 1:
        raise ValueError("exact enumeration needs a pmf with exactly representable masses")
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def histogram_key(counts: dict) -> tuple:
    return tuple(sorted((t, c) for t, c in counts.items() if c))


def _merge_keys(a: tuple, b: tuple) -> tuple:
    out = dict(a)
    for t, c in b:
        out[t] = out.get(t, 0) + c
    return histogram_key(out)


def total_variation(p: dict, q: dict) -> Fraction:
    keys = set(p) | set(q)
    return sum((abs(p.get(k, Fraction(0)) - q.get(k, Fraction(0))) for k in keys), Fraction(0)) / 2


def enumerate_multitype(offspring, d: int, generations: int) -> dict[tuple, Fraction]:
    """Exact distribution of the generation-`generations` type histogram.

    Starts from a single type-0 individual; children are assigned uniformly
    to the 2d+1 closed-neighborhood types.  Exponential in the generation
    count; intended for tiny offspring laws.
    """
    pmf = _as_fraction_pmf(offspring)
    arity = 2 * d + 1
    disp = [tuple(int(x) for x in row) for row in _displacements(d)]

    @lru_cache(maxsize=None)
    def child_dist(parent: tuple) -> tuple:
        targets = [tuple(p + dd for p, dd in zip(parent, mv)) for mv in disp]
        out: dict[tuple, Fraction] = {}
        for w, pw in pmf.items():
            denom = Fraction(arity) ** w
            for comp in _compositions(w, arity):
                coeff = math.factorial(w)
                for c in comp:
                    coeff //= math.factorial(c)
                key = histogram_key({t: c for t, c in zip(targets, comp)})
                out[key] = out.get(key, Fraction(0)) + pw * coeff / denom
        return tuple(out.items())

    dist = {histogram_key({(0,) * d: 1}): Fraction(1)}
    for _ in range(generations):
        nxt: dict[tuple, Fraction] = {}
        for hist, ph in dist.items():
            folded = {(): ph}
            for parent, c in hist:
                children = child_dist(parent)
                for _ in range(c):
                    merged: dict[tuple, Fraction] = {}
                    for key1, p1 in folded.items():
                        for key2, p2 in children:
                            k = _merge_keys(key1, key2)
                            merged[k] = merged.get(k, Fraction(0)) + p1 * p2
                    folded = merged
            for key, p in folded.items():
                nxt[key] = nxt.get(key, Fraction(0)) + p
        dist = nxt
    return dist


def enumerate_generation_sizes(offspring, generations: int) -> dict[int, Fraction]:
    """Exact law of the type-blind generation size after `generations` steps."""
    pmf = _as_fraction_pmf(offspring)

    @lru_cache(maxsize=None)
    def sum_dist(count: int) -> tuple:
        if count == 0:
            return ((0, Fraction(1)),)
        prev = dict(sum_dist(count - 1))
        out: dict[int, Fraction] = {}
        for s, ps in prev.items():
            for w, pw in pmf.items():
                out[s + w] = out.get(s + w, Fraction(0)) + ps * pw
        return tuple(out.items())

    dist = {1: Fraction(1)}
    for _ in range(generations):
        nxt: dict[int, Fraction] = {}
        for z, pz in dist.items():
            for s, ps in sum_dist(z):
                nxt[s] = nxt.get(s, Fraction(0)) + pz * ps
        dist = nxt
    return dist


def enumerate_walk_mixture(offspring, d: int, generations: int) -> dict[tuple, Fraction]:
    """Exact histogram law of the independent-walk construction.

    Draws the generation size from the type-blind process, then that many
    independent `generations`-step lazy-walk endpoints.
    """
    size_dist = enumerate_generation_sizes(offspring, generations)
    walk = lazy_walk_pmf(generations, d)
    points = [
        v
        for v in itertools.product(range(-generations, generations + 1), repeat=d)
        if sum(abs(x) for x in v) <= generations
    ]
    probs = [walk.prob_exact(v) for v in points]
    out: dict[tuple, Fraction] = {}
    for t, pt in size_dist.items():
        for comp in _compositions(t, len(points)):
            coeff = math.factorial(t)
            mass = pt
            for c, pv in zip(comp, probs):
                coeff //= math.factorial(c)
                mass *= pv**c
            key = histogram_key({v: c for v, c in zip(points, comp)})
            val = mass * coeff
            if val:
                out[key] = out.get(key, Fraction(0)) + val
    return out


def sample_multitype_key(
    offspring, d: int, generations: int, rng: np.random.Generator
) -> tuple:
    """One simulated histogram key from the multitype process."""
    hist = TypeHistogram.origin(d)
    for _ in range(generations):
        hist = multitype_step(hist, offspring, rng)
    return hist.key()


def sample_walk_mixture_key(
    offspring, d: int, generations: int, rng: np.random.Generator
) -> tuple:
    """One simulated histogram key from the independent-walk construction."""
    support, probs = _as_arrays(offspring)
    z = 1
    for _ in range(generations):
        if z == 0:
            break
        z = int(_generation_totals(np.array([z]), support, probs, rng)[0])
    return rw_representation(generations, z, d, rng).key()
