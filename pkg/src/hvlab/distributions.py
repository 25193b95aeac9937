"""Power-law hidden-variable densities and thresholded sign functions.

The building blocks used everywhere else in the package: a family of
symmetric power-law densities on a bounded support, the +/-1 step
functions whose threshold is tied to a bias parameter, closed-form
averages of those step functions, a numerical quadrature fallback, an
inverse-CDF sampler and a seeded, block-deterministic Monte Carlo
estimator.

The sign convention is sign(0) = +1, applied uniformly by `sign_pm`.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "sign_pm",
    "PowerLawDistribution",
    "SignFunctionSpec",
    "McEstimate",
    "sign_mean_analytic",
    "sign_product_mean_analytic",
    "sign_mean_quadrature",
    "sign_product_mean_quadrature",
    "mc_mean",
    "mc_mean_pair",
]

# Block size for the Monte Carlo sub-streams.  Each block of samples is
# generated from its own deterministically derived RNG, so estimates do
# not depend on how blocks are distributed over workers.
MC_BLOCK_SIZE = 1 << 17

_BIAS_SLACK = 1e-9


def sign_pm(x):
    """+1.0 for x >= 0, -1.0 for x < 0 (scalar in, scalar out)."""
    out = np.where(np.asarray(x, dtype=float) >= 0.0, 1.0, -1.0)
    return float(out) if np.ndim(x) == 0 else out


@dataclass(frozen=True)
class PowerLawDistribution:
    """Symmetric density norm * (2n+1) * x^(2n) on |x| <= scale^(1/(2n+1)).

    The half-width parameter is tied to the normalisation constant by
    scale = 1 / (2 * norm), so the density integrates to one for every
    n.  n = 0 with norm = 1 is the flat distribution on (-1/2, 1/2).
    """

    n: int = 0
    norm: float = 1.0

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 0:
            raise ValueError("n must be a nonnegative integer")
        if not self.norm > 0.0:
            raise ValueError("norm must be positive")

    @property
    def scale(self) -> float:
        return 1.0 / (2.0 * self.norm)

    @property
    def support_edge(self) -> float:
        return self.scale ** (1.0 / (2 * self.n + 1))

    def density(self, x):
        """Density value at x, zero outside the support."""
        xs = np.asarray(x, dtype=float)
        inside = np.abs(xs) <= self.support_edge
        vals = self.norm * (2 * self.n + 1) * xs ** (2 * self.n)
        out = np.where(inside, vals, 0.0)
        return float(out) if np.ndim(x) == 0 else out

    def cdf(self, x):
        """Cumulative distribution, clipped to [0, 1] outside the support."""
        xs = np.asarray(x, dtype=float)
        edge = self.support_edge
        clipped = np.clip(xs, -edge, edge)
        out = self.norm * (clipped ** (2 * self.n + 1) + self.scale)
        return float(out) if np.ndim(x) == 0 else out

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """Inverse-CDF draws: sign(2u-1) * (|2u-1| * scale)^(1/(2n+1))."""
        u = rng.random(size)
        t = 2.0 * u - 1.0
        return np.sign(t) * (np.abs(t) * self.scale) ** (1.0 / (2 * self.n + 1))


@dataclass(frozen=True)
class SignFunctionSpec:
    """A +/-1 step function of one variable with a prescribed bias.

    evaluate(x) is sign(x + threshold) where the threshold is
    (|bias| / (2 norm))^(1/(2n+1)); with ``include_sign_prefactor`` the
    result is additionally multiplied by sign(bias).  Under the matching
    power-law density the mean is |bias| (plain) or bias (prefactored),
    independent of n and norm.
    """

    bias: float
    n: int = 0
    norm: float = 1.0
    include_sign_prefactor: bool = False

    def __post_init__(self) -> None:
        if abs(self.bias) > 1.0 + _BIAS_SLACK:
            raise ValueError(f"|bias| must not exceed 1, got {self.bias}")

    @property
    def distribution(self) -> PowerLawDistribution:
        return PowerLawDistribution(self.n, self.norm)

    @property
    def threshold(self) -> float:
        level = min(abs(self.bias), 1.0) / (2.0 * self.norm)
        return level ** (1.0 / (2 * self.n + 1))

    def evaluate(self, x):
        """The +/-1 value at x (vectorised over arrays)."""
        out = sign_pm(np.asarray(x, dtype=float) + self.threshold)
        if self.include_sign_prefactor:
            out = out * sign_pm(self.bias)
        return float(out) if np.ndim(x) == 0 else out


def sign_mean_analytic(spec: SignFunctionSpec) -> float:
    """Exact mean of the sign function under its own power-law density."""
    mag = min(abs(spec.bias), 1.0)
    return mag * sign_pm(spec.bias) if spec.include_sign_prefactor else mag


def sign_product_mean_analytic(first: SignFunctionSpec, second: SignFunctionSpec) -> float:
    """Exact mean of the product of two prefactored sign functions of one
    shared variable:  sign(b1) * sign(b2) * (1 - ||b1| - |b2||).
    """
    if not (first.include_sign_prefactor and second.include_sign_prefactor):
        raise ValueError("product average is defined for the prefactored forms")
    if first.n != second.n or first.norm != second.norm:
        raise ValueError("both sign functions must share one distribution")
    overlap = 1.0 - abs(abs(first.bias) - abs(second.bias))
    return sign_pm(first.bias) * sign_pm(second.bias) * overlap


def _panel_integral(dist: PowerLawDistribution, lo: float, hi: float, points: int) -> float:
    if hi <= lo:
        return 0.0
    xs = np.linspace(lo, hi, max(points, 9))
    return float(np.trapezoid(dist.density(xs), xs))


def sign_mean_quadrature(spec: SignFunctionSpec, points: int = 400_001) -> float:
    """Trapezoid-rule mean of the sign function, split at its threshold.

    Splitting at the known sign change keeps the integrand smooth on
    each panel, so the composite rule converges at second order.
    """
    dist = spec.distribution
    edge = dist.support_edge
    cut = min(spec.threshold, edge)
    neg_frac = (edge - cut) / (2.0 * edge)
    neg_pts = max(int(points * neg_frac), 9)
    pos_pts = max(points - neg_pts, 9)
    mean = _panel_integral(dist, -cut, edge, pos_pts) - _panel_integral(dist, -edge, -cut, neg_pts)
    if spec.include_sign_prefactor:
        mean *= sign_pm(spec.bias)
    return mean


def sign_product_mean_quadrature(
    first: SignFunctionSpec, second: SignFunctionSpec, points: int = 400_001
) -> float:
    """Trapezoid-rule mean of the product of two sign functions sharing
    one variable, split at both thresholds."""
    if first.n != second.n or first.norm != second.norm:
        raise ValueError("both sign functions must share one distribution")
    dist = first.distribution
    edge = dist.support_edge
    cuts = sorted({-edge, -min(first.threshold, edge), -min(second.threshold, edge), edge})
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (lo + hi)
        piece = sign_pm(mid + first.threshold) * sign_pm(mid + second.threshold)
        npts = max(int(points * (hi - lo) / (2.0 * edge)), 9)
        total += piece * _panel_integral(dist, lo, hi, npts)
    if first.include_sign_prefactor:
        total *= sign_pm(first.bias)
    if second.include_sign_prefactor:
        total *= sign_pm(second.bias)
    return total


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo mean with its standard error."""

    mean: float
    stderr: float
    samples: int
    seed: int


def _blocks(samples: int, block_size: int):
    for index, start in enumerate(range(0, samples, block_size)):
        yield index, min(block_size, samples - start)


def _block_rng(seed: int, block_index: int, lane: int) -> np.random.Generator:
    key = int(seed) & 0xFFFFFFFFFFFFFFFF
    return np.random.default_rng([key, lane, block_index])


def _reduce(partials: list[tuple[float, float]], samples: int, seed: int) -> McEstimate:
    total = 0.0
    total_sq = 0.0
    for part_sum, part_sq in partials:
        total += part_sum
        total_sq += part_sq
    mean = total / samples
    if samples > 1:
        var = max(total_sq - samples * mean * mean, 0.0) / (samples - 1)
    else:
        var = 0.0
    return McEstimate(mean=mean, stderr=float(np.sqrt(var / samples)), samples=samples, seed=seed)


def mc_mean(
    f: Callable[[np.ndarray], np.ndarray],
    dist: PowerLawDistribution,
    samples: int,
    seed: int,
    workers: int = 1,
    block_size: int = MC_BLOCK_SIZE,
) -> McEstimate:
    """Monte Carlo estimate of E[f(x)] under ``dist``.

    Samples are generated in fixed-size blocks, each from an RNG derived
    deterministically from (seed, block index), and partial sums are
    merged in block order.  The estimate is therefore bit-identical for
    any worker count.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")

    def one_block(task):
        index, count = task
        xs = dist.sample(count, _block_rng(seed, index, 0))
        ys = np.asarray(f(xs), dtype=float)
        ys = np.broadcast_to(ys, xs.shape)
        return float(ys.sum()), float(np.square(ys).sum())

    tasks = list(_blocks(samples, block_size))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(one_block, tasks))
    else:
        partials = [one_block(task) for task in tasks]
    return _reduce(partials, samples, seed)


def mc_mean_pair(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    dist1: PowerLawDistribution,
    dist2: PowerLawDistribution,
    samples: int,
    seed: int,
    workers: int = 1,
    block_size: int = MC_BLOCK_SIZE,
) -> McEstimate:
    """Monte Carlo estimate of E[f(x1, x2)] for two independent draws."""
    if samples < 1:
        raise ValueError("samples must be at least 1")

    def one_block(task):
        index, count = task
        xs = dist1.sample(count, _block_rng(seed, index, 1))
        ys = dist2.sample(count, _block_rng(seed, index, 2))
        vals = np.asarray(f(xs, ys), dtype=float)
        vals = np.broadcast_to(vals, xs.shape)
        return float(vals.sum()), float(np.square(vals).sum())

    tasks = list(_blocks(samples, block_size))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(one_block, tasks))
    else:
        partials = [one_block(task) for task in tasks]
    return _reduce(partials, samples, seed)
