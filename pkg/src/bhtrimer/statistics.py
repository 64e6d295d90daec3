"""Ensemble post-processing: binned number distributions, moment series,
and the Bhattacharyya overlap measures

    B(P1, P2) = sum_n sqrt(P1(n) P2(n))     (coefficient, in [0, 1])
    D(P1, P2) = -ln B(P1, P2)               (distance, [0, +inf])
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import EnsembleResult


class StatisticsError(ValueError):
    pass


@dataclass(frozen=True)
class NumberDistribution:
    """Normalized histogram of per-trajectory number estimators.

    Bin k is centred at k * bin_width and covers
    [k*bin_width - bin_width/2, k*bin_width + bin_width/2); with the
    default unit width the centres are the non-negative integers.
    probs is dense from k = 0 upward. Estimators below -bin_width/2
    (possible near vacuum after the -1/2 Wigner correction) are clamped
    into bin 0 and reported via clamp_fraction.
    """

    probs: np.ndarray
    bin_width: float = 1.0
    sample_count: int = 0
    clamp_fraction: float = 0.0
    well: int = 0
    time: float = 0.0

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise StatisticsError("probs must be a non-empty 1-d array")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise StatisticsError("probs must be non-negative and sum to 1")
        object.__setattr__(self, "probs", p)

    @property
    def centers(self) -> np.ndarray:
        return np.arange(self.probs.size) * self.bin_width

    @property
    def mean(self) -> float:
        return float(np.sum(self.centers * self.probs))

    @property
    def std(self) -> float:
        m = self.mean
        return float(math.sqrt(max(np.sum((self.centers - m) ** 2 * self.probs), 0.0)))


@dataclass(frozen=True)
class MomentSeries:
    """Per-well mean/variance/standard-error series on the recorded grid."""

    times: np.ndarray
    mean: np.ndarray      # (n_times, 3)
    variance: np.ndarray  # (n_times, 3)
    stderr: np.ndarray    # (n_times, 3)
    sample_count: int


def bin_distribution(
    samples: np.ndarray,
    bin_width: float = 1.0,
    well: int = 0,
    time: float = 0.0,
) -> NumberDistribution:
    """Histogram per-trajectory number estimators onto the integer-multiple
    grid of bin_width (samples must already carry any ordering correction)."""
    x = np.asarray(samples, dtype=np.float64).ravel()
    if x.size == 0:
        raise StatisticsError("cannot bin an empty sample set")
    if bin_width <= 0:
        raise StatisticsError("bin_width must be positive")
    k = np.floor(x / bin_width + 0.5).astype(np.int64)
    clamped = k < 0
    k[clamped] = 0
    counts = np.bincount(k)
    probs = counts / x.size
    # renormalize exactly against accumulated rounding
    probs = probs / probs.sum()
    return NumberDistribution(
        probs=probs,
        bin_width=bin_width,
        sample_count=int(x.size),
        clamp_fraction=float(clamped.mean()),
        well=well,
        time=time,
    )


def _aligned(p1: NumberDistribution, p2: NumberDistribution) -> tuple[np.ndarray, np.ndarray]:
    if abs(p1.bin_width - p2.bin_width) > 1e-12 * max(p1.bin_width, p2.bin_width):
        raise StatisticsError(
            f"bin widths differ: {p1.bin_width} vs {p2.bin_width}"
        )
    n = max(p1.probs.size, p2.probs.size)
    a = np.zeros(n)
    b = np.zeros(n)
    a[: p1.probs.size] = p1.probs
    b[: p2.probs.size] = p2.probs
    return a, b


def bhattacharyya_coefficient(p1: NumberDistribution, p2: NumberDistribution) -> float:
    """Overlap coefficient on the union bin grid (implicit zeros)."""
    a, b = _aligned(p1, p2)
    return float(min(np.sum(np.sqrt(a * b)), 1.0))


def bhattacharyya_distance(p1: NumberDistribution, p2: NumberDistribution) -> float:
    """-ln of the coefficient; +inf for disjoint supports."""
    b = bhattacharyya_coefficient(p1, p2)
    return math.inf if b == 0.0 else -math.log(b) + 0.0  # +0.0 kills -0.0 at b=1


def bootstrap_coefficient_error(
    samples1: np.ndarray,
    samples2: np.ndarray,
    bin_width: float = 1.0,
    n_resamples: int = 200,
    seed: int = 0,
) -> float:
    """Nonparametric bootstrap standard deviation of B over trajectory
    resamples (both ensembles resampled independently)."""
    s1 = np.asarray(samples1, dtype=np.float64).ravel()
    s2 = np.asarray(samples2, dtype=np.float64).ravel()
    rng = np.random.default_rng([seed, 0xB00])
    values = np.empty(n_resamples)
    for m in range(n_resamples):
        r1 = s1[rng.integers(0, s1.size, s1.size)]
        r2 = s2[rng.integers(0, s2.size, s2.size)]
        values[m] = bhattacharyya_coefficient(
            bin_distribution(r1, bin_width), bin_distribution(r2, bin_width)
        )
    return float(values.std(ddof=1))


def moment_series(result: EnsembleResult) -> MomentSeries:
    """Mean/variance/stderr of the number estimator per well and time.

    The representation-appropriate ordering correction is already part of
    the accumulated estimator (|alpha|^2 - 1/2 for Wigner,
    Re(alpha_plus alpha) for positive-P), so no further correction is
    applied here.
    """
    m = result.n_completed
    if m < 2:
        raise StatisticsError("need at least 2 completed trajectories")
    mean = result.sum_est / m
    var = (result.sum_est_sq - m * mean**2) / (m - 1)
    var = np.maximum(var, 0.0)
    stderr = np.sqrt(var / m)
    return MomentSeries(
        times=result.times, mean=mean, variance=var, stderr=stderr, sample_count=m
    )


def snapshot_distribution(
    result: EnsembleResult, time: float, well: int | None = None
) -> NumberDistribution:
    """Bin the stored snapshot at one measure time for one well."""
    if time not in result.snapshots:
        raise StatisticsError(f"no snapshot stored at t={time}")
    if well is None:
        well = result.scenario.measure_well
    samples = result.snapshots[time][:, well - 1]
    return bin_distribution(
        samples, bin_width=result.scenario.bin_width, well=well, time=time
    )
