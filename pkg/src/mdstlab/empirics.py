"""Empirical distribution diagnostics against the standard normal.

Replicated values of the rooted statistic are standardized (by their own
moments, or by supplied theoretical center/scale) and compared with N(0, 1)
in two metrics, both computed exactly from the empirical CDF:

  * Kolmogorov distance: the supremum of |F_n - Phi|, attained at a one-sided
    limit of an order statistic, so it is a maximum over 2n candidates.
  * 1-Wasserstein distance: int |F_n(t) - Phi(t)| dt, integrated in closed
    form piece by piece between order statistics (Phi has the elementary
    antiderivative t Phi(t) + phi(t)); crossings are located with the normal
    quantile function.

With R replicates, distances below the Dvoretzky-Kiefer-Wolfowitz noise floor
1.36/sqrt(R) are indistinguishable from sampling noise; reports carry that
floor so rate regressions can mask drowned points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.special import ndtr, ndtri

__all__ = [
    "EMPIRICAL",
    "THEORETICAL",
    "StatSampleSet",
    "DistanceReport",
    "RateRegression",
    "standardize",
    "kolmogorov_to_normal",
    "wasserstein1_to_normal",
    "two_sample_ks",
    "distance_report",
    "rate_regression",
]

EMPIRICAL = "empirical"
THEORETICAL = "theoretical"

# Two-sided DKW 95% band constant: sup |F_n - F| <~ 1.36/sqrt(n).
DKW_COEFFICIENT = 1.36


@dataclass(frozen=True)
class StatSampleSet:
    """Replicated statistic values plus the parameters that produced them."""

    values: NDArray[np.float64]
    dimension: int
    alpha: float
    intensity: float
    master_seed: int

    @property
    def replications(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class DistanceReport:
    kolmogorov: float
    wasserstein1: float
    replications: int
    standardization: str

    @property
    def noise_floor(self) -> float:
        return DKW_COEFFICIENT / math.sqrt(self.replications)


@dataclass(frozen=True)
class RateRegression:
    slope: float
    intercept: float
    residual_rms: float
    points_used: int


# ============================================================
# Standardization
# ============================================================


def _as_values(values) -> NDArray[np.float64]:
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ValueError(f"expected a 1-d array of values, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValueError("values must be finite")
    return v


def standardize(
    values,
    mode: str = EMPIRICAL,
    center: Optional[float] = None,
    scale: Optional[float] = None,
) -> NDArray[np.float64]:
    """Center and scale replicate values to mean 0, variance 1.

    EMPIRICAL mode uses the sample mean and the unbiased sample standard
    deviation (needs >= 2 values and nonzero spread). THEORETICAL mode uses
    the supplied center and scale, e.g. a limit mean and the square root of a
    limit variance.
    """
    v = _as_values(values)
    if mode == EMPIRICAL:
        if v.shape[0] < 2:
            raise ValueError("empirical standardization needs at least 2 values")
        center = float(v.mean())
        scale = float(v.std(ddof=1))
        if scale == 0.0:
            raise ValueError("values have zero sample variance")
    elif mode == THEORETICAL:
        if center is None or scale is None:
            raise ValueError("theoretical standardization needs explicit center and scale")
        center = float(center)
        scale = float(scale)
        if not (scale > 0.0):
            raise ValueError(f"scale must be positive, got {scale}")
    else:
        raise ValueError(f"unknown standardization mode {mode!r}")
    return (v - center) / scale


# ============================================================
# Distances to the standard normal
# ============================================================


def kolmogorov_to_normal(values) -> float:
    """sup_t |F_n(t) - Phi(t)|, evaluated exactly at both one-sided limits."""
    z = np.sort(_as_values(values))
    n = z.shape[0]
    phi = ndtr(z)
    upper = np.arange(1, n + 1) / n - phi
    lower = phi - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def _phi_antiderivative(t: NDArray[np.float64]) -> NDArray[np.float64]:
    # int_{-inf}^t Phi = t Phi(t) + phi(t); -> 0 as t -> -inf.
    return t * ndtr(t) + np.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)


def wasserstein1_to_normal(values) -> float:
    """int |F_n(t) - Phi(t)| dt, in closed form on each constant piece of F_n.

    On [z_(i), z_(i+1)) the empirical CDF equals c = i/n, and
    int |c - Phi| splits at the crossing point Phi^-1(c) when that lies
    inside the piece. Tails integrate Phi and 1 - Phi exactly.
    """
    z = np.sort(_as_values(values))
    n = z.shape[0]
    g = _phi_antiderivative(z)
    # Left tail, where F_n = 0: integral of Phi up to z_(0).
    total = float(g[0])
    # Right tail, where F_n = 1: integral of Phi(-t) beyond z_(n-1).
    total += float(_phi_antiderivative(np.array([-z[-1]]))[0])
    if n == 1:
        return total
    levels = np.arange(1, n) / n
    cross = ndtri(levels)
    a, b = z[:-1], z[1:]
    ga, gb = g[:-1], g[1:]
    # Piecewise exact: if the crossing is outside [a, b], |c - Phi| keeps one
    # sign; otherwise split at the crossing.
    t = np.clip(cross, a, b)
    gt = _phi_antiderivative(t)
    left = levels * (t - a) - (gt - ga)  # region where Phi <= c
    right = (gb - gt) - levels * (b - t)  # region where Phi >= c
    total += float(np.abs(left).sum() + np.abs(right).sum())
    return total


def two_sample_ks(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov distance between empirical CDFs."""
    av = np.sort(_as_values(a))
    bv = np.sort(_as_values(b))
    grid = np.concatenate([av, bv])
    fa = np.searchsorted(av, grid, side="right") / av.shape[0]
    fb = np.searchsorted(bv, grid, side="right") / bv.shape[0]
    return float(np.abs(fa - fb).max())


def distance_report(values, mode: str = EMPIRICAL, **kwargs) -> DistanceReport:
    """Standardize and measure both distances in one pass."""
    z = standardize(values, mode, **kwargs)
    return DistanceReport(
        kolmogorov=kolmogorov_to_normal(z),
        wasserstein1=wasserstein1_to_normal(z),
        replications=int(np.asarray(values).shape[0]),
        standardization=mode,
    )


# ============================================================
# Convergence-rate regression
# ============================================================


def rate_regression(points: Sequence[tuple[float, float]]) -> RateRegression:
    """Least-squares slope of log(distance) against log(log s).

    Expects (s, distance) pairs with s > e and distance > 0; at least two
    distinct s values are required. The returned residual is the RMS of the
    fit residuals, zero for an exact power law in log s.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ValueError("need at least two (s, distance) pairs")
    s, dist = pts[:, 0], pts[:, 1]
    if (s <= math.e).any():
        raise ValueError("rate regression needs s > e so that log log s > 0")
    if (dist <= 0.0).any():
        raise ValueError("distances must be positive")
    x = np.log(np.log(s))
    if np.unique(x).shape[0] < 2:
        raise ValueError("need at least two distinct s values")
    y = np.log(dist)
    coeffs = np.polyfit(x, y, deg=1)
    fitted = np.polyval(coeffs, x)
    rms = float(np.sqrt(np.mean((y - fitted) ** 2)))
    return RateRegression(
        slope=float(coeffs[0]),
        intercept=float(coeffs[1]),
        residual_rms=rms,
        points_used=int(pts.shape[0]),
    )
