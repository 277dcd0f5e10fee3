"""Seeded samplers: Poisson/Binomial cubes and the Dickman cascade.

All randomness flows through numpy's PCG64 generators. Independent streams are
derived by hashing a master seed together with integer key components through
SeedSequence, so every replicate (and every internal consumer) owns a private
stream: results never depend on execution order or worker placement, and any
single replicate can be reproduced in isolation from its recorded seed.

Sampled point sets are pairwise distinct. Collisions are a null event for
float64 coordinates but are still handled: duplicate rows are detected (cheap
first-coordinate screen, full row check only on a hit) and redrawn from the
same stream until the sample is clean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "PointSample",
    "derive_seed",
    "stream",
    "sample_poisson_cube",
    "sample_binomial_cube",
    "dickman_cascade",
    "sample_dickman",
]


def derive_seed(master_seed: int, *key: int) -> int:
    """Collapse (master_seed, *key) into a single 64-bit stream seed."""
    ss = np.random.SeedSequence((int(master_seed),) + tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def stream(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


@dataclass(frozen=True)
class PointSample:
    """A realized point process on [0, 1]^d.

    count is the realized number of points; intensity is the Poisson mean
    that produced it (equal to count for binomial samples).
    """

    points: NDArray[np.float64]
    dimension: int
    intensity: float
    count: int
    seed: int
    kind: str


# ============================================================
# Cube samplers
# ============================================================


def _distinct_rows(pts: NDArray[np.float64], rng: np.random.Generator) -> NDArray[np.float64]:
    # First-coordinate ties are a superset of duplicate rows; only on a tie do
    # we pay for the full row comparison, and only true duplicates get redrawn.
    n, d = pts.shape
    while n >= 2:
        x0 = np.sort(pts[:, 0])
        if not (x0[1:] == x0[:-1]).any():
            return pts
        order = np.lexsort(pts.T[::-1])
        ordered = pts[order]
        dup = np.zeros(n, dtype=bool)
        dup[1:] = (ordered[1:] == ordered[:-1]).all(axis=1)
        if not dup.any():
            return pts
        redraw = order[dup]
        pts[redraw] = rng.random((redraw.size, d))
    return pts


def _validate_dim(dimension: int) -> int:
    dimension = int(dimension)
    if dimension < 1:
        raise ValueError(f"dimension must be >= 1, got {dimension}")
    return dimension


def sample_poisson_cube(dimension: int, intensity: float, seed: int) -> PointSample:
    """Homogeneous Poisson sample of the given intensity on the unit cube.

    The realized count is Poisson(intensity); coordinates are iid uniform.
    """
    dimension = _validate_dim(dimension)
    intensity = float(intensity)
    if not np.isfinite(intensity) or intensity <= 0.0:
        raise ValueError(f"intensity must be positive, got {intensity}")
    rng = stream(seed)
    n = int(rng.poisson(intensity))
    pts = _distinct_rows(rng.random((n, dimension)), rng)
    return PointSample(pts, dimension, intensity, n, int(seed), "poisson")


def sample_binomial_cube(dimension: int, count: int, seed: int) -> PointSample:
    """Exactly `count` iid uniform points on the unit cube."""
    dimension = _validate_dim(dimension)
    count = int(count)
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    rng = stream(seed)
    pts = _distinct_rows(rng.random((count, dimension)), rng)
    return PointSample(pts, dimension, float(count), count, int(seed), "binomial")


# ============================================================
# Dickman cascade
# ============================================================


def dickman_cascade(
    count: int,
    seed: int,
    truncation_threshold: float = 1e-12,
    factor_power: float = 1.0,
) -> NDArray[np.float64]:
    """Draws of sum_i prod_{j<=i} U_j^factor_power, truncated at a threshold.

    Terms are accumulated while the running product stays >= the threshold;
    the first sub-threshold product and everything after it are dropped, which
    leaves an expected truncation bias of at most the threshold itself.

    One uniform per (sample, round) is drawn whether or not the sample is
    still active, so for a fixed seed the accumulated terms of a coarser
    truncation are a prefix of a finer one: tightening the threshold can only
    increase each sample, coordinatewise.
    """
    count = int(count)
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    thr = float(truncation_threshold)
    if not (0.0 < thr < 1.0):
        raise ValueError(f"truncation_threshold must be in (0, 1), got {thr}")
    power = float(factor_power)
    if power <= 0.0:
        raise ValueError(f"factor_power must be positive, got {power}")
    rng = stream(seed)
    total = np.zeros(count)
    prod = np.ones(count)
    while count and prod.max() >= thr:
        u = rng.random(count)
        if power != 1.0:
            u **= power
        prod = prod * u
        total += np.where(prod >= thr, prod, 0.0)
    return total


def sample_dickman(count: int, seed: int, truncation_threshold: float = 1e-12) -> NDArray[np.float64]:
    """Standard Dickman draws (mean 1, variance 1/2 in the untruncated limit)."""
    return dickman_cascade(count, seed, truncation_threshold, factor_power=1.0)
