"""Monte Carlo integration over the unit cube with reproducible error bars.

The default method is plain Monte Carlo: the evaluation budget is split into
fixed-size chunks, each chunk drawing its points from a stream derived from
(seed, chunk index). Partial sums are reduced in chunk order, so the result is
bit-identical no matter how chunks are scheduled, and the reported standard
error is the honest iid one. A scrambled-Sobol alternative is available for
smooth integrands; its error bar comes from independent randomizations.

Integrands may carry integrable singularities. A caller can name the
denominator expression that degenerates; evaluations where it drops below the
configured floor are discarded (contributing zero) and the discarded measure
is tracked. Estimates discarding more than MAX_DISCARD_FRACTION of the budget
are refused rather than silently biased.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray

from .sampling import stream, derive_seed

__all__ = [
    "PLAIN_MC",
    "LOW_DISCREPANCY",
    "MAX_DISCARD_FRACTION",
    "QuadratureError",
    "QuadratureConfig",
    "QuadratureEstimate",
    "integrate_unit_cube",
]

PLAIN_MC = "plain_mc"
LOW_DISCREPANCY = "low_discrepancy"

# Estimates discarding more than this fraction of evaluations are invalid.
MAX_DISCARD_FRACTION = 1e-3

_CHUNK_TAG = 977
_SOBOL_REPLICATES = 16

Integrand = Callable[[NDArray[np.float64]], NDArray[np.float64]]


class QuadratureError(RuntimeError):
    """Raised when an integrand value is unusable or discards blow the budget."""


@dataclass(frozen=True)
class QuadratureConfig:
    evaluations: int = 10**6
    seed: int = 0
    method: str = PLAIN_MC
    singularity_floor: float = 0.0
    chunk_size: int = 1 << 20

    def __post_init__(self) -> None:
        if int(self.evaluations) < 2:
            raise ValueError(f"evaluations must be >= 2, got {self.evaluations}")
        if self.method not in (PLAIN_MC, LOW_DISCREPANCY):
            raise ValueError(f"unknown method {self.method!r}")
        if self.singularity_floor < 0.0:
            raise ValueError("singularity_floor must be >= 0")
        if int(self.chunk_size) < 1:
            raise ValueError("chunk_size must be >= 1")


@dataclass(frozen=True)
class QuadratureEstimate:
    value: float
    std_error: float
    evaluations: int
    method: str
    discarded_fraction: float = 0.0


def _evaluate(
    f: Integrand,
    x: NDArray[np.float64],
    floor: float,
    denominator: Optional[Integrand],
) -> tuple[NDArray[np.float64], int]:
    """Integrand values with sub-floor evaluations zeroed; returns discard count."""
    discarded = 0
    if denominator is not None:
        den = np.asarray(denominator(x), dtype=np.float64)
        keep = den >= floor
        discarded = int(x.shape[0] - np.count_nonzero(keep))
        if discarded:
            x = x[keep]
    v = np.asarray(f(x), dtype=np.float64)
    if v.shape != (x.shape[0],):
        raise QuadratureError(f"integrand returned shape {v.shape} for {x.shape[0]} points")
    bad = ~np.isfinite(v)
    if bad.any():
        where = x[int(np.flatnonzero(bad)[0])]
        raise QuadratureError(f"non-finite integrand value at point {where.tolist()}")
    return v, discarded


def _plain_mc(
    f: Integrand,
    dimension: int,
    config: QuadratureConfig,
    denominator: Optional[Integrand],
) -> QuadratureEstimate:
    evals = int(config.evaluations)
    chunk = int(config.chunk_size)
    total = 0.0
    # Second moment in units of scale**2, where scale tracks max |v| so far;
    # raw squares of values near 1e-200 underflow and would zero the error bar.
    total_sq = 0.0
    scale = 0.0
    discarded = 0
    done = 0
    index = 0
    while done < evals:
        m = min(chunk, evals - done)
        rng = stream(derive_seed(config.seed, _CHUNK_TAG, index))
        x = rng.random((m, dimension))
        v, disc = _evaluate(f, x, config.singularity_floor, denominator)
        # Discarded points contribute zero to both sums but stay in the count.
        total += float(v.sum())
        vmax = float(np.abs(v).max()) if v.size else 0.0
        if vmax > scale:
            if scale > 0.0:
                total_sq *= (scale / vmax) ** 2
            scale = vmax
        if scale > 0.0 and v.size:
            u = v / scale
            total_sq += float((u * u).sum())
        discarded += disc
        done += m
        index += 1
    mean = total / evals
    if scale > 0.0:
        mean_u = mean / scale
        var_u = max(0.0, total_sq - evals * mean_u * mean_u) / (evals - 1)
        std_error = scale * math.sqrt(var_u / evals)
    else:
        std_error = 0.0
    return QuadratureEstimate(
        value=mean,
        std_error=std_error,
        evaluations=evals,
        method=PLAIN_MC,
        discarded_fraction=discarded / evals,
    )


def _sobol(
    f: Integrand,
    dimension: int,
    config: QuadratureConfig,
    denominator: Optional[Integrand],
) -> QuadratureEstimate:
    from scipy.stats import qmc

    per = max(256, int(config.evaluations) // _SOBOL_REPLICATES)
    m = max(8, int(math.log2(per)))
    means = np.empty(_SOBOL_REPLICATES)
    discarded = 0
    n_each = 1 << m
    for r in range(_SOBOL_REPLICATES):
        eng = qmc.Sobol(d=dimension, scramble=True, seed=derive_seed(config.seed, _CHUNK_TAG, r))
        x = eng.random_base2(m)
        v, disc = _evaluate(f, x, config.singularity_floor, denominator)
        means[r] = v.sum() / n_each
        discarded += disc
    evals = n_each * _SOBOL_REPLICATES
    # Same underflow guard as the plain path: spread the replicate means by
    # their magnitude before squaring deviations.
    mscale = float(np.abs(means).max())
    if mscale > 0.0:
        std_error = mscale * float((means / mscale).std(ddof=1)) / math.sqrt(_SOBOL_REPLICATES)
    else:
        std_error = 0.0
    return QuadratureEstimate(
        value=float(means.mean()),
        std_error=std_error,
        evaluations=evals,
        method=LOW_DISCREPANCY,
        discarded_fraction=discarded / evals,
    )


def integrate_unit_cube(
    f: Integrand,
    dimension: int,
    config: QuadratureConfig,
    denominator: Optional[Integrand] = None,
) -> QuadratureEstimate:
    """Estimate the integral of f over [0, 1]^dimension.

    f maps an (m, dimension) block of points to m values and is expected to be
    vectorized. When `denominator` is given, evaluations where it falls below
    config.singularity_floor are discarded (the integrand is treated as zero
    there) and the discarded measure is reported on the estimate.

    Raises QuadratureError on non-finite integrand values at kept points, or
    when the discarded fraction reaches MAX_DISCARD_FRACTION.
    """
    dimension = int(dimension)
    if dimension < 1:
        raise ValueError(f"dimension must be >= 1, got {dimension}")
    if config.method == PLAIN_MC:
        est = _plain_mc(f, dimension, config, denominator)
    else:
        est = _sobol(f, dimension, config, denominator)
    if est.discarded_fraction >= MAX_DISCARD_FRACTION:
        raise QuadratureError(
            f"discarded fraction {est.discarded_fraction:.2e} exceeds "
            f"{MAX_DISCARD_FRACTION:.0e}; estimate rejected"
        )
    return est
