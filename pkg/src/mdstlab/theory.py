"""Limit-theory constants for the rooted alpha-powered MDST length.

For a Poisson sample of intensity s on [0, 1]^d (d >= 2) the statistic
L_0^alpha has

    mean     ~  d / (alpha (d-2)!) * (log s)^(d-2)
    variance ~  w(d, alpha) / (2 alpha (d-2)!) * (log s)^(d-2)

The constant w(d, alpha) is defined through integrals over the unit cube:
with |b| the coordinate product and P_k, Q_k the products over the first k
and remaining d-k coordinates,

    w = d - 2 d * I_0 + 2 * sum_{k=1}^{d-1} k C(d,k) I_k
    I_0 = int b_1^alpha (1 + |b|)^-2 db
    I_k = int b_1^alpha [ (P_k + Q_k - |b|)^-2 - (P_k + Q_k)^-2 ] db.

variance_constant evaluates this form directly; variance_constant_decomposed
(d >= 3) assembles the same number from equivalent two- and three-dimensional
iterated integrals, obtained by integrating out everything but the coordinate
products (a product of m independent uniforms has density (-log t)^(m-1)/(m-1)!).
Agreement of the two forms within Monte Carlo error is a strong transcription
check, and w always exceeds the closed-form lower bound exposed here.

The cube integral of (1 + |b|)^-2 itself has a closed form in terms of the
Riemann zeta function, evaluated here by Euler-Maclaurin summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .quadrature import (
    QuadratureConfig,
    QuadratureEstimate,
    integrate_unit_cube,
)
from .sampling import derive_seed

__all__ = [
    "TheoryConstants",
    "mean_asymptotic",
    "variance_asymptotic",
    "variance_constant",
    "variance_constant_decomposed",
    "variance_constant_lower_bound",
    "zeta_square_integral",
    "exp_mass_above",
    "weighted_minimal_integral",
    "compute_constants",
    "export_constants",
]


# ============================================================
# Parameter checks
# ============================================================


def _check_d(d: int, minimum: int = 2) -> int:
    d = int(d)
    if d < minimum:
        raise ValueError(f"dimension must be >= {minimum}, got {d}")
    return d


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return alpha


def _check_s(s: float, minimum: float = 1.0) -> float:
    s = float(s)
    if not math.isfinite(s) or s <= minimum:
        raise ValueError(f"intensity must exceed {minimum}, got {s}")
    return s


# ============================================================
# Closed forms
# ============================================================


def mean_asymptotic(d: int, alpha: float, s: float) -> float:
    """Leading mean term d/(alpha (d-2)!) * (log s)^(d-2)."""
    d = _check_d(d)
    alpha = _check_alpha(alpha)
    s = _check_s(s)
    return d / (alpha * math.factorial(d - 2)) * math.log(s) ** (d - 2)


def _riemann_zeta(m: int, terms: int = 64) -> float:
    # Euler-Maclaurin: direct sum plus tail corrections; error ~ 1e-16 for
    # m >= 2 at 64 terms, far below the 1e-14 target.
    n = np.arange(1, terms, dtype=np.float64)
    head = float(np.sum(n ** (-float(m))))
    N = float(terms)
    tail = N ** (1.0 - m) / (m - 1.0) + 0.5 * N ** (-float(m)) + m * N ** (-m - 1.0) / 12.0
    tail -= m * (m + 1) * (m + 2) * N ** (-m - 3.0) / 720.0
    return head + tail


def zeta_square_integral(d: int) -> float:
    """Closed form of int_{[0,1]^d} (1 + |b|)^-2 db.

    Equals 1/2 for d = 1, log 2 for d = 2, and
    (2^(d-2) - 1)/2^(d-2) * zeta(d-1) for d >= 3.
    """
    d = _check_d(d, minimum=1)
    if d == 1:
        return 0.5
    if d == 2:
        return math.log(2.0)
    scale = (2 ** (d - 2) - 1) / 2 ** (d - 2)
    return scale * _riemann_zeta(d - 1)


def variance_constant_lower_bound(d: int, alpha: float) -> float:
    """Closed-form lower bound for w(d, alpha); positive in every dimension."""
    d = _check_d(d)
    alpha = _check_alpha(alpha)
    return d * (2**d / (alpha + 1.0)) * ((2**d - 1) / 2**d - zeta_square_integral(d))


# ============================================================
# The variance constant, both forms
# ============================================================


def _sub_config(config: QuadratureConfig, tag: int) -> QuadratureConfig:
    return replace(config, seed=derive_seed(config.seed, tag))


def _bracket(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    s = p + q
    return (s - p * q) ** -2.0 - s**-2.0


def _combine(
    constant: float,
    parts: Sequence[tuple[float, QuadratureEstimate]],
    method: str,
) -> QuadratureEstimate:
    value = constant + sum(c * e.value for c, e in parts)
    se = math.sqrt(sum((c * e.std_error) ** 2 for c, e in parts))
    return QuadratureEstimate(
        value=value,
        std_error=se,
        evaluations=sum(e.evaluations for _, e in parts),
        method=method,
        discarded_fraction=max(e.discarded_fraction for c, e in parts),
    )


def variance_constant(d: int, alpha: float, config: QuadratureConfig) -> QuadratureEstimate:
    """w(d, alpha) from its defining d-dimensional cube integrals.

    Each component integral gets config.evaluations points on a seed derived
    from config.seed; the returned standard error combines the components.
    """
    d = _check_d(d)
    alpha = _check_alpha(alpha)

    def head(b: np.ndarray) -> np.ndarray:
        return b[:, 0] ** alpha / (1.0 + b.prod(axis=1)) ** 2

    parts: list[tuple[float, QuadratureEstimate]] = [
        (-2.0 * d, integrate_unit_cube(head, d, _sub_config(config, 1)))
    ]
    for k in range(1, d):
        def split(b: np.ndarray, k: int = k) -> np.ndarray:
            p = b[:, :k].prod(axis=1)
            q = b[:, k:].prod(axis=1)
            return b[:, 0] ** alpha * _bracket(p, q)

        den = None
        if config.singularity_floor > 0.0:
            def den(b: np.ndarray, k: int = k) -> np.ndarray:
                p = b[:, :k].prod(axis=1)
                q = b[:, k:].prod(axis=1)
                return p + q - p * q

        est = integrate_unit_cube(split, d, _sub_config(config, 10 + k), denominator=den)
        parts.append((2.0 * k * math.comb(d, k), est))
    return _combine(float(d), parts, config.method)


def variance_constant_decomposed(d: int, alpha: float, config: QuadratureConfig) -> QuadratureEstimate:
    """w(d, alpha) for d >= 3 from the iterated low-dimensional integrals.

    The coordinate products are integrated out analytically, leaving one
    two-dimensional integral per tail and a three-dimensional one (on the
    triangle w1 <= u1, imposed by an indicator) for each middle split. The
    result is scaled to match variance_constant exactly in the limit.
    """
    d = _check_d(d, minimum=3)
    alpha = _check_alpha(alpha)
    fact = math.factorial(d - 2)

    def gamma_term(v: np.ndarray) -> np.ndarray:
        lg = -np.log(v[:, 1])
        return v[:, 0] ** alpha * (1.0 + v[:, 0] * v[:, 1]) ** -2.0 * lg ** (d - 2)

    # The 1/(d-2)! density factor of the integrated-out product is kept out of
    # the integrand and folded into the coefficient: -2d/(d-2)! per unit mass.
    est_gamma = integrate_unit_cube(gamma_term, 2, _sub_config(config, 21))
    parts: list[tuple[float, QuadratureEstimate]] = [(-2.0 * d / fact, est_gamma)]

    def h1_term(w: np.ndarray) -> np.ndarray:
        lg = -np.log(w[:, 1])
        return w[:, 0] ** alpha * _bracket(w[:, 0], w[:, 1]) * lg ** (d - 2)

    # h_k carries 1/(2 alpha (d-2)!) and enters w through 4 alpha (d-2)! k C(d,k),
    # so the residual coefficient is 2 k C(d,k) over the remaining factorials.
    est_h1 = integrate_unit_cube(h1_term, 2, _sub_config(config, 31))
    parts.append((2.0 * 1 * math.comb(d, 1) / fact, est_h1))

    for k in range(2, d):
        def hk_term(x: np.ndarray, k: int = k) -> np.ndarray:
            u1, w1, w2 = x[:, 0], x[:, 1], x[:, 2]
            inside = w1 <= u1
            val = np.zeros(x.shape[0])
            if inside.any():
                u1, w1, w2 = u1[inside], w1[inside], w2[inside]
                term = u1 ** (alpha - 1.0) * _bracket(w1, w2)
                term *= np.log(u1 / w1) ** (k - 2) / math.factorial(k - 2)
                term *= (-np.log(w2)) ** (d - k - 1) / math.factorial(d - k - 1)
                val[inside] = term
            return val

        est_hk = integrate_unit_cube(hk_term, 3, _sub_config(config, 30 + k))
        parts.append((2.0 * k * math.comb(d, k), est_hk))
    return _combine(float(d), parts, config.method)


def variance_asymptotic(d: int, alpha: float, s: float, constants: "TheoryConstants") -> float:
    """Leading variance term w/(2 alpha (d-2)!) * (log s)^(d-2)."""
    d = _check_d(d)
    alpha = _check_alpha(alpha)
    s = _check_s(s)
    if constants.dimension != d or constants.alpha != alpha:
        raise ValueError(
            f"constants were computed for (d={constants.dimension}, alpha={constants.alpha}), "
            f"requested (d={d}, alpha={alpha})"
        )
    w = constants.variance_constant.value
    return w / (2.0 * alpha * math.factorial(d - 2)) * math.log(s) ** (d - 2)


# ============================================================
# Exponential mass over a dominating corner
# ============================================================


def exp_mass_above(y, beta: float, s: float, config: QuadratureConfig) -> QuadratureEstimate:
    """Estimate s * integral over {x : x dominates y} of exp(-beta s |x|).

    The integral is taken over the product box (y_i, 1]; sampling happens on
    that box directly, so no evaluations are wasted outside it. Scales as
    1/beta times the same mass at intensity beta*s.
    """
    yv = np.asarray(y, dtype=np.float64)
    if yv.ndim != 1 or yv.size < 1:
        raise ValueError(f"y must be a single point, got shape {yv.shape}")
    if yv.min() < 0.0 or yv.max() > 1.0:
        raise ValueError("y must lie in the unit cube")
    beta = float(beta)
    s = float(s)
    if beta <= 0.0 or s <= 0.0:
        raise ValueError("beta and s must be positive")
    widths = 1.0 - yv
    volume = float(widths.prod())
    if volume == 0.0:
        return QuadratureEstimate(0.0, 0.0, 0, config.method, 0.0)

    def kernel(u: np.ndarray) -> np.ndarray:
        x = yv + u * widths
        return s * volume * np.exp(-beta * s * x.prod(axis=1))

    return integrate_unit_cube(kernel, yv.size, config)


# ============================================================
# Weighted integrals over the minimal-point kernel
# ============================================================


def weighted_minimal_integral(
    d: int,
    k: int,
    alphas: Sequence[float],
    tau: float,
    delta: float,
    nu: float,
    beta: float,
    s: float,
    config: QuadratureConfig,
) -> QuadratureEstimate:
    """Monte Carlo value of

        s * int_{[0,1]^d} prod_{i<=k} x_i^alpha_i (s|x|)^tau |log(nu s|x|)|^delta
                          exp(-beta s |x|) dx.

    For k < d this stays of order (log s)^(d-k-1); for k = d it decays like
    s^(-min alpha) (log s)^(d-1). Both behaviours are exercised in tests.
    """
    d = _check_d(d, minimum=1)
    k = int(k)
    if not 1 <= k <= d:
        raise ValueError(f"k must be in [1, {d}], got {k}")
    a = np.asarray(alphas, dtype=np.float64)
    if a.shape != (k,) or (a <= 0.0).any():
        raise ValueError(f"alphas must be {k} positive exponents")
    tau = float(tau)
    if tau <= -1.0:
        raise ValueError(f"tau must exceed -1, got {tau}")
    delta = float(delta)
    if delta < 0.0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    nu = float(nu)
    beta = float(beta)
    if nu <= 0.0 or beta <= 0.0:
        raise ValueError("nu and beta must be positive")
    s = _check_s(s, minimum=0.0)

    def kernel(x: np.ndarray) -> np.ndarray:
        prod = x.prod(axis=1)
        v = s * np.prod(x[:, :k] ** a, axis=1) * np.exp(-beta * s * prod)
        if tau != 0.0:
            v = v * (s * prod) ** tau
        if delta != 0.0:
            v = v * np.abs(np.log(nu * s * prod)) ** delta
        return v

    den = None
    if config.singularity_floor > 0.0 and (tau < 0.0 or delta > 0.0):
        den = lambda x: x.prod(axis=1)
    return integrate_unit_cube(kernel, d, config, denominator=den)


# ============================================================
# Bundled constants
# ============================================================


@dataclass(frozen=True)
class TheoryConstants:
    """The limit constants for one (d, alpha) pair, with their error bars."""

    dimension: int
    alpha: float
    mean_coefficient: float
    variance_constant: QuadratureEstimate
    variance_constant_alt: Optional[QuadratureEstimate]

    @property
    def variance_coefficient(self) -> float:
        return self.variance_constant.value / (
            2.0 * self.alpha * math.factorial(self.dimension - 2)
        )


def compute_constants(
    d: int,
    alpha: float,
    config: QuadratureConfig,
    include_decomposed: bool = True,
) -> TheoryConstants:
    d = _check_d(d)
    alpha = _check_alpha(alpha)
    alt = None
    if include_decomposed and d >= 3:
        alt = variance_constant_decomposed(d, alpha, _sub_config(config, 71))
    return TheoryConstants(
        dimension=d,
        alpha=alpha,
        mean_coefficient=d / (alpha * math.factorial(d - 2)),
        variance_constant=variance_constant(d, alpha, config),
        variance_constant_alt=alt,
    )


def export_constants(items: Sequence[TheoryConstants]) -> dict:
    """JSON-ready table keyed by 'd=?,alpha=?' with value/std_error pairs."""
    out = {}
    for c in items:
        entry = {
            "mean_coefficient": c.mean_coefficient,
            "variance_coefficient": c.variance_coefficient,
            "variance_constant": {
                "value": c.variance_constant.value,
                "std_error": c.variance_constant.std_error,
                "evaluations": c.variance_constant.evaluations,
                "method": c.variance_constant.method,
            },
        }
        if c.variance_constant_alt is not None:
            entry["variance_constant_alt"] = {
                "value": c.variance_constant_alt.value,
                "std_error": c.variance_constant_alt.std_error,
                "evaluations": c.variance_constant_alt.evaluations,
                "method": c.variance_constant_alt.method,
            }
        out[f"d={c.dimension},alpha={c.alpha:g}"] = entry
    return out
