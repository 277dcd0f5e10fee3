"""Limit-constant computations: closed forms, quadrature forms, bounds."""

import math

import numpy as np
import pytest
from scipy.special import zeta as scipy_zeta

from _frozen import W31_STD_ERROR, W31_VALUE
from mdstlab.quadrature import QuadratureConfig, integrate_unit_cube
from mdstlab.theory import (
    compute_constants,
    exp_mass_above,
    export_constants,
    mean_asymptotic,
    variance_asymptotic,
    variance_constant,
    variance_constant_decomposed,
    variance_constant_lower_bound,
    weighted_minimal_integral,
    zeta_square_integral,
)


def _cfg(evaluations=10**6, seed=1, **kwargs):
    return QuadratureConfig(evaluations=evaluations, seed=seed, **kwargs)


# ============================================================
# Exact arithmetic
# ============================================================


def test_mean_asymptotic_hand_values():
    assert mean_asymptotic(3, 1.0, math.e**2) == pytest.approx(6.0)
    assert mean_asymptotic(3, 2.0, math.e**2) == pytest.approx(3.0)
    assert mean_asymptotic(4, 2.0, math.e**3) == pytest.approx(9.0)
    assert mean_asymptotic(2, 0.5, 10.0) == pytest.approx(4.0)  # log^0 term


def test_mean_asymptotic_validation():
    with pytest.raises(ValueError):
        mean_asymptotic(1, 1.0, 10.0)
    with pytest.raises(ValueError):
        mean_asymptotic(3, -1.0, 10.0)
    with pytest.raises(ValueError):
        mean_asymptotic(3, 1.0, 1.0)


def test_zeta_square_integral_low_dimensions():
    assert zeta_square_integral(1) == pytest.approx(0.5)
    assert zeta_square_integral(2) == pytest.approx(math.log(2.0))
    assert zeta_square_integral(3) == pytest.approx(math.pi**2 / 12.0)
    assert zeta_square_integral(4) == pytest.approx(0.75 * 1.2020569031595943)


def test_zeta_square_integral_matches_reference_zeta():
    # ((2^(d-2) - 1)/2^(d-2)) * zeta(d-1) for d >= 3, any d.
    for d in range(3, 12):
        expected = (1.0 - 2.0 ** (2 - d)) * float(scipy_zeta(d - 1))
        assert zeta_square_integral(d) == pytest.approx(expected, rel=1e-12), d


def test_zeta_square_integral_agrees_with_quadrature():
    for d in (1, 2, 3, 4):
        est = integrate_unit_cube(
            lambda b: (1.0 + b.prod(axis=1)) ** -2.0, d, _cfg(seed=60 + d)
        )
        assert abs(est.value - zeta_square_integral(d)) < 4 * est.std_error, d


def test_lower_bound_positive_and_below_constant():
    for d in (2, 3, 4, 5, 6):
        for alpha in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
            assert variance_constant_lower_bound(d, alpha) > 0.0, (d, alpha)
    # d (2^d / (alpha+1)) ((2^d - 1)/2^d - pi^2/12) at d=3, alpha=1.
    exact = 3.0 * 4.0 * (7.0 / 8.0 - math.pi**2 / 12.0)
    assert variance_constant_lower_bound(3, 1.0) == pytest.approx(exact)


# ============================================================
# Variance constant, both forms
# ============================================================


def test_variance_constant_matches_frozen_oracle():
    est = variance_constant(3, 1.0, _cfg(seed=71))
    tol = 4 * math.hypot(est.std_error, W31_STD_ERROR)
    assert abs(est.value - W31_VALUE) < tol


def test_variance_constant_decomposed_matches_frozen_oracle():
    est = variance_constant_decomposed(3, 1.0, _cfg(seed=72))
    tol = 4 * math.hypot(est.std_error, W31_STD_ERROR)
    assert abs(est.value - W31_VALUE) < tol


def test_variance_constant_d2_alpha1_is_two():
    # The d=2, alpha=1 statistic converges to a sum of two independent
    # cascades of variance 1/2 each, so w(2,1)/2 = 1.
    est = variance_constant(2, 1.0, _cfg(seed=73))
    assert abs(est.value - 2.0) < 5 * est.std_error


def test_variance_constant_exceeds_lower_bound():
    for d, alpha in ((2, 0.5), (3, 1.0), (4, 2.0)):
        est = variance_constant(d, alpha, _cfg(evaluations=4 * 10**5, seed=74))
        bound = variance_constant_lower_bound(d, alpha)
        assert est.value + 4 * est.std_error > bound, (d, alpha)


def test_decomposed_form_requires_d_at_least_three():
    with pytest.raises(ValueError):
        variance_constant_decomposed(2, 1.0, _cfg())


def test_variance_asymptotic_scaling():
    constants = compute_constants(3, 1.0, _cfg(seed=75), include_decomposed=False)
    w = constants.variance_constant.value
    s = math.e**8
    expected = w / (2.0 * 1.0 * math.factorial(1)) * math.log(s)
    assert variance_asymptotic(3, 1.0, s, constants) == pytest.approx(expected)
    assert constants.variance_coefficient == pytest.approx(w / 2.0)


def test_export_constants_shape():
    constants = compute_constants(3, 2.0, _cfg(evaluations=10**5, seed=76))
    doc = export_constants([constants])
    entry = doc["d=3,alpha=2"]
    assert entry["mean_coefficient"] == pytest.approx(1.5)
    assert entry["variance_constant"]["value"] > 0
    assert entry["variance_constant"]["std_error"] > 0
    assert entry["variance_constant_alt"]["evaluations"] > 0


# ============================================================
# Exponential mass above a point
# ============================================================


def test_exp_mass_above_d1_closed_form():
    est = exp_mass_above([0.3], 1.0, 10.0, _cfg(seed=81))
    exact = (math.exp(-3.0) - math.exp(-10.0)) / 1.0
    assert abs(est.value - exact) < 3 * est.std_error


def test_exp_mass_above_unit_corner_is_zero():
    est = exp_mass_above([1.0, 1.0, 1.0], 1.0, 100.0, _cfg(seed=82))
    assert est.value == 0.0
    assert est.std_error == 0.0


def test_exp_mass_above_decreases_in_y():
    lo = exp_mass_above([0.1, 0.1, 0.1], 1.0, 100.0, _cfg(seed=83))
    hi = exp_mass_above([0.4, 0.4, 0.4], 1.0, 100.0, _cfg(seed=84))
    assert hi.value < lo.value


def test_exp_mass_above_validation():
    with pytest.raises(ValueError):
        exp_mass_above([0.5, 1.5], 1.0, 10.0, _cfg())
    with pytest.raises(ValueError):
        exp_mass_above([0.5], -1.0, 10.0, _cfg())
    with pytest.raises(ValueError):
        exp_mass_above([0.5], 1.0, 0.0, _cfg())


# ============================================================
# Weighted integrals over minimal-point kernels
# ============================================================


def test_weighted_integral_leading_term():
    # k=1, tau=0, beta=1 at s=e^10: leading term log(s) = 10 up to O(1).
    est = weighted_minimal_integral(3, 1, (1.0,), 0.0, 0.0, 1.0, 1.0, math.e**10, _cfg(seed=91))
    assert abs(est.value - 10.0) < 1.5


def test_weighted_integral_gamma_factor():
    # A tau factor scales the leading term by Gamma(1 + tau)/beta^tau.
    tau = 0.5
    est = weighted_minimal_integral(3, 1, (1.0,), tau, 0.0, 1.0, 1.0, math.e**10, _cfg(seed=92))
    lead = math.gamma(1.0 + tau) * 10.0
    assert abs(est.value - lead) < 0.2 * lead


def test_weighted_integral_full_k_decays_with_s():
    # k=d: the integral is O(s^(-alpha) log^(d-1) s); the normalized ratio
    # stays bounded while the raw value collapses.
    vals = []
    for i, s in enumerate((1e2, 1e3, 1e4)):
        est = weighted_minimal_integral(3, 3, (1.0, 1.0, 1.0), 0.0, 0.0, 1.0, 1.0, s, _cfg(seed=93 + i))
        vals.append(est.value / (s**-1.0 * math.log(s) ** 2))
    assert vals[0] > 0
    assert max(vals) / min(vals) < 5.0


def test_weighted_integral_d2_boundary_case():
    # d=2, k=1: order log^0, bounded in s.
    vals = []
    for i, s in enumerate((1e2, 1e4, 1e6)):
        est = weighted_minimal_integral(2, 1, (1.0,), 0.0, 0.0, 1.0, 1.0, s, _cfg(seed=96 + i))
        vals.append(est.value)
    assert max(vals) / min(vals) < 5.0


def test_weighted_integral_validation():
    with pytest.raises(ValueError):
        weighted_minimal_integral(3, 0, (), 0.0, 0.0, 1.0, 1.0, 100.0, _cfg())
    with pytest.raises(ValueError):
        weighted_minimal_integral(3, 4, (1.0,) * 4, 0.0, 0.0, 1.0, 1.0, 100.0, _cfg())
    with pytest.raises(ValueError):
        weighted_minimal_integral(3, 2, (1.0,), 0.0, 0.0, 1.0, 1.0, 100.0, _cfg())
    with pytest.raises(ValueError):
        weighted_minimal_integral(3, 1, (1.0,), -1.0, 0.0, 1.0, 1.0, 100.0, _cfg())
    with pytest.raises(ValueError):
        weighted_minimal_integral(3, 1, (1.0,), 0.0, -0.5, 1.0, 1.0, 100.0, _cfg())
