"""Monte Carlo and low-discrepancy integration over the unit cube."""

import math

import numpy as np
import pytest

from mdstlab.quadrature import (
    LOW_DISCREPANCY,
    MAX_DISCARD_FRACTION,
    PLAIN_MC,
    QuadratureConfig,
    QuadratureError,
    integrate_unit_cube,
)


def _cfg(**kwargs):
    base = dict(evaluations=10**5, seed=1)
    base.update(kwargs)
    return QuadratureConfig(**base)


# ============================================================
# Exact values and statistical accuracy
# ============================================================


def test_constant_integrand_is_exact():
    est = integrate_unit_cube(lambda x: np.ones(x.shape[0]), 3, _cfg())
    assert est.value == pytest.approx(1.0)
    assert est.std_error == pytest.approx(0.0, abs=1e-12)
    assert est.evaluations == 10**5
    assert est.method == PLAIN_MC
    assert est.discarded_fraction == 0.0


def test_product_integrand_within_error_bars():
    for d in (1, 2, 4):
        est = integrate_unit_cube(lambda x: x.prod(axis=1), d, _cfg(seed=40 + d))
        assert abs(est.value - 0.5**d) < 4 * est.std_error, d


def test_log_two_integrand():
    est = integrate_unit_cube(lambda x: 1.0 / (1.0 + x[:, 0]), 1, _cfg(seed=9))
    assert abs(est.value - math.log(2.0)) < 4 * est.std_error


def test_standard_error_scales_with_budget():
    f = lambda x: np.exp(x.sum(axis=1))
    small = integrate_unit_cube(f, 2, _cfg(evaluations=10**4, seed=77))
    large = integrate_unit_cube(f, 2, _cfg(evaluations=16 * 10**4, seed=78))
    ratio = small.std_error / large.std_error
    assert 2.8 < ratio < 5.7  # nominal factor 4


def test_error_bar_survives_tiny_magnitudes():
    # Values near exp(-600) ~ 2.6e-261: their squares underflow float64, but
    # the reported error bar must stay positive and correctly scaled.
    f = lambda x: np.exp(-600.0 - x[:, 0])
    exact = math.exp(-600.0) * (1.0 - math.exp(-1.0))
    for method in (PLAIN_MC, LOW_DISCREPANCY):
        est = integrate_unit_cube(f, 1, _cfg(seed=55, method=method))
        assert est.std_error > 0.0, method
        assert abs(est.value - exact) < 5 * est.std_error, method
        # The bar reflects the integrand's actual spread, not underflow noise.
        assert est.std_error < 0.1 * exact, method


def test_plain_mc_reproducible_and_seed_sensitive():
    f = lambda x: np.cos(x[:, 0] * x[:, 1])
    a = integrate_unit_cube(f, 2, _cfg(seed=3))
    b = integrate_unit_cube(f, 2, _cfg(seed=3))
    c = integrate_unit_cube(f, 2, _cfg(seed=4))
    assert a.value == b.value and a.std_error == b.std_error
    assert a.value != c.value


def test_partial_final_chunk_keeps_budget_exact():
    est = integrate_unit_cube(
        lambda x: x[:, 0],
        1,
        _cfg(evaluations=3 * 4096 + 17, chunk_size=4096, seed=2),
    )
    assert est.evaluations == 3 * 4096 + 17
    assert abs(est.value - 0.5) < 5 * est.std_error


# ============================================================
# Low-discrepancy method
# ============================================================


def test_sobol_beats_plain_mc_on_smooth_integrand():
    f = lambda x: np.exp(-x.sum(axis=1))
    exact = (1.0 - math.exp(-1.0)) ** 3
    plain = integrate_unit_cube(f, 3, _cfg(evaluations=2**16, seed=5))
    sobol = integrate_unit_cube(f, 3, _cfg(evaluations=2**16, seed=5, method=LOW_DISCREPANCY))
    assert sobol.method == LOW_DISCREPANCY
    assert abs(sobol.value - exact) < 5 * max(sobol.std_error, 1e-12)
    assert sobol.std_error < plain.std_error / 4


# ============================================================
# Failure modes
# ============================================================


def test_non_finite_integrand_raises():
    def f(x):
        v = 1.0 / x[:, 0]
        return v  # diverges near the x1 = 0 face

    with pytest.raises(QuadratureError, match="non-finite"):
        integrate_unit_cube(lambda x: np.where(x[:, 0] < 0.5, np.inf, 1.0), 1, _cfg())
    est = integrate_unit_cube(f, 1, _cfg(seed=12))  # finite a.s., no floor needed
    assert est.value > 1.0


def test_denominator_floor_records_discards():
    # Discard the slab x1 < 5e-4 via the floor; well under the cap.
    est = integrate_unit_cube(
        lambda x: 1.0 / np.maximum(x[:, 0], 5e-4),
        1,
        _cfg(seed=21, singularity_floor=5e-4),
        denominator=lambda x: x[:, 0],
    )
    assert 0.0 < est.discarded_fraction < MAX_DISCARD_FRACTION


def test_discard_cap_enforced():
    # Floor of 0.25 on x1 discards a quarter of the cube.
    with pytest.raises(QuadratureError, match="discarded fraction"):
        integrate_unit_cube(
            lambda x: 1.0 / x[:, 0],
            1,
            _cfg(seed=22, singularity_floor=0.25),
            denominator=lambda x: x[:, 0],
        )


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(evaluations=0, seed=1)
    with pytest.raises(ValueError):
        QuadratureConfig(evaluations=100, seed=1, chunk_size=0)
    with pytest.raises(ValueError):
        QuadratureConfig(evaluations=100, seed=1, method="trapezoid")
    with pytest.raises(ValueError):
        QuadratureConfig(evaluations=100, seed=1, singularity_floor=-0.5)
    with pytest.raises(ValueError):
        integrate_unit_cube(lambda x: x[:, 0], 0, _cfg())
