"""Distribution-distance diagnostics: exactness against scipy and by hand."""

import math

import numpy as np
import pytest
from scipy import stats

from mdstlab.empirics import (
    EMPIRICAL,
    THEORETICAL,
    distance_report,
    kolmogorov_to_normal,
    rate_regression,
    standardize,
    two_sample_ks,
    wasserstein1_to_normal,
)


# ============================================================
# Standardization
# ============================================================


def test_standardize_empirical_moments():
    rng = np.random.default_rng(11)
    v = rng.normal(5.0, 3.0, size=400)
    z = standardize(v)
    assert z.mean() == pytest.approx(0.0, abs=1e-12)
    assert z.std(ddof=1) == pytest.approx(1.0, rel=1e-12)


def test_standardize_theoretical_uses_given_moments():
    v = np.array([1.0, 3.0, 5.0])
    z = standardize(v, THEORETICAL, center=3.0, scale=2.0)
    np.testing.assert_allclose(z, [-1.0, 0.0, 1.0])


def test_standardize_validation():
    with pytest.raises(ValueError, match="at least 2"):
        standardize([1.0])
    with pytest.raises(ValueError, match="zero sample variance"):
        standardize([2.0, 2.0, 2.0])
    with pytest.raises(ValueError, match="center and scale"):
        standardize([1.0, 2.0], THEORETICAL)
    with pytest.raises(ValueError, match="positive"):
        standardize([1.0, 2.0], THEORETICAL, center=0.0, scale=0.0)
    with pytest.raises(ValueError, match="unknown"):
        standardize([1.0, 2.0], "robust")
    with pytest.raises(ValueError, match="finite"):
        standardize([1.0, np.nan])
    with pytest.raises(ValueError, match="shape"):
        standardize([[1.0, 2.0]])


# ============================================================
# Kolmogorov distance
# ============================================================


def test_kolmogorov_matches_scipy_kstest():
    rng = np.random.default_rng(21)
    for n in (1, 2, 7, 100, 1001):
        v = rng.normal(0.1, 1.1, size=n)
        ours = kolmogorov_to_normal(v)
        ref = stats.kstest(v, "norm").statistic
        assert ours == pytest.approx(ref, abs=1e-13), n


def test_kolmogorov_single_point_hand_value():
    # F_n jumps 0 -> 1 at 0, Phi(0) = 1/2, so the distance is 1/2.
    assert kolmogorov_to_normal([0.0]) == pytest.approx(0.5)


def test_kolmogorov_shrinks_for_normal_samples():
    rng = np.random.default_rng(22)
    small = kolmogorov_to_normal(rng.standard_normal(20000))
    assert small < 0.02


# ============================================================
# Wasserstein distance
# ============================================================


def _wasserstein_grid(values, lo=-12.0, hi=12.0, m=2_000_001):
    t = np.linspace(lo, hi, m)
    fn = np.searchsorted(np.sort(values), t, side="right") / len(values)
    return np.trapezoid(np.abs(fn - stats.norm.cdf(t)), t)


def test_wasserstein_matches_dense_grid():
    rng = np.random.default_rng(31)
    for n in (1, 3, 50, 400):
        v = rng.normal(0.3, 1.4, size=n)
        ours = wasserstein1_to_normal(v)
        ref = _wasserstein_grid(v)
        assert ours == pytest.approx(ref, abs=5e-5), n


def test_wasserstein_single_point_hand_value():
    # W1 between a point mass at x and N(0,1) is E|Z - x|; at x = 0 that is
    # sqrt(2/pi).
    assert wasserstein1_to_normal([0.0]) == pytest.approx(math.sqrt(2.0 / math.pi))
    x = 1.7
    expected = 2.0 * (x * stats.norm.cdf(x) + stats.norm.pdf(x)) - x
    assert wasserstein1_to_normal([x]) == pytest.approx(expected)


def test_wasserstein_shift_is_lipschitz():
    rng = np.random.default_rng(32)
    v = rng.standard_normal(300)
    base = wasserstein1_to_normal(v)
    for delta in (0.05, -0.2, 1.0):
        shifted = wasserstein1_to_normal(v + delta)
        assert abs(shifted - base) <= abs(delta) + 1e-12


def test_distances_affine_invariant_under_empirical_standardization():
    rng = np.random.default_rng(33)
    v = rng.gamma(3.0, 2.0, size=250)
    base = distance_report(v)
    moved = distance_report(-4.0 + 2.5 * v)
    assert moved.kolmogorov == pytest.approx(base.kolmogorov, abs=1e-12)
    assert moved.wasserstein1 == pytest.approx(base.wasserstein1, abs=1e-10)


# ============================================================
# Two-sample distance
# ============================================================


def test_two_sample_ks_matches_scipy():
    rng = np.random.default_rng(41)
    for na, nb in ((5, 7), (100, 100), (64, 257)):
        a = rng.normal(size=na)
        b = rng.normal(0.4, 1.3, size=nb)
        ours = two_sample_ks(a, b)
        ref = stats.ks_2samp(a, b, method="asymp").statistic
        assert ours == pytest.approx(ref, abs=1e-13), (na, nb)


def test_two_sample_ks_symmetric_and_permutation_invariant():
    rng = np.random.default_rng(42)
    a = rng.normal(size=40)
    b = rng.normal(size=55)
    d = two_sample_ks(a, b)
    assert two_sample_ks(b, a) == pytest.approx(d)
    assert two_sample_ks(rng.permutation(a), b) == pytest.approx(d)
    assert two_sample_ks(a, a) == 0.0


# ============================================================
# Reports and rate regression
# ============================================================


def test_distance_report_noise_floor():
    rng = np.random.default_rng(51)
    rep = distance_report(rng.standard_normal(200))
    assert rep.replications == 200
    assert rep.noise_floor == pytest.approx(1.36 / math.sqrt(200))
    assert rep.standardization == EMPIRICAL
    assert 0.0 < rep.kolmogorov < 1.0
    assert rep.wasserstein1 > 0.0


def test_rate_regression_recovers_exact_power_law():
    # distance = 3 (log s)^(-1/2) is an exact line in log-log-log coordinates.
    s_grid = [math.e**2, math.e**4, math.e**8, math.e**16]
    pts = [(s, 3.0 * math.log(s) ** -0.5) for s in s_grid]
    fit = rate_regression(pts)
    assert fit.slope == pytest.approx(-0.5, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-12)
    assert fit.residual_rms < 1e-12
    assert fit.points_used == 4


def test_rate_regression_flat_distances_have_zero_slope():
    pts = [(1e2, 0.07), (1e3, 0.07), (1e4, 0.07)]
    fit = rate_regression(pts)
    assert fit.slope == pytest.approx(0.0, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(0.07))


def test_rate_regression_validation():
    with pytest.raises(ValueError, match="at least two"):
        rate_regression([(100.0, 0.1)])
    with pytest.raises(ValueError, match="s > e"):
        rate_regression([(2.0, 0.1), (100.0, 0.05)])
    with pytest.raises(ValueError, match="positive"):
        rate_regression([(100.0, 0.1), (1000.0, 0.0)])
    with pytest.raises(ValueError, match="distinct"):
        rate_regression([(100.0, 0.1), (100.0, 0.2)])
