"""The constants in the mean and variance asymptotics, computed two ways.

Run with:  python demos/02_limit_constants.py   (a few seconds)
"""

import math

from mdstlab.quadrature import QuadratureConfig, integrate_unit_cube
from mdstlab.theory import (
    compute_constants,
    mean_asymptotic,
    variance_asymptotic,
    variance_constant_lower_bound,
    zeta_square_integral,
)

# The cube integral of (1 + x1...xd)^-2 has a closed form through the zeta
# function. Check it against brute-force Monte Carlo in a few dimensions
# before trusting anything fancier built on the same machinery.
print("zeta-square integral, closed form vs Monte Carlo:")
for d in (1, 2, 3, 4):
    exact = zeta_square_integral(d)
    est = integrate_unit_cube(
        lambda b: (1.0 + b.prod(axis=1)) ** -2.0, d, QuadratureConfig(seed=d)
    )
    print(f"  d={d}: {exact:.6f} vs {est.value:.6f} +- {est.std_error:.1e}")

# The variance constant w(d, alpha) comes from d-dimensional cube integrals.
# A second, independently derived form integrates out the coordinate products
# analytically and evaluates two- and three-dimensional pieces instead.
# Agreement of the two forms is a strong check on both transcriptions.
constants = compute_constants(3, 1.0, QuadratureConfig(evaluations=2 * 10**6, seed=7))
w = constants.variance_constant
alt = constants.variance_constant_alt
print(f"\nw(3,1) direct form:     {w.value:.4f} +- {w.std_error:.1e}")
print(f"w(3,1) decomposed form: {alt.value:.4f} +- {alt.std_error:.1e}")
print(f"closed-form lower bound: {variance_constant_lower_bound(3, 1.0):.4f}")

# What the constants say about a concrete intensity: at s = e^10 the rooted
# statistic for d=3, alpha=1 has mean about 3 log s and variance about
# (w/2) log s.
s = math.e**10
print(f"\nat s = e^10 = {s:.0f}:")
print(f"  predicted mean     {mean_asymptotic(3, 1.0, s):.2f}")
print(f"  predicted variance {variance_asymptotic(3, 1.0, s, constants):.2f}")
print(f"  (variance coefficient w/2 = {constants.variance_coefficient:.3f})")
