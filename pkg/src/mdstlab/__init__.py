"""Minimal directed spanning trees on Poisson samples.

Geometry of dominance-minimal points, the rooted alpha-powered length
statistic, its limit constants, and the simulation/diagnostic tooling used to
confront the two.
"""

from .geometry import (
    ROOT,
    MdstResult,
    build_mdst,
    dominates,
    minimal_points_fast,
    minimal_points_naive,
    norm_decomposition_gap,
    rooted_alpha_length,
)
from .sampling import (
    PointSample,
    derive_seed,
    dickman_cascade,
    sample_binomial_cube,
    sample_dickman,
    sample_poisson_cube,
    stream,
)
from .quadrature import (
    LOW_DISCREPANCY,
    PLAIN_MC,
    QuadratureConfig,
    QuadratureError,
    QuadratureEstimate,
    integrate_unit_cube,
)
from .theory import (
    TheoryConstants,
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
from .empirics import (
    DistanceReport,
    RateRegression,
    StatSampleSet,
    distance_report,
    kolmogorov_to_normal,
    rate_regression,
    standardize,
    two_sample_ks,
    wasserstein1_to_normal,
)
from .experiments import (
    ExperimentConfig,
    ExperimentRecord,
    dickman_comparator,
    load_records,
    run_experiment,
    run_replicate,
    write_records,
)

__version__ = "0.1.0"
