"""Design-based estimation and inference for randomized experiments.

A finite-population toolkit: the potential-outcome table is fixed, the
only randomness is which units are treated, and every estimator and
standard error here is built for that sampling design. Includes exact
enumeration oracles, the closed-form assignment moments they check, and
a deterministic Monte Carlo engine for benchmarking.
"""

from .errors import (
    ConfigError,
    DegenerateObjective,
    DesignBenchError,
    InvalidDesign,
    LeverageOne,
    MissingValue,
    NonBinaryTreatment,
    ParseError,
    SingularGram,
    TooLarge,
    Unsupported,
)
from .estimators import (
    ESTIMATORS,
    PointEstimate,
    adjusted,
    bias_corrected,
    cross_fitted,
    diff_in_means,
    estimate,
    unbiased,
)
from .linalg import (
    GramFactor,
    HatDiagnostics,
    OlsFit,
    design_matrix,
    hat_diagnostics,
    hat_entry,
    loo_coefficients,
    loo_residual,
    loo_residuals,
    ols_fit,
)
from .moments import (
    SUPPORTED_PATTERNS,
    closed_form_moment,
    enumerated_moment,
    expanded_moment,
)
from .population import (
    FinitePopulation,
    ObservedSample,
    PopulationDiagnostics,
    diagnostics,
    enumerate_assignments,
    population_residuals,
    sample_assignment,
)
from .simulation import SimConfig, SimResult, build_dgp, run_monte_carlo, worst_case_errors
from .stratified import StratifiedSample, stratified_cross_fitted, stratified_variance
from .theory import (
    TheoreticalVariance,
    bias_terms,
    linear_terms,
    linear_variance,
    quad_mix,
    quadratic_total,
    quadratic_variance,
    theoretical_variance,
)
from .variance import (
    SE_METHODS,
    VarianceReport,
    confidence_interval,
    dbhc3,
    hc0,
    hc2,
    hc3,
    standard_error,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
