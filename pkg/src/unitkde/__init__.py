"""Kernel density estimation on the unit interval.

Beta-kernel estimators with boundary correction, a closed-form
reference-rule bandwidth selector with a shape-aware fallback, Gaussian
logit-transform and reflection baselines, LSCV and oracle bandwidths,
scoring metrics, reference distributions, and a reproducible experiment
harness with a CLI (`unitkde`).
"""

from .bandwidth import (
    BandwidthSelection,
    BetaParams,
    MomentSummary,
    MomInfeasible,
    beta_central_moments,
    h_ref,
    heuristic_scaling,
    i1_closed,
    i2_closed,
    lscv_optimize,
    mom_estimate,
    oracle_bandwidth,
    select_bandwidth,
    silverman_bandwidth,
)
from .distributions import Beta, DistributionSpec, Mixture, TruncNormal
from .errors import (
    ConfigurationError,
    DegenerateSampleError,
    DivergenceError,
    DomainError,
    InsufficientDataError,
    IntegrationError,
    MethodUnavailableError,
    NumericalError,
    OptimizationError,
    UnitKdeError,
)
from .harness import (
    ALL_METHODS,
    PRACTICAL_METHODS,
    ExperimentConfig,
    LabeledDistribution,
    RealDataConfig,
    TrialRecord,
    load_column,
    load_config,
    run_experiment1,
    run_experiment2,
    run_method,
)
from .kernels import (
    BETA_F1,
    BETA_F2,
    GAUSS_LOGIT,
    GAUSS_REFLECT,
    DensityModel,
    Sample,
    evaluate,
    evaluate_f1,
    evaluate_f2,
    evaluate_logit,
    evaluate_reflection,
    kernel_shape_params,
    make_model,
    normalize,
    rho,
    total_mass,
)
from .metrics import (
    ScoreReport,
    heldout_log_likelihood,
    heldout_mean_density,
    ise,
    lscv_score,
    mass_error,
    paired_t_test,
    wilcoxon_signed_rank,
)
from .quadrature import QuadratureRule, integrate_split, integrate_unit, make_rule
from .special import beta_log_pdf, log_beta, log_gamma

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # kernels
    "BETA_F1",
    "BETA_F2",
    "GAUSS_LOGIT",
    "GAUSS_REFLECT",
    "Sample",
    "DensityModel",
    "make_model",
    "rho",
    "kernel_shape_params",
    "evaluate",
    "evaluate_f1",
    "evaluate_f2",
    "evaluate_logit",
    "evaluate_reflection",
    "total_mass",
    "normalize",
    # bandwidth
    "BetaParams",
    "MomentSummary",
    "MomInfeasible",
    "BandwidthSelection",
    "mom_estimate",
    "i1_closed",
    "i2_closed",
    "h_ref",
    "beta_central_moments",
    "heuristic_scaling",
    "select_bandwidth",
    "silverman_bandwidth",
    "oracle_bandwidth",
    "lscv_optimize",
    # distributions
    "DistributionSpec",
    "Beta",
    "TruncNormal",
    "Mixture",
    # metrics
    "ScoreReport",
    "ise",
    "lscv_score",
    "heldout_mean_density",
    "heldout_log_likelihood",
    "mass_error",
    "wilcoxon_signed_rank",
    "paired_t_test",
    # quadrature
    "QuadratureRule",
    "make_rule",
    "integrate_unit",
    "integrate_split",
    # special functions
    "log_gamma",
    "log_beta",
    "beta_log_pdf",
    # harness
    "ALL_METHODS",
    "PRACTICAL_METHODS",
    "LabeledDistribution",
    "ExperimentConfig",
    "RealDataConfig",
    "TrialRecord",
    "run_method",
    "run_experiment1",
    "run_experiment2",
    "load_column",
    "load_config",
    # errors
    "UnitKdeError",
    "DomainError",
    "ConfigurationError",
    "DegenerateSampleError",
    "InsufficientDataError",
    "IntegrationError",
    "NumericalError",
    "DivergenceError",
    "OptimizationError",
    "MethodUnavailableError",
]
