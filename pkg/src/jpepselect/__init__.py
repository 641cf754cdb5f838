"""Bayesian variable selection for Gaussian linear regression.

Computes the exact J-PEP (Jeffreys power-expected-posterior) log Bayes
factor of each covariate subset against the intercept-only model by
one-dimensional log-space quadrature, alongside BIC and Zellner g-prior
baselines; enumerates the model space exhaustively; and ships a seeded
simulation harness with a CLI.
"""

from .baselines import BF_METHODS, METHODS, LogScore, bic_score, log_bf_gprior
from .errors import (
    CapacityError,
    DegenerateDataError,
    DomainError,
    InsufficientDataError,
    InvalidModelError,
    JpepError,
    ParseError,
    SingularDesignError,
    UnderflowError,
)
from .kernel import (
    BfInputs,
    PriorPoint,
    QuadratureGrid,
    default_grid,
    log_bf_jpep,
    log_bf_jpep_asymptotic,
    log_conditional_jpep_density,
    log_integrand,
    log_power_marginal,
    log_quad,
    make_grid,
)
from .modelspace import (
    PosteriorSummary,
    ScoreResult,
    enumerate_models,
    fit_all,
    posterior_probs,
    score_all,
    score_from_fits,
)
from .regression import (
    Dataset,
    ModelFit,
    ModelSpec,
    RankReport,
    build_design,
    fit_rss,
    load_csv,
    rank_check,
)
from .simulate import (
    SimConfig,
    SimRecord,
    cell_stream,
    consistency_scan,
    generate_dataset,
    records_to_csv,
    run_simulation,
    standard_normals,
    summarize_records,
)
from .validate import ValidationCheck, run_validation

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BF_METHODS",
    "METHODS",
    "LogScore",
    "bic_score",
    "log_bf_gprior",
    "JpepError",
    "InvalidModelError",
    "SingularDesignError",
    "InsufficientDataError",
    "DegenerateDataError",
    "DomainError",
    "UnderflowError",
    "CapacityError",
    "ParseError",
    "BfInputs",
    "PriorPoint",
    "QuadratureGrid",
    "default_grid",
    "make_grid",
    "log_integrand",
    "log_quad",
    "log_bf_jpep",
    "log_bf_jpep_asymptotic",
    "log_power_marginal",
    "log_conditional_jpep_density",
    "PosteriorSummary",
    "ScoreResult",
    "enumerate_models",
    "fit_all",
    "score_from_fits",
    "score_all",
    "posterior_probs",
    "Dataset",
    "ModelSpec",
    "ModelFit",
    "RankReport",
    "build_design",
    "fit_rss",
    "rank_check",
    "load_csv",
    "SimConfig",
    "SimRecord",
    "cell_stream",
    "standard_normals",
    "generate_dataset",
    "run_simulation",
    "consistency_scan",
    "records_to_csv",
    "summarize_records",
    "ValidationCheck",
    "run_validation",
]
