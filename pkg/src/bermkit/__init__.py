"""bermkit: bootstrap-enhanced regularized regression and its benchmark rig.

The package implements a two-step estimator for sparse linear models —
bootstrap percentile intervals screen variables for relevance, then a
weighted elastic net refits with irrelevant variables excluded — alongside
lasso / elastic-net / adaptive baselines, simulation generators for
correlated non-normal predictors, selection metrics, and a deterministic
command-line harness that writes CSV reports.
"""

from .data import (
    Dataset,
    FitResult,
    StandardizedDesign,
    destandardize,
    predict,
    r_squared,
    raw_coefficients,
    standardize,
)
from .selection import (
    BASELINE_METHODS,
    BootstrapSummary,
    baseline_fit,
    berm_fit,
    bootstrap_coefficients,
    relevance_from_ci,
)

__version__ = "0.1.0"

__all__ = [
    "BASELINE_METHODS",
    "BootstrapSummary",
    "Dataset",
    "FitResult",
    "StandardizedDesign",
    "baseline_fit",
    "berm_fit",
    "bootstrap_coefficients",
    "destandardize",
    "predict",
    "r_squared",
    "raw_coefficients",
    "relevance_from_ci",
    "standardize",
    "__version__",
]
