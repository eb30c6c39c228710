"""Extremal distribution fitting and p-value-weighted mixture search.

The package fits the generalized extreme value family (and its Gumbel,
Weibull and Frechet special cases) to annual-maximum series by maximum
likelihood, tests fit quality with chi-square and Kolmogorov-Smirnov
machinery, and builds a two-component convex mixture whose weight is the
baseline goodness-of-fit p-value, optimized by coordinate sweeps that
maximize the chi-square p-value.
"""

__version__ = "0.1.0"

from .distributions import (
    Family,
    GevParams,
    SeededRng,
    cdf,
    log_likelihood,
    log_pdf,
    pdf,
    quantile,
    sample,
)
from .errors import (
    DataError,
    DegenerateBinningError,
    ExtremixError,
    NumericalError,
    ParameterError,
    UnsupportedLevelError,
    UsageError,
)
from .estimators import ExtremeValueMLE, PValueMixtureSearch, check_sample
from .fitting import FitConfig, FitResult, fit_mle, initial_params, numerical_hessian, std_errors
from .mixture import MixtureModel, make_mixture, mixture_cdf, mixture_pdf
from .search import (
    GofObjective,
    GridRange,
    SearchSpec,
    SearchTrace,
    Stage,
    default_search_spec,
    objective,
    optimize,
    scan_parameter,
)
from .series import AnnualSeries, impute_adjacent, load_csv, write_csv
from .stats import (
    BinTable,
    ChiSquareResult,
    KsResult,
    amalgamate,
    build_bins,
    chi_square_gof,
    chi_square_survival,
    ks_critical,
    ks_statistic,
    ks_test,
    pp_positions,
    summary_stats,
)

__all__ = [
    "__version__",
    "Family", "GevParams", "SeededRng",
    "cdf", "pdf", "log_pdf", "quantile", "log_likelihood", "sample",
    "ExtremixError", "UsageError", "ParameterError", "DataError",
    "NumericalError", "DegenerateBinningError", "UnsupportedLevelError",
    "ExtremeValueMLE", "PValueMixtureSearch", "check_sample",
    "FitConfig", "FitResult", "fit_mle", "initial_params", "std_errors", "numerical_hessian",
    "MixtureModel", "make_mixture", "mixture_cdf", "mixture_pdf",
    "GofObjective", "GridRange", "SearchSpec", "SearchTrace", "Stage",
    "default_search_spec", "objective", "optimize", "scan_parameter",
    "AnnualSeries", "load_csv", "impute_adjacent", "write_csv",
    "BinTable", "ChiSquareResult", "KsResult",
    "amalgamate", "build_bins", "chi_square_gof", "chi_square_survival",
    "ks_critical", "ks_statistic", "ks_test", "pp_positions", "summary_stats",
]
