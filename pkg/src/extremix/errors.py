"""Exception hierarchy shared across the package.

Library errors subclass ValueError so callers that catch ValueError keep
working; the CLI maps each class to a stable exit code and error tag.
"""


class ExtremixError(ValueError):
    """Base class for all extremix errors."""

    #: machine-parseable tag used by the CLI error line
    code = "ERROR"
    #: process exit code (2 usage, 3 data/validation, 4 numerical)
    exit_code = 3


class UsageError(ExtremixError):
    """Bad command invocation: unknown option, missing argument, empty family list."""

    code = "USAGE"
    exit_code = 2


class ParameterError(ExtremixError):
    """Distribution or model parameters outside their domain (scale <= 0, weight outside [0,1], ...)."""

    code = "PARAMS"
    exit_code = 3


class DataError(ExtremixError):
    """Input data rejected: parse failures, duplicate years, imputation breaches, too few points."""

    code = "DATA"
    exit_code = 3


class NumericalError(ExtremixError):
    """Numerical failure: degenerate binning, non-convergent fit where a result is required."""

    code = "NUMERIC"
    exit_code = 4


class DegenerateBinningError(NumericalError):
    """Fewer than two classes survive amalgamation."""


class UnsupportedLevelError(ParameterError):
    """Significance level missing from the critical-value coefficient table."""
