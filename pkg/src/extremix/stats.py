"""Test statistics and supporting numerics.

Chi-square goodness of fit with low-expected-count class amalgamation,
the exact one-sample Kolmogorov-Smirnov statistic, table-driven KS critical
values, summary statistics and plotting positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .errors import DataError, DegenerateBinningError, ParameterError, UnsupportedLevelError

#: expected count below which a class is merged into its neighbour
MIN_EXPECTED = 5.0

#: critical-value coefficients c(alpha) for D_crit = c/sqrt(n)
KS_COEFFICIENTS = {0.05: 0.89}


@dataclass
class BinTable:
    """Histogram classes for the chi-square test.

    ``edges`` holds the k+1 finite class boundaries; expected mass for the
    outer classes is computed as if they extended to -inf/+inf.
    """

    edges: np.ndarray
    observed: np.ndarray
    expected: np.ndarray

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=float)
        self.observed = np.asarray(self.observed, dtype=float)
        self.expected = np.asarray(self.expected, dtype=float)
        k = len(self.observed)
        if len(self.edges) != k + 1 or len(self.expected) != k:
            raise ParameterError("bin table lengths are inconsistent")
        if np.any(np.diff(self.edges) <= 0):
            raise ParameterError("bin edges must be strictly increasing")
        if np.any(self.observed < 0) or np.any(self.expected < 0):
            raise ParameterError("bin counts must be non-negative")

    @property
    def n_bins(self) -> int:
        return len(self.observed)


@dataclass
class ChiSquareResult:
    statistic: float
    df: int
    p_value: float
    bins_after_merge: BinTable


@dataclass
class KsResult:
    statistic: float
    critical_value: float
    alpha: float
    reject: bool


def chi_square_survival(x: float, df: int) -> float:
    """P(chi2_df > x), the regularized upper incomplete gamma Q(df/2, x/2)."""
    if not (isinstance(df, (int, np.integer)) and df >= 1):
        raise ParameterError(f"df must be a positive integer, got {df!r}")
    if x < 0 or not math.isfinite(x):
        raise ParameterError(f"chi-square statistic must be finite and >= 0, got {x}")
    return float(gammaincc(df / 2.0, x / 2.0))


def ks_statistic(data, model_cdf) -> float:
    """sup_x |F_n(x) - F(x)| for the step empirical CDF of ``data``.

    The supremum is attained at a data point from one side or the other, so
    D = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n) is exact.
    """
    data = np.sort(np.asarray(data, dtype=float))
    n = data.size
    if n == 0:
        raise DataError("ks_statistic requires non-empty data")
    f = np.asarray(model_cdf(data), dtype=float)
    i = np.arange(1, n + 1)
    d_plus = i / n - f
    d_minus = f - (i - 1) / n
    return float(max(d_plus.max(), d_minus.max()))


def ks_critical(n: int, alpha: float = 0.05, coefficients: dict | None = None) -> float:
    """Critical value c(alpha)/sqrt(n).

    The default coefficient table carries only c(0.05) = 0.89; pass
    ``coefficients`` to substitute e.g. the asymptotic 1.358.
    """
    if n < 1:
        raise DataError("ks_critical requires n >= 1")
    table = KS_COEFFICIENTS if coefficients is None else coefficients
    try:
        c = table[alpha]
    except KeyError:
        raise UnsupportedLevelError(
            f"no critical-value coefficient for alpha={alpha}; available: {sorted(table)}"
        ) from None
    return float(c) / math.sqrt(n)


def ks_test(data, model_cdf, alpha: float = 0.05, coefficients: dict | None = None) -> KsResult:
    """KS statistic against the table critical value; reject iff D > D_crit."""
    d = ks_statistic(data, model_cdf)
    crit = ks_critical(len(np.atleast_1d(data)), alpha, coefficients)
    return KsResult(statistic=d, critical_value=crit, alpha=alpha, reject=d > crit)


def sturges_bins(n: int) -> int:
    """ceil(1 + log2 n) classes."""
    return int(math.ceil(1.0 + math.log2(n)))


def empirical_bins(data, k="auto") -> tuple[np.ndarray, np.ndarray]:
    """Equal-width class edges over [min(data), max(data)] and observed counts."""
    data = np.asarray(data, dtype=float)
    n = data.size
    if n == 0:
        raise DataError("binning requires non-empty data")
    if k == "auto":
        k = sturges_bins(n)
    k = int(k)
    if k < 2:
        raise DataError(f"need at least 2 classes, got k={k}")
    lo, hi = float(data.min()), float(data.max())
    if not hi > lo:
        raise DataError("cannot bin constant data")
    edges = np.linspace(lo, hi, k + 1)
    observed, _ = np.histogram(data, bins=edges)
    return edges, observed.astype(float)


def build_bins(data, model_cdf, k="auto") -> BinTable:
    """Equal-width classes over [min(data), max(data)] with model-expected mass.

    Expected counts treat the outer edges as extending to -inf/+inf, so the
    expected column always sums to n.  ``k="auto"`` applies Sturges' rule.
    """
    data = np.asarray(data, dtype=float)
    n = data.size
    edges, observed = empirical_bins(data, k)
    k = len(observed)
    cum = np.empty(k + 1)
    cum[0] = 0.0
    cum[-1] = 1.0
    cum[1:-1] = np.asarray(model_cdf(edges[1:-1]), dtype=float)
    expected = n * np.diff(cum)
    return BinTable(edges=edges, observed=observed, expected=expected)


def amalgamate(bins: BinTable) -> BinTable:
    """Merge deficient classes upward; a deficient topmost class merges downward.

    Scanning from the lowest class, any class whose expected count is below
    MIN_EXPECTED is amalgamated with the immediately upper class, repeatedly,
    until the running class reaches the threshold.  If the topmost class ends
    deficient it merges into the class below it.  The result has every
    expected >= MIN_EXPECTED unless only a single class remains.  Observed and
    expected totals are conserved exactly.
    """
    merged_obs: list[float] = []
    merged_exp: list[float] = []
    merged_edges: list[float] = [bins.edges[0]]
    acc_obs = 0.0
    acc_exp = 0.0
    for i in range(bins.n_bins):
        acc_obs += bins.observed[i]
        acc_exp += bins.expected[i]
        if acc_exp >= MIN_EXPECTED:
            merged_obs.append(acc_obs)
            merged_exp.append(acc_exp)
            merged_edges.append(bins.edges[i + 1])
            acc_obs = 0.0
            acc_exp = 0.0
    if acc_exp > 0 or acc_obs > 0 or merged_edges[-1] != bins.edges[-1]:
        # leftover deficient tail
        if merged_obs:
            merged_obs[-1] += acc_obs
            merged_exp[-1] += acc_exp
            merged_edges[-1] = bins.edges[-1]
        else:
            merged_obs = [acc_obs]
            merged_exp = [acc_exp]
            merged_edges = [bins.edges[0], bins.edges[-1]]
    return BinTable(
        edges=np.array(merged_edges),
        observed=np.array(merged_obs),
        expected=np.array(merged_exp),
    )


def chi_square_from_table(bins: BinTable, df_penalty: int = 0) -> ChiSquareResult:
    """Pearson statistic and p-value from an already-amalgamated bin table."""
    if bins.n_bins < 2:
        raise DegenerateBinningError(
            f"only {bins.n_bins} class left after amalgamation; need at least 2"
        )
    statistic = float(np.sum((bins.observed - bins.expected) ** 2 / bins.expected))
    df = max(1, bins.n_bins - 1 - int(df_penalty))
    return ChiSquareResult(
        statistic=statistic,
        df=df,
        p_value=chi_square_survival(statistic, df),
        bins_after_merge=bins,
    )


def chi_square_gof(data, model_cdf, df_penalty: int = 0, k="auto") -> ChiSquareResult:
    """Chi-square goodness of fit of ``model_cdf`` to ``data``.

    Classes come from build_bins + amalgamate; df = classes - 1 - df_penalty
    (floored at 1).  Set df_penalty to the number of parameters estimated from
    the data when testing a fitted model, or 0 when the model is fixed.
    """
    return chi_square_from_table(amalgamate(build_bins(data, model_cdf, k)), df_penalty)


def summary_stats(data) -> dict:
    """min/max/mean/sd with the n-1 denominator for sd."""
    data = np.asarray(data, dtype=float)
    if data.size < 2:
        raise DataError("summary statistics require at least 2 observations")
    return {
        "min": float(data.min()),
        "max": float(data.max()),
        "mean": float(data.mean()),
        "sd": float(data.std(ddof=1)),
    }


def pp_positions(n: int) -> np.ndarray:
    """Probability-plot positions y_i = (i - 0.5)/(n + 1), i = 1..n."""
    if n < 1:
        raise DataError("pp_positions requires n >= 1")
    return (np.arange(1, n + 1) - 0.5) / (n + 1)
