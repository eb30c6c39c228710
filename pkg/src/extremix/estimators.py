"""Scikit-learn style estimators wrapping the fitting and search machinery.

Both estimators follow the usual conventions: hyperparameters are stored
verbatim by ``__init__`` (so ``get_params``/``set_params``/``clone`` work),
``fit`` accepts an array-like sample and returns ``self``, and fitted state
lives in trailing-underscore attributes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import distributions as dist
from .distributions import Family, GevParams, SeededRng
from .errors import DataError
from .fitting import FitConfig, fit_mle
from .mixture import MixtureModel, mixture_cdf, mixture_pdf
from .search import GofObjective, default_search_spec, optimize
from .stats import chi_square_gof, ks_test

_N_ESTIMATED = {
    Family.GENERALIZED: 3,
    Family.GUMBEL: 2,
    Family.WEIBULL: 3,
    Family.FRECHET: 3,
}


def check_sample(X) -> np.ndarray:
    """Coerce to a finite 1-D float sample; reject empties, NaN and matrices."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 2 and X.shape[1] == 1:
        X = X.ravel()  # accept sklearn-style column vectors
    if X.ndim != 1:
        raise DataError(f"expected a 1-D sample, got shape {X.shape}")
    if X.size == 0:
        raise DataError("sample is empty")
    if not np.all(np.isfinite(X)):
        raise DataError("sample contains non-finite values")
    return X


class ExtremeValueMLE(BaseEstimator):
    """Maximum-likelihood extremal distribution fit, density-estimator flavoured.

    Parameters
    ----------
    family : str, default "generalized"
        One of generalized/gumbel/weibull/frechet.
    max_iter, tol_f, tol_x, shape_min, shape_max
        Optimizer controls, see FitConfig.

    Attributes
    ----------
    location_, scale_, shape_ : float
    result_ : FitResult with trace, standard errors and convergence record.
    """

    def __init__(
        self,
        family: str = "generalized",
        max_iter: int = 500,
        tol_f: float = 1e-10,
        tol_x: float = 1e-8,
        shape_min: float = -0.99,
        shape_max: float = 0.99,
    ):
        self.family = family
        self.max_iter = max_iter
        self.tol_f = tol_f
        self.tol_x = tol_x
        self.shape_min = shape_min
        self.shape_max = shape_max

    def _config(self) -> FitConfig:
        return FitConfig(
            max_iter=self.max_iter,
            tol_f=self.tol_f,
            tol_x=self.tol_x,
            shape_min=self.shape_min,
            shape_max=self.shape_max,
        )

    def fit(self, X, y=None):
        X = check_sample(X)
        self.result_ = fit_mle(X, self.family, self._config())
        params = self.result_.params
        self.location_ = params.location
        self.scale_ = params.scale
        self.shape_ = params.shape
        self.n_features_in_ = 1
        return self

    def _check_fitted(self) -> GevParams:
        if not hasattr(self, "result_"):
            raise NotFittedError("call fit before using this estimator")
        return self.result_.params

    @property
    def params_(self) -> GevParams:
        return self._check_fitted()

    def score_samples(self, X) -> np.ndarray:
        """Per-point log density."""
        return np.asarray(dist.log_pdf(self._check_fitted(), check_sample(X)))

    def score(self, X, y=None) -> float:
        """Total log-likelihood of X under the fitted parameters."""
        return float(np.sum(self.score_samples(X)))

    def cdf(self, X):
        return dist.cdf(self._check_fitted(), X)

    def pdf(self, X):
        return dist.pdf(self._check_fitted(), X)

    def quantile(self, q):
        return dist.quantile(self._check_fitted(), q)

    def sample(self, n_samples: int = 1, random_state: int | SeededRng = 0) -> np.ndarray:
        rng = random_state if isinstance(random_state, SeededRng) else SeededRng(random_state)
        return dist.sample(self._check_fitted(), n_samples, rng)

    def goodness_of_fit(self, X, alpha: float = 0.05, df_penalty: int | None = None) -> dict:
        """Chi-square (penalised for estimated parameters) and KS test results."""
        X = check_sample(X)
        params = self._check_fitted()
        if df_penalty is None:
            df_penalty = _N_ESTIMATED[Family(self.family)]
        chi = chi_square_gof(X, lambda x: dist.cdf(params, x), df_penalty=df_penalty)
        ks = ks_test(X, lambda x: dist.cdf(params, x), alpha=alpha)
        return {"chi_square": chi, "ks": ks}


class PValueMixtureSearch(BaseEstimator):
    """Two-component mixture found by coordinate sweeps on the GOF p-value.

    Fits a base extremal model, freezes the mixture weight at that fit's
    chi-square p-value, then sweeps the configured mixture parameters to
    maximize the (unpenalised) chi-square p-value.

    Attributes
    ----------
    base_result_ : FitResult of the single-distribution baseline.
    base_p_value_ : float, the frozen mixture weight.
    mixture_ : MixtureModel after the search.
    trace_ : SearchTrace with every sweep.
    p_value_ : float, objective value of the final mixture.
    """

    def __init__(
        self,
        family: str = "generalized",
        free_params: tuple = ("alt_location", "base_scale", "alt_scale"),
        steps: tuple = (0.01, 0.05, 0.1),
        refine_rounds: int = 3,
        stop_tol: float = 1e-6,
        scale_floor: float = 0.01,
        bins="auto",
        max_iter: int = 500,
    ):
        self.family = family
        self.free_params = free_params
        self.steps = steps
        self.refine_rounds = refine_rounds
        self.stop_tol = stop_tol
        self.scale_floor = scale_floor
        self.bins = bins
        self.max_iter = max_iter

    def fit(self, X, y=None):
        X = check_sample(X)
        self.base_result_ = fit_mle(X, self.family, FitConfig(max_iter=self.max_iter))
        params = self.base_result_.params
        baseline = chi_square_gof(
            X,
            lambda x: dist.cdf(params, x),
            df_penalty=_N_ESTIMATED[Family(self.family)],
            k=self.bins,
        )
        self.base_p_value_ = baseline.p_value
        spec = default_search_spec(
            X,
            params,
            free_params=tuple(self.free_params),
            steps=tuple(self.steps),
            refine_rounds=self.refine_rounds,
            stop_tol=self.stop_tol,
            scale_floor=self.scale_floor,
        )
        evaluator = GofObjective(X, k=self.bins)
        self.mixture_, self.trace_ = optimize(
            X, self.base_result_, self.base_p_value_, spec, evaluator=evaluator
        )
        self.p_value_ = self.trace_.final_p
        self.n_features_in_ = 1
        return self

    def _check_fitted(self) -> MixtureModel:
        if not hasattr(self, "mixture_"):
            raise NotFittedError("call fit before using this estimator")
        return self.mixture_

    def cdf(self, X):
        return mixture_cdf(self._check_fitted(), X)

    def pdf(self, X):
        return mixture_pdf(self._check_fitted(), X)

    def score(self, X=None, y=None) -> float:
        """The achieved goodness-of-fit p-value (higher is better)."""
        if X is None:
            if not hasattr(self, "p_value_"):
                raise NotFittedError("call fit before using this estimator")
            return self.p_value_
        model = self._check_fitted()
        return GofObjective(check_sample(X), k=self.bins)(model)[1]
