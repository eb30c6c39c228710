"""Convex two-component mixture of extreme value distributions.

The mixture CDF is (1 - p)*F_base(x) + p*F_alt(x).  The weight p is a
goodness-of-fit p-value taken from the baseline single-distribution fit and
stays frozen while the component parameters are searched.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .distributions import GevParams, cdf, pdf
from .errors import ParameterError
from .fitting import FitResult


@dataclass(frozen=True)
class MixtureModel:
    """Weight plus the two component parameter sets."""

    weight: float
    base: GevParams
    alt: GevParams

    def __post_init__(self):
        object.__setattr__(self, "weight", float(self.weight))
        if not 0.0 <= self.weight <= 1.0:
            raise ParameterError(f"mixture weight must lie in [0, 1], got {self.weight}")

    def support(self) -> tuple[float, float]:
        """Union of the component supports."""
        lo1, hi1 = self.base.support()
        lo2, hi2 = self.alt.support()
        return (min(lo1, lo2), max(hi1, hi2))

    def replace(self, **changes) -> "MixtureModel":
        return replace(self, **changes)


def mixture_cdf(model: MixtureModel, x):
    """(1 - p)*F_base(x) + p*F_alt(x)."""
    p = model.weight
    out = (1.0 - p) * np.asarray(cdf(model.base, x)) + p * np.asarray(cdf(model.alt, x))
    return out if np.ndim(x) else float(out)


def mixture_pdf(model: MixtureModel, x):
    """(1 - p)*f_base(x) + p*f_alt(x)."""
    p = model.weight
    out = (1.0 - p) * np.asarray(pdf(model.base, x)) + p * np.asarray(pdf(model.alt, x))
    return out if np.ndim(x) else float(out)


def make_mixture(base_fit: FitResult, gof_p: float, alt: GevParams) -> MixtureModel:
    """Mixture weighted by the baseline goodness-of-fit p-value.

    The weight equals ``gof_p`` (the chi-square p-value of the fitted base
    model) and is kept fixed thereafter; only component parameters move
    during optimization.
    """
    if not 0.0 <= gof_p <= 1.0:
        raise ParameterError(f"goodness-of-fit p-value must lie in [0, 1], got {gof_p}")
    return MixtureModel(weight=gof_p, base=base_fit.params, alt=alt)
