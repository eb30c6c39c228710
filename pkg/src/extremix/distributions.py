"""Generalized extreme value distribution and its three extremal special cases.

Everything uses the standard parameterization

    F(x) = exp{ -[1 + xi*(x - mu)/sigma]^(-1/xi) },   1 + xi*(x - mu)/sigma > 0

with location mu, scale sigma > 0 and shape xi, and the Gumbel limit
F(x) = exp{-exp(-(x - mu)/sigma)} as xi -> 0.  xi < 0 gives the bounded
(Weibull) type with upper endpoint mu - sigma/xi, xi > 0 the heavy-tailed
(Frechet) type with lower endpoint mu - sigma/xi.

The CDF clamps to exactly 0/1 at and beyond the support endpoints instead of
raising, because mixture and goodness-of-fit code evaluate it on arbitrary
grids.  Shapes within GUMBEL_SHAPE_TOL of zero are routed through the Gumbel
closed form to avoid catastrophic cancellation.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DataError, ParameterError

#: |shape| at or below this is treated as exactly zero (Gumbel closed form)
GUMBEL_SHAPE_TOL = 1e-7


class Family(str, Enum):
    """The GEV family and its three sign-constrained extremal types."""

    GENERALIZED = "generalized"
    GUMBEL = "gumbel"
    WEIBULL = "weibull"
    FRECHET = "frechet"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class GevParams:
    """Location/scale/shape triple with a family tag.

    The family constrains the shape: gumbel pins it to 0 exactly, weibull
    requires shape < 0, frechet requires shape > 0.
    """

    location: float
    scale: float
    shape: float = 0.0
    family: Family = Family.GENERALIZED

    def __post_init__(self):
        object.__setattr__(self, "location", float(self.location))
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "shape", float(self.shape))
        object.__setattr__(self, "family", Family(self.family))
        if not math.isfinite(self.location):
            raise ParameterError(f"location must be finite, got {self.location}")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ParameterError(f"scale must be a positive real, got {self.scale}")
        if not math.isfinite(self.shape):
            raise ParameterError(f"shape must be finite, got {self.shape}")
        if self.family is Family.GUMBEL and self.shape != 0.0:
            raise ParameterError("gumbel family requires shape == 0")
        if self.family is Family.WEIBULL and self.shape >= 0:
            raise ParameterError("weibull family requires shape < 0")
        if self.family is Family.FRECHET and self.shape <= 0:
            raise ParameterError("frechet family requires shape > 0")

    def support(self) -> tuple[float, float]:
        """(lower, upper) support bounds; infinite where unbounded."""
        return _support(self.shape, self.location, self.scale)

    def replace(self, **changes) -> "GevParams":
        return dataclasses.replace(self, **changes)


class SeededRng:
    """Deterministic uniform stream for inverse-transform sampling.

    Wraps numpy's PCG64 bit generator; for a given seed the uniform stream
    equals ``np.random.Generator(np.random.PCG64(seed)).random(n)``, which
    numpy documents as stable.  Identical seeds yield identical streams.
    Single-owner mutable state: do not share one instance across threads.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        if self.seed < 0 or self.seed >= 2**64:
            raise ParameterError("seed must fit in an unsigned 64-bit integer")
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, n: int) -> np.ndarray:
        """Next n uniforms from the stream, each in [0, 1)."""
        return self._gen.random(int(n))

    def __repr__(self) -> str:
        return f"SeededRng(seed={self.seed})"


def _support(shape: float, location: float, scale: float) -> tuple[float, float]:
    if abs(shape) <= GUMBEL_SHAPE_TOL:
        return (-math.inf, math.inf)
    endpoint = location - scale / shape
    if shape > 0:
        return (endpoint, math.inf)
    return (-math.inf, endpoint)


def _cdf_raw(x, location: float, scale: float, shape: float):
    """Vectorized CDF from raw parameter floats (no family validation)."""
    x = np.asarray(x, dtype=float)
    z = (x - location) / scale
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if abs(shape) <= GUMBEL_SHAPE_TOL:
            return np.exp(-np.exp(-z))
        s = 1.0 + shape * z
        # log1p keeps small-shape evaluations accurate near the Gumbel limit
        inner = np.exp(-np.exp(-np.log1p(shape * z) / shape))
        return np.where(s > 0, inner, 1.0 if shape < 0 else 0.0)


def _logpdf_raw(x, location: float, scale: float, shape: float):
    """Vectorized log density; -inf outside the support."""
    x = np.asarray(x, dtype=float)
    z = (x - location) / scale
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if abs(shape) <= GUMBEL_SHAPE_TOL:
            return -math.log(scale) - z - np.exp(-z)
        s = 1.0 + shape * z
        logs = np.log1p(shape * z)
        t = np.exp(-logs / shape)  # [1 + xi*z]^(-1/xi)
        val = -math.log(scale) - (1.0 / shape + 1.0) * logs - t
        return np.where(s > 0, val, -np.inf)


def cdf(params: GevParams, x):
    """P(X <= x) under ``params``; clamps to 0/1 outside the support.

    Accepts a scalar or array; returns the matching shape.
    """
    out = _cdf_raw(x, params.location, params.scale, params.shape)
    return out if np.ndim(x) else float(out)


def pdf(params: GevParams, x):
    """Density at x; exactly 0 outside the support."""
    out = np.exp(_logpdf_raw(x, params.location, params.scale, params.shape))
    return out if np.ndim(x) else float(out)


def log_pdf(params: GevParams, x):
    """Log density at x; -inf outside the support."""
    out = _logpdf_raw(x, params.location, params.scale, params.shape)
    return out if np.ndim(x) else float(out)


def quantile(params: GevParams, u):
    """Inverse CDF at probability u in the open interval (0, 1).

    Satisfies cdf(params, quantile(params, u)) == u to 1e-10.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr <= 0.0) | (u_arr >= 1.0)):
        raise ParameterError("quantile probability must lie strictly inside (0, 1)")
    w = -np.log(u_arr)  # exponent of the standard Gumbel transform
    shape = params.shape
    if abs(shape) <= GUMBEL_SHAPE_TOL:
        out = params.location - params.scale * np.log(w)
    else:
        # ((-log u)^(-xi) - 1)/xi via expm1 for small-shape accuracy
        out = params.location + params.scale * np.expm1(-shape * np.log(w)) / shape
    return out if np.ndim(u) else float(out)


def log_likelihood(params: GevParams, data) -> float:
    """Sum of log densities; -inf if any point falls outside the support."""
    data = np.asarray(data, dtype=float)
    if data.size == 0:
        raise DataError("log_likelihood requires non-empty data")
    return float(np.sum(_logpdf_raw(data, params.location, params.scale, params.shape)))


def sample(params: GevParams, n: int, rng: SeededRng) -> np.ndarray:
    """n inverse-transform draws: quantile(params, u_i) for uniforms u_i.

    Deterministic given the rng seed and call order.
    """
    n = int(n)
    if n < 1:
        raise DataError("sample size must be at least 1")
    u = rng.uniform(n)
    # Generator.random can emit exactly 0.0; nudge into the open interval
    u = np.clip(u, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
    return np.asarray(quantile(params, u), dtype=float)
