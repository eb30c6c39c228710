"""Iterative coordinate search maximizing the chi-square goodness-of-fit p-value.

One mixture parameter at a time is swept over a grid while all others stay
fixed; the incumbent model moves to the grid argmax whenever that strictly
improves the p-value.  Full cycles over the free parameters repeat with the
grids re-centered on the incumbent and the step halved, until no sweep
improves the p-value by more than ``stop_tol`` or the refinement budget is
exhausted.

Class boundaries and observed counts are computed from the data once and held
fixed across every objective evaluation within a run, so the statistic-to-
p-value map stays continuous as parameters move.  Grid evaluations inside a
sweep are independent of each other; they are executed sequentially and the
argmax tie-break (smallest parameter value) makes results independent of
evaluation order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateBinningError, ParameterError
from .fitting import FitResult
from .mixture import MixtureModel, mixture_cdf
from .stats import BinTable, amalgamate, chi_square_from_table, empirical_bins

logger = logging.getLogger(__name__)

#: mixture parameter name -> (component attribute, parameter field)
PARAM_MAP = {
    "alt_location": ("alt", "location"),
    "base_location": ("base", "location"),
    "alt_scale": ("alt", "scale"),
    "base_scale": ("base", "scale"),
    "alt_shape": ("alt", "shape"),
    "base_shape": ("base", "shape"),
}

_SCALE_PARAMS = frozenset({"alt_scale", "base_scale"})

#: scale values below this are allowed but flagged as near-degenerate
_SPIKE_WARN_SCALE = 0.1


@dataclass(frozen=True)
class GridRange:
    """Inclusive sweep range with a fixed step."""

    lo: float
    hi: float
    step: float

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise ParameterError(f"grid range requires lo < hi, got [{self.lo}, {self.hi}]")
        if not (0 < self.step <= self.hi - self.lo):
            raise ParameterError(f"grid step must lie in (0, hi - lo], got {self.step}")


@dataclass(frozen=True)
class SearchSpec:
    """Which mixture parameters to sweep, over what grids, and when to stop.

    ``grids`` maps each free parameter either to a GridRange or to an explicit
    tuple of values; explicit grids are swept verbatim and are not refined.
    """

    free_params: tuple[str, ...]
    grids: dict
    refine_rounds: int = 3
    stop_tol: float = 1e-6
    scale_floor: float = 0.01

    def __post_init__(self):
        if self.stop_tol <= 0:
            raise ParameterError("stop_tol must be positive")
        if self.scale_floor <= 0:
            raise ParameterError("scale floor must be positive")
        for name in self.free_params:
            if name not in PARAM_MAP:
                raise ParameterError(
                    f"unknown search parameter {name!r}; expected one of {sorted(PARAM_MAP)}"
                )
            if name not in self.grids:
                raise ParameterError(f"no grid given for search parameter {name!r}")
        for name, grid in self.grids.items():
            values = grid if not isinstance(grid, GridRange) else (grid.lo, grid.hi)
            if name in _SCALE_PARAMS:
                floor_breach = [v for v in values if v < self.scale_floor]
                if floor_breach:
                    raise ParameterError(
                        f"{name} grid goes below the scale floor {self.scale_floor}: {floor_breach}"
                    )


@dataclass
class Stage:
    """One parameter sweep: the grid, every p-value seen, and the outcome."""

    param: str
    values: list[float]
    statistics: list[float | None]
    p_values: list[float]
    best_value: float
    best_p: float
    accepted: bool
    incumbent_p: float
    context: dict[str, float]


@dataclass
class SearchTrace:
    initial_p: float
    stages: list[Stage] = field(default_factory=list)

    @property
    def final_p(self) -> float:
        return self.stages[-1].incumbent_p if self.stages else self.initial_p

    def incumbent_history(self) -> list[float]:
        """Incumbent p-value after each stage, starting from the initial model."""
        return [self.initial_p] + [s.incumbent_p for s in self.stages]


class GofObjective:
    """Chi-square p-value of a mixture against class counts fixed from the data.

    Edges and observed counts are computed once; each call re-derives only the
    expected column from the candidate model's CDF.  Degenerate amalgamation
    (fewer than two classes) scores 0 rather than raising.
    """

    def __init__(self, data, k="auto", df_penalty: int = 0):
        data = np.asarray(data, dtype=float)
        self.n = data.size
        self.edges, self.observed = empirical_bins(data, k)
        self.df_penalty = int(df_penalty)

    def result(self, model: MixtureModel):
        cum = np.empty(len(self.edges))
        cum[0] = 0.0
        cum[-1] = 1.0
        cum[1:-1] = mixture_cdf(model, self.edges[1:-1])
        expected = self.n * np.diff(cum)
        table = BinTable(edges=self.edges, observed=self.observed, expected=expected)
        return chi_square_from_table(amalgamate(table), self.df_penalty)

    def __call__(self, model: MixtureModel) -> tuple[float | None, float]:
        try:
            res = self.result(model)
        except DegenerateBinningError:
            logger.warning("amalgamation left a single class; scoring p-value 0")
            return math.inf, 0.0
        return res.statistic, res.p_value


def objective(data, model: MixtureModel) -> float:
    """Chi-square goodness-of-fit p-value of the mixture on fixed data bins."""
    return GofObjective(data)(model)[1]


def _with_param(model: MixtureModel, param: str, value: float) -> MixtureModel:
    try:
        component, fieldname = PARAM_MAP[param]
    except KeyError:
        raise ParameterError(
            f"unknown search parameter {param!r}; expected one of {sorted(PARAM_MAP)}"
        ) from None
    params = getattr(model, component).replace(**{fieldname: float(value)})
    return model.replace(**{component: params})


def _check_grid(model: MixtureModel, param: str, grid, scale_floor: float) -> list[float]:
    values = [float(v) for v in grid]
    if not values:
        raise ParameterError(f"empty grid for {param!r}")
    if param in _SCALE_PARAMS:
        bad = [v for v in values if v < scale_floor]
        if bad:
            raise ParameterError(f"{param} grid value(s) below scale floor {scale_floor}: {bad}")
        if any(v < _SPIKE_WARN_SCALE for v in values):
            logger.warning("%s sweeps below %.2f: near-degenerate spike component", param, _SPIKE_WARN_SCALE)
    for v in values:
        _with_param(model, param, v)  # raises ParameterError on inadmissible values
    return values


def scan_parameter(
    data,
    model: MixtureModel,
    param: str,
    grid,
    incumbent_p: float | None = None,
    stop_tol: float = 0.0,
    evaluator=None,
    scale_floor: float = 0.01,
) -> tuple[Stage, MixtureModel]:
    """Sweep one parameter over ``grid`` holding everything else fixed.

    Returns the stage record and the (possibly updated) model: the argmax is
    adopted only when its p-value exceeds the incoming one by more than
    ``stop_tol``.  Ties on the maximum go to the smallest parameter value.
    The whole grid is validated before any objective evaluation.
    """
    evaluator = evaluator if evaluator is not None else GofObjective(data)
    values = _check_grid(model, param, grid, scale_floor)
    if incumbent_p is None:
        incumbent_p = evaluator(model)[1]

    statistics: list[float | None] = []
    p_values: list[float] = []
    for v in values:
        stat, p = evaluator(_with_param(model, param, v))
        statistics.append(stat)
        p_values.append(p)

    best_p = max(p_values)
    best_value = min(v for v, p in zip(values, p_values) if p == best_p)
    accepted = best_p > incumbent_p + stop_tol
    if accepted:
        model = _with_param(model, param, best_value)
        incumbent_p = best_p
    stage = Stage(
        param=param,
        values=values,
        statistics=statistics,
        p_values=p_values,
        best_value=best_value,
        best_p=best_p,
        accepted=accepted,
        incumbent_p=incumbent_p,
        context=_context(model),
    )
    return stage, model


def _context(model: MixtureModel) -> dict[str, float]:
    return {
        name: getattr(getattr(model, comp), fieldname)
        for name, (comp, fieldname) in PARAM_MAP.items()
    }


def _lattice(center: float, rng: GridRange, scale_floor: float, is_scale: bool) -> list[float]:
    """Grid of step-multiples of ``rng.step`` anchored at ``center``, clipped to the range.

    The anchor itself enters the grid exactly (no rounding) so the incumbent
    re-evaluates to its known p-value; other points are rounded to absorb
    accumulated float noise.
    """
    lo = max(rng.lo, scale_floor) if is_scale else rng.lo
    anchor = min(max(center, lo), rng.hi)
    k_lo = math.ceil((lo - anchor) / rng.step - 1e-9)
    k_hi = math.floor((rng.hi - anchor) / rng.step + 1e-9)
    return [anchor if k == 0 else round(anchor + k * rng.step, 10) for k in range(k_lo, k_hi + 1)]


def _refined(center: float, rng: GridRange, round_idx: int, scale_floor: float, is_scale: bool) -> list[float]:
    """Five-point grid around the incumbent with the step halved each round."""
    step = rng.step / (2.0 ** round_idx)
    lo = max(rng.lo, scale_floor) if is_scale else rng.lo
    values = [center if k == 0 else round(center + k * step, 10) for k in (-2, -1, 0, 1, 2)]
    return [v for v in values if lo <= v <= rng.hi]


def default_grid(param: str, data, base, step: float) -> GridRange:
    """Data-driven sweep range for one mixture parameter.

    Location grids run from the fitted location past the sample maximum;
    scale grids bracket the fitted scale down to 0.1; shape grids cover the
    regular region.
    """
    data = np.asarray(data, dtype=float)
    if param.endswith("_location"):
        lo = base.location
        hi = max(float(data.max()) + base.scale, lo + 10 * step)
        return GridRange(lo, hi, step)
    if param in _SCALE_PARAMS:
        lo = max(0.1, base.scale / 4.0)
        hi = max(2.0 * base.scale, lo + 10 * step)
        return GridRange(lo, hi, step)
    return GridRange(-0.9, 0.9, step)


def default_search_spec(
    data,
    base,
    free_params=("alt_location", "base_scale", "alt_scale"),
    steps=(0.01, 0.05, 0.1),
    **spec_kwargs,
) -> SearchSpec:
    """Sweep alt location, then base scale, then alt scale (by default).

    ``steps`` pairs positionally with ``free_params``.
    """
    if len(steps) != len(free_params):
        raise ParameterError(
            f"got {len(steps)} steps for {len(free_params)} free parameters"
        )
    grids = {p: default_grid(p, data, base, s) for p, s in zip(free_params, steps)}
    return SearchSpec(free_params=tuple(free_params), grids=grids, **spec_kwargs)


def optimize(
    data,
    base_fit: FitResult,
    base_p: float,
    spec: SearchSpec | None = None,
    evaluator=None,
) -> tuple[MixtureModel, SearchTrace]:
    """Coordinate search over the mixture's free parameters.

    Starts from the degenerate mixture (alt component = base component) with
    the weight frozen at ``base_p``, sweeps the free parameters in order, then
    repeats the cycle with refined grids until no sweep improves the p-value
    by more than ``spec.stop_tol`` (or ``spec.refine_rounds`` extra cycles).
    """
    if spec is None:
        spec = default_search_spec(data, base_fit.params)
    if evaluator is None:
        evaluator = GofObjective(data)

    model = MixtureModel(weight=base_p, base=base_fit.params, alt=base_fit.params)
    incumbent_p = evaluator(model)[1]
    trace = SearchTrace(initial_p=incumbent_p)

    for round_idx in range(1 + max(0, int(spec.refine_rounds))):
        improved = False
        for param in spec.free_params:
            grid_spec = spec.grids[param]
            is_scale = param in _SCALE_PARAMS
            center = _context(model)[param]
            if isinstance(grid_spec, GridRange):
                if round_idx == 0:
                    grid = _lattice(center, grid_spec, spec.scale_floor, is_scale)
                else:
                    grid = _refined(center, grid_spec, round_idx, spec.scale_floor, is_scale)
            else:
                grid = list(grid_spec)
            if not grid:
                continue
            before = incumbent_p
            stage, model = scan_parameter(
                data,
                model,
                param,
                grid,
                incumbent_p=incumbent_p,
                stop_tol=0.0,
                evaluator=evaluator,
                scale_floor=spec.scale_floor,
            )
            incumbent_p = stage.incumbent_p
            trace.stages.append(stage)
            if stage.accepted and incumbent_p - before > spec.stop_tol:
                improved = True
        if not improved:
            break
    return model, trace
