"""Report assembly: structured (JSON) and human-readable renderings, trace CSV.

The JSON form is the machine contract: floats are emitted at full round-trip
precision and non-finite values become null, so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import io
import json
import math

from .distributions import GevParams
from .fitting import FitResult
from .mixture import MixtureModel
from .search import SearchTrace
from .stats import ChiSquareResult, KsResult

_SCALE_STAGE_COLS = {"base_scale": 0, "alt_scale": 1}
_STAGE_LABEL = {
    "alt_location": "Location (mu)",
    "base_location": "Location (mu)",
    "alt_shape": "Shape (xi)",
    "base_shape": "Shape (xi)",
}


def _num(value):
    """Round-trip float for JSON; non-finite becomes None."""
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def params_dict(params: GevParams) -> dict:
    return {
        "location": _num(params.location),
        "scale": _num(params.scale),
        "shape": _num(params.shape),
        "family": str(params.family),
    }


def fit_dict(fit: FitResult) -> dict:
    return {
        "params": params_dict(fit.params),
        "log_lik": _num(fit.log_lik),
        "std_errors": None if fit.std_errors is None else [_num(s) for s in fit.std_errors],
        "iterations": fit.iterations,
        "converged": fit.converged,
        "warnings": list(fit.warnings),
    }


def chi_square_dict(res: ChiSquareResult) -> dict:
    bins = res.bins_after_merge
    return {
        "statistic": _num(res.statistic),
        "df": res.df,
        "p_value": _num(res.p_value),
        "bins": {
            "edges": [_num(e) for e in bins.edges],
            "observed": [_num(o) for o in bins.observed],
            "expected": [_num(e) for e in bins.expected],
        },
    }


def ks_dict(res: KsResult) -> dict:
    return {
        "statistic": _num(res.statistic),
        "critical_value": _num(res.critical_value),
        "alpha": _num(res.alpha),
        "reject": res.reject,
    }


def mixture_dict(model: MixtureModel, trace: SearchTrace | None = None) -> dict:
    out = {
        "weight": _num(model.weight),
        "base": params_dict(model.base),
        "alt": params_dict(model.alt),
        "equation": model_equation(model),
    }
    if trace is not None:
        out["initial_p"] = _num(trace.initial_p)
        out["final_p"] = _num(trace.final_p)
        out["stages"] = [
            {
                "param": s.param,
                "values": [_num(v) for v in s.values],
                "statistics": [_num(v) for v in s.statistics],
                "p_values": [_num(v) for v in s.p_values],
                "best_value": _num(s.best_value),
                "best_p": _num(s.best_p),
                "accepted": s.accepted,
                "incumbent_p": _num(s.incumbent_p),
            }
            for s in trace.stages
        ]
    return out


def _component_equation(params: GevParams) -> str:
    mu, sigma, xi = params.location, params.scale, params.shape
    if xi == 0.0:
        return f"exp[-exp(-(x - {mu:g})/{sigma:g})]"
    return f"exp[-{{1 + ({xi:g})*((x - {mu:g})/{sigma:g})}}^(-1/({xi:g}))]"


def model_equation(model: MixtureModel) -> str:
    """The mixture CDF written out in closed form."""
    p = model.weight
    return (
        f"F(x) = (1 - {p:g}) * {_component_equation(model.base)}"
        f" + {p:g} * {_component_equation(model.alt)}"
    )


def trace_to_csv(trace: SearchTrace) -> str:
    """Per-stage blocks mirroring the coordinate-sweep table layout.

    Location/shape sweeps carry the chi-square statistic column; scale sweeps
    are written as (sigma1, sigma2, P-value) with the non-swept scale frozen
    at its value during the sweep.
    """
    buf = io.StringIO()
    for idx, stage in enumerate(trace.stages, start=1):
        buf.write(f"# stage {idx}: {stage.param}\n")
        if stage.param in _SCALE_STAGE_COLS:
            varying = _SCALE_STAGE_COLS[stage.param]
            other = stage.context["alt_scale" if varying == 0 else "base_scale"]
            buf.write("sigma1,sigma2,P-value\n")
            for value, p in zip(stage.values, stage.p_values):
                cols = [None, None]
                cols[varying] = value
                cols[1 - varying] = other
                buf.write(f"{_fmt(cols[0])},{_fmt(cols[1])},{_fmt(p)}\n")
        else:
            label = _STAGE_LABEL.get(stage.param, stage.param)
            buf.write(f"{label},Chi-square Statistic,p-value\n")
            for value, stat, p in zip(stage.values, stage.statistics, stage.p_values):
                buf.write(f"{_fmt(value)},{_fmt(stat)},{_fmt(p)}\n")
    return buf.getvalue()


def _fmt(value) -> str:
    if value is None:
        return ""
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def render_text(report: dict) -> str:
    """Human-readable report; mirrors the JSON content, not a contract."""
    lines: list[str] = []
    tool = report.get("provenance", {})
    lines.append(f"extremix report (version {tool.get('version', '?')})")
    lines.append(f"input: {tool.get('input') or '-'}")
    if "summary" in report:
        s = report["summary"]
        lines.append("")
        lines.append("summary statistics")
        lines.append(
            f"  n={s['n']}  min={s['min']:.7g}  max={s['max']:.7g}"
            f"  mean={s['mean']:.7g}  sd={s['sd']:.7g}"
        )
    if report.get("fits"):
        lines.append("")
        lines.append("maximum-likelihood fits")
        lines.append("  family       location      scale        shape        log-lik      converged")
        for family, fit in report["fits"].items():
            p = fit["params"]
            loglik = fit["log_lik"]
            loglik_txt = "-" if loglik is None else format(loglik, "<12.7g")
            lines.append(
                f"  {family:<12} {p['location']:<13.7g} {p['scale']:<12.7g} "
                f"{p['shape']:<12.7g} {loglik_txt:<12} {fit['converged']}"
            )
            if fit["std_errors"]:
                se = fit["std_errors"]
                lines.append(
                    f"    std errors: location {se[0]:.5g}, scale {se[1]:.5g}, shape {se[2]:.5g}"
                )
            for w in fit["warnings"]:
                lines.append(f"    warning: {w}")
    if report.get("gof"):
        lines.append("")
        lines.append("goodness of fit")
        for family, gof in report["gof"].items():
            chi = gof["chi_square"]
            ks = gof["ks"]
            lines.append(
                f"  {family}: chi-square {chi['statistic']:.7g} (df={chi['df']}, p={chi['p_value']:.7g})"
                f"; KS D={ks['statistic']:.7g} vs {ks['critical_value']:.7g}"
                f" -> {'reject' if ks['reject'] else 'do not reject'} at alpha={ks['alpha']:g}"
            )
    if report.get("mixture"):
        m = report["mixture"]
        lines.append("")
        lines.append("p-value-weighted mixture")
        lines.append(f"  weight (frozen baseline p): {m['weight']:.7g}")
        if "initial_p" in m:
            lines.append(f"  search p-value: {m['initial_p']:.7g} -> {m['final_p']:.7g}")
            for i, st in enumerate(m["stages"], start=1):
                mark = "accepted" if st["accepted"] else "kept incumbent"
                lines.append(
                    f"    stage {i} ({st['param']}): best {st['best_value']:.7g}"
                    f" at p={st['best_p']:.7g} ({mark})"
                )
        lines.append(f"  {m['equation']}")
    lines.append("")
    return "\n".join(lines)
