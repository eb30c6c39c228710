"""Command-line interface.

Commands: summary, fit, gof, optimize, plot, report, demo.  Global flags
--config/--seed/--out-dir/--alpha come before the command.  Every run writes
a machine-readable JSON report plus a human-readable text rendering into the
output directory; optimize additionally writes the sweep trace as CSV.

Exit codes: 0 success, 2 usage, 3 data/validation, 4 numerical failure.
Errors print a single line ``error: <CODE>: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import distributions as dist
from . import plots, report, tablestub
from .demo import DEFAULT_SEED, synthetic_series
from .distributions import Family
from .errors import DataError, ExtremixError, NumericalError, UsageError
from .fitting import FitConfig, fit_mle
from .search import GofObjective, GridRange, SearchSpec, default_grid, optimize
from .series import impute_adjacent, load_csv, write_csv
from .stats import KS_COEFFICIENTS, chi_square_gof, ks_test, summary_stats

_N_ESTIMATED = {
    Family.GENERALIZED: 3,
    Family.GUMBEL: 2,
    Family.WEIBULL: 3,
    Family.FRECHET: 3,
}

_FIT_KEYS = {"max_iter", "tol_f", "tol_x", "shape_min", "shape_max"}
_SEARCH_KEYS = {"free_params", "refine_rounds", "stop_tol", "scale_floor", "bins"}
_GRID_FIELDS = {"lo", "hi", "step"}
_PARAM_NAMES = {
    "alt_location", "base_location", "alt_scale", "base_scale", "alt_shape", "base_shape",
}
_OTHER_KEYS = {"ks_coefficient"}


def load_config(path: str | None) -> dict:
    """Flat key = value file; '#' starts a comment.  Unknown keys are rejected."""
    if path is None:
        return {}
    import configparser

    parser = configparser.ConfigParser()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}") from exc
    try:
        parser.read_string("[config]\n" + text)
    except configparser.Error as exc:
        raise DataError(f"malformed config {path}: {exc}") from exc
    config = dict(parser["config"])
    for key in config:
        parts = key.split(".")
        known = (
            key in _FIT_KEYS
            or key in _SEARCH_KEYS
            or key in _OTHER_KEYS
            or (len(parts) == 2 and parts[0] in _PARAM_NAMES and parts[1] in _GRID_FIELDS)
        )
        if not known:
            raise DataError(f"unknown config parameter {key!r}")
    return config


def _cfg_float(config: dict, key: str, default: float) -> float:
    try:
        return float(config.get(key, default))
    except ValueError:
        raise DataError(f"config {key} must be a number, got {config[key]!r}") from None


def _cfg_int(config: dict, key: str, default: int) -> int:
    try:
        return int(config.get(key, default))
    except ValueError:
        raise DataError(f"config {key} must be an integer, got {config[key]!r}") from None


def fit_config(config: dict) -> FitConfig:
    return FitConfig(
        max_iter=_cfg_int(config, "max_iter", 500),
        tol_f=_cfg_float(config, "tol_f", 1e-10),
        tol_x=_cfg_float(config, "tol_x", 1e-8),
        shape_min=_cfg_float(config, "shape_min", -0.99),
        shape_max=_cfg_float(config, "shape_max", 0.99),
    )


def search_spec_from_config(config: dict, data, base) -> SearchSpec:
    free = tuple(
        p.strip()
        for p in config.get("free_params", "alt_location,base_scale,alt_scale").split(",")
        if p.strip()
    )
    default_steps = {"alt_location": 0.01, "base_location": 0.01,
                     "base_scale": 0.05, "alt_scale": 0.1,
                     "base_shape": 0.05, "alt_shape": 0.05}
    grids = {}
    for name in free:
        if name not in _PARAM_NAMES:
            raise DataError(f"unknown search parameter {name!r} in config free_params")
        step = _cfg_float(config, f"{name}.step", default_steps[name])
        base_grid = default_grid(name, data, base, step)
        lo = _cfg_float(config, f"{name}.lo", base_grid.lo)
        hi = _cfg_float(config, f"{name}.hi", base_grid.hi)
        grids[name] = GridRange(lo, hi, step)
    return SearchSpec(
        free_params=free,
        grids=grids,
        refine_rounds=_cfg_int(config, "refine_rounds", 3),
        stop_tol=_cfg_float(config, "stop_tol", 1e-6),
        scale_floor=_cfg_float(config, "scale_floor", 0.01),
    )


def _ks_coefficients(config: dict, alpha: float) -> dict:
    table = dict(KS_COEFFICIENTS)
    if "ks_coefficient" in config:
        table[alpha] = _cfg_float(config, "ks_coefficient", 0.89)
    return table


_CONFIG_HELP = """\
config file keys (flat key = value lines, '#' comments) and defaults:
  max_iter = 500            optimizer iteration budget
  tol_f = 1e-10             objective improvement tolerance
  tol_x = 1e-8              parameter step tolerance
  shape_min = -0.99         shape box lower bound
  shape_max = 0.99          shape box upper bound
  bins = auto               chi-square class count ('auto' = Sturges)
  ks_coefficient = 0.89     KS critical-value coefficient for --alpha
  free_params = alt_location,base_scale,alt_scale
  refine_rounds = 3         extra refined sweep cycles
  stop_tol = 1e-6           p-value improvement needed to keep cycling
  scale_floor = 0.01        smallest admissible component scale
  <param>.lo / .hi / .step  per-parameter grid overrides, e.g. alt_scale.step = 0.05
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extremix",
        description="Extremal distribution fitting and p-value-weighted mixture search "
        "for annual-maximum series.",
        epilog=_CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--config", help="flat key=value config file (see README for keys)")
    parser.add_argument("--seed", type=int, default=None, help="seed recorded in provenance and used by demo")
    parser.add_argument("--out-dir", default=".", help="directory for reports and plot files")
    parser.add_argument("--alpha", type=float, default=0.05, help="significance level for the KS decision")
    sub = parser.add_subparsers(dest="command", required=True)

    families = [f.value for f in Family]

    p = sub.add_parser("summary", help="summary statistics of the (imputed) series")
    p.add_argument("input")

    p = sub.add_parser("fit", help="maximum-likelihood fits with GOF comparison")
    p.add_argument("input")
    p.add_argument("--families", default=",".join(families),
                   help="comma-separated subset of " + ",".join(families))

    p = sub.add_parser("gof", help="goodness-of-fit detail for one family")
    p.add_argument("input")
    p.add_argument("--family", default="generalized", choices=families)
    p.add_argument("--bins", default="auto", help="class count or 'auto' (Sturges)")

    p = sub.add_parser("optimize", help="mixture coordinate search maximizing the GOF p-value")
    p.add_argument("input", nargs="?")
    p.add_argument("--family", default="generalized", choices=families)
    p.add_argument("--table-stub", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("plot", help="plot coordinate CSV (and optional SVG)")
    p.add_argument("input")
    p.add_argument("--kind", required=True, choices=["qq", "pp", "density", "timeseries"])
    p.add_argument("--family", default="generalized", choices=families)
    p.add_argument("--svg", action="store_true", help="also render a minimal SVG")

    p = sub.add_parser("report", help="full pipeline: summary, fits, GOF, mixture search")
    p.add_argument("input")
    p.add_argument("--family", default="generalized",
                   choices=families, help="base family for the mixture search")

    p = sub.add_parser("demo", help="write a synthetic stand-in series (labeled synthetic)")
    p.add_argument("--out", default="synthetic.csv")
    p.add_argument("--n", type=int, default=51)
    p.add_argument("--start-year", type=int, default=1948)

    return parser


def _provenance(args, config_path: str | None) -> dict:
    config_hash = None
    if config_path:
        config_hash = hashlib.sha256(Path(config_path).read_bytes()).hexdigest()
    return {
        "input": getattr(args, "input", None),
        "config_hash": config_hash,
        "seed": args.seed,
        "version": __version__,
    }


def _load_values(args) -> tuple:
    if not getattr(args, "input", None):
        raise UsageError("an input CSV is required")
    series = impute_adjacent(load_csv(args.input))
    return series, series.to_array()


def _families(arg: str) -> list[Family]:
    names = [f.strip() for f in arg.split(",") if f.strip()]
    if not names:
        raise UsageError("family list is empty")
    try:
        return [Family(name) for name in names]
    except ValueError:
        raise UsageError(
            f"unknown family in {arg!r}; choose from {[f.value for f in Family]}"
        ) from None


def _write(out_dir: Path, name: str, payload: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(payload, encoding="utf-8")
    return path


def _fit_fragment(values, families, config, alpha, ks_table) -> tuple[dict, dict, dict]:
    cfg = fit_config(config)
    fits, gofs, results = {}, {}, {}
    for family in families:
        fit = fit_mle(values, family, cfg)
        if not fit.converged:
            fit.warnings.append("optimizer did not converge within max_iter")
        cdf = lambda x, p=fit.params: dist.cdf(p, x)
        chi = chi_square_gof(values, cdf, df_penalty=_N_ESTIMATED[family],
                             k=config.get("bins", "auto"))
        ks = ks_test(values, cdf, alpha=alpha, coefficients=ks_table)
        fits[family.value] = report.fit_dict(fit)
        gofs[family.value] = {"chi_square": report.chi_square_dict(chi), "ks": report.ks_dict(ks)}
        results[family.value] = fit
    return fits, gofs, results


def _optimize_fragment(args, values, config) -> tuple[dict, str]:
    if getattr(args, "table_stub", False):
        base_fit = tablestub.reference_fit()
        base_p = tablestub.BASELINE_P
        spec = tablestub.search_spec()
        evaluator = tablestub.TableStubObjective()
        model, trace = optimize(np.empty(0), base_fit, base_p, spec, evaluator=evaluator)
        fits = {base_fit.family.value: report.fit_dict(base_fit)}
    else:
        family = Family(args.family)
        base_fit = fit_mle(values, family, fit_config(config))
        if not base_fit.converged:
            raise NumericalError("base fit did not converge; cannot run the mixture search")
        cdf = lambda x: dist.cdf(base_fit.params, x)
        bins = config.get("bins", "auto")
        base_p = chi_square_gof(values, cdf, df_penalty=_N_ESTIMATED[family], k=bins).p_value
        spec = search_spec_from_config(config, values, base_fit.params)
        evaluator = GofObjective(values, k=bins)
        model, trace = optimize(values, base_fit, base_p, spec, evaluator=evaluator)
        fits = {family.value: report.fit_dict(base_fit)}
    fragment = {
        "fits": fits,
        "base_p_value": base_p,
        "mixture": report.mixture_dict(model, trace),
    }
    return fragment, report.trace_to_csv(trace)


def run(args) -> int:
    config = load_config(args.config)
    out_dir = Path(args.out_dir)
    alpha = args.alpha
    ks_table = _ks_coefficients(config, alpha)

    if args.command == "demo":
        seed = args.seed if args.seed is not None else DEFAULT_SEED
        series = synthetic_series(seed=seed, n=args.n, start_year=args.start_year)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / args.out
        write_csv(series, path)
        print(f"wrote synthetic series ({len(series)} years, seed {seed}) to {path}")
        print("note: values are synthetic stand-ins, not observed temperatures")
        return 0

    doc: dict = {"provenance": _provenance(args, args.config)}

    if args.command == "summary":
        series, values = _load_values(args)
        doc["summary"] = {"n": int(values.size), **summary_stats(values)}

    elif args.command == "fit":
        series, values = _load_values(args)
        doc["summary"] = {"n": int(values.size), **summary_stats(values)}
        fits, gofs, _ = _fit_fragment(values, _families(args.families), config, alpha, ks_table)
        doc["fits"] = fits
        doc["gof"] = gofs

    elif args.command == "gof":
        series, values = _load_values(args)
        config = dict(config)
        config["bins"] = args.bins
        fits, gofs, _ = _fit_fragment(values, [Family(args.family)], config, alpha, ks_table)
        doc["fits"] = fits
        doc["gof"] = gofs

    elif args.command == "optimize":
        values = None
        if not args.table_stub:
            series, values = _load_values(args)
            doc["summary"] = {"n": int(values.size), **summary_stats(values)}
        fragment, trace_csv = _optimize_fragment(args, values, config)
        doc["fits"] = fragment["fits"]
        doc["mixture"] = fragment["mixture"]
        _write(out_dir, "trace.csv", trace_csv)

    elif args.command == "plot":
        series, values = _load_values(args)
        _emit_plot(args, series, values, config, out_dir)
        return 0

    elif args.command == "report":
        series, values = _load_values(args)
        doc["summary"] = {"n": int(values.size), **summary_stats(values)}
        fits, gofs, _ = _fit_fragment(values, list(Family), config, alpha, ks_table)
        doc["fits"] = fits
        doc["gof"] = gofs
        fragment, trace_csv = _optimize_fragment(args, values, config)
        doc["mixture"] = fragment["mixture"]
        _write(out_dir, "trace.csv", trace_csv)

    else:  # pragma: no cover - argparse enforces the choices
        raise UsageError(f"unknown command {args.command!r}")

    json_path = _write(out_dir, f"{args.command}.json", report.to_json(doc))
    _write(out_dir, f"{args.command}.txt", report.render_text(doc))
    print(f"wrote {json_path} and {json_path.with_suffix('.txt')}")
    return 0


def _emit_plot(args, series, values, config, out_dir: Path) -> None:
    kind = args.kind
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"plot_{kind}.csv"
    svg_path = out_dir / f"plot_{kind}.svg"
    if kind == "timeseries":
        plots.write_timeseries_csv(csv_path, series.years, series.to_array())
        if args.svg:
            plots.write_svg(svg_path, lines=[(np.array(series.years, dtype=float), series.to_array())])
        print(f"wrote {csv_path}")
        return
    fit = fit_mle(values, Family(args.family), fit_config(config))
    params = fit.params
    if kind == "qq":
        theo, obs = plots.qq_points(values, lambda u: dist.quantile(params, u))
        plots.write_qq_csv(csv_path, theo, obs)
        if args.svg:
            lo, hi = min(theo.min(), obs.min()), max(theo.max(), obs.max())
            plots.write_svg(svg_path, scatter=[(theo, obs)],
                            lines=[(np.array([lo, hi]), np.array([lo, hi]))])
    elif kind == "pp":
        pos, prob = plots.pp_points(values, lambda x: dist.cdf(params, x))
        plots.write_pp_csv(csv_path, pos, prob)
        if args.svg:
            plots.write_svg(svg_path, scatter=[(pos, prob)],
                            lines=[(np.array([0.0, 1.0]), np.array([0.0, 1.0]))])
    elif kind == "density":
        centers, density, width, cx, cy = plots.density_points(
            values, lambda x: dist.pdf(params, x), k=config.get("bins", "auto"))
        plots.write_density_csv(csv_path, centers, density, width, cx, cy)
        if args.svg:
            plots.write_svg(svg_path, scatter=[(centers, density)], lines=[(cx, cy)])
    print(f"wrote {csv_path}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(args)
    except ExtremixError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: IO: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
