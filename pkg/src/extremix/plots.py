"""Plot coordinate generation: Q-Q, P-P, density and time-series.

Every plot is emitted as a CSV of coordinates; an optional minimal SVG
rendering (plain scatter/line, no styling knobs) can be written next to it.
"""

from __future__ import annotations

import csv

import numpy as np

from .stats import empirical_bins, pp_positions


def qq_points(data, quantile_fn, positions=None) -> tuple[np.ndarray, np.ndarray]:
    """(theoretical quantile at (i - 0.5)/n, i-th order statistic).

    The plotting position is a convention; pass ``positions`` explicitly to
    substitute another one.
    """
    data = np.sort(np.asarray(data, dtype=float))
    n = data.size
    if positions is None:
        positions = (np.arange(1, n + 1) - 0.5) / n
    return np.asarray(quantile_fn(positions), dtype=float), data


def pp_points(data, cdf_fn) -> tuple[np.ndarray, np.ndarray]:
    """(plotting position (i - 0.5)/(n + 1), model CDF at the order statistic)."""
    data = np.sort(np.asarray(data, dtype=float))
    return pp_positions(data.size), np.asarray(cdf_fn(data), dtype=float)


def density_points(data, pdf_fn, k="auto", curve_points: int = 200):
    """Histogram density bars plus the fitted density on an even grid.

    Returns (bin_centers, bin_densities, bin_width, curve_x, curve_y).
    """
    data = np.asarray(data, dtype=float)
    edges, observed = empirical_bins(data, k)
    width = edges[1] - edges[0]
    centers = 0.5 * (edges[:-1] + edges[1:])
    density = observed / (data.size * width)
    curve_x = np.linspace(data.min(), data.max(), curve_points)
    curve_y = np.asarray(pdf_fn(curve_x), dtype=float)
    return centers, density, float(width), curve_x, curve_y


def write_qq_csv(path, theoretical, observed) -> None:
    lo = min(float(np.min(theoretical)), float(np.min(observed)))
    hi = max(float(np.max(theoretical)), float(np.max(observed)))
    _write_series_csv(path, [
        *[("data", x, y) for x, y in zip(theoretical, observed)],
        ("reference", lo, lo),
        ("reference", hi, hi),
    ])


def write_pp_csv(path, positions, probabilities) -> None:
    _write_series_csv(path, [
        *[("data", x, y) for x, y in zip(positions, probabilities)],
        ("reference", 0.0, 0.0),
        ("reference", 1.0, 1.0),
    ])


def write_density_csv(path, centers, density, width, curve_x, curve_y) -> None:
    with open(str(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series", "x", "y", "bin_width"])
        for x, y in zip(centers, density):
            writer.writerow(["histogram", repr(float(x)), repr(float(y)), repr(width)])
        for x, y in zip(curve_x, curve_y):
            writer.writerow(["curve", repr(float(x)), repr(float(y)), ""])


def write_timeseries_csv(path, years, values) -> None:
    with open(str(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "value"])
        for year, value in zip(years, values):
            writer.writerow([int(year), repr(float(value))])


def _write_series_csv(path, rows) -> None:
    with open(str(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series", "x", "y"])
        for series, x, y in rows:
            writer.writerow([series, repr(float(x)), repr(float(y))])


def write_svg(path, scatter=None, lines=None, width: int = 480, height: int = 360, margin: int = 40) -> None:
    """Bare-bones SVG scatter/line plot of the given coordinate arrays.

    ``scatter`` is a list of (x, y) arrays drawn as dots; ``lines`` as
    polylines.  Axes are a plain frame; no ticks, labels or legend.
    """
    scatter = scatter or []
    lines = lines or []
    xs = np.concatenate([np.asarray(p[0], dtype=float) for p in scatter + lines])
    ys = np.concatenate([np.asarray(p[1], dtype=float) for p in scatter + lines])
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def sx(x):
        return margin + (x - x_lo) / x_span * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y_lo) / y_span * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
        f'height="{height - 2 * margin}" fill="none" stroke="black"/>',
    ]
    for lx, ly in lines:
        pts = " ".join(f"{sx(float(x)):.2f},{sy(float(y)):.2f}" for x, y in zip(lx, ly))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="steelblue"/>')
    for px, py in scatter:
        for x, y in zip(px, py):
            parts.append(f'<circle cx="{sx(float(x)):.2f}" cy="{sy(float(y)):.2f}" r="2.5" fill="crimson"/>')
    parts.append("</svg>")
    with open(str(path), "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
