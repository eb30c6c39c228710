"""Annual-maximum series ingestion and missing-value imputation.

Input format: CSV with header ``year,value``, one record per line, an empty
value field marking a missing year.  A missing value is imputed as the mean
of the two chronologically adjacent values; runs of consecutive missing years
and missing endpoints are rejected because the rule is undefined for them.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class AnnualSeries:
    years: tuple[int, ...]
    values: tuple[float | None, ...]  # None marks a missing year
    source: str = "<memory>"

    def __post_init__(self):
        if len(self.years) != len(self.values):
            raise DataError("years and values differ in length")
        if not self.years:
            raise DataError("series is empty")
        years = self.years
        if any(b <= a for a, b in zip(years, years[1:])):
            raise DataError("years must be strictly increasing with no duplicates")
        if all(v is None for v in self.values):
            raise DataError("series has no observed values")

    def __len__(self) -> int:
        return len(self.years)

    @property
    def missing_years(self) -> tuple[int, ...]:
        return tuple(y for y, v in zip(self.years, self.values) if v is None)

    def to_array(self) -> np.ndarray:
        """Values as a float array; requires a fully observed series."""
        if self.missing_years:
            raise DataError(
                f"series still has missing values for years {list(self.missing_years)}; impute first"
            )
        return np.array(self.values, dtype=float)


def load_csv(path) -> AnnualSeries:
    """Parse a year,value CSV; malformed rows are reported with line numbers."""
    path = str(path)
    years: list[int] = []
    values: list[float | None] = []
    try:
        fh = open(path, newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty") from None
        if [h.strip().lower() for h in header] != ["year", "value"]:
            raise DataError(f"{path}: expected header 'year,value', got {','.join(header)!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue  # blank line
            if len(row) != 2:
                raise DataError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            raw_year, raw_value = row[0].strip(), row[1].strip()
            try:
                year = int(raw_year)
            except ValueError:
                raise DataError(f"{path}:{lineno}: year {raw_year!r} is not an integer") from None
            if raw_value == "":
                value = None
            else:
                try:
                    value = float(raw_value)
                except ValueError:
                    raise DataError(
                        f"{path}:{lineno}: value {raw_value!r} is not a number"
                    ) from None
                if not np.isfinite(value):
                    raise DataError(f"{path}:{lineno}: value must be finite")
            if years and year <= years[-1]:
                raise DataError(
                    f"{path}:{lineno}: year {year} duplicates or precedes year {years[-1]}"
                )
            years.append(year)
            values.append(value)
    return AnnualSeries(years=tuple(years), values=tuple(values), source=path)


def impute_adjacent(series: AnnualSeries) -> AnnualSeries:
    """Replace each missing value with the mean of its two neighbouring years.

    Non-missing values are never altered.  Missing first/last years and runs
    of consecutive missing years are rejected, listing the offending years.
    """
    values = list(series.values)
    n = len(values)
    if not series.missing_years:
        return series
    bad: list[int] = []
    if values[0] is None:
        bad.append(series.years[0])
    if values[-1] is None:
        bad.append(series.years[-1])
    for i in range(1, n):
        if values[i] is None and values[i - 1] is None:
            bad.extend([series.years[i - 1], series.years[i]])
    if bad:
        raise DataError(
            "cannot impute years "
            f"{sorted(set(bad))}: endpoints and consecutive runs have no two adjacent observations"
        )
    for i in range(1, n - 1):
        if values[i] is None:
            values[i] = 0.5 * (values[i - 1] + values[i + 1])
    return AnnualSeries(years=series.years, values=tuple(values), source=series.source)


def write_csv(series: AnnualSeries, path) -> None:
    with open(str(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "value"])
        for year, value in zip(series.years, series.values):
            writer.writerow([year, "" if value is None else repr(float(value))])
