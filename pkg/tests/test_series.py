import numpy as np
import pytest

import extremix as ex
from extremix.demo import synthetic_series


def write(tmp_path, text, name="series.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCsv:
    def test_missing_value_parsed(self, tmp_path):
        path = write(tmp_path, "year,value\n1948,38.9\n1949,\n1950,40.1\n")
        series = ex.load_csv(path)
        assert len(series) == 3
        assert series.values == (38.9, None, 40.1)
        assert series.missing_years == (1949,)

    def test_non_numeric_value_names_line(self, tmp_path):
        path = write(tmp_path, "year,value\n1948,38.9\n1949,oops\n")
        with pytest.raises(ex.DataError, match=":3"):
            ex.load_csv(path)

    def test_51_rows(self, tmp_path):
        rows = "\n".join(f"{1948 + i},{36 + (i % 8) * 0.9:.1f}" for i in range(51))
        series = ex.load_csv(write(tmp_path, "year,value\n" + rows + "\n"))
        assert len(series) == 51

    def test_duplicate_year_rejected(self, tmp_path):
        path = write(tmp_path, "year,value\n1948,38.9\n1948,39.0\n")
        with pytest.raises(ex.DataError, match="duplicates or precedes"):
            ex.load_csv(path)

    def test_non_monotone_years_rejected(self, tmp_path):
        path = write(tmp_path, "year,value\n1950,38.9\n1949,39.0\n")
        with pytest.raises(ex.DataError):
            ex.load_csv(path)

    def test_bad_header_rejected(self, tmp_path):
        path = write(tmp_path, "yr,val\n1948,38.9\n")
        with pytest.raises(ex.DataError, match="header"):
            ex.load_csv(path)

    def test_bad_year_names_line(self, tmp_path):
        path = write(tmp_path, "year,value\n19x8,38.9\n")
        with pytest.raises(ex.DataError, match=":2"):
            ex.load_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ex.DataError):
            ex.load_csv(tmp_path / "absent.csv")

    def test_round_trip(self, tmp_path):
        series = synthetic_series()
        path = tmp_path / "out.csv"
        ex.write_csv(series, path)
        back = ex.load_csv(path)
        assert back.years == series.years
        assert np.allclose(back.to_array(), series.to_array())


class TestImputeAdjacent:
    def test_single_gap(self):
        series = ex.AnnualSeries(years=(1948, 1949, 1950), values=(40.0, None, 41.0))
        out = ex.impute_adjacent(series)
        assert out.values == (40.0, 40.5, 41.0)

    def test_identity_when_complete(self):
        series = ex.AnnualSeries(years=(1948, 1949), values=(40.0, 41.0))
        assert ex.impute_adjacent(series) is series

    def test_consecutive_missing_rejected(self):
        series = ex.AnnualSeries(
            years=(1948, 1949, 1950, 1951), values=(40.0, None, None, 41.0)
        )
        with pytest.raises(ex.DataError, match="1949"):
            ex.impute_adjacent(series)

    def test_missing_endpoint_rejected(self):
        series = ex.AnnualSeries(years=(1948, 1949, 1950), values=(None, 40.0, 41.0))
        with pytest.raises(ex.DataError, match="1948"):
            ex.impute_adjacent(series)

    def test_never_touches_observed_values(self):
        series = ex.AnnualSeries(
            years=tuple(range(1948, 1958)),
            values=(40.0, 39.0, None, 41.0, 40.5, None, 42.0, 41.5, 40.9, 39.8),
        )
        out = ex.impute_adjacent(series)
        for year, before, after in zip(series.years, series.values, out.values):
            if before is not None:
                assert after == before
        assert out.missing_years == ()

    def test_two_gaps(self):
        series = ex.AnnualSeries(
            years=(1, 2, 3, 4, 5), values=(1.0, None, 3.0, None, 5.0)
        )
        out = ex.impute_adjacent(series)
        assert out.values == (1.0, 2.0, 3.0, 4.0, 5.0)


class TestAnnualSeries:
    def test_to_array_requires_complete(self):
        series = ex.AnnualSeries(years=(1, 2, 3), values=(1.0, None, 3.0))
        with pytest.raises(ex.DataError, match="impute"):
            series.to_array()

    def test_all_missing_rejected(self):
        with pytest.raises(ex.DataError):
            ex.AnnualSeries(years=(1, 2), values=(None, None))


class TestSyntheticSeries:
    def test_matches_reference_summary(self):
        series = synthetic_series()
        values = series.to_array()
        stats = ex.summary_stats(values)
        assert stats["min"] == pytest.approx(36.1, abs=1e-9)
        assert stats["max"] == pytest.approx(43.8, abs=1e-9)
        assert stats["mean"] == pytest.approx(40.058, abs=0.05)
        assert stats["sd"] == pytest.approx(2.1892, abs=0.05)
        assert series.years == tuple(range(1948, 1999))

    def test_deterministic(self):
        a = synthetic_series().to_array()
        b = synthetic_series().to_array()
        assert np.array_equal(a, b)

    def test_missing_years_blanked(self):
        series = synthetic_series(missing_years=(1950, 1960))
        assert series.missing_years == (1950, 1960)
        imputed = ex.impute_adjacent(series)
        assert imputed.missing_years == ()
