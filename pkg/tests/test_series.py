import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from cointkit.errors import DataError, InsufficientDataError
from cointkit.series import (AnnualSeries, align, change_rate, cumsum, describe, first_diff, lag,
                             trailing_ma)

from conftest import series

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
vectors = st.lists(finite, min_size=2, max_size=60)


class TestAnnualSeries:
    def test_years_and_lookup(self):
        s = series([1.0, 2.0, 3.0], start=1990)
        assert s.end_year == 1992
        assert_array_equal(s.years, [1990, 1991, 1992])
        assert s.at(1991) == 2.0

    def test_values_are_read_only(self):
        s = series([1.0, 2.0])
        with pytest.raises(ValueError):
            s.values[0] = 5.0

    def test_rejects_nonfinite_and_empty(self):
        with pytest.raises(DataError):
            series([1.0, np.nan])
        with pytest.raises(DataError):
            series([])

    def test_window_clips(self):
        s = series(np.arange(10.0), start=2000)
        w = s.window(2003, 2005)
        assert (w.start_year, len(w)) == (2003, 3)
        assert_array_equal(w.values, [3, 4, 5])

    def test_arithmetic_on_common_span(self):
        a = series([1, 2, 3], start=2000)
        b = series([10, 20, 30], start=2001)
        d = b - a
        assert d.start_year == 2001
        assert_array_equal(d.values, [8, 17])


class TestTransforms:
    def test_first_diff_constant_and_ramp(self):
        assert_array_equal(first_diff(series([5, 5, 5])).values, [0, 0])
        d = first_diff(series([1, 2, 4], start=1970))
        assert_array_equal(d.values, [1, 2])
        assert d.start_year == 1971

    def test_first_diff_too_short(self):
        with pytest.raises(InsufficientDataError):
            first_diff(series([1.0]))

    def test_change_rate(self):
        r = change_rate(series([100, 102], start=1990, units="level"))
        assert r.start_year == 1991
        assert_allclose(r.values, [0.02])
        assert_array_equal(change_rate(series([7, 7, 7], units="level")).values, [0, 0])

    def test_change_rate_nonpositive(self):
        with pytest.raises(DataError, match="nonpositive"):
            change_rate(series([1.0, 0.0, 2.0], units="level"))

    def test_lag(self):
        s = series([1, 2, 3], start=1960)
        assert lag(s, 0) is s
        l4 = lag(s, 4)
        assert (l4.start_year, len(l4)) == (1964, 3)
        assert_array_equal(l4.values, s.values)
        with pytest.raises(DataError):
            lag(s, -1)

    def test_lagged_rate_overlap_with_gdpd(self):
        rate = series(np.zeros(48), start=1957)
        gdpd = series(np.zeros(34), start=1971)
        start, mat = align([gdpd, lag(rate, 4)])
        assert start == 1971 and mat.shape == (34, 2)

    def test_trailing_ma(self):
        s = series([0, 3, 6])
        assert trailing_ma(s, 1) is s
        m = trailing_ma(s, 3)
        assert m.start_year == s.start_year + 2
        assert_array_equal(m.values, [3.0])
        with pytest.raises(InsufficientDataError):
            trailing_ma(s, 4)

    def test_cumsum(self):
        assert_array_equal(cumsum(series([1, 1, 1])).values, [1, 2, 3])

    def test_align(self):
        a, b = series(np.arange(48.0), start=1957), series(np.arange(34.0), start=1971)
        start, mat = align([a, b])
        assert start == 1971 and mat.shape == (34, 2)
        with pytest.raises(InsufficientDataError):
            align([series([1, 2], start=1900), series([1, 2], start=2000)])


class TestDescribe:
    def test_constant(self):
        d = describe(series([1, 1, 1, 1]))
        assert d.mean == 1 and d.stdev == 0
        assert d.skewness is None and d.kurtosis is None

    def test_symmetric_two_point(self):
        d = describe(series([-1, 1]))
        assert d.skewness == 0.0
        assert d.stdev == 1.0  # divisor N

    def test_against_scipy(self, rng):
        from scipy import stats
        x = rng.standard_normal(57) ** 3
        d = describe(x)
        assert_allclose(d.stdev, np.std(x))
        assert_allclose(d.skewness, stats.skew(x))
        assert_allclose(d.kurtosis, stats.kurtosis(x, fisher=False))

    def test_large_normal_sample(self):
        x = np.random.default_rng(7).standard_normal(10_000)
        d = describe(x)
        assert abs(d.mean) < 3 / np.sqrt(x.size)
        assert abs(d.kurtosis - 3) < 1


@settings(max_examples=200, deadline=None)
@given(vectors)
def test_cumsum_of_diff_telescopes(v):
    s = series(v)
    back = cumsum(first_diff(s)).values + s.values[0]
    assert_allclose(back, s.values[1:], rtol=1e-12, atol=1e-9)


@settings(max_examples=200, deadline=None)
@given(vectors)
def test_diff_of_cumsum_recovers_tail(v):
    s = series(v)
    assert_allclose(first_diff(cumsum(s)).values, s.values[1:], rtol=1e-12, atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(vectors, st.integers(1, 5), st.data())
def test_trailing_ma_never_reads_the_future(v, k, data):
    if len(v) < k:
        return
    s = series(v)
    i = data.draw(st.integers(0, len(v) - 1))
    bumped = np.array(v)
    bumped[i] += 1.0
    a, b = trailing_ma(s, k), trailing_ma(series(bumped), k)
    changed = a.years[np.abs(a.values - b.values) > 0]
    assert np.all(changed >= s.start_year + i)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0.5, 2.0), min_size=2, max_size=40))
def test_change_rate_compounds_back_to_levels(levels):
    s = series(levels, units="level")
    r = change_rate(s).values
    rebuilt = levels[0] * np.concatenate(([1.0], np.cumprod(1 + r)))
    assert_allclose(rebuilt, levels, rtol=1e-10)


@settings(max_examples=100, deadline=None)
@given(st.lists(finite, min_size=3, max_size=50))
def test_pearson_inequality(v):
    d = describe(np.array(v))
    if d.kurtosis is not None:
        assert d.kurtosis >= 1 + d.skewness ** 2 - 1e-9
