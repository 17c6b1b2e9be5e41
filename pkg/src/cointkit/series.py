"""Year-indexed annual series and the elementary transforms on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DataError, InsufficientDataError


@dataclass(frozen=True, eq=False)
class AnnualSeries:
    """An immutable, contiguous, year-indexed sequence of reals.

    Element ``i`` belongs to calendar year ``start_year + i``. Rates are stored
    as fractions (0.053, not 5.3).
    """

    name: str
    start_year: int
    values: np.ndarray
    units: str = "rate"

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).ravel()
        if vals.size < 1:
            raise DataError(f"series {self.name!r} is empty")
        if not np.all(np.isfinite(vals)):
            raise DataError(f"series {self.name!r} contains non-finite values")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "start_year", int(self.start_year))

    def __len__(self) -> int:
        return self.values.size

    def __repr__(self) -> str:
        return (f"AnnualSeries({self.name!r}, {self.start_year}-{self.end_year}, "
                f"n={len(self)}, units={self.units!r})")

    @property
    def end_year(self) -> int:
        return self.start_year + len(self) - 1

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.start_year, self.end_year + 1)

    def at(self, year: int) -> float:
        i = year - self.start_year
        if not 0 <= i < len(self):
            raise KeyError(year)
        return float(self.values[i])

    def window(self, first: Optional[int] = None, last: Optional[int] = None) -> "AnnualSeries":
        """Restrict to ``[first, last]`` (inclusive), clipped to the available span."""
        lo = self.start_year if first is None else max(first, self.start_year)
        hi = self.end_year if last is None else min(last, self.end_year)
        if lo > hi:
            raise InsufficientDataError(
                f"{self.name!r} has no observations in {first}-{last}")
        i = lo - self.start_year
        return AnnualSeries(self.name, lo, self.values[i:i + hi - lo + 1], self.units)

    def renamed(self, name: str) -> "AnnualSeries":
        return AnnualSeries(name, self.start_year, self.values, self.units)

    def equals(self, other: "AnnualSeries") -> bool:
        return (self.start_year == other.start_year
                and np.array_equal(self.values, other.values))

    # arithmetic on the common span keeps predictor construction terse
    def _binary(self, other, op, symbol):
        if isinstance(other, AnnualSeries):
            start, mat = align([self, other])
            return AnnualSeries(f"({self.name}{symbol}{other.name})", start,
                                op(mat[:, 0], mat[:, 1]), self.units)
        return AnnualSeries(self.name, self.start_year, op(self.values, float(other)), self.units)

    def __add__(self, other):
        return self._binary(other, np.add, "+")

    def __sub__(self, other):
        return self._binary(other, np.subtract, "-")

    def __mul__(self, other):
        return self._binary(other, np.multiply, "*")

    __radd__ = __add__
    __rmul__ = __mul__


@dataclass(frozen=True)
class DescriptiveStats:
    """Moments with divisor N; ``kurtosis`` is raw (3 for a normal).

    ``skewness`` and ``kurtosis`` are ``None`` for a zero-variance sample.
    """

    n: int
    mean: float
    stdev: float
    skewness: Optional[float] = field(default=None)
    kurtosis: Optional[float] = field(default=None)


def first_diff(s: AnnualSeries) -> AnnualSeries:
    if len(s) < 2:
        raise InsufficientDataError(f"first_diff needs at least 2 values, {s.name!r} has {len(s)}")
    units = s.units if s.units.startswith("difference") else f"difference of {s.units}"
    return AnnualSeries(f"d{s.name}", s.start_year + 1, np.diff(s.values), units)


def change_rate(level: AnnualSeries) -> AnnualSeries:
    """(L(t) - L(t-1)) / L(t-1), dated at year t."""
    if len(level) < 2:
        raise InsufficientDataError(f"change_rate needs at least 2 levels, {level.name!r} has {len(level)}")
    v = level.values
    if np.any(v <= 0):
        bad = level.start_year + int(np.argmax(v <= 0))
        raise DataError(f"nonpositive level in {level.name!r} at {bad}")
    return AnnualSeries(f"d{level.name}/{level.name}", level.start_year + 1,
                        np.diff(v) / v[:-1], "rate")


def lag(s: AnnualSeries, k: int) -> AnnualSeries:
    """Re-date each value from year y to y + k, so ``lag(x, 4)`` at t holds x(t-4)."""
    if k < 0:
        raise DataError("lag must be nonnegative")
    if k == 0:
        return s
    return AnnualSeries(f"{s.name}(t-{k})", s.start_year + k, s.values, s.units)


def trailing_ma(s: AnnualSeries, k: int) -> AnnualSeries:
    """Mean of the ``k`` most recent values up to and including year t."""
    if k < 1:
        raise DataError("moving-average window must be positive")
    if len(s) < k:
        raise InsufficientDataError(f"{s.name!r} ({len(s)} values) is shorter than window {k}")
    if k == 1:
        return s
    c = np.concatenate(([0.0], np.cumsum(s.values)))
    return AnnualSeries(f"MA{k}({s.name})", s.start_year + k - 1, (c[k:] - c[:-k]) / k, s.units)


def cumsum(s: AnnualSeries) -> AnnualSeries:
    return AnnualSeries(f"cum({s.name})", s.start_year, np.cumsum(s.values), s.units)


def describe(s) -> DescriptiveStats:
    x = np.asarray(s.values if isinstance(s, AnnualSeries) else s, dtype=float)
    n = x.size
    if n < 2:
        raise InsufficientDataError("describe needs at least 2 values")
    mean = float(x.mean())
    dev = x - mean
    var = float(np.mean(dev ** 2))
    sd = float(np.sqrt(var))
    # relative threshold so that constant series with rounding noise count as degenerate
    if sd <= 1e-14 * max(1.0, abs(mean)):
        return DescriptiveStats(n, mean, 0.0)
    skew = float(np.mean(dev ** 3) / var ** 1.5)
    kurt = float(np.mean(dev ** 4) / var ** 2)
    return DescriptiveStats(n, mean, sd, skew, kurt)


def align(series: Sequence[AnnualSeries]) -> tuple[int, np.ndarray]:
    """Intersect the year spans and stack the values column-wise.

    Returns ``(start_year, matrix)`` with one column per input series.
    """
    if len(series) == 0:
        raise DataError("align needs at least one series")
    lo = max(s.start_year for s in series)
    hi = min(s.end_year for s in series)
    if lo > hi:
        names = ", ".join(s.name for s in series)
        raise InsufficientDataError(f"no overlapping years among: {names}")
    cols = [s.values[lo - s.start_year: hi - s.start_year + 1] for s in series]
    return lo, np.column_stack(cols)
