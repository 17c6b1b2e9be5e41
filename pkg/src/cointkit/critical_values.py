"""Finite-sample critical-value tables for the unit-root and rank tests.

Dickey-Fuller tau quantiles are Fuller's (1976) Monte Carlo table as
reprinted in Hamilton (1994, Table B.6). DF-GLS with a linear trend uses the
Elliott-Rothenberg-Stock (1996, Table 1.C) values; the demeaned DF-GLS
statistic shares the no-constant Dickey-Fuller distribution.

Interpolation is linear in 1/n between tabulated sample sizes; below the
smallest tabulated size the first row is used unchanged.
"""
from __future__ import annotations

import numpy as np

from .errors import DataError

LEVELS = (1, 5, 10)

# sample size -> (1%, 5%, 10%)
_ADF = {
    "none": {
        25: (-2.66, -1.95, -1.60),
        50: (-2.62, -1.95, -1.61),
        100: (-2.60, -1.95, -1.61),
        250: (-2.58, -1.95, -1.62),
        500: (-2.58, -1.95, -1.62),
        np.inf: (-2.58, -1.95, -1.62),
    },
    "constant": {
        25: (-3.75, -3.00, -2.63),
        50: (-3.58, -2.93, -2.60),
        100: (-3.51, -2.89, -2.58),
        250: (-3.46, -2.88, -2.57),
        500: (-3.44, -2.87, -2.57),
        np.inf: (-3.43, -2.86, -2.57),
    },
    "trend": {
        25: (-4.38, -3.60, -3.24),
        50: (-4.15, -3.50, -3.18),
        100: (-4.04, -3.45, -3.15),
        250: (-3.99, -3.43, -3.13),
        500: (-3.98, -3.42, -3.13),
        np.inf: (-3.96, -3.41, -3.12),
    },
}

_DFGLS_TREND = {
    50: (-3.77, -3.19, -2.89),
    100: (-3.58, -3.03, -2.74),
    200: (-3.46, -2.93, -2.64),
    np.inf: (-3.48, -2.89, -2.57),
}

# Trace-test 5% critical values by number of common trends (K - r).
JOHANSEN_TRACE_5PCT = {
    "none": (3.84, 12.53, 24.31, 39.89, 59.46),
    "constant": (3.76, 15.41, 29.68, 47.21, 68.52),
    "rconstant": (9.42, 19.96, 34.91, 53.12, 76.07),
}


def _table(test: str, deterministic: str) -> dict:
    if test == "adf":
        if deterministic not in _ADF:
            raise DataError(f"unsupported ADF deterministic spec {deterministic!r}")
        return _ADF[deterministic]
    if test == "dfgls":
        if deterministic == "trend":
            return _DFGLS_TREND
        if deterministic == "constant":
            return _ADF["none"]
        raise DataError(f"DF-GLS supports only 'constant' and 'trend', not {deterministic!r}")
    raise DataError(f"unknown test {test!r}")


def critical_values(test: str, deterministic: str, n: int) -> dict:
    """All three critical values ``{1: .., 5: .., 10: ..}`` at sample size ``n``."""
    if n < 10:
        raise DataError("critical values need n >= 10")
    table = _table(test, deterministic)
    sizes = sorted(table)
    inv = np.array([1.0 / s for s in sizes])[::-1]  # ascending in 1/n
    vals = np.array([table[s] for s in sizes])[::-1]
    x = min(1.0 / n, inv[-1])
    return {lvl: float(np.interp(x, inv, vals[:, j])) for j, lvl in enumerate(LEVELS)}


def critical_value(test: str, deterministic: str, level: int, n: int) -> float:
    if level not in LEVELS:
        raise DataError(f"level must be one of {LEVELS}")
    return critical_values(test, deterministic, n)[level]


def johansen_critical_5pct(det_spec: str, common_trends: int) -> float:
    try:
        return JOHANSEN_TRACE_5PCT[det_spec][common_trends - 1]
    except (KeyError, IndexError):
        raise DataError(
            f"no trace critical value for det_spec={det_spec!r}, K-r={common_trends}") from None
