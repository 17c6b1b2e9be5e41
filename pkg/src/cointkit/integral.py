"""Coefficient estimation on cumulative (progressively summed) curves.

Annual readings are the "dynamic" curves; their running sums, anchored at the
first common year, are the "cumulative" curves. Coefficients of
``pi(t) = A0 UE(t-t0) + A1 rate(t-t1) + A2`` are chosen to minimize the RMS
distance between the measured and predicted cumulative curves.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np
from scipy.optimize import minimize

from .engle_granger import RelationCoefficients, predictor_from_rate
from .errors import DataError, DegenerateError, InsufficientDataError
from .regression import lstsq
from .series import AnnualSeries, align, change_rate, lag

DEFAULT_BOX = {"a0": (-3.0, 0.0), "a1": (0.0, 30.0), "a2": (-0.2, 0.2)}
GRID_POINTS = 21
REFINEMENTS = 2
POLISH_TOL = 1e-8


def _pair(a: AnnualSeries, b: AnnualSeries) -> tuple[np.ndarray, np.ndarray]:
    if a.start_year != b.start_year or len(a) != len(b):
        raise DataError(f"span mismatch: {a.name} {a.start_year}-{a.end_year} "
                        f"vs {b.name} {b.start_year}-{b.end_year}")
    return a.values, b.values


def rmsd(a: AnnualSeries, b: AnnualSeries) -> float:
    x, y = _pair(a, b)
    return float(np.sqrt(np.mean((x - y) ** 2)))


def sterr(measured: AnnualSeries, predicted: AnnualSeries) -> float:
    """RMS residual (divisor N - 2) of the regression of measured on predicted."""
    y, x = _pair(measured, predicted)
    if y.size < 3:
        raise InsufficientDataError("sterr needs at least 3 points")
    if np.ptp(x) <= 1e-14 * max(1.0, np.abs(x).max()):
        raise DegenerateError("predicted series has zero variance")
    _, e = lstsq(y, np.column_stack([np.ones(y.size), x]))
    return float(np.sqrt(e @ e / (y.size - 2)))


def _cum(s: AnnualSeries) -> AnnualSeries:
    return AnnualSeries(s.name, s.start_year, np.cumsum(s.values), s.units)


def error_measures(measured: AnnualSeries, predicted: AnnualSeries) -> dict:
    """Dynamic and cumulative StErr/RMSD for two series on the same span."""
    cm, cp = _cum(measured), _cum(predicted)
    return {
        "dynamic_sterr": sterr(measured, predicted),
        "dynamic_rmsd": rmsd(measured, predicted),
        "cumulative_sterr": sterr(cm, cp),
        "cumulative_rmsd": rmsd(cm, cp),
    }


@dataclass(frozen=True)
class CumulativeFitResult:
    coefficients: RelationCoefficients
    dynamic_sterr: float
    dynamic_rmsd: float
    cumulative_sterr: float
    cumulative_rmsd: float
    objective: float
    start_year: int
    end_year: int
    predicted: AnnualSeries


@dataclass(frozen=True, eq=False)
class _Problem:
    """Aligned data: target y and regressor columns (ue, rate, ones) on one span."""

    start: int
    y: np.ndarray
    cols: np.ndarray

    def cumulative_objective(self, coefs: np.ndarray) -> np.ndarray:
        # coefs: (..., 3) -> RMSD between cumulative curves
        pred = coefs @ self.cols.T
        diff = np.cumsum(self.y - pred, axis=-1)
        return np.sqrt(np.mean(diff ** 2, axis=-1))


def _problem(target, rate, ue, t0, t1, window) -> _Problem:
    parts = [target, lag(rate, t1)]
    if ue is not None:
        parts.append(lag(ue, t0))
    if window is not None:
        parts = [p.window(*window) for p in parts]
    start, mat = align(parts)
    n = mat.shape[0]
    if n < 3:
        raise InsufficientDataError("fewer than 3 overlapping years")
    u = mat[:, 2] if ue is not None else np.zeros(n)
    return _Problem(start, mat[:, 0], np.column_stack([u, mat[:, 1], np.ones(n)]))


def _validate_box(box: Mapping[str, tuple]) -> dict:
    out = dict(DEFAULT_BOX)
    out.update(box or {})
    for key, (lo, hi) in out.items():
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise DataError(f"search box for {key} is unbounded")
        if lo > hi:
            raise DataError(f"search box for {key} is empty")
    return out


def _minimize(prob: _Problem, lo: np.ndarray, hi: np.ndarray, free: np.ndarray) -> np.ndarray:
    """Grid, two grid refinements, then a Nelder-Mead polish in box-scaled coordinates."""
    width = hi - lo
    center = lo.copy()
    fixed = lo.copy()
    half = width / 2.0
    center[free] = lo[free] + half[free]
    best = None
    for _ in range(REFINEMENTS + 1):
        axes = []
        for i in range(3):
            if free[i]:
                a, b = max(lo[i], center[i] - half[i]), min(hi[i], center[i] + half[i])
                axes.append(np.linspace(a, b, GRID_POINTS))
            else:
                axes.append(np.array([fixed[i]]))
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
        vals = prob.cumulative_objective(grid)
        # argmin returns the first minimum: lexicographically smallest tuple on ties
        best = grid[int(np.argmin(vals))]
        center = best.copy()
        half = np.where(free, 2.0 * half / (GRID_POINTS - 1), 0.0)

    idx = np.nonzero(free)[0]
    scale = np.where(width > 0, width, 1.0)

    def f(z):
        c = best.copy()
        c[idx] = lo[idx] + z * scale[idx]
        return float(prob.cumulative_objective(c))

    z0 = (best[idx] - lo[idx]) / scale[idx]
    res = minimize(f, z0, method="Nelder-Mead", bounds=[(0.0, 1.0)] * idx.size,
                   options={"xatol": POLISH_TOL, "fatol": POLISH_TOL * 1e-4,
                            "maxiter": 20000, "maxfev": 40000})
    out = best.copy()
    if res.fun <= f(z0):
        out[idx] = lo[idx] + res.x * scale[idx]
    return out


def cumulative_fit(target: AnnualSeries, lf_levels: AnnualSeries,
                   ue: Optional[AnnualSeries] = None, t0: int = 4, t1: int = 4,
                   search_box: Optional[Mapping[str, tuple]] = None,
                   pin_a0: Optional[float] = None,
                   window: Optional[tuple] = None,
                   rate: Optional[AnnualSeries] = None) -> CumulativeFitResult:
    """Fit A0, A1, A2 by minimizing the RMSD between cumulative curves.

    Without ``ue`` the fit is bivariate (A0 = 0). ``pin_a0`` fixes A0, e.g. at -1
    for the generalized relation. ``rate`` overrides the change rate computed
    from ``lf_levels``.
    """
    box = _validate_box(search_box or {})
    rate = change_rate(lf_levels) if rate is None else rate
    prob = _problem(target, rate, ue, t0, t1, window)
    lo = np.array([box["a0"][0], box["a1"][0], box["a2"][0]], dtype=float)
    hi = np.array([box["a0"][1], box["a1"][1], box["a2"][1]], dtype=float)
    free = np.array([True, True, True])
    if ue is None or pin_a0 is not None:
        a0 = 0.0 if ue is None else float(pin_a0)
        lo[0] = hi[0] = a0
        free[0] = False
    best = _minimize(prob, lo, hi, free)
    coeffs = RelationCoefficients(float(best[0]), float(best[1]), float(best[2]), t0, t1)
    n = prob.y.size
    measured = AnnualSeries(target.name, prob.start, prob.y, target.units)
    predicted = AnnualSeries("cumulative fit", prob.start, prob.cols @ best, target.units)
    m = error_measures(measured, predicted)
    return CumulativeFitResult(coeffs, m["dynamic_sterr"], m["dynamic_rmsd"],
                               m["cumulative_sterr"], m["cumulative_rmsd"],
                               float(prob.cumulative_objective(best)),
                               prob.start, prob.start + n - 1, predicted)


def cumulative_objective(target: AnnualSeries, rate: AnnualSeries, ue: Optional[AnnualSeries],
                         coeffs: RelationCoefficients, window: Optional[tuple] = None) -> float:
    """Cumulative RMSD of an arbitrary coefficient set on the fit's sample."""
    prob = _problem(target, rate, ue, coeffs.t0, coeffs.t1, window)
    return float(prob.cumulative_objective(np.array(coeffs.as_tuple())))


def table8_compare(target: AnnualSeries, rate: AnnualSeries, ue: Optional[AnnualSeries],
                   coefficient_sets: Mapping[str, Optional[RelationCoefficients]],
                   window: Optional[tuple] = None) -> list:
    """Four error measures per coefficient set; ``None`` sets are marked unavailable.

    Every row is evaluated on the common span of the target and the predictor
    with the largest lags, so rows are directly comparable.
    """
    sets = {k: v for k, v in coefficient_sets.items() if v is not None}
    span = None
    for c in sets.values():
        p = predictor_from_rate(rate, ue if c.a0 else None, c)
        lo, hi = max(p.start_year, target.start_year), min(p.end_year, target.end_year)
        span = (lo, hi) if span is None else (max(span[0], lo), min(span[1], hi))
    if window is not None and span is not None:
        span = (max(span[0], window[0]), min(span[1], window[1]))
    rows = []
    for name, c in coefficient_sets.items():
        if c is None:
            rows.append({"row": name, "available": False})
            continue
        pred = predictor_from_rate(rate, ue if c.a0 else None, c).window(*span)
        meas = target.window(*span)
        rows.append({"row": name, "available": True, "coefficients": c,
                     **error_measures(meas, pred)})
    return rows


def cumulative_error_decomposition(target: AnnualSeries, predictor: AnnualSeries) -> dict:
    """Dynamic residuals, their running sum, and var(second half)/var(first half).

    Under i.i.d. dynamic residuals the running sum is a random walk and the
    ratio is well above one; ``None`` when the first half has no variance.
    """
    start, mat = align([target, predictor])
    dyn = mat[:, 0] - mat[:, 1]
    cum = np.cumsum(dyn)
    half = cum.size // 2
    v1 = float(np.mean(cum[:half] ** 2)) if half else 0.0
    v2 = float(np.mean(cum[half:] ** 2))
    ratio = v2 / v1 if v1 > 0 else None
    return {
        "dynamic": AnnualSeries("dynamic residual", start, dyn, target.units),
        "cumulative": AnnualSeries("cumulative residual", start, cum, target.units),
        "variance_ratio": ratio,
    }
