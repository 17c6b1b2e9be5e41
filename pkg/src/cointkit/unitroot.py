"""Augmented Dickey-Fuller and DF-GLS unit-root tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from .critical_values import LEVELS, critical_values
from .errors import DataError, DegenerateError, InsufficientDataError
from .regression import lstsq
from .series import AnnualSeries

DETERMINISTIC = ("none", "constant", "trend")
MIN_EFFECTIVE_SAMPLE = 10

# local-to-unity alternatives for GLS detrending
CBAR = {"constant": -7.0, "trend": -13.5}


@dataclass(frozen=True)
class UnitRootSpec:
    deterministic: str = "constant"
    lags: int = 0

    def __post_init__(self):
        if self.deterministic not in DETERMINISTIC:
            raise DataError(f"deterministic must be one of {DETERMINISTIC}")
        if self.lags < 0:
            raise DataError("lags must be nonnegative")


@dataclass(frozen=True)
class UnitRootResult:
    test: str
    statistic: float
    spec: UnitRootSpec
    n_obs: int
    critical_values: Mapping[int, float]
    reject_at: Optional[int]
    series: str = ""
    notes: tuple = field(default_factory=tuple)

    @property
    def rejects(self) -> bool:
        return self.reject_at is not None

    def rejects_at(self, level: int) -> bool:
        return self.statistic < self.critical_values[level]


def _reject_level(stat: float, cvs: Mapping[int, float]) -> Optional[int]:
    for lvl in LEVELS:  # strictest first
        if stat < cvs[lvl]:
            return lvl
    return None


def _check_variation(y: np.ndarray, name: str) -> None:
    if np.ptp(y) <= 1e-14 * max(1.0, np.abs(y).max()):
        raise DegenerateError(f"series {name!r} has zero variance")


def _df_regression(y: np.ndarray, lags: int, deterministic: str) -> tuple[float, int]:
    """t-ratio on y_{t-1} in the (augmented) Dickey-Fuller regression."""
    dy = np.diff(y)
    n_eff = dy.size - lags
    if n_eff < MIN_EFFECTIVE_SAMPLE:
        raise InsufficientDataError(
            f"effective sample {n_eff} < {MIN_EFFECTIVE_SAMPLE} (n={y.size}, lags={lags})")
    cols = [y[lags:-1]]
    if deterministic in ("constant", "trend"):
        cols.append(np.ones(n_eff))
    if deterministic == "trend":
        cols.append(np.arange(1, n_eff + 1, dtype=float))
    for j in range(1, lags + 1):
        cols.append(dy[lags - j:dy.size - j])
    X = np.column_stack(cols)
    target = dy[lags:]
    beta, resid = lstsq(target, X)
    dof = n_eff - X.shape[1]
    if dof <= 0:
        raise InsufficientDataError("no degrees of freedom left in the ADF regression")
    s2 = float(resid @ resid) / dof
    if s2 == 0:
        raise DegenerateError("ADF regression fits exactly")
    var_rho = s2 * np.linalg.inv(X.T @ X)[0, 0]
    return float(beta[0] / np.sqrt(var_rho)), n_eff


def _notes(s: AnnualSeries, spec: UnitRootSpec) -> tuple:
    if spec.deterministic == "trend" and s.units.startswith("difference"):
        return ("trend term on a differenced series (likely misspecification)",)
    return ()


def adf_test(s: AnnualSeries, spec: UnitRootSpec = UnitRootSpec()) -> UnitRootResult:
    """ADF regression of dy_t on y_{t-1}, deterministic terms and ``lags`` lagged differences.

    The effective sample is ``len(s) - lags - 1``.
    """
    y = s.values
    _check_variation(y, s.name)
    stat, n_eff = _df_regression(y, spec.lags, spec.deterministic)
    cvs = critical_values("adf", spec.deterministic, n_eff)
    return UnitRootResult("adf", stat, spec, n_eff, cvs, _reject_level(stat, cvs),
                          s.name, _notes(s, spec))


def gls_detrend(y: np.ndarray, deterministic: str) -> np.ndarray:
    """Elliott-Rothenberg-Stock quasi-difference detrending."""
    n = y.size
    alpha = 1.0 + CBAR[deterministic] / n
    z = np.ones((n, 1)) if deterministic == "constant" else np.column_stack(
        [np.ones(n), np.arange(1, n + 1, dtype=float)])
    yq = np.concatenate(([y[0]], y[1:] - alpha * y[:-1]))
    zq = np.vstack([z[:1], z[1:] - alpha * z[:-1]])
    beta, _ = lstsq(yq, zq)
    return y - z @ beta


def dfgls_test(s: AnnualSeries, spec: UnitRootSpec = UnitRootSpec("constant", 1)) -> UnitRootResult:
    """DF-GLS: GLS demean/detrend, then a no-deterministic ADF regression."""
    if spec.deterministic not in CBAR:
        raise DataError("DF-GLS supports only 'constant' and 'trend'")
    y = s.values
    _check_variation(y, s.name)
    yd = gls_detrend(y, spec.deterministic)
    stat, n_eff = _df_regression(yd, spec.lags, "none")
    cvs = critical_values("dfgls", spec.deterministic, n_eff)
    return UnitRootResult("dfgls", stat, spec, n_eff, cvs, _reject_level(stat, cvs),
                          s.name, _notes(s, spec))


def residual_unit_root_battery(diffs: Mapping[str, AnnualSeries],
                               adf_lags: Iterable[int] = range(0, 4),
                               dfgls_lags: Iterable[int] = range(1, 5),
                               deterministic: str = "constant") -> dict:
    """Run ADF and DF-GLS over a lag grid for each named residual series.

    Returns ``{name: {"adf": [UnitRootResult...], "dfgls": [...]}}``.
    """
    adf_lags, dfgls_lags = list(adf_lags), list(dfgls_lags)
    out = {}
    for name, s in diffs.items():
        s = s.renamed(name)
        out[name] = {
            "adf": [adf_test(s, UnitRootSpec(deterministic, p)) for p in adf_lags],
            "dfgls": [dfgls_test(s, UnitRootSpec(deterministic, p)) for p in dfgls_lags],
        }
    return out
