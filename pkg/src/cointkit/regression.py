"""Ordinary least squares and the residual specification-test battery.

The tests follow the usual textbook/Stata conventions:

* ``breusch_pagan`` -- original BP statistic (ESS/2) from regressing
  e^2 / (SSR/N) on the fitted values, chi2(1).
* ``ramsey_reset`` -- F test on powers 2..4 of the fitted values.
* ``arch_lm`` -- (N - q) R^2 from regressing e^2 on q of its own lags.
* ``breusch_godfrey`` -- N R^2 from regressing e on X and q lagged residuals
  (pre-sample lags set to zero).
* ``jarque_bera`` -- N/6 (S^2 + (K - 3)^2 / 4) with divisor-N moments.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy import stats

from .errors import DegenerateError, InsufficientDataError, RankDeficientError
from .series import AnnualSeries, align, describe


@dataclass(frozen=True)
class TestVerdict:
    statistic: float
    p_value: float
    null: str
    df: Union[int, tuple]

    __test__ = False  # keep pytest from collecting this class

    def rejects(self, level: float = 0.05) -> bool:
        return self.p_value < level


@dataclass(frozen=True, eq=False)
class OlsFit:
    names: tuple
    coefficients: np.ndarray
    std_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    residuals: AnnualSeries
    fitted: AnnualSeries
    y: np.ndarray
    design: np.ndarray
    r_squared: float
    rmse: float
    dof: int
    intercept: bool

    @property
    def nobs(self) -> int:
        return self.y.size

    @property
    def ssr(self) -> float:
        return float(self.residuals.values @ self.residuals.values)

    def coef(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])


def _check_rank(X: np.ndarray) -> None:
    if X.shape[1] == 0:
        return
    # column scaling first, so the rank test is insensitive to units
    norms = np.linalg.norm(X, axis=0)
    if np.any(norms == 0):
        raise RankDeficientError("design matrix has an all-zero column")
    s = np.linalg.svd(X / norms, compute_uv=False)
    if s[-1] <= s[0] * max(X.shape) * 1e-12:
        raise RankDeficientError("design matrix is rank deficient (collinear columns)")


def lstsq(y: np.ndarray, X: np.ndarray, check: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares coefficients and residuals for arrays (``y`` may be 2-D)."""
    if check:
        _check_rank(X)
    if X.shape[1] == 0:
        return np.zeros((0,) + y.shape[1:]), y.copy()
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    return beta, y - X @ beta


def ols(y: AnnualSeries, X: Sequence[AnnualSeries], intercept: bool = True,
        window: Optional[tuple] = None) -> OlsFit:
    """Regress ``y`` on the series in ``X`` over their common span.

    Parameters
    ----------
    y : AnnualSeries
        Dependent variable.
    X : sequence of AnnualSeries
        Regressors; aligned with ``y`` on the intersection of spans.
    intercept : bool
        Prepend a constant column (named ``"cons"``).
    window : (first, last), optional
        Further restrict the sample to these years.
    """
    series = [y, *X]
    if window is not None:
        series = [s.window(*window) for s in series]
    start, mat = align(series)
    yv, Xv = mat[:, 0], mat[:, 1:]
    names = [s.name for s in X]
    if intercept:
        Xv = np.column_stack([np.ones(len(yv)), Xv])
        names = ["cons", *names]
    n, k = Xv.shape
    if n <= k + 1:
        raise InsufficientDataError(f"{n} observations for {k} regressors")
    beta, resid = lstsq(yv, Xv)
    dof = n - k
    ssr = float(resid @ resid)
    s2 = ssr / dof
    xtx_inv = np.linalg.inv(Xv.T @ Xv)
    se = np.sqrt(np.maximum(np.diag(xtx_inv) * s2, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, beta / se, np.copysign(np.inf, beta))
    p = 2 * stats.t.sf(np.abs(t), dof)
    if intercept:
        tss = float(np.sum((yv - yv.mean()) ** 2))
    else:
        tss = float(yv @ yv)
    r2 = 1.0 - ssr / tss if tss > 0 else 1.0
    return OlsFit(
        names=tuple(names),
        coefficients=beta,
        std_errors=se,
        t_stats=t,
        p_values=p,
        residuals=AnnualSeries(f"resid({y.name})", start, resid, y.units),
        fitted=AnnualSeries(f"fit({y.name})", start, yv - resid, y.units),
        y=yv,
        design=Xv,
        r_squared=r2,
        rmse=float(np.sqrt(s2)),
        dof=dof,
        intercept=intercept,
    )


def _r_squared(y: np.ndarray, resid: np.ndarray) -> float:
    tss = float(np.sum((y - y.mean()) ** 2))
    if tss == 0:
        return 0.0
    return 1.0 - float(resid @ resid) / tss


def _require_residual_variation(fit: OlsFit) -> np.ndarray:
    e = fit.residuals.values
    if not np.any(e):
        raise DegenerateError("residuals are identically zero")
    return e


def durbin_watson(fit: Union[OlsFit, np.ndarray]) -> float:
    e = np.asarray(fit.residuals.values if isinstance(fit, OlsFit) else fit, dtype=float)
    if e.size < 2:
        raise InsufficientDataError("Durbin-Watson needs at least 2 residuals")
    denom = float(e @ e)
    if denom == 0:
        raise DegenerateError("residuals are identically zero")
    return float(np.sum(np.diff(e) ** 2) / denom)


def breusch_pagan(fit: OlsFit) -> TestVerdict:
    e = _require_residual_variation(fit)
    yhat = fit.fitted.values
    if np.ptp(yhat) <= 1e-14 * max(1.0, np.abs(yhat).max()):
        raise DegenerateError("fitted values are constant")
    n = e.size
    g = e ** 2 / (float(e @ e) / n)
    Z = np.column_stack([np.ones(n), yhat])
    _, u = lstsq(g, Z)
    ess = float(np.sum((g - g.mean()) ** 2) - u @ u)
    stat = ess / 2.0
    return TestVerdict(stat, float(stats.chi2.sf(stat, 1)), "constant variance", 1)


def ramsey_reset(fit: OlsFit, powers: Sequence[int] = (2, 3, 4)) -> TestVerdict:
    e = _require_residual_variation(fit)
    yhat = fit.fitted.values
    sd = yhat.std()
    if sd == 0:
        raise DegenerateError("fitted values are constant")
    # standardizing leaves the F statistic unchanged when the design has a constant
    z = (yhat - yhat.mean()) / sd if fit.intercept else yhat / sd
    extra = np.column_stack([z ** p for p in powers])
    Xa = np.column_stack([fit.design, extra])
    n, ka = Xa.shape
    q = len(powers)
    dof = n - ka
    if dof <= 0:
        raise InsufficientDataError("not enough observations for the RESET augmentation")
    _, ua = lstsq(fit.y, Xa)
    ssr_u = float(ua @ ua)
    ssr_r = float(e @ e)
    f = ((ssr_r - ssr_u) / q) / (ssr_u / dof)
    return TestVerdict(f, float(stats.f.sf(f, q, dof)), "no omitted variables", (q, dof))


def arch_lm(fit: Union[OlsFit, np.ndarray], lags: int = 1) -> TestVerdict:
    e = np.asarray(fit.residuals.values if isinstance(fit, OlsFit) else fit, dtype=float)
    if lags < 1:
        raise ValueError("lags must be positive")
    if e.size <= lags + 1:
        raise InsufficientDataError("too few residuals for the ARCH LM test")
    e2 = e ** 2
    y = e2[lags:]
    n = y.size
    Z = np.column_stack([np.ones(n)] + [e2[lags - j:-j] for j in range(1, lags + 1)])
    if n <= Z.shape[1]:
        raise InsufficientDataError("too few residuals for the ARCH LM test")
    if np.ptp(y) == 0:
        raise DegenerateError("squared residuals are constant")
    _, u = lstsq(y, Z)
    stat = n * _r_squared(y, u)
    return TestVerdict(stat, float(stats.chi2.sf(stat, lags)), "no ARCH effect", lags)


def breusch_godfrey(fit: OlsFit, lags: int = 1) -> TestVerdict:
    e = _require_residual_variation(fit)
    if lags < 1:
        raise ValueError("lags must be positive")
    n, k = fit.design.shape
    if n <= lags + k:
        raise InsufficientDataError("too few residuals for the Breusch-Godfrey test")
    lagged = np.zeros((n, lags))
    for j in range(1, lags + 1):
        lagged[j:, j - 1] = e[:-j]
    Z = np.column_stack([fit.design, lagged])
    _, u = lstsq(e, Z)
    # e has mean zero when the design has a constant; use the uncentred R^2 otherwise
    r2 = _r_squared(e, u) if fit.intercept else 1.0 - float(u @ u) / float(e @ e)
    stat = n * r2
    return TestVerdict(stat, float(stats.chi2.sf(stat, lags)), "no serial correlation", lags)


def jarque_bera(sample) -> TestVerdict:
    x = np.asarray(sample.values if isinstance(sample, AnnualSeries) else sample, dtype=float)
    if x.size < 8:
        raise InsufficientDataError("Jarque-Bera needs at least 8 observations")
    d = describe(x)
    if d.skewness is None:
        raise DegenerateError("zero-variance sample")
    stat = jarque_bera_from_moments(x.size, d.skewness, d.kurtosis)
    return TestVerdict(stat, float(stats.chi2.sf(stat, 2)), "normality", 2)


def jarque_bera_from_moments(n: int, skewness: float, kurtosis: float) -> float:
    return n / 6.0 * (skewness ** 2 + (kurtosis - 3.0) ** 2 / 4.0)


def specification_battery(fit: OlsFit) -> dict:
    """The residual diagnostics reported for each first-stage regression."""
    return {
        "hettest": breusch_pagan(fit),
        "reset": ramsey_reset(fit),
        "archlm": arch_lm(fit, 1),
        "bgodfrey": breusch_godfrey(fit, 1),
        "dw": durbin_watson(fit),
    }
