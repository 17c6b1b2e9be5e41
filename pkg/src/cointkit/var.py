"""Reduced-form VAR estimation, lag-order selection and residual diagnostics."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .errors import DataError, DegenerateError, InsufficientDataError
from .regression import TestVerdict, lstsq
from .series import AnnualSeries, align


@dataclass(frozen=True, eq=False)
class VarModel:
    """VAR(p) with optional constant and contemporaneous exogenous regressors.

    ``coefs[i]`` is the K x K matrix on lag ``i + 1``. ``sigma`` is the ML
    residual covariance (divisor T).
    """

    names: tuple
    lag_order: int
    coefs: np.ndarray
    intercept: Optional[np.ndarray]
    exog_coefs: Optional[np.ndarray]
    exog_names: tuple
    sigma: np.ndarray
    resid: np.ndarray
    design: np.ndarray
    log_likelihood: float
    start_year: int

    @property
    def k(self) -> int:
        return len(self.names)

    @property
    def nobs(self) -> int:
        return self.resid.shape[0]

    @property
    def params_per_equation(self) -> int:
        return self.design.shape[1]


def gaussian_loglike(sigma_ml: np.ndarray, nobs: int) -> float:
    k = sigma_ml.shape[0]
    sign, logdet = np.linalg.slogdet(sigma_ml)
    if sign <= 0:
        raise DegenerateError("residual covariance is singular")
    return -0.5 * nobs * (k * np.log(2 * np.pi) + logdet + k)


def _aligned(Y: Sequence[AnnualSeries], exog: Optional[Sequence[AnnualSeries]]):
    exog = list(exog or [])
    start, mat = align([*Y, *exog])
    k = len(Y)
    return start, mat[:, :k], mat[:, k:]


def _design(data: np.ndarray, exog: np.ndarray, p: int, intercept: bool, skip: int):
    """Regressor matrix for observations ``skip..T-1`` (skip >= p)."""
    n = data.shape[0]
    rows = n - skip
    cols = []
    if intercept:
        cols.append(np.ones((rows, 1)))
    for i in range(1, p + 1):
        cols.append(data[skip - i:n - i])
    if exog.shape[1]:
        cols.append(exog[skip:])
    if not cols:
        return np.zeros((rows, 0))
    return np.hstack(cols)


def _fit(names, data, exog, exog_names, p, intercept, skip, start):
    k = data.shape[1]
    X = _design(data, exog, p, intercept, skip)
    Yt = data[skip:]
    T = Yt.shape[0]
    if T <= X.shape[1] + 1:
        raise InsufficientDataError(f"{T} observations for {X.shape[1]} regressors per equation")
    B, resid = lstsq(Yt, X)
    sigma = resid.T @ resid / T
    off = 1 if intercept else 0
    coefs = np.array([B[off + i * k: off + (i + 1) * k].T for i in range(p)]).reshape(p, k, k)
    return VarModel(
        names=tuple(names),
        lag_order=p,
        coefs=coefs,
        intercept=B[0].copy() if intercept else None,
        exog_coefs=B[off + p * k:].T.copy() if exog.shape[1] else None,
        exog_names=tuple(exog_names),
        sigma=sigma,
        resid=resid,
        design=X,
        log_likelihood=gaussian_loglike(sigma, T),
        start_year=start + skip,
    )


def var_estimate(Y: Sequence[AnnualSeries], p: int,
                 exog: Optional[Sequence[AnnualSeries]] = None,
                 intercept: bool = True) -> VarModel:
    """Equation-by-equation OLS of a VAR(p) on the common span of ``Y`` and ``exog``."""
    if p < 0:
        raise DataError("lag order must be nonnegative")
    start, data, ex = _aligned(Y, exog)
    return _fit([s.name for s in Y], data, ex, [s.name for s in exog or []],
                p, intercept, p, start)


@dataclass(frozen=True)
class LagOrderTable:
    lags: tuple
    nobs: int
    loglik: np.ndarray
    lr: np.ndarray
    lr_df: int
    lr_pvalue: np.ndarray
    fpe: np.ndarray
    aic: np.ndarray
    hqic: np.ndarray
    sbic: np.ndarray
    selected: dict


def lag_order_select(Y: Sequence[AnnualSeries], p_max: int,
                     exog: Optional[Sequence[AnnualSeries]] = None,
                     intercept: bool = True, level: float = 0.05) -> LagOrderTable:
    """LR, FPE, AIC, HQIC and SBIC for lags 0..p_max on the sample common to p_max.

    LR picks the largest lag whose sequential LR test rejects at ``level``; the
    information criteria pick their minimum.
    """
    if p_max < 1:
        raise DataError("p_max must be at least 1")
    start, data, ex = _aligned(Y, exog)
    names = [s.name for s in Y]
    k = len(Y)
    fits = [_fit(names, data, ex, [], p, intercept, p_max, start) for p in range(p_max + 1)]
    T = fits[0].nobs
    ll = np.array([f.log_likelihood for f in fits])
    npar = np.array([k * f.params_per_equation for f in fits], dtype=float)
    m = np.array([f.params_per_equation for f in fits], dtype=float)
    logdet = np.array([np.linalg.slogdet(f.sigma)[1] for f in fits])
    if np.any(T - m <= 0):
        raise InsufficientDataError("too few observations for p_max")
    fpe = np.exp(logdet) * ((T + m) / (T - m)) ** k
    base = -2.0 * ll / T
    aic = base + 2.0 * npar / T
    hqic = base + 2.0 * np.log(np.log(T)) * npar / T
    sbic = base + np.log(T) * npar / T
    lr = np.full(p_max + 1, np.nan)
    lr[1:] = 2.0 * (ll[1:] - ll[:-1])
    pv = np.full(p_max + 1, np.nan)
    pv[1:] = stats.chi2.sf(lr[1:], k * k)
    rejected = [p for p in range(1, p_max + 1) if pv[p] < level]
    selected = {
        "lr": max(rejected) if rejected else 0,
        "fpe": int(np.argmin(fpe)),
        "aic": int(np.argmin(aic)),
        "hqic": int(np.argmin(hqic)),
        "sbic": int(np.argmin(sbic)),
    }
    return LagOrderTable(tuple(range(p_max + 1)), T, ll, lr, k * k, pv, fpe, aic, hqic, sbic, selected)


def companion(m: VarModel) -> np.ndarray:
    k, p = m.k, m.lag_order
    if p == 0:
        return np.zeros((0, 0))
    top = np.hstack(list(m.coefs))
    if p == 1:
        return top
    bottom = np.hstack([np.eye(k * (p - 1)), np.zeros((k * (p - 1), k))])
    return np.vstack([top, bottom])


def var_stability(m: VarModel) -> np.ndarray:
    """Moduli of the companion-matrix eigenvalues, descending. Stable iff all < 1."""
    c = companion(m)
    if c.size == 0:
        return np.zeros(0)
    return np.sort(np.abs(np.linalg.eigvals(c)))[::-1]


def var_lm_autocorr(m: VarModel, max_lag: int = 4) -> list:
    """Multivariate LM test for residual autocorrelation at each lag 1..max_lag.

    LM_j = (T - d - 1/2) ln(|Sigma| / |Sigma_j|), chi2(K^2), where Sigma_j comes from
    regressing the residuals on the VAR regressors plus residuals lagged j times.
    """
    u, X = m.resid, m.design
    T, k = u.shape
    if T <= k * max_lag:
        raise InsufficientDataError("too few residuals for the LM autocorrelation test")
    _, logdet0 = np.linalg.slogdet(m.sigma)
    out = []
    for j in range(1, max_lag + 1):
        ulag = np.zeros_like(u)
        ulag[j:] = u[:-j]
        Z = np.hstack([X, ulag])
        _, e = lstsq(u, Z, check=False)
        s = e.T @ e / T
        sign, logdet = np.linalg.slogdet(s)
        if sign <= 0:
            raise DegenerateError("auxiliary residual covariance is singular")
        d = Z.shape[1]
        stat = (T - d - 0.5) * (logdet0 - logdet)
        out.append(TestVerdict(float(stat), float(stats.chi2.sf(stat, k * k)),
                               f"no autocorrelation at lag {j}", k * k))
    return out


def var_jarque_bera(m: VarModel) -> dict:
    """Per-equation and joint Jarque-Bera tests on Cholesky-standardized residuals."""
    u = m.resid - m.resid.mean(axis=0)
    T, k = u.shape
    if T < 8:
        raise InsufficientDataError("Jarque-Bera needs at least 8 residuals")
    try:
        P = np.linalg.cholesky(m.sigma)
    except np.linalg.LinAlgError:
        raise DegenerateError("residual covariance is not positive definite") from None
    w = np.linalg.solve(P, u.T).T
    b1 = np.mean(w ** 3, axis=0)
    b2 = np.mean(w ** 4, axis=0)
    per = {}
    for i, name in enumerate(m.names):
        s = T * (b1[i] ** 2 / 6.0 + (b2[i] - 3.0) ** 2 / 24.0)
        per[name] = TestVerdict(float(s), float(stats.chi2.sf(s, 2)), "normality", 2)
    joint = float(sum(v.statistic for v in per.values()))
    return {"equations": per,
            "joint": TestVerdict(joint, float(stats.chi2.sf(joint, 2 * k)), "joint normality", 2 * k)}
