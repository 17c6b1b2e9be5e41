"""Johansen reduced-rank regression: trace test and VECM estimation.

``p`` is always the lag order of the VAR in levels, so the VECM carries
``p - 1`` lagged differences. Deterministic specifications:

``constant``   unrestricted constant (allows linear trends in levels)
``rconstant``  constant restricted to the cointegrating space
``none``       no deterministic terms
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .critical_values import johansen_critical_5pct
from .errors import DataError, DegenerateError, InsufficientDataError
from .regression import lstsq
from .series import AnnualSeries, align

DET_SPECS = ("constant", "rconstant", "none")
LAG_NOTE = "lag = levels-VAR lag order; the VECM has lag-1 lagged differences"


@dataclass(frozen=True, eq=False)
class _RRR:
    T: int
    K: int
    r0: np.ndarray
    r1: np.ndarray
    z0: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    s00: np.ndarray
    s01: np.ndarray
    s11: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns normalized so v' S11 v = 1


def _reduced_rank(data: np.ndarray, p: int, det_spec: str) -> _RRR:
    if det_spec not in DET_SPECS:
        raise DataError(f"det_spec must be one of {DET_SPECS}")
    if p < 1:
        raise DataError("levels lag order must be at least 1")
    n, K = data.shape
    if K < 2:
        raise DataError("Johansen analysis needs at least two variables")
    if n <= K * p + 2:
        raise InsufficientDataError(f"{n} observations for K={K}, p={p}")
    dy = np.diff(data, axis=0)
    T = n - p
    z0 = dy[p - 1:]
    z1 = data[p - 1:n - 1]
    lagged = [dy[p - 1 - i:n - 1 - i] for i in range(1, p)]
    if det_spec == "rconstant":
        z1 = np.column_stack([z1, np.ones(T)])
    if det_spec == "constant":
        lagged.insert(0, np.ones((T, 1)))
    z2 = np.hstack(lagged) if lagged else np.zeros((T, 0))
    if T <= z2.shape[1] + z1.shape[1]:
        raise InsufficientDataError("sample too short for the reduced-rank regression")
    if z2.shape[1]:
        _, r0 = lstsq(z0, z2)
        _, r1 = lstsq(z1, z2)
    else:
        r0, r1 = z0, z1
    s00 = r0.T @ r0 / T
    s01 = r0.T @ r1 / T
    s11 = r1.T @ r1 / T
    try:
        L = np.linalg.cholesky(s11)
        s00_inv = np.linalg.inv(s00)
        np.linalg.cholesky(s00)
    except np.linalg.LinAlgError:
        raise DegenerateError("moment matrices are singular") from None
    Linv = np.linalg.inv(L)
    C = Linv @ s01.T @ s00_inv @ s01 @ Linv.T
    lam, u = np.linalg.eigh((C + C.T) / 2)
    order = np.argsort(lam)[::-1]
    lam, u = lam[order], u[:, order]
    vecs = Linv.T @ u
    lam = np.clip(lam[:K], 0.0, 1.0 - 1e-15)
    return _RRR(T, K, r0, r1, z0, z1, z2, s00, s01, s11, lam, vecs)


@dataclass(frozen=True)
class JohansenResult:
    names: tuple
    det_spec: str
    lag_order: int
    nobs: int
    eigenvalues: np.ndarray
    trace_stats: np.ndarray
    log_likelihoods: np.ndarray
    critical_5pct: np.ndarray
    selected_rank: int
    start_year: int
    note: str = LAG_NOTE
    extra: dict = field(default_factory=dict)


def _loglik(rrr: _RRR, r: int) -> float:
    T, K = rrr.T, rrr.K
    logdet = np.linalg.slogdet(rrr.s00)[1]
    return -0.5 * T * (K * (1 + np.log(2 * np.pi)) + logdet
                       + np.sum(np.log1p(-rrr.eigenvalues[:r])))


def _data(Y: Sequence[AnnualSeries]):
    start, data = align(list(Y))
    return start, data, tuple(s.name for s in Y)


def johansen_trace(Y: Sequence[AnnualSeries], p: int, det_spec: str = "constant") -> JohansenResult:
    """Trace statistics for ranks 0..K-1 and sequential 5% rank selection.

    ``trace_stats[r] = -T * sum(log(1 - lambda_i), i > r)``; the selected rank is
    the first ``r`` whose statistic falls below its 5% critical value (K if none).
    ``log_likelihoods`` has K + 1 entries (ranks 0..K).
    """
    start, data, names = _data(Y)
    rrr = _reduced_rank(data, p, det_spec)
    K, T, lam = rrr.K, rrr.T, rrr.eigenvalues
    logs = np.log1p(-lam)
    trace = np.array([-T * logs[r:].sum() for r in range(K)])
    crit = np.array([johansen_critical_5pct(det_spec, K - r) for r in range(K)])
    below = np.nonzero(trace < crit)[0]
    selected = int(below[0]) if below.size else K
    ll = np.array([_loglik(rrr, r) for r in range(K + 1)])
    return JohansenResult(names, det_spec, p, T, lam, trace, ll, crit, selected, start + p)


@dataclass(frozen=True, eq=False)
class VecmModel:
    """Rank-``r`` VECM: dY_t = alpha (beta' Y*_{t-1}) + Gamma dY_{t-1..} + mu + e.

    ``beta`` has the identity on its first ``r`` rows (Johansen normalization);
    with ``rconstant`` its last row holds the restricted constant. For
    ``constant`` the unrestricted constant is split as ``mu = alpha rho + gamma``
    with ``gamma`` orthogonal to ``alpha`` and ``rho`` reported as ``ce_constant``.
    """

    names: tuple
    det_spec: str
    lag_order: int
    rank: int
    beta: np.ndarray
    beta_std_errors: np.ndarray
    alpha: np.ndarray
    gamma: np.ndarray
    constant: np.ndarray
    ce_constant: np.ndarray
    resid: np.ndarray
    omega: np.ndarray
    rmse: np.ndarray
    log_likelihood: float
    nobs: int
    start_year: int
    note: str = LAG_NOTE

    def long_run_relation(self, j: int = 0) -> dict:
        """Relation ``j`` solved for its normalized variable.

        Returns ``{"target", "slopes": {name: slope}, "slope_se": {...}, "intercept"}``
        for ``target = sum(slope * x) + intercept``.
        """
        b = self.beta[:, j]
        se = self.beta_std_errors[:, j]
        K = len(self.names)
        free = [i for i in range(K) if i >= self.rank]
        slopes = {self.names[i]: -float(b[i]) for i in free}
        ses = {self.names[i]: float(se[i]) for i in free}
        intercept = -float(b[K]) if self.det_spec == "rconstant" else -float(self.ce_constant[j])
        return {"target": self.names[j], "slopes": slopes, "slope_se": ses, "intercept": intercept}


def vecm_estimate(Y: Sequence[AnnualSeries], p: int, rank: int,
                  det_spec: str = "constant") -> VecmModel:
    start, data, names = _data(Y)
    rrr = _reduced_rank(data, p, det_spec)
    K, T = rrr.K, rrr.T
    if not 1 <= rank <= K - 1:
        raise DataError(f"rank must be between 1 and K-1={K - 1}")
    v = rrr.eigenvectors[:, :rank]
    head = v[:rank, :rank]
    if abs(np.linalg.det(head)) < 1e-12 * max(1.0, np.abs(v).max()) ** rank:
        raise DegenerateError("cannot normalize the cointegrating vectors on the leading variables")
    beta = v @ np.linalg.inv(head)
    bs11b = beta.T @ rrr.s11 @ beta
    alpha = rrr.s01 @ beta @ np.linalg.inv(bs11b)
    ect = rrr.z1 @ beta
    target = rrr.z0 - ect @ alpha.T
    if rrr.z2.shape[1]:
        G, resid = lstsq(target, rrr.z2)
    else:
        G, resid = np.zeros((0, K)), target
    omega = resid.T @ resid / T
    has_const = det_spec == "constant"
    constant = G[0].copy() if has_const else np.zeros(K)
    gamma = G[1:].T if has_const else G.T
    if has_const:
        rho = np.linalg.solve(alpha.T @ alpha, alpha.T @ constant)
    else:
        rho = np.zeros(rank)
    # covariance of the free rows of beta, conditional on alpha
    r1b = rrr.r1[:, rank:]
    info_b = r1b.T @ r1b
    a_info = alpha.T @ np.linalg.solve(omega, alpha)
    cov = np.kron(np.linalg.inv(a_info), np.linalg.inv(info_b))
    m = r1b.shape[1]
    se = np.zeros_like(beta)
    se[rank:, :] = np.sqrt(np.diag(cov)).reshape(rank, m).T
    n_params = rank + rrr.z2.shape[1]
    rmse = np.sqrt(np.sum(resid ** 2, axis=0) / max(T - n_params, 1))
    ll = _loglik(rrr, rank)
    return VecmModel(names, det_spec, p, rank, beta, se, alpha, gamma, constant, rho,
                     resid, omega, rmse, ll, T, start + p)
