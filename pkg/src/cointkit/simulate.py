"""Seeded synthetic processes, a brute-force OLS oracle, and size/power calibration.

Random numbers come from NumPy's PCG64 bit generator; normal variates use
``Generator.standard_normal`` (ziggurat). Replicate ``i`` of a run with master
seed ``s`` uses ``SeedSequence([s, i])``, so any replicate can be regenerated
on its own and results do not depend on evaluation order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import stats

from .errors import DataError, NumericalError, RankDeficientError
from .series import AnnualSeries

PROCESSES = ("white_noise", "random_walk", "ar1", "arch1", "trend_plus_noise",
             "triangular_cointegrated", "var_p")


def rng_for(seed: int, replicate: Optional[int] = None) -> np.random.Generator:
    entropy = [int(seed)] if replicate is None else [int(seed), int(replicate)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


@dataclass(frozen=True)
class SimSpec:
    """Process name, length, seed and process parameters.

    Parameters by process: ``sd`` (all scalar processes, default 1);
    ``phi`` (ar1, required); ``alpha`` and ``omega`` (arch1); ``slope`` and
    ``intercept`` (trend_plus_noise); ``beta`` and ``noise_sd``
    (triangular_cointegrated); ``coefs`` (list of K x K) and ``cov`` (var_p).
    """

    process: str
    length: int
    seed: int = 0
    params: dict = field(default_factory=dict)
    start_year: int = 1900

    def __post_init__(self):
        if self.process not in PROCESSES:
            raise DataError(f"unknown process {self.process!r}")
        if self.length < 2:
            raise DataError("length must be at least 2")


def _series(name, values, spec):
    return AnnualSeries(name, spec.start_year, values, "level")


def simulate_array(spec: SimSpec, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Raw draws: shape (T,) for scalar processes, (T, K) for multivariate ones."""
    rng = rng_for(spec.seed) if rng is None else rng
    T, p = spec.length, spec.params
    sd = float(p.get("sd", 1.0))
    proc = spec.process
    if proc == "white_noise":
        return sd * rng.standard_normal(T)
    if proc == "random_walk":
        return np.cumsum(sd * rng.standard_normal(T))
    if proc == "ar1":
        if "phi" not in p:
            raise DataError("ar1 requires an explicit phi")
        phi = float(p["phi"])
        if abs(phi) >= 1:
            raise DataError("stationary ar1 requires |phi| < 1")
        e = sd * rng.standard_normal(T)
        x = np.empty(T)
        x[0] = e[0] / np.sqrt(1 - phi ** 2)
        for t in range(1, T):
            x[t] = phi * x[t - 1] + e[t]
        return x
    if proc == "arch1":
        alpha, omega = float(p.get("alpha", 0.5)), float(p.get("omega", 1.0))
        if not 0 <= alpha < 1 or omega <= 0:
            raise DataError("arch1 requires 0 <= alpha < 1 and omega > 0")
        z = rng.standard_normal(T)
        x = np.empty(T)
        prev = omega / (1 - alpha)
        for t in range(T):
            x[t] = z[t] * np.sqrt(omega + alpha * prev)
            prev = x[t] ** 2
        return x
    if proc == "trend_plus_noise":
        t = np.arange(T, dtype=float)
        return float(p.get("intercept", 0.0)) + float(p.get("slope", 0.1)) * t + sd * rng.standard_normal(T)
    if proc == "triangular_cointegrated":
        beta = float(p.get("beta", 1.0))
        noise_sd = float(p.get("noise_sd", 1.0))
        if noise_sd <= 0:
            raise DataError("noise_sd must be positive")
        x = np.cumsum(sd * rng.standard_normal(T))
        y = beta * x + noise_sd * rng.standard_normal(T)
        return np.column_stack([y, x])
    if proc == "var_p":
        coefs = [np.atleast_2d(np.asarray(c, dtype=float)) for c in p["coefs"]]
        k = coefs[0].shape[0]
        cov = np.asarray(p.get("cov", np.eye(k)), dtype=float)
        chol = np.linalg.cholesky(cov)
        burn = int(p.get("burn", 100))
        e = rng.standard_normal((T + burn, k)) @ chol.T
        y = np.zeros((T + burn, k))
        for t in range(T + burn):
            acc = e[t].copy()
            for i, a in enumerate(coefs, start=1):
                if t - i >= 0:
                    acc += a @ y[t - i]
            y[t] = acc
        return y[burn:]
    raise DataError(proc)  # pragma: no cover


def simulate(spec: SimSpec, rng: Optional[np.random.Generator] = None):
    """AnnualSeries (scalar processes) or a list of AnnualSeries (multivariate)."""
    x = simulate_array(spec, rng)
    if x.ndim == 1:
        return _series(spec.process, x, spec)
    names = ["y", "x"] if spec.process == "triangular_cointegrated" else [f"y{i + 1}" for i in range(x.shape[1])]
    return [_series(n, x[:, i], spec) for i, n in enumerate(names)]


def normal_equations_oracle(y: Sequence[float], X) -> np.ndarray:
    """Solve X'X b = X'y by Gaussian elimination with partial pivoting.

    Written with plain Python loops on purpose, independent of the LAPACK
    path used by the estimators.
    """
    Xl = [list(map(float, row)) for row in np.atleast_2d(np.asarray(X, dtype=float))]
    yl = [float(v) for v in y]
    n, k = len(Xl), len(Xl[0])
    A = [[sum(Xl[t][i] * Xl[t][j] for t in range(n)) for j in range(k)] for i in range(k)]
    b = [sum(Xl[t][i] * yl[t] for t in range(n)) for i in range(k)]
    scale = max(abs(A[i][i]) for i in range(k)) or 1.0
    for col in range(k):
        piv = max(range(col, k), key=lambda r: abs(A[r][col]))
        if abs(A[piv][col]) <= 1e-13 * scale:
            raise RankDeficientError("singular normal equations")
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        for r in range(col + 1, k):
            f = A[r][col] / A[col][col]
            if f:
                for c in range(col, k):
                    A[r][c] -= f * A[col][c]
                b[r] -= f * b[col]
    sol = [0.0] * k
    for i in range(k - 1, -1, -1):
        acc = b[i] - sum(A[i][j] * sol[j] for j in range(i + 1, k))
        sol[i] = acc / A[i][i]
    return np.array(sol)


@dataclass(frozen=True)
class CalibrationResult:
    test: str
    n_reps: int
    rejections: int
    rate: float
    band: tuple
    nominal: float
    nominal_in_band: bool
    failures: int = 0


def _binomial_band(k: int, n: int, conf: float = 0.95) -> tuple:
    a = (1 - conf) / 2
    lo = 0.0 if k == 0 else float(stats.beta.ppf(a, k, n - k + 1))
    hi = 1.0 if k == n else float(stats.beta.ppf(1 - a, k + 1, n - k))
    return lo, hi


def _ols_fit(y, x):
    from .regression import ols
    return ols(AnnualSeries("y", 1900, y), [AnnualSeries("x", 1900, x)])


def _make_tests() -> dict:
    """name -> (default SimSpec params, callable(draw, level) -> rejected?)."""
    from .johansen import johansen_trace
    from .regression import arch_lm, breusch_godfrey, breusch_pagan, jarque_bera, ramsey_reset
    from .unitroot import UnitRootSpec, adf_test, dfgls_test

    def unit(test, det, lags):
        def run(draw, level, rng):
            s = AnnualSeries("s", 1900, draw)
            r = test(s, UnitRootSpec(det, lags))
            return r.rejects_at(int(round(level * 100)))
        return run

    def resid_test(fn):
        def run(draw, level, rng):
            x = rng.standard_normal(draw.size)
            fit = _ols_fit(1.0 + 0.5 * x + draw, x)
            return fn(fit).p_value < level
        return run

    def johansen(draw, level, rng):
        Y = [AnnualSeries(f"y{i}", 1900, draw[:, i]) for i in range(draw.shape[1])]
        # the simulated levels have no drift, so the constant is restricted to the relation
        return johansen_trace(Y, 2, "rconstant").selected_rank > 0

    def jb(draw, level, rng):
        return jarque_bera(draw).p_value < level

    return {
        "adf": (("random_walk", {}), unit(adf_test, "constant", 0)),
        "adf_trend": (("random_walk", {}), unit(adf_test, "trend", 0)),
        "dfgls": (("random_walk", {}), unit(dfgls_test, "constant", 1)),
        "dfgls_trend": (("random_walk", {}), unit(dfgls_test, "trend", 1)),
        "breusch_godfrey": (("white_noise", {}), resid_test(lambda f: breusch_godfrey(f, 1))),
        "breusch_pagan": (("white_noise", {}), resid_test(breusch_pagan)),
        "ramsey_reset": (("white_noise", {}), resid_test(ramsey_reset)),
        "arch_lm": (("white_noise", {}), resid_test(lambda f: arch_lm(f, 1))),
        "jarque_bera": (("white_noise", {}), jb),
        "johansen": (("var_p", {"coefs": [np.eye(2)], "burn": 0}), johansen),
    }


CALIBRATION_TESTS = ("adf", "adf_trend", "dfgls", "dfgls_trend", "breusch_godfrey",
                     "breusch_pagan", "ramsey_reset", "arch_lm", "jarque_bera", "johansen")


def calibration_suite(test_name: str, spec: Optional[SimSpec] = None, nominal_level: float = 0.05,
                      n_reps: int = 2000, seed: int = 0,
                      runner: Optional[Callable] = None) -> CalibrationResult:
    """Empirical rejection rate of ``test_name`` over seeded replicates of ``spec``.

    For ``johansen`` a "rejection" is selecting a rank above zero. The band is
    the exact (Clopper-Pearson) 95% interval for the rejection probability.
    """
    tests = _make_tests()
    if test_name not in tests:
        raise DataError(f"unknown test {test_name!r}; choose from {sorted(tests)}")
    if n_reps < 500:
        raise DataError("calibration needs at least 500 replicates")
    (proc, params), run = tests[test_name]
    if spec is None:
        spec = SimSpec(proc, 200, seed, params)
    run = runner or run
    hits = failures = 0
    for i in range(n_reps):
        rng = rng_for(spec.seed, i)
        draw = simulate_array(spec, rng)
        try:
            hits += bool(run(draw, nominal_level, rng))
        except NumericalError:
            failures += 1
    done = n_reps - failures
    if done == 0:
        raise NumericalError("every replicate failed")
    lo, hi = _binomial_band(hits, done)
    return CalibrationResult(test_name, done, hits, hits / done, (lo, hi), nominal_level,
                             lo <= nominal_level <= hi, failures)
