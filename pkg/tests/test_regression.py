import numpy as np
import pytest
import statsmodels.api as sm
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from statsmodels.stats import diagnostic as smd
from statsmodels.stats.stattools import durbin_watson as sm_dw
from statsmodels.stats.stattools import jarque_bera as sm_jb

from cointkit.errors import DegenerateError, InsufficientDataError, RankDeficientError
from cointkit.regression import (arch_lm, breusch_godfrey, breusch_pagan, durbin_watson,
                                 jarque_bera, jarque_bera_from_moments, ols, ramsey_reset,
                                 specification_battery)
from cointkit.simulate import normal_equations_oracle

from conftest import series


def _problem(rng, n=40):
    x1 = rng.standard_normal(n)
    x2 = rng.standard_normal(n).cumsum()
    e = rng.standard_normal(n) * (1 + 0.5 * np.abs(x1))
    y = 0.3 + 1.5 * x1 - 0.2 * x2 + e
    return y, x1, x2


@pytest.fixture
def problem(rng):
    y, x1, x2 = _problem(rng)
    fit = ols(series(y, name="y"), [series(x1, name="x1"), series(x2, name="x2")])
    ref = sm.OLS(y, sm.add_constant(np.column_stack([x1, x2]))).fit()
    return fit, ref


class TestOls:
    def test_exact_line(self):
        x = np.arange(6.0)
        fit = ols(series(3 + 2 * x), [series(x, name="x")])
        assert_allclose(fit.coefficients, [3, 2], atol=1e-12)
        assert fit.names == ("cons", "x")
        assert_allclose(fit.r_squared, 1.0)

    def test_matches_statsmodels(self, problem):
        fit, ref = problem
        assert_allclose(fit.coefficients, ref.params, rtol=1e-10)
        assert_allclose(fit.std_errors, ref.bse, rtol=1e-10)
        assert_allclose(fit.p_values, ref.pvalues, rtol=1e-8)
        assert_allclose(fit.r_squared, ref.rsquared, rtol=1e-10)
        assert_allclose(fit.rmse, np.sqrt(ref.mse_resid), rtol=1e-10)
        assert fit.dof == ref.df_resid

    def test_window_and_alignment(self):
        y = series(np.arange(10.0) ** 1.5, start=1990)
        x = series(np.arange(12.0), start=1988)
        fit = ols(y, [x], window=(1992, 1997))
        assert fit.nobs == 6
        assert fit.residuals.start_year == 1992

    def test_collinear_design(self):
        x = series(np.arange(8.0))
        with pytest.raises(RankDeficientError):
            ols(series(np.sin(np.arange(8.0))), [x, x.renamed("x2")])

    def test_too_few_observations(self):
        with pytest.raises(InsufficientDataError):
            ols(series([1.0, 2.0, 3.0]), [series([0.0, 1.0, 0.5])])

    def test_no_intercept(self, rng):
        x = rng.standard_normal(30)
        y = 2 * x + rng.standard_normal(30)
        fit = ols(series(y), [series(x, name="x")], intercept=False)
        ref = sm.OLS(y, x).fit()
        assert_allclose(fit.coefficients, ref.params)
        assert_allclose(fit.r_squared, ref.rsquared)


class TestDiagnostics:
    def test_durbin_watson(self, problem):
        fit, ref = problem
        assert_allclose(durbin_watson(fit), sm_dw(ref.resid))

    def test_breusch_pagan_fitted_values(self, problem):
        fit, ref = problem
        exog = sm.add_constant(ref.fittedvalues)
        lm, lm_p, _, _ = smd.het_breuschpagan(ref.resid, exog, robust=False)
        v = breusch_pagan(fit)
        assert_allclose([v.statistic, v.p_value], [lm, lm_p], rtol=1e-9)

    def test_reset(self, problem):
        fit, ref = problem
        r = smd.linear_reset(ref, power=4, test_type="fitted", use_f=True)
        v = ramsey_reset(fit)
        assert_allclose([v.statistic, v.p_value], [r.fvalue, r.pvalue], rtol=1e-7)
        assert v.df == (3, fit.nobs - 6)

    def test_arch(self, problem):
        fit, ref = problem
        lm, lm_p, _, _ = smd.het_arch(ref.resid, nlags=1)
        v = arch_lm(fit, 1)
        assert_allclose([v.statistic, v.p_value], [lm, lm_p], rtol=1e-9)

    @pytest.mark.parametrize("lags", [1, 2, 4])
    def test_breusch_godfrey(self, problem, lags):
        fit, ref = problem
        lm, lm_p, _, _ = smd.acorr_breusch_godfrey(ref, nlags=lags)
        v = breusch_godfrey(fit, lags)
        assert_allclose([v.statistic, v.p_value], [lm, lm_p], rtol=1e-9)

    def test_jarque_bera(self, rng):
        x = rng.standard_t(5, 200)
        jb, p, _, _ = sm_jb(x)
        v = jarque_bera(x)
        assert_allclose([v.statistic, v.p_value], [jb, p], rtol=1e-10)

    def test_jb_formula(self):
        assert jarque_bera_from_moments(60, 0.0, 3.0) == 0.0
        assert_allclose(jarque_bera_from_moments(60, 1.0, 5.0), 10 * (1 + 1))

    def test_battery_keys(self, problem):
        fit, _ = problem
        assert set(specification_battery(fit)) == {"hettest", "reset", "archlm", "bgodfrey", "dw"}

    def test_perfect_fit_is_degenerate(self):
        x = np.arange(12.0)
        fit = ols(series(1 + x), [series(x, name="x")])
        fit = type(fit)(**{**fit.__dict__,
                           "residuals": series(np.zeros(12), name="r")})
        with pytest.raises(DegenerateError):
            breusch_pagan(fit)
        with pytest.raises(DegenerateError):
            durbin_watson(fit)


@settings(max_examples=500, deadline=None, derandomize=True)
@given(st.integers(0, 2 ** 32 - 1))
def test_ols_matches_normal_equations_oracle(seed):
    g = np.random.default_rng(seed)
    X = g.standard_normal((20, 2))
    y = X @ g.standard_normal(2) + g.standard_normal(20)
    fit = ols(series(y), [series(X[:, 0], name="a"), series(X[:, 1], name="b")])
    ref = normal_equations_oracle(y, np.column_stack([np.ones(20), X]))
    assert_allclose(fit.coefficients, ref, rtol=1e-9, atol=1e-12)
