import numpy as np
import pytest
from numpy.testing import assert_allclose
from statsmodels.tsa.api import VAR

from cointkit.errors import DataError, InsufficientDataError
from cointkit.series import AnnualSeries
from cointkit.simulate import SimSpec, simulate_array
from cointkit.var import (companion, gaussian_loglike, lag_order_select, var_estimate,
                          var_jarque_bera, var_lm_autocorr, var_stability)

A1 = [[0.5, 0.1], [0.2, 0.3]]
A2 = [[-0.2, 0.0], [0.1, 0.15]]


@pytest.fixture(scope="module")
def data():
    return simulate_array(SimSpec("var_p", 120, seed=5, params={"coefs": [A1, A2]}))


def _series(data, start=1900):
    return [AnnualSeries(f"y{i}", start, data[:, i]) for i in range(data.shape[1])]


@pytest.mark.parametrize("p", [1, 2, 3])
def test_estimates_match_statsmodels(data, p):
    m = var_estimate(_series(data), p)
    ref = VAR(data).fit(p, trend="c")
    assert_allclose(m.coefs, ref.coefs, rtol=1e-9, atol=1e-12)
    assert_allclose(m.intercept, ref.intercept, rtol=1e-9, atol=1e-12)
    assert_allclose(m.sigma, ref.sigma_u_mle, rtol=1e-9)
    assert_allclose(m.log_likelihood, ref.llf, rtol=1e-10)
    assert m.nobs == ref.nobs and m.start_year == 1900 + p


def test_lag_selection_matches_statsmodels(data):
    t = lag_order_select(_series(data), 6)
    ref = VAR(data).select_order(6, trend="c")
    for key in ("aic", "hqic", "fpe"):
        assert t.selected[key] == ref.selected_orders[key]
    assert t.selected["sbic"] == ref.selected_orders["bic"]
    assert_allclose(t.fpe, np.asarray(ref.ics["fpe"]), rtol=1e-9)
    # criteria differ from statsmodels' by the constant K(1 + ln 2pi)
    shift = 2 * (1 + np.log(2 * np.pi))
    assert_allclose(t.aic - shift, np.asarray(ref.ics["aic"]), rtol=1e-9)


def test_lag_selection_recovers_true_order():
    long = simulate_array(SimSpec("var_p", 600, seed=5, params={"coefs": [A1, A2]}))
    t = lag_order_select(_series(long), 5)
    assert t.selected["lr"] == 2 and t.selected["sbic"] == 2
    assert t.nobs == len(long) - 5
    assert t.lr_df == 4


def test_lr_is_twice_loglik_difference(data):
    t = lag_order_select(_series(data), 4)
    assert_allclose(t.lr[1:], 2 * np.diff(t.loglik))
    assert np.isnan(t.lr[0])


def test_companion_and_stability(data):
    m = var_estimate(_series(data), 2)
    c = companion(m)
    assert c.shape == (4, 4)
    assert_allclose(c[2:, :2], np.eye(2))
    mod = var_stability(m)
    assert np.all(mod < 1)
    assert_allclose(mod, np.sort(np.abs(np.linalg.eigvals(c)))[::-1])


def test_unit_root_var_is_on_the_boundary():
    walk = simulate_array(SimSpec("var_p", 400, seed=1, params={"coefs": [np.eye(2)], "burn": 0}))
    mod = var_stability(var_estimate(_series(walk), 1))
    assert mod[0] > 0.95


def test_gaussian_loglike_scalar():
    assert_allclose(gaussian_loglike(np.eye(1), 10), -5 * (np.log(2 * np.pi) + 1))


def test_exogenous_regressors(data):
    x = AnnualSeries("x", 1900, np.sin(np.arange(len(data))))
    m = var_estimate(_series(data), 1, exog=[x])
    ref = VAR(data, exog=x.values[:, None]).fit(1, trend="c")
    assert_allclose(m.exog_coefs[:, 0], ref.params[1], rtol=1e-9)  # statsmodels orders const, exog, lags
    assert m.exog_names == ("x",)


def test_lm_autocorrelation(data):
    good = var_lm_autocorr(var_estimate(_series(data), 2), 3)
    bad = var_lm_autocorr(var_estimate(_series(data), 0), 1)
    assert len(good) == 3 and all(v.df == 4 for v in good)
    assert min(v.p_value for v in good) > 0.01
    assert bad[0].p_value < 1e-6


def test_jarque_bera(data):
    jb = var_jarque_bera(var_estimate(_series(data), 2))
    assert set(jb["equations"]) == {"y0", "y1"}
    assert_allclose(jb["joint"].statistic, sum(v.statistic for v in jb["equations"].values()))
    assert jb["joint"].df == 4


def test_errors(data):
    with pytest.raises(DataError):
        var_estimate(_series(data), -1)
    with pytest.raises(DataError):
        lag_order_select(_series(data), 0)
    with pytest.raises(InsufficientDataError):
        var_estimate(_series(data[:6]), 3)
