"""Differential checks against statsmodels, when it is installed. The C++
suites already verify every fit against in-tree oracles; this cross-checks a
second, widely used implementation."""

import numpy as np
import pytest

import dyadlab

sm = pytest.importorskip("statsmodels.api")
stattools = pytest.importorskip("statsmodels.tsa.stattools")


def test_ols_matches_statsmodels():
    rng = np.random.default_rng(77)
    n = 40
    x = np.column_stack([np.ones(n)] + [rng.standard_normal(n) for _ in range(3)])
    y = x @ np.array([0.5, -1.2, 0.3, 2.0]) + 0.4 * rng.standard_normal(n)
    ours = dyadlab.ols_fit(x.tolist(), y.tolist())
    ref = sm.OLS(y, x).fit()
    assert np.max(np.abs(np.array(ours["beta"]) - ref.params)) < 1e-10
    assert np.max(np.abs(np.array(ours["se"]) - ref.bse)) < 1e-10
    assert np.max(np.abs(np.array(ours["p"]) - ref.pvalues)) < 1e-10
    ci = ref.conf_int(alpha=0.05)
    assert np.max(np.abs(np.array(ours["ci_low"]) - ci[:, 0])) < 1e-10
    assert np.max(np.abs(np.array(ours["ci_high"]) - ci[:, 1])) < 1e-10
    assert abs(ours["r_squared"] - ref.rsquared) < 1e-12


def test_logit_matches_statsmodels():
    rng = np.random.default_rng(78)
    n = 200
    x = np.column_stack([np.ones(n), rng.standard_normal(n)])
    eta = x @ np.array([-0.3, 0.8])
    y = (rng.random(n) < 1 / (1 + np.exp(-eta))).astype(float)
    ours = dyadlab.logit_fit(x.tolist(), y.tolist())
    ref = sm.Logit(y, x).fit(disp=0)
    assert np.max(np.abs(np.array(ours["beta"]) - ref.params)) < 1e-8
    assert np.max(np.abs(np.array(ours["se"]) - ref.bse)) < 1e-8
    assert np.allclose(ours["odds_ratio"], np.exp(ref.params), atol=1e-8)


def test_adf_statistic_matches_statsmodels():
    rng = np.random.default_rng(79)
    for _ in range(20):
        series = rng.standard_normal(10).tolist()
        ours = dyadlab.adf_test(series)
        stat = stattools.adfuller(series, maxlag=0, regression="c", autolag=None)[0]
        # identical regression; only the critical-value tables differ
        assert abs(ours["statistic"] - stat) < 1e-9


def test_granger_f_matches_statsmodels_when_undifferenced():
    rng = np.random.default_rng(80)
    checked = 0
    while checked < 10:
        x = rng.standard_normal(17)
        y = np.empty(17)
        y[0] = rng.standard_normal()
        for t in range(1, 17):
            y[t] = 0.9 * x[t - 1] + 0.5 * rng.standard_normal()
        ours = dyadlab.granger_lag1(x.tolist(), y.tolist())
        if ours["differenced_x"] or ours["differenced_y"]:
            continue  # statsmodels runs no stationarity pre-check
        ref = stattools.grangercausalitytests(np.column_stack([y, x]), maxlag=1, verbose=False)
        f_ref, p_ref, _, _ = ref[1][0]["ssr_ftest"]
        assert abs(ours["f"] - f_ref) < 1e-8
        assert abs(ours["p"] - p_ref) < 1e-10
        checked += 1
