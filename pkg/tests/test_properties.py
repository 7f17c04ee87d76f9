"""Invariant properties of the metrics, diagnostics, and smoothers.

Each test states a mathematical identity or bound that must hold for all
inputs, not just the bundled data: metric dominance and bounds, shift
invariance of the stationarity statistic, portmanteau monotonicity, and
the degenerate-parameter identities of the exponential smoothers.
"""

from __future__ import annotations

import numpy as np
from hypothesis import assume, given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from fxcast import evaluation, smoothing, stattests, unitroot

# ---------------------------------------------------------------------------
# strategies


def _series(min_size: int, max_size: int, lo: float = -50.0, hi: float = 50.0):
    return hnp.arrays(
        np.float64,
        st.integers(min_value=min_size, max_value=max_size),
        elements=st.floats(min_value=lo, max_value=hi, allow_nan=False),
    )


# ---------------------------------------------------------------------------
# metric properties


def test_rmse_dominates_mae_on_1000_random_pairs():
    """RMSE >= MAE for any forecast/actual pair (Jensen)."""
    rng = np.random.default_rng(20220515)
    for _ in range(1000):
        n = int(rng.integers(1, 60))
        scale_f = rng.uniform(0.05, 5.0)
        scale_a = rng.uniform(0.05, 5.0)
        f = rng.normal(rng.uniform(-2, 2), scale_f, n)
        a = rng.normal(rng.uniform(-2, 2), scale_a, n)
        assert evaluation.rmse(f, a) >= evaluation.mae(f, a) - 1e-12


@given(
    fa=st.integers(min_value=1, max_value=40).flatmap(
        lambda n: st.tuples(
            hnp.arrays(np.float64, n, elements=st.floats(-1e6, 1e6, allow_nan=False)),
            hnp.arrays(np.float64, n, elements=st.floats(-1e6, 1e6, allow_nan=False)),
        )
    )
)
@settings(max_examples=300, deadline=None)
def test_smape_bounded_between_0_and_200(fa):
    """Every SMAPE term is |f-a|/(|f|+|a|) <= 1, so the mean is in [0, 200]."""
    f, a = fa
    assume(bool(np.any(np.abs(f) + np.abs(a) >= evaluation.ZERO_TOL)))
    value = evaluation.smape(f, a)
    assert 0.0 <= value <= 200.0


def test_smape_bounds_on_random_pairs_with_zeros():
    rng = np.random.default_rng(987)
    for _ in range(1000):
        n = int(rng.integers(2, 50))
        f = rng.normal(0, 1, n)
        a = rng.normal(0, 1, n)
        # salt both vectors with exact zeros and exact-zero pairs
        f[rng.random(n) < 0.2] = 0.0
        a[rng.random(n) < 0.2] = 0.0
        if not np.any(np.abs(f) + np.abs(a) >= evaluation.ZERO_TOL):
            continue
        value, skipped = evaluation.smape_with_skips(f, a)
        assert 0.0 <= value <= 200.0
        assert skipped == int(np.sum((np.abs(f) + np.abs(a)) < evaluation.ZERO_TOL))


# ---------------------------------------------------------------------------
# stationarity-test properties


@given(x=_series(20, 160), shift=st.floats(-100.0, 100.0, allow_nan=False))
@settings(max_examples=120, deadline=None)
def test_kpss_statistic_is_shift_invariant(x, shift):
    """Adding a constant cannot change a test built on demeaned residuals."""
    assume(float(np.std(x)) > 1e-3)
    for deterministic in ("c", "ct"):
        base = unitroot.kpss_test(x, deterministic=deterministic).statistic
        moved = unitroot.kpss_test(x + shift, deterministic=deterministic).statistic
        assert abs(base - moved) <= 1e-7 * max(1.0, abs(base))


# ---------------------------------------------------------------------------
# portmanteau properties


@given(x=_series(30, 150))
@settings(max_examples=150, deadline=None)
def test_ljung_box_q_is_nondecreasing_in_lag(x):
    """Q(h) accumulates nonnegative terms, so it is monotone in h."""
    assume(float(np.std(x)) > 1e-3)
    rows = stattests.ljung_box(x, list(range(1, 16)))
    q = [row.q_stat for row in rows]
    assert all(q[i] <= q[i + 1] + 1e-12 for i in range(len(q) - 1))
    assert all(row.q_stat >= -1e-12 for row in rows)


# ---------------------------------------------------------------------------
# smoothing identities


@given(y=_series(2, 50, -100.0, 100.0))
@settings(max_examples=200, deadline=None)
def test_level_smoothing_alpha_one_is_identity(y):
    """alpha = 1 reproduces the series; the forecast is the last value."""
    fit = smoothing.brown_filter(y, alpha=1.0)
    assert np.array_equal(fit.fitted, y)
    fc = smoothing.smoothing_forecast(fit, 5)
    assert np.allclose(fc, y[-1], rtol=0.0, atol=0.0)


@given(y=_series(2, 50, -100.0, 100.0))
@settings(max_examples=200, deadline=None)
def test_level_smoothing_alpha_zero_is_constant(y):
    """alpha = 0 never updates: the fitted path stays at the first value."""
    fit = smoothing.brown_filter(y, alpha=0.0)
    assert np.array_equal(fit.fitted, np.full(y.size, y[0]))
    fc = smoothing.smoothing_forecast(fit, 5)
    assert np.allclose(fc, y[0], rtol=0.0, atol=0.0)


@given(
    y=_series(3, 50, -100.0, 100.0),
    alpha=st.floats(0.0, 1.0, allow_nan=False),
)
@settings(max_examples=200, deadline=None)
def test_trend_smoothing_without_trend_equals_level_smoothing(y, alpha):
    """beta = 0 with a flat start (Y2 = Y1) reduces to level smoothing."""
    y = y.copy()
    y[1] = y[0]  # initial trend is exactly zero
    level_fit = smoothing.brown_filter(y, alpha=alpha)
    trend_fit = smoothing.holt_filter(y, alpha=alpha, beta=0.0)
    assert np.allclose(trend_fit.fitted, level_fit.fitted, rtol=0.0, atol=1e-12)
    assert abs(trend_fit.ssr - level_fit.ssr) <= 1e-12 * max(1.0, level_fit.ssr)
    fc_level = smoothing.smoothing_forecast(level_fit, 7)
    fc_trend = smoothing.smoothing_forecast(trend_fit, 7)
    assert np.allclose(fc_trend, fc_level, rtol=0.0, atol=1e-12)
