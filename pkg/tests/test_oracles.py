"""Equivalence of the numeric engines with independent oracles.

Every expected value here is computed by a slower or closed-form method
that shares no code with the implementation under test: the AR(1) exact
likelihood in closed form, exhaustive enumeration for the segmentation
dynamic program, plain-Python sums for the metrics, and a chi-square
tail oracle built from ``math.erfc``/``math.gamma`` for the portmanteau
p-values.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from fxcast import arima, breaks, evaluation, stattests

# ---------------------------------------------------------------------------
# AR(1) exact likelihood


def _ar1_closed_form_loglik(x: np.ndarray, phi: float) -> float:
    """Exact Gaussian AR(1) log-likelihood concentrated over the variance.

    With S = (1 - phi^2) x_1^2 + sum_{t>=2} (x_t - phi x_{t-1})^2 the
    concentrated log-likelihood is
    -n/2 (log 2*pi + log(S/n) + 1) + (1/2) log(1 - phi^2).
    """
    n = x.size
    s = (1.0 - phi * phi) * x[0] ** 2 + float(np.sum((x[1:] - phi * x[:-1]) ** 2))
    return -0.5 * n * (math.log(2.0 * math.pi) + math.log(s / n) + 1.0) + 0.5 * math.log(
        1.0 - phi * phi
    )


@pytest.mark.parametrize("t", [5, 10, 25, 50])
@pytest.mark.parametrize("phi", [-0.9, -0.5, 0.0, 0.3, 0.7, 0.95])
def test_ar1_exact_likelihood_matches_closed_form(t, phi):
    seed = t * 1000 + int(round((phi + 1.0) * 100))
    rng = np.random.default_rng(seed)
    x = rng.normal(0.0, 1.0, t)
    got = arima._concentrated_loglik(x, np.array([phi]), np.array([]))
    want = _ar1_closed_form_loglik(x, phi)
    assert got == pytest.approx(want, abs=1e-8)


def test_ar1_exact_likelihood_on_autocorrelated_draws():
    """Same identity evaluated away from the data-generating parameter."""
    rng = np.random.default_rng(4242)
    for _ in range(25):
        t = int(rng.integers(8, 51))
        rho = float(rng.uniform(-0.9, 0.9))
        x = np.empty(t)
        x[0] = rng.normal()
        for i in range(1, t):
            x[i] = rho * x[i - 1] + rng.normal()
        phi = float(rng.uniform(-0.95, 0.95))
        got = arima._concentrated_loglik(x, np.array([phi]), np.array([]))
        assert got == pytest.approx(_ar1_closed_form_loglik(x, phi), abs=1e-8)


# ---------------------------------------------------------------------------
# segmentation dynamic program vs exhaustive enumeration


def _exhaustive_best_partition(y: np.ndarray, n_breaks: int, trimming: float = 0.15):
    """Brute-force optimum over every admissible break placement."""
    n = y.size
    h = breaks._min_segment(n, trimming)
    s1, s2 = breaks._prefix_sums(y)
    best_combo, best_ssr = None, np.inf
    for combo in itertools.combinations(range(h, n - h + 1), n_breaks):
        bounds = (0,) + combo + (n,)
        if any(bounds[i + 1] - bounds[i] < h for i in range(len(bounds) - 1)):
            continue
        ssr = sum(
            float(breaks._segment_ssr(s1, s2, bounds[i], bounds[i + 1]))
            for i in range(len(bounds) - 1)
        )
        if ssr < best_ssr:
            best_combo, best_ssr = combo, ssr
    return best_combo, best_ssr


@pytest.mark.parametrize("n", [12, 18, 25, 30])
@pytest.mark.parametrize("k", [1, 2])
def test_best_partition_matches_exhaustive_enumeration(n, k):
    rng = np.random.default_rng(n * 10 + k)
    y = rng.normal(0.0, 1.0, n)
    y[n // 2 :] += float(rng.uniform(0.5, 2.0))  # plant a shift so k=1 is meaningful
    got_breaks, got_ssr = breaks.best_partition(y, k, trimming=0.15)
    want_breaks, want_ssr = _exhaustive_best_partition(y, k)
    assert got_breaks == want_breaks
    assert got_ssr == pytest.approx(want_ssr, abs=1e-9)


def test_best_partition_matches_exhaustive_on_pure_noise():
    """No planted break: the optimum is whatever noise says it is."""
    for seed in range(6):
        rng = np.random.default_rng(900 + seed)
        n = int(rng.integers(14, 31))
        y = rng.normal(0.0, 1.0, n)
        for k in (1, 2):
            got_breaks, got_ssr = breaks.best_partition(y, k, trimming=0.15)
            want_breaks, want_ssr = _exhaustive_best_partition(y, k)
            assert got_breaks == want_breaks
            assert got_ssr == pytest.approx(want_ssr, abs=1e-9)


# ---------------------------------------------------------------------------
# metrics vs direct formulas


def test_metrics_match_direct_formulas():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = int(rng.integers(1, 40))
        f = rng.normal(0.0, 2.0, n)
        a = rng.normal(0.0, 2.0, n)
        rmse_direct = math.sqrt(sum((fi - ai) ** 2 for fi, ai in zip(f, a)) / n)
        mae_direct = sum(abs(fi - ai) for fi, ai in zip(f, a)) / n
        assert abs(evaluation.rmse(f, a) - rmse_direct) < 1e-12
        assert abs(evaluation.mae(f, a) - mae_direct) < 1e-12
        kept = [
            (fi, ai)
            for fi, ai in zip(f, a)
            if abs(fi) + abs(ai) >= evaluation.ZERO_TOL
        ]
        smape_direct = (
            200.0 * sum(abs(fi - ai) / (abs(fi) + abs(ai)) for fi, ai in kept) / len(kept)
        )
        assert abs(evaluation.smape(f, a) - smape_direct) < 1e-12


def test_smape_skips_exact_zero_pairs():
    f = np.array([0.0, 1.0, -2.0, 0.0])
    a = np.array([0.0, 2.0, -1.0, 0.0])
    value, skipped = evaluation.smape_with_skips(f, a)
    assert skipped == 2
    # both kept pairs contribute |f-a|/(|f|+|a|) = 1/3
    assert value == pytest.approx(200.0 / 3.0, abs=1e-12)


# ---------------------------------------------------------------------------
# portmanteau p-values vs a chi-square tail oracle


def _chi2_sf_oracle(q: float, dof: int) -> float:
    """Upper-tail probability of a chi-square from closed-form series.

    Even dof: P(X > q) = exp(-q/2) sum_{k<m} (q/2)^k / k! with m = dof/2.
    Odd dof:  P(X > q) = erfc(sqrt(q/2))
              + exp(-q/2) sum_{k=1..m} (q/2)^{k-1/2} / Gamma(k+1/2),
    with m = (dof-1)/2.  Built on math.erfc/math.gamma only.
    """
    half = q / 2.0
    if dof % 2 == 0:
        m = dof // 2
        term, acc = 1.0, 1.0
        for k in range(1, m):
            term *= half / k
            acc += term
        return math.exp(-half) * acc
    m = (dof - 1) // 2
    acc = math.erfc(math.sqrt(half))
    for k in range(1, m + 1):
        acc += math.exp(-half) * half ** (k - 0.5) / math.gamma(k + 0.5)
    return acc


def test_chi2_oracle_pinned_point():
    """Q = 2.245 on 1 degree of freedom sits at p = 0.134."""
    assert _chi2_sf_oracle(2.245, 1) == pytest.approx(0.134, abs=5e-4)


def test_ljung_box_p_values_match_chi2_oracle():
    rng = np.random.default_rng(31)
    x = rng.normal(0.0, 1.0, 180)
    rows = stattests.ljung_box(x, list(range(1, 13)))
    for row in rows:
        assert row.p_value == pytest.approx(
            _chi2_sf_oracle(row.q_stat, row.dof), abs=1e-6
        )


def test_ljung_box_p_values_with_model_dof_match_oracle():
    """Residual-style usage: dof = lag - model_df, skipped when dof < 1."""
    rng = np.random.default_rng(32)
    x = rng.normal(0.0, 1.0, 150)
    rows = stattests.ljung_box(x, list(range(1, 11)), model_df=4)
    for row in rows:
        if row.lag <= 4:
            assert row.p_value is None
        else:
            assert row.dof == row.lag - 4
            assert row.p_value == pytest.approx(
                _chi2_sf_oracle(row.q_stat, row.dof), abs=1e-6
            )
