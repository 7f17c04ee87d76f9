"""Distributional and dependence diagnostics for return series.

Covers the joint normality statistic, the nonparametric runs test around a
location threshold, the portmanteau serial-correlation statistic and the
LM test for conditional heteroskedasticity.  All functions accept plain
1-d arrays or anything numpy can coerce, including ReturnSeries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .exceptions import DataError, DegenerateSeriesError, ShortSeriesError

__all__ = [
    "JarqueBeraResult",
    "RunsResult",
    "LjungBoxRow",
    "ArchLmResult",
    "jarque_bera",
    "runs_test",
    "ljung_box",
    "arch_lm",
    "sample_autocorrelations",
]


@dataclass(frozen=True)
class JarqueBeraResult:
    statistic: float
    p_value: float
    skewness: float
    kurtosis: float
    n_obs: int


@dataclass(frozen=True)
class RunsResult:
    """Runs test of randomness around a location threshold.

    Values equal to the threshold are dropped before grouping; ``n_dropped``
    records how many.  The normal approximation is used without a
    continuity correction.
    """

    threshold_kind: str
    threshold_value: float
    n_above: int
    n_below: int
    n_dropped: int
    observed_runs: int
    expected_runs: float
    std_dev: float
    z_stat: float
    p_value: float


@dataclass(frozen=True)
class LjungBoxRow:
    lag: int
    q_stat: float
    dof: int
    p_value: float | None


@dataclass(frozen=True)
class ArchLmResult:
    lags: int
    n_obs: int
    lm_stat: float
    lm_p_value: float
    f_stat: float
    f_p_value: float
    f_dof: tuple[int, int]


def jarque_bera(x) -> JarqueBeraResult:
    """Joint skewness/kurtosis normality statistic n/6 (S^2 + (K-3)^2/4).

    S and K are population central moment ratios; the p-value is the upper
    chi-square(2) tail.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 4:
        raise ShortSeriesError("the normality statistic needs at least 4 observations")
    dev = x - x.mean()
    m2 = float(np.mean(dev**2))
    if m2 <= 0.0:
        raise DegenerateSeriesError("normality statistic undefined for constant input")
    s = float(np.mean(dev**3)) / m2**1.5
    k = float(np.mean(dev**4)) / m2**2
    stat = n / 6.0 * (s**2 + (k - 3.0) ** 2 / 4.0)
    return JarqueBeraResult(
        statistic=stat,
        p_value=float(sps.chi2.sf(stat, 2)),
        skewness=s,
        kurtosis=k,
        n_obs=n,
    )


def runs_test(x, threshold_kind: str = "mean") -> RunsResult:
    """Wald-Wolfowitz runs test around the mean, median or rounded mode.

    Observations are labeled above/below the threshold, ties with the
    threshold are dropped, and the number of maximal same-label runs R is
    compared with its randomness expectation E[R] = 2 n1 n2 / n + 1 via
    the normal approximation Z = (R - E[R]) / sd[R], two-sided p-value.
    """
    from .series import _mode_rounded

    x = np.asarray(x, dtype=float)
    if threshold_kind == "mean":
        threshold = float(np.mean(x))
    elif threshold_kind == "median":
        threshold = float(np.median(x))
    elif threshold_kind == "mode":
        threshold = _mode_rounded(x)
    else:
        raise DataError(f"unknown threshold kind {threshold_kind!r}")

    labels = x[x != threshold] > threshold
    n = labels.size
    n1 = int(labels.sum())
    n2 = n - n1
    if n1 == 0 or n2 == 0 or n < 2:
        raise DegenerateSeriesError(
            "runs test needs observations on both sides of the threshold"
        )
    runs = 1 + int(np.sum(labels[1:] != labels[:-1]))
    expected = 2.0 * n1 * n2 / n + 1.0
    num = 2.0 * n1 * n2 * (2.0 * n1 * n2 - n)
    var = num / (n * n * (n - 1.0))
    sd = float(np.sqrt(var))
    z = (runs - expected) / sd
    p = 2.0 * float(sps.norm.sf(abs(z)))
    return RunsResult(
        threshold_kind=threshold_kind,
        threshold_value=threshold,
        n_above=n1,
        n_below=n2,
        n_dropped=int(x.size - n),
        observed_runs=runs,
        expected_runs=expected,
        std_dev=sd,
        z_stat=z,
        p_value=p,
    )


def sample_autocorrelations(x, max_lag: int) -> np.ndarray:
    """Sample autocorrelations rho_1..rho_max_lag with 1/n autocovariances."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if not (1 <= max_lag < n):
        raise DataError(f"max_lag {max_lag} out of range for n={n}")
    dev = x - x.mean()
    g0 = float(dev @ dev) / n
    if g0 <= 0.0:
        raise DegenerateSeriesError("autocorrelation undefined for constant input")
    rho = np.empty(max_lag)
    for k in range(1, max_lag + 1):
        rho[k - 1] = (float(dev[k:] @ dev[:-k]) / n) / g0
    return rho


def ljung_box(x, lags, model_df: int = 0) -> list[LjungBoxRow]:
    """Portmanteau statistics Q(h) = n(n+2) sum_{k<=h} rho_k^2 / (n-k).

    ``model_df`` is the number of fitted ARMA coefficients; the chi-square
    reference has h - model_df degrees of freedom and the p-value is left
    out for lags that do not exceed it.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    lags = [int(h) for h in (lags if np.iterable(lags) else [lags])]
    if not lags or min(lags) < 1:
        raise DataError("lags must be positive integers")
    max_lag = max(lags)
    rho = sample_autocorrelations(x, max_lag)
    terms = rho**2 / (n - np.arange(1, max_lag + 1))
    q_partial = n * (n + 2.0) * np.cumsum(terms)
    rows = []
    for h in lags:
        q = float(q_partial[h - 1])
        dof = h - model_df
        p = float(sps.chi2.sf(q, dof)) if dof >= 1 else None
        rows.append(LjungBoxRow(lag=h, q_stat=q, dof=dof, p_value=p))
    return rows


def arch_lm(resid, lags: int = 1) -> ArchLmResult:
    """LM test for ARCH effects via the squared-residual autoregression.

    Regresses e_t^2 on a constant and m lags of itself; reports both the
    n R^2 chi-square form and the F form of the test.
    """
    e = np.asarray(resid, dtype=float)
    m = int(lags)
    if m < 1:
        raise DataError("arch_lm needs at least one lag")
    if e.size < m + 2:
        raise ShortSeriesError("arch_lm needs more observations than lags plus one")
    sq = e**2
    y = sq[m:]
    n = y.size
    cols = [np.ones(n)] + [sq[m - j : m - j + n] for j in range(1, m + 1)]
    X = np.column_stack(cols)
    beta, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    resid_aux = y - X @ beta
    ss_res = float(resid_aux @ resid_aux)
    dev = y - y.mean()
    ss_tot = float(dev @ dev)
    if ss_tot <= 0.0:
        raise DegenerateSeriesError("squared residuals are constant")
    r2 = 1.0 - ss_res / ss_tot
    dof2 = n - m - 1
    lm = n * r2
    f_stat = (r2 / m) / ((1.0 - r2) / dof2)
    return ArchLmResult(
        lags=m,
        n_obs=n,
        lm_stat=lm,
        lm_p_value=float(sps.chi2.sf(lm, m)),
        f_stat=f_stat,
        f_p_value=float(sps.f.sf(f_stat, m, dof2)),
        f_dof=(m, dof2),
    )
