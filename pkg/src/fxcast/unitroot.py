"""Unit-root and stationarity tests.

Three complementary tests: the augmented Dickey-Fuller regression with
AIC-selected lag augmentation, the Phillips-Perron semiparametric
correction of the unaugmented regression, and the level/trend
stationarity LM test (null of stationarity).

Dickey-Fuller critical values come from the MacKinnon (2010) response
surfaces evaluated at the estimation sample size; p-values come from the
MacKinnon (1994) normal-quantile polynomial surfaces and are approximate
by construction.  The stationarity test uses the published asymptotic
critical values with an interpolated p-value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from .exceptions import DataError, ShortSeriesError
from .hac import bartlett_long_run_variance, newey_west_bandwidth

__all__ = [
    "UnitRootResult",
    "adf_test",
    "pp_test",
    "kpss_test",
    "schwert_max_lags",
    "dickey_fuller_critical_values",
    "dickey_fuller_p_value",
]

_DETERMINISTIC_TERMS = ("n", "c", "ct")

# MacKinnon (2010) critical-value response surfaces for the single-series
# Dickey-Fuller t statistic: cv = b0 + b1/T + b2/T^2 + b3/T^3, rows 1%/5%/10%.
_MACKINNON_CV = {
    "n": np.array(
        [
            [-2.56574, -2.2358, -3.627, 0.0],
            [-1.94100, -0.2686, -3.365, 31.223],
            [-1.61682, 0.2656, -2.714, 25.364],
        ]
    ),
    "c": np.array(
        [
            [-3.43035, -6.5393, -16.786, -79.433],
            [-2.86154, -2.8903, -4.234, -40.040],
            [-2.56677, -1.5384, -2.809, 0.0],
        ]
    ),
    "ct": np.array(
        [
            [-3.95877, -9.0531, -28.428, -134.155],
            [-3.41049, -4.3904, -9.036, -45.374],
            [-3.12705, -2.5856, -3.925, -22.380],
        ]
    ),
}

# MacKinnon (1994) p-value surfaces: p = Phi(poly(tau)).  The cubic branch
# applies for tau <= tau_star, the quartic branch above it; outside
# [tau_min, tau_max] the p-value saturates at 0 or 1.
_MACKINNON_P = {
    "n": {
        "star": -1.04,
        "min": -19.04,
        "max": np.inf,
        "small": (0.6344, 1.2378, 0.032496),
        "large": (0.4797, 0.93557, -0.06999, 0.033066),
    },
    "c": {
        "star": -1.61,
        "min": -18.83,
        "max": 2.74,
        "small": (2.1659, 1.4412, 0.038269),
        "large": (1.7339, 0.93202, -0.12745, -0.010368),
    },
    "ct": {
        "star": -2.89,
        "min": -16.18,
        "max": 0.70,
        "small": (3.2512, 1.6047, 0.049588),
        "large": (2.5261, 0.61654, -0.37956, -0.060285),
    },
}

# Asymptotic critical values of the stationarity LM statistic
# (level and trend variants), upper tail, for 10%/5%/2.5%/1%.
_KPSS_TAILS = np.array([0.10, 0.05, 0.025, 0.01])
_KPSS_CV = {
    "c": np.array([0.347, 0.463, 0.574, 0.739]),
    "ct": np.array([0.119, 0.146, 0.176, 0.216]),
}


@dataclass(frozen=True)
class UnitRootResult:
    """Outcome of a unit-root or stationarity test.

    ``null`` states the hypothesis being tested ("unit root" for the
    Dickey-Fuller family, "stationarity" for the LM test) and
    ``reject_5pct`` compares the statistic with the 5 percent critical
    value in the direction appropriate to the test.
    """

    test: str
    null: str
    deterministic: str
    statistic: float
    p_value: float
    p_value_method: str
    critical_values: dict[str, float]
    lags: int
    n_obs: int
    reject_5pct: bool


def schwert_max_lags(n: int) -> int:
    """Lag-search upper bound floor(12 * (n/100)^(1/4))."""
    if n < 1:
        raise ValueError("sample size must be positive")
    return int(np.floor(12.0 * (n / 100.0) ** 0.25))


def dickey_fuller_critical_values(deterministic: str, n_obs: int) -> dict[str, float]:
    """Finite-sample 1/5/10 percent critical values from the response surface."""
    table = _MACKINNON_CV[deterministic]
    out = {}
    for row, label in zip(table, ("1%", "5%", "10%")):
        b0, b1, b2, b3 = row
        out[label] = float(b0 + b1 / n_obs + b2 / n_obs**2 + b3 / n_obs**3)
    return out


def dickey_fuller_p_value(stat: float, deterministic: str) -> float:
    """Approximate asymptotic p-value of a Dickey-Fuller t statistic."""
    surf = _MACKINNON_P[deterministic]
    if stat > surf["max"]:
        return 1.0
    if stat < surf["min"]:
        return 0.0
    coefs = surf["small"] if stat <= surf["star"] else surf["large"]
    z = sum(c * stat**i for i, c in enumerate(coefs))
    return float(sps.norm.cdf(z))


def _deterministic_columns(deterministic: str, n: int) -> list[np.ndarray]:
    if deterministic not in _DETERMINISTIC_TERMS:
        raise DataError(f"unknown deterministic specification {deterministic!r}")
    cols = []
    if deterministic in ("c", "ct"):
        cols.append(np.ones(n))
    if deterministic == "ct":
        cols.append(np.arange(1.0, n + 1.0))
    return cols


def _ols(X: np.ndarray, y: np.ndarray):
    """Least squares with coefficient standard errors.

    Returns (beta, bse, resid, s2) where s2 uses the n-k divisor.
    """
    n, k = X.shape
    if n <= k:
        raise ShortSeriesError(f"regression needs more than {k} observations, got {n}")
    beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < k:
        raise DataError("regression design matrix is rank deficient")
    resid = y - X @ beta
    s2 = float(resid @ resid) / (n - k)
    xtx_inv = np.linalg.inv(X.T @ X)
    bse = np.sqrt(s2 * np.diag(xtx_inv))
    return beta, bse, resid, s2


def _nested_ssr(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Residual sums of squares for every prefix of the columns of X.

    One QR factorization of [X | y] yields the SSR of the regression on the
    first m columns as the squared tail of the last column of R, so the lag
    search costs a single decomposition.
    """
    A = np.column_stack([X, y])
    R = np.linalg.qr(A, mode="r")
    tail = R[:, -1] ** 2
    total = np.cumsum(tail[::-1])[::-1]
    # total[m] = SSR when regressing on the first m columns
    return total[: X.shape[1] + 1]


def adf_test(
    x,
    deterministic: str = "c",
    max_lags: int | None = None,
    lags: int | None = None,
) -> UnitRootResult:
    """Augmented Dickey-Fuller t test with AIC lag selection.

    The lag search minimizes Gaussian AIC over 0..max_lags augmentation
    terms with all candidate regressions sharing the sample trimmed to
    max_lags, then the chosen model is re-estimated on the longest sample
    it allows.  Pass ``lags`` to skip the search.
    """
    y = np.asarray(x, dtype=float)
    n = y.size
    if n < 20:
        raise ShortSeriesError("unit-root tests need at least 20 observations")
    dy = np.diff(y)
    n_det = len(_deterministic_columns(deterministic, 1))

    if lags is None:
        if max_lags is None:
            max_lags = schwert_max_lags(n)
        # keep enough residual degrees of freedom at the deepest lag
        max_lags = max(0, min(max_lags, (dy.size - n_det - 3) // 2))
        k = max_lags
        nobs_sel = dy.size - k
        rows = slice(k, dy.size)
        lhs = dy[rows]
        cols = _deterministic_columns(deterministic, nobs_sel)
        cols.append(y[k : n - 1])
        for j in range(1, k + 1):
            cols.append(dy[k - j : dy.size - j])
        X = np.column_stack(cols)
        ssr = _nested_ssr(X, lhs)
        base = n_det + 1
        aic = np.empty(k + 1)
        for m in range(k + 1):
            p = base + m
            aic[m] = nobs_sel * np.log(ssr[p] / nobs_sel) + 2.0 * p
        best_lag = int(np.argmin(aic))
    else:
        if lags < 0:
            raise DataError("lags must be non-negative")
        best_lag = int(lags)

    k = best_lag
    nobs = dy.size - k
    lhs = dy[k:]
    cols = _deterministic_columns(deterministic, nobs)
    cols.append(y[k : n - 1])
    for j in range(1, k + 1):
        cols.append(dy[k - j : dy.size - j])
    X = np.column_stack(cols)
    beta, bse, _, _ = _ols(X, lhs)
    idx = n_det
    stat = float(beta[idx] / bse[idx])

    cv = dickey_fuller_critical_values(deterministic, nobs)
    return UnitRootResult(
        test="adf",
        null="unit root",
        deterministic=deterministic,
        statistic=stat,
        p_value=dickey_fuller_p_value(stat, deterministic),
        p_value_method="MacKinnon response surface (approximate)",
        critical_values=cv,
        lags=k,
        n_obs=nobs,
        reject_5pct=stat < cv["5%"],
    )


def pp_test(x, deterministic: str = "c", bandwidth: int | None = None) -> UnitRootResult:
    """Phillips-Perron Z-tau test.

    Estimates the unaugmented regression of y_t on its lag and the chosen
    deterministic terms, then corrects the t statistic for serial
    correlation with a Bartlett long-run variance of the residuals at the
    fixed Newey-West bandwidth:

        Z_tau = tau * sqrt(g0 / lam2)
                - n * se(rho) * (lam2 - g0) / (2 * sqrt(lam2) * s)

    with g0 the residual variance at the 1/n divisor and s the regression
    standard error.
    """
    y = np.asarray(x, dtype=float)
    n = y.size
    if n < 20:
        raise ShortSeriesError("unit-root tests need at least 20 observations")
    nobs = n - 1
    cols = _deterministic_columns(deterministic, nobs)
    cols.append(y[:-1])
    X = np.column_stack(cols)
    lhs = y[1:]
    beta, bse, u, s2 = _ols(X, lhs)
    idx = len(cols) - 1
    rho, se_rho = float(beta[idx]), float(bse[idx])
    tau = (rho - 1.0) / se_rho

    if bandwidth is None:
        bandwidth = newey_west_bandwidth(nobs)
    g0 = float(u @ u) / nobs
    lam2 = bartlett_long_run_variance(u, bandwidth)
    stat = tau * np.sqrt(g0 / lam2) - nobs * se_rho * (lam2 - g0) / (
        2.0 * np.sqrt(lam2) * np.sqrt(s2)
    )
    stat = float(stat)

    cv = dickey_fuller_critical_values(deterministic, nobs)
    return UnitRootResult(
        test="pp",
        null="unit root",
        deterministic=deterministic,
        statistic=stat,
        p_value=dickey_fuller_p_value(stat, deterministic),
        p_value_method="MacKinnon response surface (approximate)",
        critical_values=cv,
        lags=bandwidth,
        n_obs=nobs,
        reject_5pct=stat < cv["5%"],
    )


def kpss_test(x, deterministic: str = "c", bandwidth: int | None = None) -> UnitRootResult:
    """Stationarity LM test (null of level or trend stationarity).

    LM = sum_t S_t^2 / (n^2 * lam2) where S_t are partial sums of the
    residuals from regressing on a constant ("c") or constant plus trend
    ("ct"), and lam2 is their Bartlett long-run variance at the fixed
    Newey-West bandwidth.  Rejection is in the upper tail.
    """
    y = np.asarray(x, dtype=float)
    n = y.size
    if n < 20:
        raise ShortSeriesError("stationarity test needs at least 20 observations")
    if deterministic not in ("c", "ct"):
        raise DataError("stationarity test supports deterministic 'c' or 'ct' only")
    if deterministic == "c":
        e = y - y.mean()
    else:
        X = np.column_stack(_deterministic_columns("ct", n))
        beta, _, e, _ = _ols(X, y)

    if bandwidth is None:
        bandwidth = newey_west_bandwidth(n)
    lam2 = bartlett_long_run_variance(e, bandwidth)
    S = np.cumsum(e)
    stat = float(S @ S / (n * n * lam2))

    table = _KPSS_CV[deterministic]
    # interpolate the upper-tail probability; clamp outside the table
    p = float(np.interp(stat, table, _KPSS_TAILS))
    cv = {"10%": float(table[0]), "5%": float(table[1]), "1%": float(table[3])}
    return UnitRootResult(
        test="kpss",
        null="stationarity",
        deterministic=deterministic,
        statistic=stat,
        p_value=p,
        p_value_method="table interpolation (approximate)",
        critical_values=cv,
        lags=bandwidth,
        n_obs=n,
        reject_5pct=stat > cv["5%"],
    )
