"""Brown and Holt exponential smoothing with grid-search estimation.

Both filters are initialized from the data itself: the first smoothed
value equals the first observation, and Holt's initial trend is the first
difference Y_2 - Y_1.  One-step errors therefore start at t=2 (Brown) and
t=3 (Holt); under this initialization the earlier startup errors are
identically zero, so including them (``include_startup=True``) only
enlarges the RMSE denominator.

Parameter estimation is an exhaustive grid search minimizing the sum of
squared one-step errors: step 0.001 for Brown's alpha, a 0.01 x 0.01 grid
with a local 0.001 refinement for Holt's pair.  Ties prefer the smaller
alpha, then the smaller beta, so results are reproducible to the digit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .exceptions import DataError, ShortSeriesError

__all__ = [
    "SmoothingFit",
    "brown_filter",
    "holt_filter",
    "fit_brown",
    "fit_holt",
    "smoothing_forecast",
]


@dataclass(frozen=True)
class SmoothingFit:
    """Result of an exponential smoothing pass.

    ``fitted`` aligns with the input (same length).  ``alpha_identified``
    is False for a Holt fit whose optimal beta is 0: with a frozen trend
    the model collapses toward the level-only filter and the reported
    alpha should not be over-read.
    """

    kind: str
    alpha: float
    beta: float | None
    fitted: np.ndarray
    trend_state: np.ndarray | None
    ssr: float
    rmse: float
    n_obs: int
    n_errors: int
    alpha_identified: bool = True

    @property
    def final_level(self) -> float:
        return float(self.fitted[-1])

    @property
    def final_trend(self) -> float | None:
        if self.trend_state is None:
            return None
        return float(self.trend_state[-1])


def _check_weight(value: float, name: str) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise DataError(f"{name} must lie in [0, 1], got {value}")
    return value


def brown_filter(series, alpha: float, include_startup: bool = False) -> SmoothingFit:
    """Level-only exponential smoothing at a fixed alpha.

    Recursion: F_1 = Y_1, F_t = alpha * Y_t + (1 - alpha) * F_{t-1}.
    One-step errors are Y_t - F_{t-1} from t=2; SSR sums their squares and
    RMSE divides by the error count.
    """
    y = np.asarray(series, dtype=float)
    n = y.size
    if n < 2:
        raise ShortSeriesError("level smoothing needs at least 2 observations")
    alpha = _check_weight(alpha, "alpha")
    fitted = np.empty(n)
    fitted[0] = y[0]
    for t in range(1, n):
        fitted[t] = alpha * y[t] + (1.0 - alpha) * fitted[t - 1]
    errors = y[1:] - fitted[:-1]
    ssr = float(errors @ errors)
    n_err = n if include_startup else n - 1
    return SmoothingFit(
        kind="brown",
        alpha=alpha,
        beta=None,
        fitted=fitted,
        trend_state=None,
        ssr=ssr,
        rmse=float(np.sqrt(ssr / n_err)),
        n_obs=n,
        n_errors=n_err,
    )


def holt_filter(
    series, alpha: float, beta: float, include_startup: bool = False
) -> SmoothingFit:
    """Level-and-trend exponential smoothing at fixed (alpha, beta).

    Initialization: F_1 = Y_1 and the trend entering the t=2 update is
    Y_2 - Y_1 (so the stored trend after t=2 is again Y_2 - Y_1).
    One-step errors are Y_t - (F_{t-1} + T_{t-1}) from t=3.
    """
    y = np.asarray(series, dtype=float)
    n = y.size
    if n < 3:
        raise ShortSeriesError("trend smoothing needs at least 3 observations")
    alpha = _check_weight(alpha, "alpha")
    beta = _check_weight(beta, "beta")
    level = np.empty(n)
    trend = np.empty(n)
    level[0] = y[0]
    trend[0] = y[1] - y[0]
    for t in range(1, n):
        prior = level[t - 1] + trend[t - 1]
        level[t] = alpha * y[t] + (1.0 - alpha) * prior
        trend[t] = beta * (level[t] - level[t - 1]) + (1.0 - beta) * trend[t - 1]
    errors = y[2:] - (level[1:-1] + trend[1:-1])
    ssr = float(errors @ errors)
    n_err = n if include_startup else n - 2
    return SmoothingFit(
        kind="holt",
        alpha=alpha,
        beta=beta,
        fitted=level,
        trend_state=trend,
        ssr=ssr,
        rmse=float(np.sqrt(ssr / n_err)),
        n_obs=n,
        n_errors=n_err,
    )


def _brown_ssr_grid(y: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    """SSR of the level filter for every alpha at once."""
    level = np.full(alphas.size, y[0])
    ssr = np.zeros(alphas.size)
    for t in range(1, y.size):
        e = y[t] - level
        ssr += e * e
        level += alphas * e
    return ssr


def _grid(step: float) -> np.ndarray:
    step = float(step)
    if not (0.0 < step <= 0.5):
        raise DataError(f"grid step must lie in (0, 0.5], got {step}")
    n = int(np.ceil(1.0 / step - 1e-9))
    return np.round(np.minimum(np.arange(0, n + 1) * step, 1.0), 9)


def fit_brown(
    series, include_startup: bool = False, grid_step: float = 0.001
) -> SmoothingFit:
    """Grid search for the SSR-minimizing alpha (default step 0.001)."""
    y = np.asarray(series, dtype=float)
    if y.size < 2:
        raise ShortSeriesError("level smoothing needs at least 2 observations")
    alphas = _grid(grid_step)
    ssr = _brown_ssr_grid(y, alphas)
    best = int(np.argmin(ssr))  # first minimum = smallest alpha on ties
    return brown_filter(y, float(alphas[best]), include_startup)


def _holt_ssr_grid(y: np.ndarray, alphas: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """SSR of the trend filter over the (alpha, beta) product grid.

    Returns a matrix indexed [alpha, beta].
    """
    A = alphas[:, None]
    B = betas[None, :]
    shape = (alphas.size, betas.size)
    level = np.full(shape, y[0])
    trend = np.full(shape, y[1] - y[0])
    ssr = np.zeros(shape)
    for t in range(1, y.size):
        prior = level + trend
        if t >= 2:
            e = y[t] - prior
            ssr += e * e
        new_level = A * y[t] + (1.0 - A) * prior
        trend = B * (new_level - level) + (1.0 - B) * trend
        level = new_level
    return ssr


def _argmin_lex(ssr: np.ndarray) -> tuple[int, int]:
    """Index of the minimal cell, ties resolved by row then column order."""
    flat = int(np.argmin(ssr))  # C order scans alpha first, beta second
    return flat // ssr.shape[1], flat % ssr.shape[1]


def fit_holt(
    series, include_startup: bool = False, grid_step: float = 0.001
) -> SmoothingFit:
    """Two-stage grid search for (alpha, beta): coarse grid at 10x the step,
    then a local refinement at the step itself."""
    y = np.asarray(series, dtype=float)
    if y.size < 3:
        raise ShortSeriesError("trend smoothing needs at least 3 observations")
    step = float(grid_step)
    coarse_step = min(10.0 * step, 0.5)
    coarse = _grid(coarse_step)
    ssr = _holt_ssr_grid(y, coarse, coarse)
    ia, ib = _argmin_lex(ssr)
    a0, b0 = float(coarse[ia]), float(coarse[ib])

    def _local(center: float) -> np.ndarray:
        lo = max(0.0, center - coarse_step)
        hi = min(1.0, center + coarse_step)
        steps = int(round((hi - lo) / step))
        return np.round(lo + np.arange(steps + 1) * step, 9)

    alphas, betas = _local(a0), _local(b0)
    ssr = _holt_ssr_grid(y, alphas, betas)
    ia, ib = _argmin_lex(ssr)
    alpha, beta = float(alphas[ia]), float(betas[ib])
    fit = holt_filter(y, alpha, beta, include_startup)
    if beta == 0.0:
        fit = replace(fit, alpha_identified=False)
    return fit


def smoothing_forecast(fit: SmoothingFit, horizon: int) -> np.ndarray:
    """Out-of-sample path: flat at the final level (Brown) or affine in the
    horizon with the final trend as slope (Holt)."""
    if horizon < 1:
        raise DataError("horizon must be at least 1")
    h = np.arange(1, horizon + 1, dtype=float)
    if fit.kind == "brown":
        return np.full(horizon, fit.final_level)
    return fit.final_level + h * fit.final_trend
