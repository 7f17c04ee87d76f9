"""Reference forecasters: the naive random walk and the mean index.

Both produce constant paths; anything that cannot beat them on a given
criterion has no business being deployed on that criterion.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DataError, ShortSeriesError

__all__ = ["naive_forecast", "mean_forecast"]


def _prepare(series, h: int) -> np.ndarray:
    y = np.asarray(series, dtype=float)
    if y.size == 0:
        raise ShortSeriesError("benchmark forecasts need a non-empty series")
    if h < 1:
        raise DataError("horizon must be at least 1")
    return y


def naive_forecast(series, h: int) -> np.ndarray:
    """Repeat the last observation h times (random-walk forecast)."""
    y = _prepare(series, h)
    return np.full(h, float(y[-1]))


def mean_forecast(series, h: int) -> np.ndarray:
    """Repeat the sample mean of the series h times.

    The caller decides what the sample is; out-of-sample discipline means
    passing the train segment only.
    """
    y = _prepare(series, h)
    return np.full(h, float(np.mean(y)))
