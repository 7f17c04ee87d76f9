"""Core series types and transformations.

A :class:`PriceSeries` holds dated exchange-rate levels; everything else in
the package works on the derived :class:`ReturnSeries` of percent one-period
changes.  Descriptive statistics follow the conventions of the classic
econometrics packages: population moment ratios for skewness and kurtosis,
a sample (n-1) divisor for the standard deviation, and a mode taken over
values rounded to three decimals.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from datetime import date as Date

import numpy as np

from .exceptions import (
    DataError,
    DegenerateSeriesError,
    ShortSeriesError,
)

__all__ = [
    "PriceSeries",
    "ReturnSeries",
    "SplitSpec",
    "TrainTestSplit",
    "DescriptiveStats",
    "FrequencyReport",
    "compute_returns",
    "difference",
    "split",
    "describe",
    "frequency_discrimination",
    "leverage_correlation",
]


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise DataError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def _check_dates(dates, n: int) -> tuple[Date, ...]:
    dates = tuple(dates)
    if len(dates) != n:
        raise DataError(f"got {len(dates)} dates for {n} values")
    for d in dates:
        if not isinstance(d, Date):
            raise DataError(f"dates must be datetime.date, got {type(d).__name__}")
    for a, b in zip(dates, dates[1:]):
        if a >= b:
            raise DataError(f"dates must be strictly increasing, {a} !< {b}")
    return dates


@dataclass(frozen=True)
class PriceSeries:
    """Dated positive exchange-rate levels in strictly increasing date order."""

    dates: tuple[Date, ...]
    values: np.ndarray

    def __post_init__(self):
        arr = _as_float_array(self.values, "values")
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "dates", _check_dates(self.dates, arr.size))
        if arr.size < 2:
            raise ShortSeriesError("a price series needs at least 2 observations")
        if np.any(arr <= 0.0):
            raise DataError("price series must be strictly positive")

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return np.array(self.values, dtype=dtype)


@dataclass(frozen=True)
class ReturnSeries:
    """Dated percent returns (or differences of them).

    ``derivation`` records how the series was produced, e.g. ``"pct_change"``
    for Eq.-style percent returns of prices or ``"diff(pct_change, 1)"``
    after one round of differencing.
    """

    dates: tuple[Date, ...]
    values: np.ndarray
    derivation: str = "pct_change"

    def __post_init__(self):
        arr = _as_float_array(self.values, "values")
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "dates", _check_dates(self.dates, arr.size))
        if arr.size < 1:
            raise ShortSeriesError("a return series needs at least 1 observation")

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return np.array(self.values, dtype=dtype)

    def slice(self, start: int, stop: int) -> "ReturnSeries":
        """Contiguous sub-series over ``values[start:stop]``."""
        if not (0 <= start < stop <= len(self)):
            raise DataError(f"invalid slice [{start}:{stop}] of length {len(self)}")
        return ReturnSeries(
            self.dates[start:stop], self.values[start:stop], self.derivation
        )


@dataclass(frozen=True)
class SplitSpec:
    """Chronological split rule: the first floor(train_fraction * n) points train.

    ``train_length`` overrides the fraction with an explicit count, which
    pins a split exactly when a fraction would land one observation off.
    """

    train_fraction: float = 0.85
    train_length: int | None = None

    def __post_init__(self):
        if not (0.0 < self.train_fraction < 1.0):
            raise DataError("train_fraction must lie strictly between 0 and 1")
        if self.train_length is not None and self.train_length < 1:
            raise DataError("train_length must be positive when given")


@dataclass(frozen=True)
class TrainTestSplit:
    train: ReturnSeries
    test: ReturnSeries
    spec: SplitSpec

    @property
    def n_train(self) -> int:
        return len(self.train)

    @property
    def n_test(self) -> int:
        return len(self.test)


@dataclass(frozen=True)
class DescriptiveStats:
    """Location, dispersion and shape summary of a return series.

    ``skewness`` and ``kurtosis`` use population central moment ratios
    (kurtosis is not excess); ``std_dev`` uses the n-1 divisor; ``mode``
    is the most frequent value after rounding to 3 decimals with ties
    resolved toward zero.  ``jb_stat`` is the joint normality statistic
    n/6 (S^2 + (K-3)^2 / 4) with its chi-square(2) upper tail probability.
    """

    n_obs: int
    mean: float
    median: float
    mode: float
    maximum: float
    minimum: float
    std_dev: float
    skewness: float
    kurtosis: float
    jb_stat: float
    jb_prob: float


@dataclass(frozen=True)
class FrequencyReport:
    """Sign composition and extreme run lengths of a return series."""

    n_obs: int
    count_zero: int
    count_negative: int
    count_positive: int
    max_run_negative: int
    max_run_positive: int
    max_run_increasing: int
    max_run_decreasing: int

    @property
    def pct_zero(self) -> float:
        return 100.0 * self.count_zero / self.n_obs

    @property
    def pct_negative(self) -> float:
        return 100.0 * self.count_negative / self.n_obs

    @property
    def pct_positive(self) -> float:
        return 100.0 * self.count_positive / self.n_obs

    @property
    def percentages(self) -> tuple[float, float, float]:
        return (self.pct_zero, self.pct_negative, self.pct_positive)


def compute_returns(prices: PriceSeries) -> ReturnSeries:
    """Percent one-period returns: 100 * (P_t - P_{t-1}) / P_{t-1}.

    The return for a date is the change into that date, so the output is one
    observation shorter than the input and starts at the second price date.
    """
    p = prices.values
    r = 100.0 * (p[1:] - p[:-1]) / p[:-1]
    return ReturnSeries(prices.dates[1:], r, derivation="pct_change")


def difference(series: ReturnSeries, d: int = 1) -> ReturnSeries:
    """Apply the difference operator d times: (1 - L)^d y."""
    if d < 0:
        raise DataError("difference order must be non-negative")
    if d == 0:
        return series
    if len(series) <= d:
        raise ShortSeriesError(
            f"cannot difference {len(series)} observations {d} times"
        )
    vals = np.diff(series.values, n=d)
    tag = f"diff({series.derivation}, {d})"
    return ReturnSeries(series.dates[d:], vals, derivation=tag)


def split(series: ReturnSeries, spec: SplitSpec | None = None) -> TrainTestSplit:
    """Chronological train/test split; train length is floor(fraction * n)."""
    spec = spec or SplitSpec()
    n = len(series)
    if spec.train_length is not None:
        n_train = spec.train_length
    else:
        n_train = int(np.floor(spec.train_fraction * n))
    if n_train < 1 or n - n_train < 1:
        raise ShortSeriesError(
            f"split of {n} observations at fraction {spec.train_fraction} "
            "leaves an empty train or test set"
        )
    return TrainTestSplit(
        train=series.slice(0, n_train),
        test=series.slice(n_train, n),
        spec=spec,
    )


def _mode_rounded(values: np.ndarray, decimals: int = 3) -> float:
    """Most frequent value after rounding; ties resolved toward zero.

    A residual tie between +x and -x picks the smaller (negative) value so
    the result is deterministic.
    """
    rounded = np.round(values, decimals)
    # -0.0 and 0.0 must pool into one bucket
    rounded = rounded + 0.0
    counts = Counter(rounded.tolist())
    best = max(counts.items(), key=lambda kv: (kv[1], -abs(kv[0]), -kv[0]))
    return float(best[0])


def describe(series: ReturnSeries) -> DescriptiveStats:
    """Descriptive statistics block for a return series.

    Requires at least 4 observations (the kurtosis ratio needs them) and a
    non-degenerate series; zero variance raises ``DegenerateSeriesError``.
    """
    # imported here so stattests can stay free of series types
    from .stattests import jarque_bera

    x = series.values
    n = x.size
    if n < 4:
        raise ShortSeriesError("describe needs at least 4 observations")
    m = float(np.mean(x))
    dev = x - m
    m2 = float(np.mean(dev**2))
    if m2 <= 0.0:
        raise DegenerateSeriesError("series has zero variance")
    m3 = float(np.mean(dev**3))
    m4 = float(np.mean(dev**4))
    jb = jarque_bera(x)
    return DescriptiveStats(
        n_obs=n,
        mean=m,
        median=float(np.median(x)),
        mode=_mode_rounded(x),
        maximum=float(np.max(x)),
        minimum=float(np.min(x)),
        std_dev=float(np.std(x, ddof=1)),
        skewness=m3 / m2**1.5,
        kurtosis=m4 / m2**2,
        jb_stat=jb.statistic,
        jb_prob=jb.p_value,
    )


def _max_run(mask: np.ndarray) -> int:
    """Length of the longest run of True values."""
    best = cur = 0
    for flag in mask:
        cur = cur + 1 if flag else 0
        if cur > best:
            best = cur
    return best


def _max_monotone_chain(values: np.ndarray, direction: int) -> int:
    """Longest strictly monotone stretch, counted in observations.

    [1, 2, 3, 2] has an increasing chain of 3 observations and a
    decreasing chain of 2.
    """
    if values.size == 0:
        return 0
    best = cur = 1
    for a, b in zip(values[:-1], values[1:]):
        step = (b - a) * direction
        cur = cur + 1 if step > 0 else 1
        if cur > best:
            best = cur
    return best


def frequency_discrimination(series: ReturnSeries) -> FrequencyReport:
    """Counts of zero/negative/positive returns and extreme run lengths."""
    x = series.values
    return FrequencyReport(
        n_obs=x.size,
        count_zero=int(np.sum(x == 0.0)),
        count_negative=int(np.sum(x < 0.0)),
        count_positive=int(np.sum(x > 0.0)),
        max_run_negative=_max_run(x < 0.0),
        max_run_positive=_max_run(x > 0.0),
        max_run_increasing=_max_monotone_chain(x, +1),
        max_run_decreasing=_max_monotone_chain(x, -1),
    )


def leverage_correlation(series: ReturnSeries) -> float:
    """Correlation of squared returns with the previous return.

    A negative value is the classic leverage effect; exchange-rate series
    often show the opposite sign.  Needs 3 observations and non-degenerate
    inputs on both sides.
    """
    x = series.values
    if x.size < 3:
        raise ShortSeriesError("leverage correlation needs at least 3 observations")
    sq, lag = x[1:] ** 2, x[:-1]
    if np.std(sq) == 0.0 or np.std(lag) == 0.0:
        raise DegenerateSeriesError("leverage correlation undefined for constant input")
    return float(np.corrcoef(sq, lag)[0, 1])
