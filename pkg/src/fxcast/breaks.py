"""Multiple structural breaks in the mean of a series.

Implements the pure mean-shift case of the Bai-Perron framework: break
dates come from global least-squares segmentation (dynamic programming
over admissible partitions), and the sequential sup-F test of l+1 versus
l breaks decides how many breaks the series supports.  The F statistics
use per-segment Bartlett long-run variances at the fixed Newey-West
bandwidth, so error distributions may differ across regimes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, NumericalError, ShortSeriesError
from .hac import bartlett_long_run_variance, newey_west_bandwidth

__all__ = [
    "BreakTestRow",
    "BreakResult",
    "bai_perron",
    "best_partition",
    "SUP_F_CRITICAL_5PCT",
]

# 5 percent critical values of the sequential sup F(l+1 | l) test for a
# single breaking regressor at 15 percent trimming, l = 0..4.
SUP_F_CRITICAL_5PCT = (8.58, 10.13, 11.14, 11.83, 12.25)


@dataclass(frozen=True)
class BreakTestRow:
    """One step of the sequential testing procedure."""

    label: str
    f_stat: float
    scaled_f_stat: float
    critical_value: float
    reject: bool


@dataclass(frozen=True)
class BreakResult:
    """Sequentially determined break count with supporting test rows.

    ``break_indices`` holds the first index of each new regime (empty when
    no break is found); ``segment_means`` has one entry per regime.
    """

    trimming: float
    min_segment: int
    max_breaks: int
    tests: tuple[BreakTestRow, ...]
    selected_break_count: int
    break_indices: tuple[int, ...]
    segment_means: tuple[float, ...]
    n_obs: int


def _prefix_sums(y: np.ndarray):
    s1 = np.concatenate([[0.0], np.cumsum(y)])
    s2 = np.concatenate([[0.0], np.cumsum(y * y)])
    return s1, s2


def _segment_ssr(s1, s2, i, j):
    """SSR around the segment mean over [i, j), vectorized in either bound."""
    n = j - i
    tot = s1[j] - s1[i]
    return (s2[j] - s2[i]) - tot * tot / n


def best_partition(x, n_breaks: int, trimming: float = 0.15) -> tuple[tuple[int, ...], float]:
    """Global SSR-minimizing segmentation with ``n_breaks`` breaks.

    Every segment must hold at least max(2, floor(trimming * n))
    observations.  Returns the break indices (first index of each new
    segment) and the minimized total SSR.  Dynamic programming over
    admissible partitions; an exhaustive enumeration gives the same
    optimum, just slower.
    """
    y = np.asarray(x, dtype=float)
    n = y.size
    if n_breaks < 1:
        raise DataError("n_breaks must be at least 1")
    h = _min_segment(n, trimming)
    if (n_breaks + 1) * h > n:
        raise ShortSeriesError(
            f"{n_breaks} breaks with minimum segment {h} do not fit in {n} observations"
        )
    s1, s2 = _prefix_sums(y)

    # V[k][i] = minimal SSR of splitting [i, n) into k segments
    # choice[k][i] = optimal boundary j (start of the second segment)
    idx = np.arange(n + 1)
    V_prev = np.full(n + 1, np.inf)
    starts_last = np.arange(0, n - h + 1)
    V_prev[starts_last] = _segment_ssr(s1, s2, starts_last, n)
    choices = []
    for k in range(2, n_breaks + 2):
        V_cur = np.full(n + 1, np.inf)
        choice = np.full(n + 1, -1, dtype=int)
        max_start = n - k * h
        for i in range(0, max_start + 1):
            js = np.arange(i + h, n - (k - 1) * h + 1)
            cand = _segment_ssr(s1, s2, i, js) + V_prev[js]
            pos = int(np.argmin(cand))
            V_cur[i] = cand[pos]
            choice[i] = js[pos]
        choices.append(choice)
        V_prev = V_cur

    ssr = float(V_prev[0])
    breaks = []
    i = 0
    for choice in reversed(choices):
        j = int(choice[i])
        breaks.append(j)
        i = j
    return tuple(breaks), ssr


def _min_segment(n: int, trimming: float) -> int:
    if not (0.0 < trimming < 0.5):
        raise DataError("trimming must lie strictly between 0 and 0.5")
    return max(2, int(np.floor(trimming * n)))


def _mean_shift_f(y: np.ndarray, boundaries: list[int], p_common: int = 0) -> float:
    """HAC F statistic for equality of segment means.

    ``boundaries`` are the inner break indices of the candidate partition.
    The Wald form uses per-segment long-run variances (Bartlett kernel,
    fixed Newey-West bandwidth) and the Bai-Perron small-sample scaling
    (T - (k+1) q - p) / (k q T) with q = 1 breaking regressor.
    """
    n = y.size
    k = len(boundaries)
    edges = [0, *boundaries, n]
    means = np.empty(k + 1)
    var_means = np.empty(k + 1)
    for j in range(k + 1):
        seg = y[edges[j] : edges[j + 1]]
        t_j = seg.size
        means[j] = seg.mean()
        lam2 = bartlett_long_run_variance(
            seg - means[j], newey_west_bandwidth(t_j)
        )
        if lam2 <= 0.0:
            raise NumericalError("degenerate segment variance in break test")
        var_means[j] = lam2 / t_j
    d = np.diff(means)
    # covariance of adjacent mean differences is tridiagonal
    V = np.zeros((k, k))
    for i in range(k):
        V[i, i] = var_means[i] + var_means[i + 1]
        if i + 1 < k:
            V[i, i + 1] = V[i + 1, i] = -var_means[i + 1]
    try:
        w = float(d @ np.linalg.solve(V, d))
    except np.linalg.LinAlgError as exc:
        raise NumericalError("singular covariance in break test") from exc
    q = 1
    return w * (n - (k + 1) * q - p_common) / (n * k * q)


def _best_single_break(s1, s2, lo: int, hi: int, h: int) -> int | None:
    """SSR-minimizing single break of [lo, hi), None if no admissible date."""
    if hi - lo < 2 * h:
        return None
    js = np.arange(lo + h, hi - h + 1)
    ssr = _segment_ssr(s1, s2, lo, js) + _segment_ssr(s1, s2, js, hi)
    return int(js[np.argmin(ssr)])


def bai_perron(x, max_breaks: int = 5, trimming: float = 0.15) -> BreakResult:
    """Sequential sup-F determination of the number of mean breaks.

    Starting from zero breaks, the test of l+1 versus l breaks takes the
    best additional break date (by SSR) within each current regime,
    evaluates the HAC F statistic on that regime, and compares the largest
    of these with the 5 percent critical value.  On rejection the l+1
    break dates are re-estimated by global SSR minimization and the
    procedure repeats, stopping at the first non-rejection or at
    ``max_breaks``.
    """
    y = np.asarray(x, dtype=float)
    n = y.size
    if max_breaks < 1:
        raise DataError("max_breaks must be at least 1")
    if max_breaks > len(SUP_F_CRITICAL_5PCT):
        raise DataError(f"critical values available up to {len(SUP_F_CRITICAL_5PCT)} breaks")
    h = _min_segment(n, trimming)
    if n < 2 * h or n < 10:
        raise ShortSeriesError("series too short for a break search at this trimming")
    s1, s2 = _prefix_sums(y)

    tests: list[BreakTestRow] = []
    current: list[int] = []
    while len(current) < max_breaks:
        ell = len(current)
        edges = [0, *current, n]
        best_f = None
        for a, b in zip(edges[:-1], edges[1:]):
            j = _best_single_break(s1, s2, a, b, h)
            if j is None:
                continue
            f = _mean_shift_f(y[a:b], [j - a])
            if best_f is None or f > best_f:
                best_f = f
        if best_f is None:
            break  # no regime can host another admissible break
        crit = SUP_F_CRITICAL_5PCT[ell]
        reject = best_f > crit
        tests.append(
            BreakTestRow(
                label=f"{ell} vs. {ell + 1}",
                f_stat=best_f,
                scaled_f_stat=best_f,  # one breaking regressor
                critical_value=crit,
                reject=reject,
            )
        )
        if not reject:
            break
        current = list(best_partition(y, ell + 1, trimming)[0])

    edges = [0, *current, n]
    seg_means = tuple(float(y[a:b].mean()) for a, b in zip(edges[:-1], edges[1:]))
    return BreakResult(
        trimming=trimming,
        min_segment=h,
        max_breaks=max_breaks,
        tests=tuple(tests),
        selected_break_count=len(current),
        break_indices=tuple(current),
        segment_means=seg_means,
        n_obs=n,
    )
