"""Monte Carlo verification suites for the statistical machinery.

Size suites check empirical rejection rates under the null at the nominal
5 percent level; power and recovery suites check that tests reject under
the alternative and that estimators land near the truth.  All randomness
flows from one integer seed through ``numpy.random.SeedSequence.spawn``,
so every suite is reproducible and replications are independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as ssig

from . import arima, breaks, smoothing, stattests, unitroot
from .exceptions import FxcastError

__all__ = [
    "RateResult",
    "LocalizationResult",
    "RecoveryResult",
    "mc_adf_size",
    "mc_kpss_size",
    "mc_arch_size",
    "mc_bp_size",
    "mc_adf_power",
    "mc_bp_localization",
    "mc_arma_recovery",
    "mc_ses_recovery",
    "run_size_suite",
    "run_power_suite",
]


@dataclass(frozen=True)
class RateResult:
    """Empirical frequency of a binary outcome over the replications."""

    label: str
    n_reps: int
    t: int
    rate: float
    n_failed: int = 0


@dataclass(frozen=True)
class LocalizationResult:
    """How often an estimated break index lands within the tolerance."""

    label: str
    n_reps: int
    t: int
    true_index: int
    tolerance: int
    hit_rate: float
    mean_abs_error: float


@dataclass(frozen=True)
class RecoveryResult:
    """Mean parameter estimates against the simulation truth."""

    label: str
    n_reps: int
    t: int
    truth: dict[str, float]
    estimate: dict[str, float]
    n_failed: int = 0


def _generators(seed: int, n: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def mc_adf_size(n_reps: int = 1000, t: int = 500, seed: int = 0) -> RateResult:
    """Rejection rate of the unit-root test on driftless Gaussian random
    walks; the null is true, so the rate should sit near 5 percent."""
    hits = 0
    for rng in _generators(seed, n_reps):
        x = np.cumsum(rng.standard_normal(t))
        res = unitroot.adf_test(x, deterministic="n")
        hits += res.reject_5pct
    return RateResult("adf-size-randomwalk", n_reps, t, hits / n_reps)


def mc_kpss_size(n_reps: int = 1000, t: int = 500, seed: int = 1) -> RateResult:
    """Rejection rate of the stationarity test on white noise; the null is
    true, so the rate should sit near 5 percent."""
    hits = 0
    for rng in _generators(seed, n_reps):
        x = rng.standard_normal(t)
        res = unitroot.kpss_test(x, deterministic="c")
        hits += res.reject_5pct
    return RateResult("kpss-size-whitenoise", n_reps, t, hits / n_reps)


def mc_arch_size(n_reps: int = 1000, t: int = 500, seed: int = 2) -> RateResult:
    """Rejection rate of the ARCH LM test on iid Gaussian residuals."""
    hits = 0
    for rng in _generators(seed, n_reps):
        x = rng.standard_normal(t)
        res = stattests.arch_lm(x, lags=1)
        hits += res.lm_p_value < 0.05
    return RateResult("archlm-size-iid", n_reps, t, hits / n_reps)


def mc_bp_size(
    n_reps: int = 1000,
    t: int = 500,
    seed: int = 3,
    max_breaks: int = 5,
    trimming: float = 0.15,
) -> RateResult:
    """Frequency of selecting zero breaks on white noise (no break exists)."""
    zero = 0
    for rng in _generators(seed, n_reps):
        x = rng.standard_normal(t)
        res = breaks.bai_perron(x, max_breaks=max_breaks, trimming=trimming)
        zero += res.selected_break_count == 0
    return RateResult("baiperron-zero-breaks-whitenoise", n_reps, t, zero / n_reps)


def mc_adf_power(n_reps: int = 1000, t: int = 500, seed: int = 4) -> RateResult:
    """Rejection rate of the unit-root test on white noise, where the null
    is false; a healthy test rejects essentially always."""
    hits = 0
    for rng in _generators(seed, n_reps):
        x = rng.standard_normal(t)
        res = unitroot.adf_test(x, deterministic="n")
        hits += res.reject_5pct
    return RateResult("adf-power-whitenoise", n_reps, t, hits / n_reps)


def mc_bp_localization(
    n_reps: int = 500,
    t: int = 200,
    seed: int = 5,
    shift: float = 10.0,
    tolerance: int = 3,
) -> LocalizationResult:
    """Accuracy of the global least-squares break locator on a single
    mean shift of ``shift`` standard deviations at mid-sample."""
    true_idx = t // 2
    hits = 0
    abs_err = 0.0
    for rng in _generators(seed, n_reps):
        x = rng.standard_normal(t)
        x[true_idx:] += shift
        found, _ = breaks.best_partition(x, n_breaks=1)
        err = abs(found[0] - true_idx)
        hits += err <= tolerance
        abs_err += err
    return LocalizationResult(
        label="baiperron-localization-10sigma",
        n_reps=n_reps,
        t=t,
        true_index=true_idx,
        tolerance=tolerance,
        hit_rate=hits / n_reps,
        mean_abs_error=abs_err / n_reps,
    )


def _simulate_arma(rng, t: int, phi: float, theta: float, burn: int = 200) -> np.ndarray:
    eps = rng.standard_normal(t + burn)
    x = ssig.lfilter([1.0, theta], [1.0, -phi], eps)
    return x[burn:]


def mc_arma_recovery(
    n_reps: int = 100,
    t: int = 2000,
    seed: int = 6,
    phi: float = 0.5,
    theta: float = 0.3,
) -> RecoveryResult:
    """Mean exact-MLE estimates on simulated ARMA(1,1) paths."""
    phis, thetas = [], []
    failed = 0
    spec = arima.ArimaSpec(p=1, d=0, q=1, include_constant=True)
    for rng in _generators(seed, n_reps):
        x = _simulate_arma(rng, t, phi, theta)
        try:
            f = arima.fit(x, spec, n_starts=3, n_polish=1)
        except FxcastError:
            failed += 1
            continue
        phis.append(f.ar_params[0])
        thetas.append(f.ma_params[0])
    return RecoveryResult(
        label="arma11-recovery",
        n_reps=n_reps,
        t=t,
        truth={"phi": phi, "theta": theta},
        estimate={
            "phi": float(np.mean(phis)) if phis else float("nan"),
            "theta": float(np.mean(thetas)) if thetas else float("nan"),
        },
        n_failed=failed,
    )


def mc_ses_recovery(
    n_reps: int = 100, t: int = 500, seed: int = 7, alpha: float = 0.3
) -> RecoveryResult:
    """Mean grid-search alpha on paths simulated from the level-smoothing
    innovations form: the level moves by alpha times the shock, and the
    one-step error at the true alpha is exactly the shock."""
    estimates = []
    for rng in _generators(seed, n_reps):
        eps = rng.standard_normal(t)
        y = np.empty(t)
        level = 0.0
        for i in range(t):
            y[i] = level + eps[i]
            level += alpha * eps[i]
        fit = smoothing.fit_brown(y)
        estimates.append(fit.alpha)
    return RecoveryResult(
        label="ses-alpha-recovery",
        n_reps=n_reps,
        t=t,
        truth={"alpha": alpha},
        estimate={"alpha": float(np.mean(estimates))},
    )


def run_size_suite(n_reps: int = 1000, t: int = 500, seed: int = 20220516):
    """The four null-calibration checks, seeded independently."""
    children = np.random.SeedSequence(seed).spawn(4)
    sub = [int(c.generate_state(1)[0]) for c in children]
    return (
        mc_adf_size(n_reps, t, seed=sub[0]),
        mc_kpss_size(n_reps, t, seed=sub[1]),
        mc_arch_size(n_reps, t, seed=sub[2]),
        mc_bp_size(n_reps, t, seed=sub[3]),
    )


def run_power_suite(seed: int = 20220516):
    """The power and recovery checks at their reference sizes."""
    children = np.random.SeedSequence(seed).spawn(4)
    sub = [int(c.generate_state(1)[0]) for c in children]
    return (
        mc_adf_power(seed=sub[0]),
        mc_bp_localization(seed=sub[1]),
        mc_arma_recovery(seed=sub[2]),
        mc_ses_recovery(seed=sub[3]),
    )
