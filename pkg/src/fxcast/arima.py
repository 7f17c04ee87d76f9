"""ARMA/ARIMA modeling: correlogram, exact Gaussian MLE, selection, forecasts.

Estimation maximizes the exact Gaussian likelihood computed by the
state-space innovations recursion with the stationary initial covariance,
concentrating the innovation variance out.  AR and MA coefficients are
optimized through a partial-autocorrelation reparameterization, which
keeps the AR polynomial strictly stationary and the MA polynomial
invertible at every iterate, boundary solutions appearing as partial
autocorrelations saturating toward one.

The search starts from 5 deterministic seeds (zeros, a Hannan-Rissanen
style two-stage estimate, and three fixed patterns).  Each seed is first
refined on the cheap conditional-sum-of-squares surface; the best distinct
survivors then get the full treatment on the exact likelihood: a
derivative-free simplex pass followed by quasi-Newton refinement.  The
likelihood recursion switches to its steady state once the innovation
variance converges, so a single evaluation costs far less than a naive
filter sweep on long series.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize as sopt
from scipy import signal as ssig
from scipy import stats as sps

from .exceptions import (
    ConvergenceError,
    DataError,
    DegenerateSeriesError,
    ShortSeriesError,
)
from .stattests import sample_autocorrelations

__all__ = [
    "ArimaSpec",
    "Coefficient",
    "ArimaFit",
    "CorrelogramRow",
    "correlogram",
    "fit",
    "information_criteria",
    "select",
    "forecast",
]


@dataclass(frozen=True)
class ArimaSpec:
    """Model order (p, d, q) plus whether a mean term is estimated.

    The constant is parameterized as the unconditional mean of the
    d-differenced series, the convention under which the reported C for a
    near-zero-mean series is itself near zero.
    """

    p: int
    d: int
    q: int
    include_constant: bool = True

    def __post_init__(self):
        if min(self.p, self.d, self.q) < 0:
            raise DataError("model orders must be non-negative")
        if self.p + self.q == 0 and not self.include_constant and self.d == 0:
            raise DataError("empty model: no AR/MA terms, no constant, no differencing")

    @property
    def n_params(self) -> int:
        """Parameters counted by the information criteria: constant + p + q."""
        return int(self.include_constant) + self.p + self.q

    def label(self) -> str:
        return f"ARIMA({self.p},{self.d},{self.q})"


@dataclass(frozen=True)
class Coefficient:
    name: str
    value: float
    std_error: float
    t_stat: float
    p_value: float


@dataclass(frozen=True)
class ArimaFit:
    """Exact-MLE estimate of an ARIMA model.

    ``residuals`` are the one-step innovations on the differenced scale
    and cover the full effective sample.  ``boundary`` flags an optimum
    with a partial autocorrelation pushed against the unit circle, where
    curvature-based standard errors stop being trustworthy.
    """

    spec: ArimaSpec
    coefficients: tuple[Coefficient, ...]
    constant: float | None
    ar_params: np.ndarray
    ma_params: np.ndarray
    sigma2: float
    log_likelihood: float
    aic: float
    bic: float
    hq: float
    residuals: np.ndarray
    r_squared: float
    adj_r_squared: float
    f_stat: float | None
    n_obs: int
    converged: bool
    boundary: bool


@dataclass(frozen=True)
class CorrelogramRow:
    lag: int
    acf: float
    pacf: float
    band: float


# ---------------------------------------------------------------------------
# parameter transforms


def _pacf_to_ar(r: np.ndarray) -> np.ndarray:
    """Durbin-Levinson map from partial autocorrelations to AR coefficients."""
    phi = np.empty(0)
    for k, rk in enumerate(r, start=1):
        new = np.empty(k)
        new[k - 1] = rk
        if k > 1:
            new[: k - 1] = phi - rk * phi[::-1]
        phi = new
    return phi


def _ar_to_pacf(phi: np.ndarray) -> np.ndarray:
    """Inverse Durbin-Levinson; raises for a non-stationary polynomial."""
    work = np.asarray(phi, dtype=float).copy()
    p = work.size
    r = np.empty(p)
    for k in range(p, 0, -1):
        rk = work[k - 1]
        if abs(rk) >= 1.0:
            raise DataError("polynomial is not strictly stationary/invertible")
        r[k - 1] = rk
        if k > 1:
            prev = (work[: k - 1] + rk * work[: k - 1][::-1]) / (1.0 - rk * rk)
            work = prev
    return r


def _squash(z: np.ndarray) -> np.ndarray:
    """Unconstrained reals to (-1, 1): z / sqrt(1 + z^2)."""
    return z / np.sqrt(1.0 + z * z)


def _unsquash(r: np.ndarray) -> np.ndarray:
    r = np.clip(r, -0.999999, 0.999999)
    return r / np.sqrt(1.0 - r * r)


def _unpack_params(theta_vec: np.ndarray, p: int, q: int, with_const: bool):
    """Split the optimizer vector into (mu, phi, theta) in natural units."""
    i = 0
    mu = 0.0
    if with_const:
        mu = float(theta_vec[0])
        i = 1
    phi = _pacf_to_ar(_squash(theta_vec[i : i + p]))
    i += p
    # invertibility of 1 + th_1 L + ... reduces to stationarity of -th
    theta = -_pacf_to_ar(_squash(theta_vec[i : i + q]))
    return mu, phi, theta


def _pack_params(mu: float, phi: np.ndarray, theta: np.ndarray, with_const: bool):
    parts = []
    if with_const:
        parts.append([mu])
    parts.append(_unsquash(_ar_to_pacf(phi)))
    parts.append(_unsquash(_ar_to_pacf(-np.asarray(theta, dtype=float))))
    return np.concatenate([np.atleast_1d(np.asarray(x, dtype=float)) for x in parts])


# ---------------------------------------------------------------------------
# exact likelihood via the innovations recursion


def _state_matrices(phi: np.ndarray, theta: np.ndarray):
    p, q = phi.size, theta.size
    r = max(p, q + 1, 1)
    T = np.zeros((r, r))
    T[:p, 0] = phi
    T[: r - 1, 1:] = np.eye(r - 1)
    R = np.zeros(r)
    R[0] = 1.0
    R[1 : q + 1] = theta
    return T, R


def _stationary_cov(T: np.ndarray, R: np.ndarray) -> np.ndarray:
    r = T.shape[0]
    Q = np.outer(R, R)
    A = np.eye(r * r) - np.kron(T, T)
    vec = np.linalg.solve(A, Q.reshape(-1))
    return vec.reshape(r, r)


def _innovations(
    x: np.ndarray,
    phi: np.ndarray,
    theta: np.ndarray,
    return_state: bool = False,
):
    """One-step innovations v_t and scaled variances F_t (sigma^2 = 1).

    Runs the exact filter until F converges to its steady state, then
    finishes with the equivalent whitening recursion in one vectorized
    call.  With ``return_state`` the loop runs to the end and the
    predicted state for t = n+1 is returned as well.
    """
    n = x.size
    T, R = _state_matrices(phi, theta)
    r = T.shape[0]
    P = _stationary_cov(T, R)
    Q = np.outer(R, R)
    a = np.zeros(r)
    v = np.empty(n)
    F = np.empty(n)
    f_prev = -1.0
    hits = 0
    switch = None
    p, q = phi.size, theta.size
    min_steps = max(p, q) + 1
    for t in range(n):
        f = P[0, 0]
        if not np.isfinite(f) or f <= 0.0:
            return None
        v[t] = x[t] - a[0]
        F[t] = f
        K = (T @ P)[:, 0] / f
        a = T @ a + K * v[t]
        P = T @ P @ T.T + Q - np.outer(K, K) * f
        if not return_state:
            if abs(f - f_prev) <= 1e-13 * f:
                hits += 1
                if hits >= 3 and t + 1 >= min_steps and n - (t + 1) > 64:
                    switch = t + 1
                    break
            else:
                hits = 0
        f_prev = f

    if switch is not None:
        # steady state: innovations follow the whitening ARMA recursion
        b = np.concatenate([[1.0], -phi])
        a_poly = np.concatenate([[1.0], theta])
        m = max(p, q)
        if m > 0:
            hist = slice(switch - 1, switch - 1 - m, -1)
            zi = ssig.lfiltic(b, a_poly, v[hist], x[hist])
            v[switch:] = ssig.lfilter(b, a_poly, x[switch:], zi=zi)[0]
        else:
            v[switch:] = x[switch:]
        F[switch:] = F[switch - 1]

    if return_state:
        return v, F, a
    return v, F


def _concentrated_loglik(x: np.ndarray, phi: np.ndarray, theta: np.ndarray) -> float:
    out = _innovations(x, phi, theta)
    if out is None:
        return -np.inf
    v, F = out
    n = x.size
    s = float(np.sum(v * v / F))
    if not np.isfinite(s) or s <= 0.0:
        return -np.inf
    logdet = float(np.sum(np.log(F)))
    return -0.5 * n * (np.log(2.0 * np.pi) + np.log(s / n) + 1.0) - 0.5 * logdet


def _css_objective(x: np.ndarray, phi: np.ndarray, theta: np.ndarray) -> float:
    """Concentrated conditional sum-of-squares criterion (to minimize)."""
    b = np.concatenate([[1.0], -phi])
    a_poly = np.concatenate([[1.0], theta])
    v = ssig.lfilter(b, a_poly, x)
    s = float(v @ v)
    if not np.isfinite(s) or s <= 0.0:
        return np.inf
    return np.log(s / x.size)


# ---------------------------------------------------------------------------
# estimation


def information_criteria(log_likelihood: float, n_params: int, n_obs: int) -> dict:
    """Per-observation information criteria.

    AIC = (-2 l + 2 k) / T, BIC = (-2 l + k ln T) / T,
    HQ = (-2 l + 2 k ln ln T) / T, with k the count of mean-model
    coefficients (constant + AR + MA; the innovation variance is not
    counted).
    """
    if n_obs <= n_params:
        raise DataError("information criteria need n_obs > n_params")
    if n_obs < 3:
        raise DataError("information criteria need at least 3 observations")
    t = float(n_obs)
    k = float(n_params)
    neg2l = -2.0 * log_likelihood
    return {
        "aic": (neg2l + 2.0 * k) / t,
        "bic": (neg2l + k * np.log(t)) / t,
        "hq": (neg2l + 2.0 * k * np.log(np.log(t))) / t,
    }


def _hannan_rissanen(x: np.ndarray, p: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Two-stage regression start values, clipped into the feasible region."""
    n = x.size
    L = min(max(p + q + 2, 8), max(n // 4, 1))
    if n - L < 5 * (p + q + 1):
        return np.zeros(p), np.zeros(q)
    cols = [x[L - j : n - j] for j in range(1, L + 1)]
    X = np.column_stack(cols)
    beta, *_ = np.linalg.lstsq(X, x[L:], rcond=None)
    e = np.zeros(n)
    e[L:] = x[L:] - X @ beta
    m = max(p, q)
    rows = slice(L + m, n)
    cols = [x[L + m - i : n - i] for i in range(1, p + 1)]
    cols += [e[L + m - j : n - j] for j in range(1, q + 1)]
    if not cols:
        return np.zeros(p), np.zeros(q)
    X2 = np.column_stack(cols)
    beta2, *_ = np.linalg.lstsq(X2, x[rows], rcond=None)
    phi = beta2[:p]
    theta = beta2[p : p + q]
    # project into the open stationarity/invertibility region
    try:
        phi = _pacf_to_ar(np.clip(_ar_to_pacf(phi), -0.9, 0.9))
    except DataError:
        phi = np.zeros(p)
    try:
        theta = -_pacf_to_ar(np.clip(_ar_to_pacf(-theta), -0.9, 0.9))
    except DataError:
        theta = np.zeros(q)
    return phi, theta


def _start_points(x: np.ndarray, p: int, q: int, with_const: bool) -> list[np.ndarray]:
    """The 5 deterministic seeds in optimizer coordinates."""
    mu0 = float(np.mean(x)) if with_const else 0.0
    hr_phi, hr_theta = _hannan_rissanen(x - mu0, p, q)
    seeds_natural = [
        (np.zeros(p), np.zeros(q)),
        (hr_phi, hr_theta),
        (np.zeros(p), -_pacf_to_ar(np.full(q, -0.6)) if q else np.zeros(0)),
        (_pacf_to_ar(np.full(p, 0.4)) if p else np.zeros(0), np.zeros(q)),
        (
            _pacf_to_ar(np.full(p, -0.3)) if p else np.zeros(0),
            -_pacf_to_ar(np.full(q, 0.3)) if q else np.zeros(0),
        ),
    ]
    seeds = []
    for phi, theta in seeds_natural:
        try:
            seeds.append(_pack_params(mu0, phi, theta, with_const))
        except DataError:
            continue
    return seeds


def _fit_mean_only(x: np.ndarray, spec: ArimaSpec) -> ArimaFit:
    """Closed form for p = q = 0: iid Gaussian with optional mean."""
    n = x.size
    mu = float(np.mean(x)) if spec.include_constant else 0.0
    resid = x - mu
    sigma2 = float(resid @ resid) / n
    if sigma2 <= 0.0:
        raise DegenerateSeriesError("zero innovation variance")
    ll = -0.5 * n * (np.log(2.0 * np.pi) + np.log(sigma2) + 1.0)
    coeffs = []
    if spec.include_constant:
        se = float(np.sqrt(sigma2 / n))
        t = mu / se
        coeffs.append(
            Coefficient("const", mu, se, t, 2.0 * float(sps.norm.sf(abs(t))))
        )
    ic = information_criteria(ll, spec.n_params, n)
    return ArimaFit(
        spec=spec,
        coefficients=tuple(coeffs),
        constant=mu if spec.include_constant else None,
        ar_params=np.zeros(0),
        ma_params=np.zeros(0),
        sigma2=sigma2,
        log_likelihood=ll,
        aic=ic["aic"],
        bic=ic["bic"],
        hq=ic["hq"],
        residuals=resid,
        r_squared=0.0,
        adj_r_squared=0.0,
        f_stat=None,
        n_obs=n,
        converged=True,
        boundary=False,
    )


def _loglik_natural(psi: np.ndarray, x: np.ndarray, p: int, q: int, with_const: bool):
    """Exact log-likelihood as a function of raw (mu, phi, theta)."""
    i = 1 if with_const else 0
    mu = psi[0] if with_const else 0.0
    phi = psi[i : i + p]
    theta = psi[i + p : i + p + q]
    try:
        _ar_to_pacf(phi)
        _ar_to_pacf(-theta)
    except DataError:
        return -np.inf
    return _concentrated_loglik(x - mu, phi, theta)


def _hessian_se(psi, x, p, q, with_const):
    """Standard errors from the central-difference Hessian of the
    log-likelihood in natural coordinates; None on failure."""
    k = psi.size
    steps = 1e-4 * np.maximum(1.0, np.abs(psi))
    H = np.empty((k, k))

    def f(v):
        return _loglik_natural(v, x, p, q, with_const)

    f0 = f(psi)
    for i in range(k):
        for j in range(i, k):
            ei = np.zeros(k)
            ej = np.zeros(k)
            ei[i] = steps[i]
            ej[j] = steps[j]
            if i == j:
                val = (f(psi + ei) - 2.0 * f0 + f(psi - ei)) / steps[i] ** 2
            else:
                val = (
                    f(psi + ei + ej)
                    - f(psi + ei - ej)
                    - f(psi - ei + ej)
                    + f(psi - ei - ej)
                ) / (4.0 * steps[i] * steps[j])
            H[i, j] = H[j, i] = val
    if not np.all(np.isfinite(H)):
        return None
    try:
        cov = np.linalg.inv(-H)
    except np.linalg.LinAlgError:
        return None
    diag = np.diag(cov)
    if np.any(diag <= 0.0):
        return None
    return np.sqrt(diag)


def fit(series, spec: ArimaSpec, n_starts: int = 5, n_polish: int = 2) -> ArimaFit:
    """Exact Gaussian maximum likelihood for the given specification.

    ``n_starts`` caps how many of the deterministic seeds are screened on
    the conditional-sum-of-squares surface; the ``n_polish`` best distinct
    survivors are refined on the exact likelihood by a simplex pass plus
    quasi-Newton.  Raises ``ConvergenceError`` when no start produces a
    finite optimum.
    """
    y = np.asarray(series, dtype=float)
    for _ in range(spec.d):
        if y.size < 2:
            raise ShortSeriesError("series too short for the differencing order")
        y = np.diff(y)
    x = y
    n = x.size
    p, q, with_const = spec.p, spec.q, spec.include_constant
    if n <= spec.n_params + 2:
        raise ShortSeriesError(
            f"effective sample {n} too small for {spec.n_params} parameters"
        )
    if float(np.var(x)) == 0.0:
        raise DegenerateSeriesError("differenced series has zero variance")
    if p + q == 0:
        return _fit_mean_only(x, spec)

    seeds = _start_points(x, p, q, with_const)[: max(1, n_starts)]
    scale = float(np.std(x))

    def css_obj(vec):
        mu, phi, theta = _unpack_params(vec, p, q, with_const)
        val = _css_objective(x - mu, phi, theta)
        return val if np.isfinite(val) else 1e12

    def exact_obj(vec):
        mu, phi, theta = _unpack_params(vec, p, q, with_const)
        ll = _concentrated_loglik(x - mu, phi, theta)
        return -ll if np.isfinite(ll) else 1e12

    screened = []
    for seed in seeds:
        res = sopt.minimize(
            css_obj,
            seed,
            method="Nelder-Mead",
            options={"maxiter": 200 * seed.size, "xatol": 1e-6, "fatol": 1e-10},
        )
        screened.append((res.fun, res.x))
    screened.sort(key=lambda t: t[0])

    # keep the best survivors that are genuinely different points
    chosen = []
    for val, vec in screened:
        if any(np.max(np.abs(vec - c)) < 1e-4 for c in chosen):
            continue
        chosen.append(vec)
        if len(chosen) >= max(1, n_polish):
            break

    best_val, best_vec = np.inf, None
    for vec in chosen:
        res = sopt.minimize(
            exact_obj,
            vec,
            method="Nelder-Mead",
            options={"maxiter": 160 * vec.size, "xatol": 1e-7, "fatol": 1e-9},
        )
        res = sopt.minimize(
            exact_obj,
            res.x,
            method="L-BFGS-B",
            options={"maxiter": 200, "ftol": 1e-12, "gtol": 1e-9},
        )
        if res.fun < best_val:
            best_val, best_vec = res.fun, res.x
    if best_vec is None or not np.isfinite(best_val) or best_val >= 1e12:
        raise ConvergenceError(f"no start converged for {spec.label()}")

    mu, phi, theta = _unpack_params(best_vec, p, q, with_const)
    out = _innovations(x - mu, phi, theta, return_state=True)
    if out is None:
        raise ConvergenceError(f"optimum is numerically degenerate for {spec.label()}")
    v, F, _ = out
    s = float(np.sum(v * v / F))
    sigma2 = s / n
    ll = -best_val

    boundary = False
    try:
        r_all = np.concatenate(
            [
                np.abs(_ar_to_pacf(phi)) if p else np.zeros(0),
                np.abs(_ar_to_pacf(-theta)) if q else np.zeros(0),
            ]
        )
        if r_all.size and float(np.max(r_all)) > 0.995:
            boundary = True
    except DataError:
        boundary = True

    psi = np.concatenate([[mu] if with_const else [], phi, theta])
    se = _hessian_se(psi, x, p, q, with_const)
    if se is None:
        boundary = True
        se = np.full(psi.size, np.nan)

    names = []
    if with_const:
        names.append("const")
    names += [f"ar{i}" for i in range(1, p + 1)]
    names += [f"ma{j}" for j in range(1, q + 1)]
    coeffs = []
    for name, val, s_e in zip(names, psi, se):
        t = val / s_e if np.isfinite(s_e) and s_e > 0 else np.nan
        pv = 2.0 * float(sps.norm.sf(abs(t))) if np.isfinite(t) else np.nan
        coeffs.append(Coefficient(name, float(val), float(s_e), float(t), pv))

    dev = x - x.mean()
    ss_tot = float(dev @ dev)
    ss_res = float(v @ v)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    k_coef = spec.n_params
    n_slope = p + q
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - k_coef) if n > k_coef else np.nan
    f_stat = None
    if n_slope >= 1 and with_const and r2 < 1.0:
        f_stat = (r2 / n_slope) / ((1.0 - r2) / (n - k_coef))

    ic = information_criteria(ll, spec.n_params, n)
    return ArimaFit(
        spec=spec,
        coefficients=tuple(coeffs),
        constant=mu if with_const else None,
        ar_params=phi,
        ma_params=theta,
        sigma2=sigma2,
        log_likelihood=ll,
        aic=ic["aic"],
        bic=ic["bic"],
        hq=ic["hq"],
        residuals=v,
        r_squared=r2,
        adj_r_squared=adj,
        f_stat=f_stat,
        n_obs=n,
        converged=True,
        boundary=boundary,
    )


def select(
    series,
    p_range,
    q_range,
    d: int = 0,
    criterion: str = "bic",
    include_constant: bool = True,
    n_starts: int = 5,
    n_polish: int = 1,
) -> list[tuple[ArimaSpec, float]]:
    """Fit every (p, q) pair and rank ascending by the chosen criterion.

    Non-converged cells are excluded with a warning; ties prefer the
    smaller p + q, then the smaller p.  Raises when every cell fails.
    """
    if criterion not in ("aic", "bic", "hq"):
        raise DataError(f"unknown criterion {criterion!r}")
    p_range = list(p_range)
    q_range = list(q_range)
    if not p_range or not q_range:
        raise DataError("empty model-order range")
    results = []
    for p in p_range:
        for q in q_range:
            spec = ArimaSpec(p=p, d=d, q=q, include_constant=include_constant)
            try:
                f = fit(series, spec, n_starts=n_starts, n_polish=n_polish)
            except (ConvergenceError, DataError) as exc:
                warnings.warn(f"{spec.label()} failed: {exc}", stacklevel=2)
                continue
            results.append((spec, float(getattr(f, criterion))))
    if not results:
        raise ConvergenceError("every candidate specification failed")
    results.sort(key=lambda t: (t[1], t[0].p + t[0].q, t[0].p))
    return results


def forecast(
    fit_result: ArimaFit,
    origin_series,
    h: int,
    scheme: str = "static",
    actuals=None,
) -> np.ndarray:
    """Out-of-sample forecasts on the scale of ``origin_series``.

    Static scheme: iterated conditional expectations from the end of the
    origin series, differenced-space forecasts re-integrated with the last
    observed values as anchors.  Rolling scheme: one-step-ahead
    predictions that condition on the realized test values (``actuals``),
    re-anchoring the integration at each step; estimates are not updated.
    """
    if h < 1:
        raise DataError("horizon must be at least 1")
    y = np.asarray(origin_series, dtype=float)
    d = fit_result.spec.d
    if y.size <= d:
        raise ShortSeriesError("origin series shorter than the differencing order")
    mu = fit_result.constant or 0.0
    phi, theta = fit_result.ar_params, fit_result.ma_params
    p, q = phi.size, theta.size

    if scheme == "static":
        w = y.copy()
        for _ in range(d):
            w = np.diff(w)
        x = w - mu
        if p + q > 0:
            out = _innovations(x, phi, theta, return_state=True)
            if out is None:
                raise ConvergenceError("filter failed at the fitted parameters")
            _, _, a = out
            T, _ = _state_matrices(phi, theta)
            fw = np.empty(h)
            state = a
            for j in range(h):
                fw[j] = state[0] + mu
                state = T @ state
        else:
            fw = np.full(h, mu)
        # undifference: y_t = w_t + sum_i C(d,i) (-1)^(i+1) y_{t-i}
        path = list(y)
        from math import comb

        for j in range(h):
            val = fw[j]
            for i in range(1, d + 1):
                val += comb(d, i) * (-1) ** (i + 1) * path[-i]
            path.append(val)
        return np.asarray(path[-h:])

    if scheme == "rolling":
        if actuals is None:
            raise DataError("rolling scheme needs the realized test values")
        actual = np.asarray(actuals, dtype=float)
        if actual.size < h:
            raise DataError("not enough realized values for the requested horizon")
        full = np.concatenate([y, actual[:h]])
        w = full.copy()
        for _ in range(d):
            w = np.diff(w)
        x = w - mu
        n_train_w = y.size - d
        if p + q > 0:
            out = _innovations(x, phi, theta)
            if out is None:
                raise ConvergenceError("filter failed at the fitted parameters")
            v, _ = out
            # one-step prediction of w_t is w_t - v_t
            w_hat = (x - v + mu)[n_train_w : n_train_w + h]
        else:
            w_hat = np.full(h, mu)
        from math import comb

        preds = np.empty(h)
        hist = list(full)
        for j in range(h):
            t = y.size + j
            val = w_hat[j]
            for i in range(1, d + 1):
                val += comb(d, i) * (-1) ** (i + 1) * hist[t - i]
            preds[j] = val
        return preds

    raise DataError(f"unknown forecast scheme {scheme!r}")


def correlogram(series, max_lag: int) -> list[CorrelogramRow]:
    """Sample ACF/PACF rows with the +-1.96/sqrt(n) significance band.

    ACF uses 1/n-normalized autocovariances; PACF comes from the
    Durbin-Levinson recursion on the ACF, so pacf(1) = acf(1) exactly.
    """
    x = np.asarray(series, dtype=float)
    n = x.size
    if not (1 <= max_lag < n / 2):
        raise DataError(f"max_lag must lie in [1, n/2), got {max_lag} for n={n}")
    rho = sample_autocorrelations(x, max_lag)
    band = 1.96 / np.sqrt(n)

    pacf = np.empty(max_lag)
    prev = np.empty(0)
    for k in range(1, max_lag + 1):
        if k == 1:
            val = rho[0]
            prev = np.array([val])
        else:
            num = rho[k - 1] - float(prev @ rho[k - 2 :: -1][: k - 1])
            den = 1.0 - float(prev @ rho[: k - 1])
            if abs(den) < 1e-14:
                val = np.nan
                prev = np.append(prev, val)
            else:
                val = num / den
                prev = np.append(prev - val * prev[::-1], val)
        pacf[k - 1] = val

    return [
        CorrelogramRow(lag=k, acf=float(rho[k - 1]), pacf=float(pacf[k - 1]), band=band)
        for k in range(1, max_lag + 1)
    ]
