"""Long-run variance estimation with the Bartlett kernel.

Shared by the Phillips-Perron correction, the level-stationarity test and
the structural-break Wald statistics.  The bandwidth convention throughout
is the fixed Newey-West rule floor(4 * (n / 100)^(2/9)).
"""

from __future__ import annotations

import numpy as np

__all__ = ["newey_west_bandwidth", "bartlett_long_run_variance"]


def newey_west_bandwidth(n: int) -> int:
    """Fixed Newey-West truncation lag floor(4 * (n/100)^(2/9))."""
    if n < 1:
        raise ValueError("bandwidth needs a positive sample size")
    return int(np.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))


def bartlett_long_run_variance(
    u: np.ndarray, bandwidth: int | None = None, demean: bool = False
) -> float:
    """Bartlett-kernel long-run variance of a residual sequence.

    lambda^2 = gamma_0 + 2 * sum_{j=1..l} (1 - j/(l+1)) gamma_j with
    autocovariances gamma_j = sum_t u_t u_{t-j} / n (no mean correction by
    default: the inputs are regression residuals).  The truncation lag
    defaults to the fixed Newey-West rule for the sample at hand.
    """
    u = np.asarray(u, dtype=float)
    n = u.size
    if n < 2:
        raise ValueError("long-run variance needs at least 2 observations")
    if demean:
        u = u - u.mean()
    if bandwidth is None:
        bandwidth = newey_west_bandwidth(n)
    if bandwidth < 0 or bandwidth >= n:
        raise ValueError(f"bandwidth {bandwidth} out of range for n={n}")
    lam2 = float(u @ u) / n
    for j in range(1, bandwidth + 1):
        gamma_j = float(u[j:] @ u[:-j]) / n
        lam2 += 2.0 * (1.0 - j / (bandwidth + 1.0)) * gamma_j
    return lam2
