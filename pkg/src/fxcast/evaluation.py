"""Forecast accuracy metrics and the multi-model leaderboard.

RMSE, MAE and the 0-200 scaled symmetric MAPE.  SMAPE terms where both
forecast and actual are numerically zero are skipped rather than divided
out; the skip count is carried on the row so a report can disclose it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError

__all__ = [
    "EvaluationRow",
    "Leaderboard",
    "rmse",
    "mae",
    "smape",
    "smape_with_skips",
    "evaluate",
]

ZERO_TOL = 1e-12

CRITERIA = ("rmse", "mae", "smape")


@dataclass(frozen=True)
class EvaluationRow:
    model_id: str
    rmse: float
    mae: float
    smape: float
    smape_skipped: int = 0


@dataclass(frozen=True)
class Leaderboard:
    """Per-model accuracy rows plus the best model under each criterion.

    Best marks are column argmins; ties go to the earlier row, so the
    caller's model order makes reports deterministic.
    """

    rows: tuple[EvaluationRow, ...]
    best_per_criterion: dict[str, str]

    def row(self, model_id: str) -> EvaluationRow:
        for r in self.rows:
            if r.model_id == model_id:
                return r
        raise KeyError(model_id)


def _paired(forecast, actual) -> tuple[np.ndarray, np.ndarray]:
    f = np.asarray(forecast, dtype=float)
    a = np.asarray(actual, dtype=float)
    if f.shape != a.shape or f.ndim != 1:
        raise DataError(f"forecast/actual shape mismatch: {f.shape} vs {a.shape}")
    if f.size == 0:
        raise DataError("metrics need non-empty vectors")
    return f, a


def rmse(forecast, actual) -> float:
    """Root mean squared error."""
    f, a = _paired(forecast, actual)
    e = f - a
    return float(np.sqrt(np.mean(e * e)))


def mae(forecast, actual) -> float:
    """Mean absolute error."""
    f, a = _paired(forecast, actual)
    return float(np.mean(np.abs(f - a)))


def smape_with_skips(forecast, actual, zero_tol: float = ZERO_TOL) -> tuple[float, int]:
    """Symmetric MAPE on the 0-200 scale plus the count of skipped pairs.

    A pair is skipped when |forecast| + |actual| < zero_tol, where the
    ratio is undefined.  Raises if every pair is skipped.
    """
    f, a = _paired(forecast, actual)
    denom = np.abs(f) + np.abs(a)
    keep = denom >= zero_tol
    if not np.any(keep):
        raise DataError("smape undefined: all pairs are numerically zero")
    terms = np.abs(f[keep] - a[keep]) / denom[keep]
    return 200.0 * float(np.mean(terms)), int(np.sum(~keep))


def smape(forecast, actual, zero_tol: float = ZERO_TOL) -> float:
    """Symmetric MAPE on the 0-200 scale with zero-pair skipping."""
    return smape_with_skips(forecast, actual, zero_tol)[0]


def evaluate(forecasts: dict[str, np.ndarray], actual) -> Leaderboard:
    """Score every named forecast against the actual path.

    ``forecasts`` maps model labels to forecast vectors; iteration order
    fixes row order and tie-breaking for the best marks.
    """
    if not forecasts:
        raise DataError("evaluate needs at least one model")
    rows = []
    for model_id, f in forecasts.items():
        s, skipped = smape_with_skips(f, actual)
        rows.append(
            EvaluationRow(
                model_id=model_id,
                rmse=rmse(f, actual),
                mae=mae(f, actual),
                smape=s,
                smape_skipped=skipped,
            )
        )
    best = {}
    for crit in CRITERIA:
        values = [getattr(r, crit) for r in rows]
        best[crit] = rows[int(np.argmin(values))].model_id
    return Leaderboard(rows=tuple(rows), best_per_criterion=best)
