"""End-to-end forecasting pipeline: config, orchestration, report rendering.

``run_pipeline`` executes the whole study on one configured input: ingest,
percent returns, chronological split, descriptive and diagnostic batteries,
correlogram, information-criterion model selection, the model zoo fits,
out-of-sample forecasts, and the accuracy leaderboard.  The result is a
:class:`PipelineReport` of eleven semantic blocks, each either populated or
explicitly marked skipped with a reason.

Reports render as human-readable text, as full-precision JSON (which
``parse_report`` round-trips back into an equal ``PipelineReport``), or as
a CSV of the leaderboard.  Everything is deterministic given the config
and input file; the only timestamp lives in the provenance block.
"""

from __future__ import annotations

import dataclasses
import hashlib
import io as _io
import json
import logging
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import yaml
from scipy import stats as sps

from . import arima, benchmarks, breaks, evaluation, smoothing, stattests, unitroot
from .exceptions import ConfigError, DataError, FxcastError
from .io import file_sha256, ingest_csv, snapshot_path
from .series import (
    DescriptiveStats,
    FrequencyReport,
    ReturnSeries,
    SplitSpec,
    compute_returns,
    describe,
    difference,
    frequency_discrimination,
    leverage_correlation,
    split,
)

__all__ = [
    "PipelineConfig",
    "PipelineReport",
    "Block",
    "BLOCK_NAMES",
    "default_config",
    "load_config_file",
    "run_pipeline",
    "render_report",
    "parse_report",
    "emit_plot_data",
]

log = logging.getLogger(__name__)

BLOCK_NAMES = (
    "descriptive",
    "frequency",
    "runs",
    "stationarity_level",
    "stationarity_differenced",
    "breaks",
    "selection",
    "model",
    "serial_correlation",
    "smoothing",
    "leaderboard",
)

DEFAULT_MODELS = (
    "ARIMA(2,1,2)",
    "ARIMA(4,1,2)",
    "ARIMA(6,1,2)",
    "AR(2)",
    "AR(4)",
    "AR(6)",
    "MA(2)",
    "naive",
    "mean",
    "brown",
)

_CRITERIA = ("aic", "bic", "hq")
_SCHEMES = ("static", "rolling")
_FORMATS = ("text", "json", "csv")


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class PipelineConfig:
    """Declarative description of one pipeline run.

    ``input_path`` of None selects the bundled snapshot.  ``train_length``
    of None derives the training size from ``train_fraction``; an explicit
    count pins the split exactly.  ``models`` lists the forecasting zoo by
    label: ``ARIMA(p,d,q)``, ``AR(p)``, ``MA(q)`` (the single-polynomial
    forms use the configured ``d``), and the literals ``naive``, ``mean``,
    ``brown``, ``holt``.
    """

    input_path: str | None = None
    date_column: str = "date"
    rate_column: str = "rate"
    train_fraction: float = 0.85
    train_length: int | None = None
    p_max: int = 7
    q_max: int = 7
    d: int = 1
    criterion: str = "bic"
    scheme: str = "static"
    models: tuple[str, ...] = DEFAULT_MODELS
    smoothing_grid_step: float = 0.001
    max_breaks: int = 5
    trimming: float = 0.15
    correlogram_lags: int = 36
    lb_lags: tuple[int, ...] | None = None
    arch_lags: int = 1
    output_dir: str = "."
    formats: tuple[str, ...] = ("text",)
    seed: int = 20220516

    def __post_init__(self):
        if self.p_max < 1 or self.q_max < 1:
            raise ConfigError("grid bounds p_max and q_max must be at least 1")
        if self.d < 0:
            raise ConfigError("differencing order d must be non-negative")
        if self.criterion not in _CRITERIA:
            raise ConfigError(f"criterion must be one of {_CRITERIA}")
        if self.scheme not in _SCHEMES:
            raise ConfigError(f"scheme must be one of {_SCHEMES}")
        if not (0.0 < self.train_fraction < 1.0):
            raise ConfigError("train_fraction must lie strictly between 0 and 1")
        if self.train_length is not None and self.train_length < 1:
            raise ConfigError("train_length must be positive when given")
        if not (0.0 < self.smoothing_grid_step <= 0.5):
            raise ConfigError("smoothing_grid_step must lie in (0, 0.5]")
        if self.max_breaks < 1:
            raise ConfigError("max_breaks must be at least 1")
        if not (0.0 < self.trimming < 0.5):
            raise ConfigError("trimming must lie strictly between 0 and 0.5")
        if self.correlogram_lags < 1:
            raise ConfigError("correlogram_lags must be at least 1")
        if self.arch_lags < 1:
            raise ConfigError("arch_lags must be at least 1")
        if not self.models:
            raise ConfigError("the model zoo cannot be empty")
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "formats", tuple(self.formats))
        for fmt in self.formats:
            if fmt not in _FORMATS:
                raise ConfigError(f"unknown output format {fmt!r}")
        if self.lb_lags is not None:
            object.__setattr__(self, "lb_lags", tuple(int(v) for v in self.lb_lags))
            if any(v < 1 for v in self.lb_lags):
                raise ConfigError("lb_lags must be positive")
        for label in self.models:
            _parse_model_label(label, self.d)  # raises ConfigError on junk

    def config_hash(self) -> str:
        payload = json.dumps(dataclasses.asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()


_CONFIG_SECTIONS = {
    "data": {"input": "input_path", "date_column": "date_column", "rate_column": "rate_column"},
    "split": {"train_fraction": "train_fraction", "train_length": "train_length"},
    "arima": {"p_max": "p_max", "q_max": "q_max", "d": "d", "criterion": "criterion"},
    "forecast": {"scheme": "scheme"},
    "smoothing": {"grid_step": "smoothing_grid_step"},
    "breaks": {"max_breaks": "max_breaks", "trimming": "trimming"},
    "diagnostics": {
        "correlogram_lags": "correlogram_lags",
        "lb_lags": "lb_lags",
        "arch_lags": "arch_lags",
    },
    "output": {"dir": "output_dir", "formats": "formats"},
}


def load_config_file(path) -> dict:
    """Parse a YAML config file into flat PipelineConfig keyword arguments."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a mapping at top level")

    kwargs: dict = {}
    for section, value in raw.items():
        if section in _CONFIG_SECTIONS:
            if not isinstance(value, dict):
                raise ConfigError(f"config section {section!r} must be a mapping")
            known = _CONFIG_SECTIONS[section]
            for key, val in value.items():
                if key not in known:
                    raise ConfigError(f"unknown key {key!r} in section {section!r}")
                kwargs[known[key]] = val
        elif section == "models":
            if not isinstance(value, (list, tuple)):
                raise ConfigError("config key 'models' must be a list")
            kwargs["models"] = tuple(str(v) for v in value)
        elif section == "seed":
            kwargs["seed"] = int(value)
        else:
            raise ConfigError(f"unknown config section {section!r}")
    for key in ("models", "formats"):
        if key in kwargs and isinstance(kwargs[key], list):
            kwargs[key] = tuple(kwargs[key])
    return kwargs


def default_config(**overrides) -> PipelineConfig:
    """The shipped default configuration plus keyword overrides."""
    from importlib import resources

    ref = resources.files("fxcast").joinpath("data", "default_config.yaml")
    kwargs: dict = {}
    if ref.is_file():
        with resources.as_file(ref) as p:
            kwargs = load_config_file(p)
    kwargs.update(overrides)
    return PipelineConfig(**kwargs)


# ---------------------------------------------------------------------------
# model zoo


def _parse_model_label(label: str, d: int):
    """Map a zoo label to (kind, display_label, detail).

    kind is one of arima | naive | mean | brown | holt; detail is the
    ArimaSpec for the arima kind.
    """
    text = label.strip()
    low = text.lower()
    if low in ("naive", "random walk"):
        return ("naive", "Random Walk", None)
    if low in ("mean", "mean index"):
        return ("mean", "Mean Index", None)
    if low in ("brown", "brown's smoothing"):
        return ("brown", "Brown's Smoothing", None)
    if low in ("holt", "holt's smoothing"):
        return ("holt", "Holt's Smoothing", None)

    import re

    m = re.fullmatch(r"arima\((\d+)\s*,\s*(\d+)\s*,\s*(\d+)\)", low)
    if m:
        p, dd, q = (int(g) for g in m.groups())
        spec = _make_spec(p, dd, q, text)
        return ("arima", f"ARIMA({p},{dd},{q})", spec)
    m = re.fullmatch(r"ar\((\d+)\)", low)
    if m:
        p = int(m.group(1))
        spec = _make_spec(p, d, 0, text)
        return ("arima", f"AR({p})", spec)
    m = re.fullmatch(r"ma\((\d+)\)", low)
    if m:
        q = int(m.group(1))
        spec = _make_spec(0, d, q, text)
        return ("arima", f"MA({q})", spec)
    raise ConfigError(f"unknown model label {label!r}")


def _make_spec(p: int, d: int, q: int, text: str) -> arima.ArimaSpec:
    try:
        return arima.ArimaSpec(p=p, d=d, q=q, include_constant=True)
    except DataError as exc:
        raise ConfigError(f"invalid model {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# report blocks


@dataclass(frozen=True)
class Block:
    """One semantic section of the report: payload or a skip reason."""

    name: str
    payload: object | None
    skipped: bool = False
    reason: str | None = None


@dataclass(frozen=True)
class FrequencyBlock:
    report: FrequencyReport
    leverage: float


@dataclass(frozen=True)
class RunsBlock:
    rows: tuple[stattests.RunsResult, ...]


@dataclass(frozen=True)
class StationarityBlock:
    series_label: str
    rows: tuple[unitroot.UnitRootResult, ...]


@dataclass(frozen=True)
class GridCell:
    p: int
    q: int
    aic: float
    bic: float
    hq: float


@dataclass(frozen=True)
class SelectionRow:
    criterion: str
    value: float
    p: int
    q: int
    label: str


@dataclass(frozen=True)
class SelectionBlock:
    p_max: int
    q_max: int
    d: int
    n_failed: int
    cells: tuple[GridCell, ...]
    rows: tuple[SelectionRow, ...]
    chosen_label: str


@dataclass(frozen=True)
class CoefficientRow:
    name: str
    value: float
    std_error: float | None
    t_stat: float | None
    p_value: float | None


@dataclass(frozen=True)
class ModelBlock:
    label: str
    method: str
    coefficients: tuple[CoefficientRow, ...]
    sigma2: float
    log_likelihood: float
    aic: float
    bic: float
    hq: float
    r_squared: float
    adj_r_squared: float
    f_stat: float | None
    f_p_value: float | None
    resid_jb_stat: float
    resid_jb_p: float
    arch: stattests.ArchLmResult
    n_obs: int
    boundary: bool


@dataclass(frozen=True)
class SerialCorrelationBlock:
    model_label: str
    model_df: int
    rows: tuple[stattests.LjungBoxRow, ...]


@dataclass(frozen=True)
class SmoothingRow:
    model: str
    alpha: float
    beta: float | None
    ssr: float
    rmse: float
    alpha_identified: bool


@dataclass(frozen=True)
class SmoothingBlock:
    n_obs: int
    rows: tuple[SmoothingRow, ...]


@dataclass(frozen=True)
class ForecastSet:
    model_id: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class Provenance:
    config_hash: str
    data_sha256: str
    input_path: str
    package_version: str
    seed: int
    n_prices: int
    n_returns: int
    n_train: int
    n_test: int
    created_at: str


@dataclass(frozen=True)
class PipelineReport:
    """Complete output of one pipeline run."""

    blocks: tuple[Block, ...]
    returns_dates: tuple[str, ...]
    returns_values: tuple[float, ...]
    correlogram: tuple[arima.CorrelogramRow, ...]
    test_dates: tuple[str, ...]
    test_actuals: tuple[float, ...]
    forecasts: tuple[ForecastSet, ...]
    provenance: Provenance

    def block(self, name: str) -> Block:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)


# ---------------------------------------------------------------------------
# pipeline


def _stage(name: str):
    """Decorator-free stage guard: re-raise typed errors tagged with the
    stage name so callers can see where a pipeline run failed."""

    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, FxcastError):
                raise exc.__class__(f"stage {name!r}: {exc}") from exc
            return False

    return _Ctx()


def _f(x) -> float | None:
    """Sanitize to a plain finite float or None (for optional fields)."""
    if x is None:
        return None
    x = float(x)
    return x if np.isfinite(x) else None


def run_pipeline(config: PipelineConfig) -> PipelineReport:
    """Execute the full study described by ``config``.

    Deterministic given (config, input): every stage is either closed-form
    or an exhaustive/deterministically-seeded search.
    """
    t0 = time.monotonic()

    with _stage("ingest"):
        if config.input_path is None:
            from importlib import resources

            with resources.as_file(snapshot_path()) as p:
                prices = ingest_csv(p, config.date_column, config.rate_column)
                data_hash = file_sha256(p)
                input_label = "bundled snapshot"
        else:
            prices = ingest_csv(config.input_path, config.date_column, config.rate_column)
            data_hash = file_sha256(config.input_path)
            input_label = str(config.input_path)

    with _stage("returns"):
        returns = compute_returns(prices)

    with _stage("split"):
        parts = split(
            returns,
            SplitSpec(
                train_fraction=config.train_fraction,
                train_length=config.train_length,
            ),
        )
        train, test = parts.train, parts.test

    blocks: list[Block] = []

    with _stage("describe"):
        blocks.append(Block("descriptive", describe(train)))
        freq = frequency_discrimination(train)
        lev = leverage_correlation(train)
        blocks.append(Block("frequency", FrequencyBlock(freq, float(lev))))

    with _stage("runs-test"):
        rows = tuple(
            stattests.runs_test(train.values, kind) for kind in ("mean", "median", "mode")
        )
        blocks.append(Block("runs", RunsBlock(rows)))

    with _stage("stationarity"):
        level_rows = (
            unitroot.adf_test(train.values, deterministic="n"),
            unitroot.adf_test(train.values, deterministic="ct"),
            unitroot.pp_test(train.values, deterministic="n"),
            unitroot.pp_test(train.values, deterministic="ct"),
            unitroot.kpss_test(train.values, deterministic="c"),
            unitroot.kpss_test(train.values, deterministic="ct"),
        )
        blocks.append(Block("stationarity_level", StationarityBlock("returns", level_rows)))
        if config.d >= 1:
            diffed = difference(train, config.d)
            diff_rows = (
                unitroot.kpss_test(diffed.values, deterministic="c"),
                unitroot.kpss_test(diffed.values, deterministic="ct"),
            )
            blocks.append(
                Block(
                    "stationarity_differenced",
                    StationarityBlock(f"diff(returns, {config.d})", diff_rows),
                )
            )
        else:
            blocks.append(
                Block(
                    "stationarity_differenced",
                    None,
                    skipped=True,
                    reason="no differencing configured (d=0)",
                )
            )

    with _stage("breaks"):
        bp = breaks.bai_perron(
            train.values, max_breaks=config.max_breaks, trimming=config.trimming
        )
        blocks.append(Block("breaks", bp))

    with _stage("correlogram"):
        diffed = difference(train, config.d) if config.d >= 1 else train
        max_lag = min(config.correlogram_lags, (len(diffed) - 1) // 2)
        correl = tuple(arima.correlogram(diffed.values, max_lag))

    with _stage("selection"):
        sel_block, chosen_spec, n_failed = _run_selection(train, config)
        blocks.append(sel_block)

    with _stage("model"):
        model_block, serial_block, chosen_fit = _run_model(train, chosen_spec, config)
        blocks.append(model_block)
        blocks.append(serial_block)

    with _stage("smoothing"):
        blocks.append(_run_smoothing(train, config))

    with _stage("forecasts"):
        forecast_sets, labels_in_order = _run_zoo(train, test, config, chosen_fit)

    with _stage("leaderboard"):
        if forecast_sets:
            fmap = {fs.model_id: np.asarray(fs.values) for fs in forecast_sets}
            board = evaluation.evaluate(fmap, test.values)
            blocks.append(Block("leaderboard", board))
        else:
            blocks.append(
                Block(
                    "leaderboard",
                    None,
                    skipped=True,
                    reason="no model in the zoo produced a forecast",
                )
            )

    ordered = {b.name: b for b in blocks}
    final_blocks = tuple(ordered[name] for name in BLOCK_NAMES)

    from . import __version__

    prov = Provenance(
        config_hash=config.config_hash(),
        data_sha256=data_hash,
        input_path=input_label,
        package_version=__version__,
        seed=config.seed,
        n_prices=len(prices),
        n_returns=len(returns),
        n_train=len(train),
        n_test=len(test),
        created_at=datetime.now(timezone.utc).isoformat(),
    )

    report = PipelineReport(
        blocks=final_blocks,
        returns_dates=tuple(d.isoformat() for d in returns.dates),
        returns_values=tuple(float(v) for v in returns.values),
        correlogram=correl,
        test_dates=tuple(d.isoformat() for d in test.dates),
        test_actuals=tuple(float(v) for v in test.values),
        forecasts=tuple(forecast_sets),
        provenance=prov,
    )
    log.info("pipeline finished in %.2fs", time.monotonic() - t0)
    return report


def _run_selection(train: ReturnSeries, config: PipelineConfig):
    """Grid over (p, q) in [1, p_max] x [1, q_max]; one fit per cell scores
    all three criteria.  Returns the block, the chosen spec, and the
    failure count."""
    cells: list[GridCell] = []
    fits: dict[tuple[int, int], arima.ArimaFit] = {}
    n_failed = 0
    for p in range(1, config.p_max + 1):
        for q in range(1, config.q_max + 1):
            spec = arima.ArimaSpec(p=p, d=config.d, q=q, include_constant=True)
            try:
                f = arima.fit(train.values, spec, n_starts=2, n_polish=1)
            except FxcastError as exc:
                log.warning("grid cell (%d,%d) failed: %s", p, q, exc)
                n_failed += 1
                continue
            fits[(p, q)] = f
            cells.append(GridCell(p=p, q=q, aic=_f(f.aic), bic=_f(f.bic), hq=_f(f.hq)))
    if not fits:
        block = Block(
            "selection",
            None,
            skipped=True,
            reason="every grid cell failed to converge",
        )
        return block, None, n_failed

    rows = []
    for crit in _CRITERIA:
        best_pq = min(
            fits, key=lambda pq: (getattr(fits[pq], crit), pq[0] + pq[1], pq[0])
        )
        rows.append(
            SelectionRow(
                criterion=crit,
                value=_f(getattr(fits[best_pq], crit)),
                p=best_pq[0],
                q=best_pq[1],
                label=f"ARMA({best_pq[0]},{best_pq[1]})",
            )
        )
    chosen_row = next(r for r in rows if r.criterion == config.criterion)
    chosen_spec = arima.ArimaSpec(
        p=chosen_row.p, d=config.d, q=chosen_row.q, include_constant=True
    )
    block = Block(
        "selection",
        SelectionBlock(
            p_max=config.p_max,
            q_max=config.q_max,
            d=config.d,
            n_failed=n_failed,
            cells=tuple(cells),
            rows=tuple(rows),
            chosen_label=chosen_row.label,
        ),
    )
    return block, chosen_spec, n_failed


def _run_model(train: ReturnSeries, chosen_spec, config: PipelineConfig):
    """Full-effort fit of the selected specification plus its residual
    diagnostics.  Both blocks are skipped when selection failed."""
    if chosen_spec is None:
        reason = "no specification selected"
        return (
            Block("model", None, skipped=True, reason=reason),
            Block("serial_correlation", None, skipped=True, reason=reason),
            None,
        )
    f = arima.fit(train.values, chosen_spec, n_starts=5, n_polish=2)
    resid = f.residuals
    jb = stattests.jarque_bera(resid)
    arch = stattests.arch_lm(resid, lags=config.arch_lags)

    f_p = None
    if f.f_stat is not None:
        k1 = chosen_spec.p + chosen_spec.q
        k2 = f.n_obs - chosen_spec.n_params
        f_p = _f(sps.f.sf(f.f_stat, k1, k2))

    coeffs = tuple(
        CoefficientRow(
            name=c.name,
            value=float(c.value),
            std_error=_f(c.std_error),
            t_stat=_f(c.t_stat),
            p_value=_f(c.p_value),
        )
        for c in f.coefficients
    )
    model_block = Block(
        "model",
        ModelBlock(
            label=chosen_spec.label(),
            method="exact maximum likelihood (Gaussian)",
            coefficients=coeffs,
            sigma2=float(f.sigma2),
            log_likelihood=float(f.log_likelihood),
            aic=float(f.aic),
            bic=float(f.bic),
            hq=float(f.hq),
            r_squared=float(f.r_squared),
            adj_r_squared=float(f.adj_r_squared),
            f_stat=_f(f.f_stat),
            f_p_value=f_p,
            resid_jb_stat=float(jb.statistic),
            resid_jb_p=float(jb.p_value),
            arch=arch,
            n_obs=int(f.n_obs),
            boundary=bool(f.boundary),
        ),
    )

    model_df = chosen_spec.p + chosen_spec.q
    if config.lb_lags is not None:
        lags = list(config.lb_lags)
    else:
        lags = list(range(model_df + 1, model_df + 7))
    lags = [lag for lag in lags if lag < resid.size]
    lb_rows = tuple(stattests.ljung_box(resid, lags, model_df=model_df))
    serial_block = Block(
        "serial_correlation",
        SerialCorrelationBlock(
            model_label=chosen_spec.label(), model_df=model_df, rows=lb_rows
        ),
    )
    return model_block, serial_block, f


def _run_smoothing(train: ReturnSeries, config: PipelineConfig) -> Block:
    try:
        holt = smoothing.fit_holt(train.values, grid_step=config.smoothing_grid_step)
        brown = smoothing.fit_brown(train.values, grid_step=config.smoothing_grid_step)
    except FxcastError as exc:
        return Block("smoothing", None, skipped=True, reason=str(exc))
    rows = (
        SmoothingRow(
            model="Holt",
            alpha=float(holt.alpha),
            beta=float(holt.beta),
            ssr=float(holt.ssr),
            rmse=float(holt.rmse),
            alpha_identified=bool(holt.alpha_identified),
        ),
        SmoothingRow(
            model="Brown",
            alpha=float(brown.alpha),
            beta=None,
            ssr=float(brown.ssr),
            rmse=float(brown.rmse),
            alpha_identified=True,
        ),
    )
    return Block("smoothing", SmoothingBlock(n_obs=len(train), rows=rows))


def _run_zoo(train: ReturnSeries, test: ReturnSeries, config: PipelineConfig, chosen_fit):
    """Fit every zoo model and produce its test-horizon forecast."""
    h = len(test)
    y_train = train.values
    sets: list[ForecastSet] = []
    labels: list[str] = []
    rolling = config.scheme == "rolling"
    for raw_label in config.models:
        kind, label, detail = _parse_model_label(raw_label, config.d)
        try:
            if kind == "arima":
                if (
                    chosen_fit is not None
                    and detail == chosen_fit.spec
                ):
                    f = chosen_fit
                else:
                    f = arima.fit(y_train, detail, n_starts=5, n_polish=2)
                fc = arima.forecast(
                    f,
                    y_train,
                    h,
                    scheme=config.scheme,
                    actuals=test.values if rolling else None,
                )
            elif kind == "naive":
                if rolling:
                    hist = np.concatenate([y_train[-1:], test.values[:-1]])
                    fc = hist[:h]
                else:
                    fc = benchmarks.naive_forecast(y_train, h)
            elif kind == "mean":
                fc = benchmarks.mean_forecast(y_train, h)
            elif kind in ("brown", "holt"):
                fitter = smoothing.fit_brown if kind == "brown" else smoothing.fit_holt
                sf = fitter(y_train, grid_step=config.smoothing_grid_step)
                if rolling:
                    fc = _rolling_smoothing(sf, y_train, test.values, h)
                else:
                    fc = smoothing.smoothing_forecast(sf, h)
            else:  # pragma: no cover - parse guarantees the kinds above
                raise ConfigError(f"unhandled model kind {kind!r}")
        except FxcastError as exc:
            log.warning("model %s failed, excluded from the leaderboard: %s", label, exc)
            continue
        sets.append(ForecastSet(model_id=label, values=tuple(float(v) for v in fc)))
        labels.append(label)
    return sets, labels


def _rolling_smoothing(sf, y_train, actuals, h: int) -> np.ndarray:
    """One-step smoothing predictions over the test span at fixed
    parameters: the filter continues across realized values."""
    full = np.concatenate([y_train, actuals[:h]])
    if sf.kind == "brown":
        refit = smoothing.brown_filter(full, sf.alpha)
        level = refit.fitted
        return level[len(y_train) - 1 : len(y_train) - 1 + h].copy()
    refit = smoothing.holt_filter(full, sf.alpha, sf.beta)
    prior = refit.fitted + refit.trend_state
    return prior[len(y_train) - 1 : len(y_train) - 1 + h].copy()


# ---------------------------------------------------------------------------
# JSON codec

_CODEC_TYPES = {
    cls.__name__: cls
    for cls in (
        Block,
        FrequencyBlock,
        RunsBlock,
        StationarityBlock,
        GridCell,
        SelectionRow,
        SelectionBlock,
        CoefficientRow,
        ModelBlock,
        SerialCorrelationBlock,
        SmoothingRow,
        SmoothingBlock,
        ForecastSet,
        Provenance,
        PipelineReport,
        DescriptiveStats,
        FrequencyReport,
        stattests.RunsResult,
        stattests.LjungBoxRow,
        stattests.ArchLmResult,
        unitroot.UnitRootResult,
        breaks.BreakTestRow,
        breaks.BreakResult,
        evaluation.EvaluationRow,
        evaluation.Leaderboard,
        arima.CorrelogramRow,
    )
}


def _encode(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {"__t__": type(obj).__name__}
        for fld in dataclasses.fields(obj):
            out[fld.name] = _encode(getattr(obj, fld.name))
        return out
    if isinstance(obj, (tuple, list)):
        return [_encode(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _decode(obj):
    if isinstance(obj, dict):
        if "__t__" in obj:
            name = obj["__t__"]
            cls = _CODEC_TYPES.get(name)
            if cls is None:
                raise DataError(f"unknown report node type {name!r}")
            kwargs = {k: _decode(v) for k, v in obj.items() if k != "__t__"}
            return cls(**kwargs)
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return tuple(_decode(v) for v in obj)
    return obj


def parse_report(data) -> PipelineReport:
    """Inverse of the JSON rendering: bytes or str back to the report."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DataError(f"not a structured report: {exc}") from exc
    report = _decode(raw)
    if not isinstance(report, PipelineReport):
        raise DataError("structured data does not hold a pipeline report")
    return report


# ---------------------------------------------------------------------------
# rendering


def render_report(report: PipelineReport, format: str = "text") -> bytes:
    """Serialize a report: human text, round-trippable JSON, or the
    leaderboard as CSV."""
    if format == "json":
        return json.dumps(_encode(report), indent=1).encode("utf-8")
    if format == "csv":
        return _render_csv(report)
    if format == "text":
        return _render_text(report)
    raise ConfigError(f"unknown report format {format!r}")


def _render_csv(report: PipelineReport) -> bytes:
    import csv

    blk = report.block("leaderboard")
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["model", "rmse", "mae", "smape", "smape_skipped"])
    if not blk.skipped:
        for row in blk.payload.rows:
            writer.writerow(
                [row.model_id, repr(row.rmse), repr(row.mae), repr(row.smape), row.smape_skipped]
            )
    return buf.getvalue().encode("utf-8")


def _fmt(x, nd: int = 3) -> str:
    if x is None:
        return "--"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if not np.isfinite(x):
        return "--"
    return f"{x:.{nd}f}"


def _table(rows: list[list[str]], header: list[str] | None = None) -> list[str]:
    all_rows = ([header] if header else []) + rows
    widths = [max(len(r[i]) for r in all_rows) for i in range(len(all_rows[0]))]
    out = []
    if header:
        out.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
        out.append("  ".join("-" * w for w in widths))
    for r in rows:
        out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return out

def _render_text(report: PipelineReport) -> bytes:
    L: list[str] = []

    def section(title: str):
        L.append("")
        L.append(title)
        L.append("=" * len(title))

    def skip_note(blk: Block):
        L.append(f"(skipped: {blk.reason})")

    prov = report.provenance
    L.append("Exchange-Rate Forecasting Report")
    L.append(f"Input: {prov.input_path}  (sha256 {prov.data_sha256[:16]}...)")
    L.append(
        f"Observations: {prov.n_prices} prices -> {prov.n_returns} returns "
        f"(train {prov.n_train} / test {prov.n_test})"
    )
    L.append(f"Generated: {prov.created_at}")

    blk = report.block("descriptive")
    section("Descriptive Statistics")
    if blk.skipped:
        skip_note(blk)
    else:
        d: DescriptiveStats = blk.payload
        rows = [
            ["Mean", _fmt(d.mean)],
            ["Median", _fmt(d.median)],
            ["Mode", _fmt(d.mode)],
            ["Max", _fmt(d.maximum)],
            ["Min", _fmt(d.minimum)],
            ["Std. Dev", _fmt(d.std_dev)],
            ["Skewness", _fmt(d.skewness)],
            ["Kurtosis", _fmt(d.kurtosis)],
            ["J-B Stat.", _fmt(d.jb_stat)],
            ["J-B Prob.", _fmt(d.jb_prob)],
        ]
        L.extend(_table(rows, ["Statistic", "Value"]))

    blk = report.block("frequency")
    section("Frequency Discrimination")
    if blk.skipped:
        skip_note(blk)
    else:
        fb: FrequencyBlock = blk.payload
        fr = fb.report
        rows = [
            ["Zero", str(fr.count_zero), _fmt(fr.pct_zero, 2)],
            ["Negative", str(fr.count_negative), _fmt(fr.pct_negative, 2)],
            ["Positive", str(fr.count_positive), _fmt(fr.pct_positive, 2)],
            ["Total", str(fr.n_obs), "100"],
        ]
        L.extend(_table(rows, ["Value", "No. of Days", "Percent"]))
        L.append(f"Max. days in negative returns   {fr.max_run_negative}")
        L.append(f"Max. days in positive returns   {fr.max_run_positive}")
        L.append(f"Max. days in an increasing trend {fr.max_run_increasing}")
        L.append(f"Max. days in a decreasing trend  {fr.max_run_decreasing}")
        L.append(f"Corr(R_t^2, R_t-1) = {_fmt(fb.leverage, 4)}")

    blk = report.block("runs")
    section("Runs Test Outcomes")
    if blk.skipped:
        skip_note(blk)
    else:
        rb: RunsBlock = blk.payload
        header = ["Threshold"] + [r.threshold_kind.capitalize() for r in rb.rows]
        rows = [
            ["R"] + [str(r.observed_runs) for r in rb.rows],
            ["R-bar (Exp.)"] + [_fmt(r.expected_runs) for r in rb.rows],
            ["Std. Dev"] + [_fmt(r.std_dev) for r in rb.rows],
            ["Z-Stat."] + [_fmt(r.z_stat) for r in rb.rows],
            ["Prob."] + [_fmt(r.p_value) for r in rb.rows],
        ]
        L.extend(_table(rows, header))

    for name, title in (
        ("stationarity_level", "Unit Root / Stationarity Tests"),
        ("stationarity_differenced", "Stationarity Test (Differenced Series)"),
    ):
        blk = report.block(name)
        section(title)
        if blk.skipped:
            skip_note(blk)
            continue
        sb: StationarityBlock = blk.payload
        L.append(f"Series: {sb.series_label}")
        rows = []
        for r in sb.rows:
            rows.append(
                [
                    r.test.upper(),
                    r.deterministic,
                    _fmt(r.statistic),
                    _fmt(r.critical_values.get("5%")),
                    _fmt(r.p_value),
                ]
            )
        L.extend(_table(rows, ["Test", "Type", "Statistic", "5% Crit.", "Prob."]))

    blk = report.block("breaks")
    section("Structural Breaks Test")
    if blk.skipped:
        skip_note(blk)
    else:
        bp = blk.payload
        L.append("Sequentially determined breaks, HAC covariance")
        L.append(f"Max breaks: {bp.max_breaks}   Trimming: {bp.trimming}")
        rows = [
            [t.label, _fmt(t.f_stat), _fmt(t.scaled_f_stat), _fmt(t.critical_value)]
            for t in bp.tests
        ]
        L.extend(_table(rows, ["Break Test", "F-Stat.", "Scaled F-Stat.", "Critical Value"]))
        L.append(f"Selected breaks: {bp.selected_break_count}")

    blk = report.block("selection")
    section("Model Selection")
    if blk.skipped:
        skip_note(blk)
    else:
        sel: SelectionBlock = blk.payload
        L.append(
            f"Grid: ARMA(P,Q), P in [1,{sel.p_max}], Q in [1,{sel.q_max}] on the "
            f"{sel.d}-differenced returns"
        )
        rows = [
            [r.criterion.upper(), _fmt(r.value), r.label] for r in sel.rows
        ]
        L.extend(_table(rows, ["Criterion", "Value", "Suggestion"]))

    blk = report.block("model")
    section("Estimated Model")
    if blk.skipped:
        skip_note(blk)
    else:
        mb: ModelBlock = blk.payload
        L.append(f"Estimated Model: {mb.label}")
        L.append(f"Estimating Method: {mb.method}")
        rows = [
            [c.name, _fmt(c.value), _fmt(c.std_error), _fmt(c.t_stat), _fmt(c.p_value)]
            for c in mb.coefficients
        ]
        L.extend(_table(rows, ["Variable", "Coef.", "Std. Err.", "t-Stat.", "Prob."]))
        L.append(f"R-Sq       {_fmt(mb.r_squared)}    AIC {_fmt(mb.aic)}")
        L.append(f"Adj. R-Sq  {_fmt(mb.adj_r_squared)}    BIC {_fmt(mb.bic)}")
        L.append(f"F-Stat.    {_fmt(mb.f_stat)}    H-Q {_fmt(mb.hq)}")
        L.append(f"F-Prob.    {_fmt(mb.f_p_value)}")
        L.append(f"Residual J-B Stat. {_fmt(mb.resid_jb_stat)}  Prob. {_fmt(mb.resid_jb_p)}")
        a = mb.arch
        L.append(
            f"ARCH test: F-Stat. {_fmt(a.f_stat)} Prob. F{a.f_dof} {_fmt(a.f_p_value)}; "
            f"Lagrange {_fmt(a.lm_stat)} Prob. Chi-Sq({a.lags}) {_fmt(a.lm_p_value)}"
        )
        if mb.boundary:
            L.append("Note: optimum near the invertibility boundary; standard errors unreliable")

    blk = report.block("serial_correlation")
    section("Serial Correlation (Ljung-Box)")
    if blk.skipped:
        skip_note(blk)
    else:
        sc: SerialCorrelationBlock = blk.payload
        L.append(f"Variable: {sc.model_label} residuals (model df = {sc.model_df})")
        rows = [
            [str(r.lag), _fmt(r.q_stat), _fmt(r.p_value)] for r in sc.rows
        ]
        L.extend(_table(rows, ["Lag", "Q-Stat.", "Prob."]))

    blk = report.block("smoothing")
    section("Exponential Smoothing Estimation")
    if blk.skipped:
        skip_note(blk)
    else:
        sm: SmoothingBlock = blk.payload
        L.append(f"No. of Observations: {sm.n_obs}")
        rows = [
            [
                r.model,
                _fmt(r.alpha),
                _fmt(r.beta),
                _fmt(r.ssr),
                _fmt(r.rmse),
            ]
            for r in sm.rows
        ]
        L.extend(_table(rows, ["Model", "Alpha", "Beta", "Sum Sq-Resid.", "RMSE"]))
        for r in sm.rows:
            if not r.alpha_identified:
                L.append(
                    f"Note: {r.model} beta = 0 leaves alpha unidentified; "
                    "the level model is the binding fit"
                )

    blk = report.block("leaderboard")
    section("Forecasting Evaluation")
    if blk.skipped:
        skip_note(blk)
    else:
        board = blk.payload
        best = board.best_per_criterion
        rows = []
        for r in board.rows:
            cells = [r.model_id]
            for crit in ("rmse", "mae", "smape"):
                star = "*" if best.get(crit) == r.model_id else ""
                cells.append(_fmt(getattr(r, crit)) + star)
            rows.append(cells)
        L.extend(_table(rows, ["Model", "RMSE", "MAE", "SMAPE"]))
        L.append("The * indicates the best model per criterion.")

    L.append("")
    return ("\n".join(L) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# plot data


def emit_plot_data(report: PipelineReport, output_dir) -> list[Path]:
    """Write per-figure columnar files: the returns path (date,value) and
    the correlogram (lag,acf,pacf,band).  Returns the written paths."""
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        p1 = out / "returns.csv"
        with open(p1, "w", encoding="utf-8", newline="") as fh:
            fh.write("date,value\n")
            for d, v in zip(report.returns_dates, report.returns_values):
                fh.write(f"{d},{v!r}\n")
        paths.append(p1)
        p2 = out / "correlogram.csv"
        with open(p2, "w", encoding="utf-8", newline="") as fh:
            fh.write("lag,acf,pacf,band\n")
            for row in report.correlogram:
                fh.write(f"{row.lag},{row.acf!r},{row.pacf!r},{row.band!r}\n")
        paths.append(p2)
        return paths
    except OSError as exc:
        raise DataError(f"cannot write plot data under {output_dir}: {exc}") from exc
