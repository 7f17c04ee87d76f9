"""Univariate exchange-rate forecasting toolkit.

Percent-returns transformation, a descriptive and diagnostic battery
(normality, runs, unit-root/stationarity, serial correlation, ARCH,
structural breaks), exact-MLE ARIMA with information-criterion order
selection, exponential smoothing, benchmark forecasts, and an accuracy
leaderboard over a held-out window — as a library and a CLI around a
bundled daily exchange-rate snapshot.
"""

from .arima import (
    ArimaFit,
    ArimaSpec,
    Coefficient,
    CorrelogramRow,
    correlogram,
    fit,
    forecast,
    information_criteria,
    select,
)
from .benchmarks import mean_forecast, naive_forecast
from .breaks import SUP_F_CRITICAL_5PCT, BreakResult, bai_perron, best_partition
from .evaluation import (
    EvaluationRow,
    Leaderboard,
    evaluate,
    mae,
    rmse,
    smape,
    smape_with_skips,
)
from .exceptions import (
    ConfigError,
    ConvergenceError,
    DataError,
    DateParseError,
    DegenerateSeriesError,
    DuplicateDateError,
    FxcastError,
    MissingColumnError,
    NonPositiveRateError,
    NumericalError,
    ShortSeriesError,
)
from .hac import bartlett_long_run_variance, newey_west_bandwidth
from .io import file_sha256, ingest_csv, load_snapshot, snapshot_path
from .pipeline import (
    BLOCK_NAMES,
    PipelineConfig,
    PipelineReport,
    default_config,
    emit_plot_data,
    parse_report,
    render_report,
    run_pipeline,
)
from .series import (
    DescriptiveStats,
    FrequencyReport,
    PriceSeries,
    ReturnSeries,
    SplitSpec,
    TrainTestSplit,
    compute_returns,
    describe,
    difference,
    frequency_discrimination,
    leverage_correlation,
    split,
)
from .smoothing import (
    SmoothingFit,
    brown_filter,
    fit_brown,
    fit_holt,
    holt_filter,
    smoothing_forecast,
)
from .stattests import (
    ArchLmResult,
    JarqueBeraResult,
    LjungBoxRow,
    RunsResult,
    arch_lm,
    jarque_bera,
    ljung_box,
    runs_test,
    sample_autocorrelations,
)
from .unitroot import UnitRootResult, adf_test, kpss_test, pp_test, schwert_max_lags

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # series
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
    # diagnostics
    "JarqueBeraResult",
    "RunsResult",
    "LjungBoxRow",
    "ArchLmResult",
    "jarque_bera",
    "runs_test",
    "sample_autocorrelations",
    "ljung_box",
    "arch_lm",
    "UnitRootResult",
    "adf_test",
    "pp_test",
    "kpss_test",
    "schwert_max_lags",
    "bartlett_long_run_variance",
    "newey_west_bandwidth",
    "BreakResult",
    "bai_perron",
    "best_partition",
    "SUP_F_CRITICAL_5PCT",
    # modeling
    "ArimaSpec",
    "ArimaFit",
    "Coefficient",
    "CorrelogramRow",
    "correlogram",
    "fit",
    "select",
    "forecast",
    "information_criteria",
    "SmoothingFit",
    "brown_filter",
    "holt_filter",
    "fit_brown",
    "fit_holt",
    "smoothing_forecast",
    "naive_forecast",
    "mean_forecast",
    # evaluation
    "EvaluationRow",
    "Leaderboard",
    "rmse",
    "mae",
    "smape",
    "smape_with_skips",
    "evaluate",
    # io / pipeline
    "ingest_csv",
    "load_snapshot",
    "snapshot_path",
    "file_sha256",
    "PipelineConfig",
    "PipelineReport",
    "BLOCK_NAMES",
    "default_config",
    "run_pipeline",
    "render_report",
    "parse_report",
    "emit_plot_data",
    # errors
    "FxcastError",
    "ConfigError",
    "DataError",
    "MissingColumnError",
    "DateParseError",
    "DuplicateDateError",
    "NonPositiveRateError",
    "ShortSeriesError",
    "DegenerateSeriesError",
    "NumericalError",
    "ConvergenceError",
]
