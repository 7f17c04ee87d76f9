"""Command-line interface.

Subcommands cover the pipeline stages individually (ingest, describe,
test, select, fit, forecast, evaluate) plus the full run (report) and the
Monte Carlo verification suites (mc).  Exit codes: 0 success, 2
configuration error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .exceptions import ConfigError, DataError, FxcastError, NumericalError
from .io import file_sha256, ingest_csv
from .pipeline import (
    PipelineConfig,
    default_config,
    emit_plot_data,
    load_config_file,
    render_report,
    run_pipeline,
)


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--input", help="CSV input path (default: bundled snapshot)")
    parser.add_argument("--config", help="YAML config file")
    parser.add_argument(
        "--criterion", choices=("aic", "bic", "hq"), help="selection criterion"
    )
    parser.add_argument(
        "--scheme", choices=("static", "rolling"), help="forecast scheme"
    )
    parser.add_argument(
        "--format", choices=("text", "json", "csv"), help="output format"
    )
    parser.add_argument("--out-dir", help="directory for written artifacts")
    parser.add_argument("--seed", type=int, help="root seed for randomized suites")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fxcast",
        description="Univariate exchange-rate forecasting pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("ingest", "validate a CSV input and print its shape"),
        ("describe", "descriptive statistics and frequency discrimination"),
        ("test", "runs, unit-root/stationarity, and structural-break tests"),
        ("select", "information-criterion search over the ARMA grid"),
        ("fit", "estimate the selected model and its residual diagnostics"),
        ("forecast", "out-of-sample forecasts for the model zoo"),
        ("evaluate", "accuracy leaderboard on the held-out test window"),
        ("report", "full pipeline: every block plus rendered artifacts"),
        ("mc", "Monte Carlo verification suites"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "mc":
            p.add_argument(
                "--suite",
                choices=("size", "power", "all"),
                default="size",
                help="which suite to run",
            )
            p.add_argument("--reps", type=int, default=1000, help="replications")
            p.add_argument("--t", type=int, default=500, help="series length")
    return parser


def _config_from_args(args) -> PipelineConfig:
    if args.config:
        kwargs = load_config_file(args.config)
        # missing keys fall back to the dataclass defaults, not the shipped file
        base = PipelineConfig(**kwargs)
    else:
        base = default_config()
    overrides = {}
    if args.input:
        overrides["input_path"] = args.input
    if args.criterion:
        overrides["criterion"] = args.criterion
    if args.scheme:
        overrides["scheme"] = args.scheme
    if args.format:
        overrides["formats"] = (args.format,)
    if getattr(args, "out_dir", None):
        overrides["output_dir"] = args.out_dir
    if args.seed is not None:
        overrides["seed"] = args.seed
    if not overrides:
        return base
    return dataclasses.replace(base, **overrides)


def _cmd_ingest(args, config: PipelineConfig) -> int:
    if config.input_path is None:
        from importlib import resources

        from .io import snapshot_path

        with resources.as_file(snapshot_path()) as p:
            series = ingest_csv(p, config.date_column, config.rate_column)
            digest = file_sha256(p)
            label = "bundled snapshot"
    else:
        series = ingest_csv(config.input_path, config.date_column, config.rate_column)
        digest = file_sha256(config.input_path)
        label = config.input_path
    print(f"input:   {label}")
    print(f"rows:    {len(series)}")
    print(f"range:   {series.dates[0].isoformat()} .. {series.dates[-1].isoformat()}")
    print(f"sha256:  {digest}")
    return 0


_BLOCKS_FOR = {
    "describe": ("descriptive", "frequency"),
    "test": ("runs", "stationarity_level", "stationarity_differenced", "breaks"),
    "select": ("selection",),
    "fit": ("model", "serial_correlation", "smoothing"),
    "evaluate": ("leaderboard",),
}


def _render_subset(report, names) -> str:
    """Text rendering restricted to the requested blocks."""
    full = render_report(report, "text").decode("utf-8")
    titles = {
        "descriptive": "Descriptive Statistics",
        "frequency": "Frequency Discrimination",
        "runs": "Runs Test Outcomes",
        "stationarity_level": "Unit Root / Stationarity Tests",
        "stationarity_differenced": "Stationarity Test (Differenced Series)",
        "breaks": "Structural Breaks Test",
        "selection": "Model Selection",
        "model": "Estimated Model",
        "serial_correlation": "Serial Correlation (Ljung-Box)",
        "smoothing": "Exponential Smoothing Estimation",
        "leaderboard": "Forecasting Evaluation",
    }
    lines = full.splitlines()
    starts = {}
    for i, line in enumerate(lines):
        for name, title in titles.items():
            if line == title:
                starts[name] = i
    order = sorted(starts.items(), key=lambda kv: kv[1])
    bounds = {}
    for idx, (name, start) in enumerate(order):
        end = order[idx + 1][1] if idx + 1 < len(order) else len(lines)
        bounds[name] = (start, end)
    chunks = []
    for name in names:
        if name in bounds:
            s, e = bounds[name]
            chunks.append("\n".join(lines[s:e]).rstrip())
    return "\n\n".join(chunks) + "\n"


def _cmd_mc(args, config: PipelineConfig) -> int:
    from . import montecarlo as mc

    seed = config.seed
    results = []
    if args.suite in ("size", "all"):
        results.extend(mc.run_size_suite(n_reps=args.reps, t=args.t, seed=seed))
    if args.suite in ("power", "all"):
        results.extend(mc.run_power_suite(seed=seed))
    for r in results:
        if hasattr(r, "rate"):
            print(f"{r.label:40s} n={r.n_reps:5d} T={r.t:5d} rate={r.rate:.4f}")
        elif hasattr(r, "hit_rate"):
            print(
                f"{r.label:40s} n={r.n_reps:5d} T={r.t:5d} "
                f"hit_rate={r.hit_rate:.4f} mae={r.mean_abs_error:.3f}"
            )
        else:
            est = ", ".join(f"{k}={v:.4f}" for k, v in r.estimate.items())
            tru = ", ".join(f"{k}={v:.4f}" for k, v in r.truth.items())
            print(f"{r.label:40s} n={r.n_reps:5d} T={r.t:5d} truth[{tru}] est[{est}]")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)

        if args.command == "ingest":
            return _cmd_ingest(args, config)
        if args.command == "mc":
            return _cmd_mc(args, config)

        report = run_pipeline(config)
        fmt = args.format or "text"

        if args.command == "report":
            out_dir = Path(config.output_dir)
            try:
                out_dir.mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise DataError(f"cannot create output directory: {exc}") from exc
            ext = {"text": "txt", "json": "json", "csv": "csv"}
            for f in config.formats:
                path = out_dir / f"report.{ext[f]}"
                path.write_bytes(render_report(report, f))
                print(f"wrote {path}", file=sys.stderr)
            for p in emit_plot_data(report, out_dir):
                print(f"wrote {p}", file=sys.stderr)
            sys.stdout.write(render_report(report, "text").decode("utf-8"))
            return 0

        if args.command == "forecast":
            lines = ["date,actual," + ",".join(fs.model_id for fs in report.forecasts)]
            for i, (d, a) in enumerate(zip(report.test_dates, report.test_actuals)):
                vals = ",".join(repr(fs.values[i]) for fs in report.forecasts)
                lines.append(f"{d},{a!r},{vals}")
            body = "\n".join(lines) + "\n"
            if getattr(args, "out_dir", None):
                out = Path(args.out_dir)
                out.mkdir(parents=True, exist_ok=True)
                (out / "forecasts.csv").write_text(body, encoding="utf-8")
                print(f"wrote {out / 'forecasts.csv'}", file=sys.stderr)
            sys.stdout.write(body)
            return 0

        if args.command == "evaluate" and fmt == "csv":
            sys.stdout.write(render_report(report, "csv").decode("utf-8"))
            return 0

        names = _BLOCKS_FOR[args.command]
        if fmt == "json":
            import json

            from .pipeline import _encode

            payload = {n: _encode(report.block(n)) for n in names}
            print(json.dumps(payload, indent=1))
        else:
            sys.stdout.write(_render_subset(report, names))
        return 0

    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except FxcastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
