"""CSV ingestion and the bundled data snapshot.

Input files need a header row; the date and value column names are
configurable.  Dates must be ISO-8601 (YYYY-MM-DD), values strictly
positive.  Rows are sorted by date before validation, so an unsorted but
otherwise clean file ingests fine, while a duplicated date is always an
error.
"""

from __future__ import annotations

import csv
import hashlib
from datetime import date as Date
from importlib import resources

from .exceptions import (
    DataError,
    DateParseError,
    DuplicateDateError,
    MissingColumnError,
    NonPositiveRateError,
    ShortSeriesError,
)
from .series import PriceSeries

__all__ = [
    "ingest_csv",
    "snapshot_path",
    "load_snapshot",
    "file_sha256",
]

SNAPSHOT_FILENAME = "usdtry_2022.csv"


def ingest_csv(path, date_column: str = "date", value_column: str = "rate") -> PriceSeries:
    """Read a dated price series from a CSV file.

    Raises a distinct typed error for a missing column, an unparseable
    date, a duplicated date, a non-positive (or non-numeric) rate, and a
    file with fewer than two usable rows.
    """
    rows: list[tuple[Date, float]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (date_column, value_column):
            if col not in header:
                raise MissingColumnError(
                    f"column {col!r} not found in header {header!r}"
                )
        for lineno, row in enumerate(reader, start=2):
            raw_date = (row.get(date_column) or "").strip()
            raw_value = (row.get(value_column) or "").strip()
            if not raw_date and not raw_value:
                continue
            try:
                d = Date.fromisoformat(raw_date)
            except ValueError as exc:
                raise DateParseError(
                    f"line {lineno}: {raw_date!r} is not an ISO-8601 date"
                ) from exc
            try:
                v = float(raw_value)
            except ValueError as exc:
                raise NonPositiveRateError(
                    f"line {lineno}: {raw_value!r} is not a number"
                ) from exc
            if not v > 0.0:
                raise NonPositiveRateError(
                    f"line {lineno}: rate {v} on {d} is not strictly positive"
                )
            rows.append((d, v))

    if len(rows) < 2:
        raise ShortSeriesError(f"{path}: need at least 2 data rows, got {len(rows)}")

    rows.sort(key=lambda r: r[0])
    for (d1, _), (d2, _) in zip(rows, rows[1:]):
        if d1 == d2:
            raise DuplicateDateError(f"date {d1} appears more than once")

    dates = tuple(d for d, _ in rows)
    values = [v for _, v in rows]
    return PriceSeries(dates=dates, values=values)


def snapshot_path():
    """Filesystem path of the bundled exchange-rate snapshot."""
    ref = resources.files("fxcast").joinpath("data", SNAPSHOT_FILENAME)
    if not ref.is_file():
        raise DataError("bundled snapshot is missing from the installation")
    return ref


def load_snapshot() -> PriceSeries:
    """Ingest the bundled snapshot with its native column names."""
    with resources.as_file(snapshot_path()) as p:
        return ingest_csv(p, date_column="date", value_column="rate")


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()
