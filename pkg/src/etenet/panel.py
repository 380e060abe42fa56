"""Price ingestion, calendar alignment, log-returns, and lag-augmented panels."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DuplicateLabel,
    EmptySeries,
    LagTooLarge,
    NonPositivePrice,
    NoPriorClose,
    TooShort,
)


def _check_increasing(dates, what):
    for a, b in zip(dates, dates[1:]):
        if not a < b:
            raise ValueError(f"{what} dates must be strictly increasing ({a!r} !< {b!r})")


@dataclass(frozen=True)
class PriceSeries:
    """Daily closing prices for one ticker, with classification metadata."""

    ticker: str
    dates: tuple
    closes: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "closes", np.asarray(self.closes, dtype=float))
        if len(self.dates) == 0:
            raise EmptySeries(f"{self.ticker}: empty price series")
        if len(self.dates) != len(self.closes):
            raise ValueError(f"{self.ticker}: dates and closes differ in length")
        if np.any(self.closes <= 0) or not np.all(np.isfinite(self.closes)):
            raise NonPositivePrice(f"{self.ticker}: closes must be positive and finite")
        _check_increasing(self.dates, self.ticker)


@dataclass(frozen=True)
class TradingCalendar:
    """Strictly increasing trading dates of the benchmark exchange."""

    dates: tuple

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        if not self.dates:
            raise ValueError("calendar is empty")
        _check_increasing(self.dates, "calendar")

    def __len__(self):
        return len(self.dates)


@dataclass(frozen=True)
class PanelColumn:
    label: str
    meta: dict
    lag: int = 0


@dataclass
class ReturnPanel:
    """Rectangular T x N matrix of log-returns with per-column metadata."""

    dates: tuple
    columns: list
    values: np.ndarray

    def __post_init__(self):
        self.dates = tuple(self.dates)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ValueError("panel values must be 2-D")
        if self.values.shape != (len(self.dates), len(self.columns)):
            raise ValueError(
                f"panel shape {self.values.shape} does not match "
                f"{len(self.dates)} dates x {len(self.columns)} columns"
            )
        labels = [c.label for c in self.columns]
        if len(set(labels)) != len(labels):
            raise DuplicateLabel("panel column labels must be unique")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("panel contains NaN or infinite values")

    @property
    def labels(self):
        return [c.label for c in self.columns]

    @property
    def n_rows(self):
        return self.values.shape[0]

    @property
    def n_cols(self):
        return self.values.shape[1]

    def column_index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None


def align_to_calendar(series: PriceSeries, cal: TradingCalendar) -> PriceSeries:
    """Restrict a series to the benchmark calendar, forward-filling gaps.

    Dates absent from the calendar are dropped; calendar dates missing from the
    series repeat the most recent prior close.
    """
    if series.dates[0] > cal.dates[0]:
        raise NoPriorClose(
            f"{series.ticker}: first calendar date {cal.dates[0]!r} precedes "
            f"first observation {series.dates[0]!r}"
        )
    lookup = dict(zip(series.dates, series.closes))
    closes = np.empty(len(cal.dates))
    last = None
    # Walk the series and calendar together so pre-calendar observations seed
    # the forward fill.
    it = iter(zip(series.dates, series.closes))
    nxt = next(it, None)
    for i, d in enumerate(cal.dates):
        while nxt is not None and nxt[0] <= d:
            last = nxt[1]
            nxt = next(it, None)
        if d in lookup:
            closes[i] = lookup[d]
        else:
            closes[i] = last
    return PriceSeries(series.ticker, cal.dates, closes, dict(series.meta))


def log_returns(series: PriceSeries) -> np.ndarray:
    """ln(P_t) - ln(P_{t-1}) for consecutive closes; length T-1."""
    if len(series.closes) < 2:
        raise TooShort(f"{series.ticker}: need at least 2 closes")
    logs = np.log(series.closes)
    return np.diff(logs)


def build_panel(series_set, cal: TradingCalendar) -> ReturnPanel:
    """Align every series to the calendar and assemble lag-0 return columns.

    Column order follows the input manifest order.
    """
    series_set = list(series_set)
    if len(series_set) < 2:
        raise TooShort("need at least 2 series to build a panel")
    tickers = [s.ticker for s in series_set]
    if len(set(tickers)) != len(tickers):
        dup = sorted({t for t in tickers if tickers.count(t) > 1})
        raise DuplicateLabel(f"duplicate tickers in manifest: {dup}")
    cols = []
    values = np.empty((len(cal.dates) - 1, len(series_set)))
    for j, s in enumerate(series_set):
        try:
            aligned = align_to_calendar(s, cal)
            values[:, j] = log_returns(aligned)
        except Exception as exc:
            raise type(exc)(f"{s.ticker}: {exc}") from exc
        cols.append(PanelColumn(s.ticker, dict(s.meta), lag=0))
    return ReturnPanel(cal.dates[1:], cols, values)


def lagged_label(label: str, lag: int) -> str:
    return label + "*" * lag


def augment_lagged(panel: ReturnPanel, max_lag: int) -> ReturnPanel:
    """Append day-shifted copies of every column as extra network nodes.

    The first ``max_lag`` rows are dropped so the panel stays rectangular;
    the lag-L copy of X at row t then equals X at row t-L.
    """
    if max_lag < 1:
        raise ValueError("max_lag must be >= 1")
    T = panel.n_rows
    if T <= max_lag:
        raise LagTooLarge(f"max_lag={max_lag} leaves no rows out of T={T}")
    blocks = []
    cols = []
    for lag in range(max_lag + 1):
        blocks.append(panel.values[max_lag - lag : T - lag, :])
        for c in panel.columns:
            cols.append(PanelColumn(lagged_label(c.label, lag), dict(c.meta), lag=lag))
    return ReturnPanel(panel.dates[max_lag:], cols, np.hstack(blocks))


# ---------------------------------------------------------------------------
# File formats: per-ticker CSV (date,close), manifest CSV, calendar CSV,
# panel CSV with a JSON metadata sidecar.
# ---------------------------------------------------------------------------

def load_price_csv(path, ticker=None, meta=None) -> PriceSeries:
    path = Path(path)
    dates, closes = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "date" not in reader.fieldnames or "close" not in reader.fieldnames:
            raise ValueError(f"{path}: expected header 'date,close'")
        for row in reader:
            dates.append(row["date"])
            closes.append(float(row["close"]))
    return PriceSeries(ticker or path.stem, tuple(dates), np.array(closes), meta or {})


def load_calendar_csv(path) -> TradingCalendar:
    with open(path, newline="") as fh:
        rows = [r[0] for r in csv.reader(fh) if r]
    if rows and rows[0].lower() == "date":
        rows = rows[1:]
    return TradingCalendar(tuple(rows))


MANIFEST_FIELDS = ("ticker", "file", "country", "industry", "sub_industry")


def load_manifest_csv(path):
    """Read the ordering/metadata manifest; returns a list of row dicts."""
    path = Path(path)
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [f for f in MANIFEST_FIELDS if f not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"{path}: manifest missing columns {missing}")
        for row in reader:
            rows.append({f: row[f] for f in MANIFEST_FIELDS})
    return rows


def load_series_from_manifest(manifest_path):
    """Load every PriceSeries listed in a manifest, in manifest order."""
    manifest_path = Path(manifest_path)
    out = []
    for row in load_manifest_csv(manifest_path):
        meta = {
            "country": row["country"],
            "industry": row["industry"],
            "sub_industry": row["sub_industry"],
        }
        fpath = Path(row["file"])
        if not fpath.is_absolute():
            fpath = manifest_path.parent / fpath
        out.append(load_price_csv(fpath, ticker=row["ticker"], meta=meta))
    return out


def save_panel_csv(panel: ReturnPanel, path):
    """Write the panel as CSV plus a '<path>.meta.json' column sidecar."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date"] + panel.labels)
        for t, d in enumerate(panel.dates):
            writer.writerow([d] + [repr(float(v)) for v in panel.values[t]])
    sidecar = [
        {"label": c.label, "lag": c.lag, "meta": c.meta} for c in panel.columns
    ]
    with open(path.with_suffix(path.suffix + ".meta.json"), "w") as fh:
        json.dump({"columns": sidecar}, fh, indent=2)


def load_panel_csv(path) -> ReturnPanel:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        labels = header[1:]
        dates, rows = [], []
        for row in reader:
            dates.append(row[0])
            rows.append([float(v) for v in row[1:]])
    meta_path = path.with_suffix(path.suffix + ".meta.json")
    if meta_path.exists():
        with open(meta_path) as fh:
            side = {c["label"]: c for c in json.load(fh)["columns"]}
        cols = [
            PanelColumn(lbl, side[lbl].get("meta", {}), side[lbl].get("lag", 0))
            for lbl in labels
        ]
    else:
        cols = [
            PanelColumn(lbl, {}, lag=len(lbl) - len(lbl.rstrip("*"))) for lbl in labels
        ]
    return ReturnPanel(tuple(dates), cols, np.array(rows))
