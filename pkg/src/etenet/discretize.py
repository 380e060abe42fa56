"""Fixed-width binning of returns and the joint symbol counts behind all
entropy estimators."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import EmptyData, LengthMismatch, OutOfRange, ZeroWidth

GLOBAL = "global"
PER_SERIES = "per-series"


@dataclass(frozen=True)
class BinningSpec:
    """Fixed-width binning over [lo, hi], symbols 1..n_bins.

    Bins are left-closed/right-open; the last bin is closed so the mapping
    is total on [lo, hi].
    """

    lo: float
    hi: float
    width: float
    n_bins: int
    mode: str = GLOBAL

    def __post_init__(self):
        if self.width <= 0:
            raise ZeroWidth("bin width must be positive")
        if self.n_bins < 1:
            raise ValueError("n_bins must be >= 1")
        if self.lo + self.n_bins * self.width < self.hi - 1e-12:
            raise ValueError("bins do not cover [lo, hi]")

    @property
    def edges(self):
        return self.lo + self.width * np.arange(self.n_bins + 1)


@dataclass(frozen=True)
class SymbolSeries:
    """Integer symbol stream (1..n_bins) with the binning that produced it."""

    symbols: np.ndarray
    spec: BinningSpec

    def __post_init__(self):
        sym = np.asarray(self.symbols, dtype=np.int64)
        object.__setattr__(self, "symbols", sym)
        if sym.size and (sym.min() < 1 or sym.max() > self.spec.n_bins):
            raise OutOfRange("symbols outside 1..n_bins")

    def __len__(self):
        return len(self.symbols)


def fit_bins(data, width: float, mode: str = GLOBAL) -> BinningSpec:
    """Choose [lo, hi] covering the data, rounded outward to multiples of width.

    Global mode scans every supplied column; per-series mode expects a single
    column.
    """
    if width <= 0:
        raise ZeroWidth("bin width must be positive")
    arr = np.concatenate([np.ravel(np.asarray(c, dtype=float)) for c in _as_columns(data)])
    if arr.size == 0:
        raise EmptyData("no data to fit bins on")
    lo = math.floor(arr.min() / width) * width
    hi = math.ceil(arr.max() / width) * width
    if hi <= lo:  # constant data collapses to a single bin
        hi = lo + width
    n_bins = int(round((hi - lo) / width))
    return BinningSpec(lo=lo, hi=hi, width=width, n_bins=n_bins, mode=mode)


def _as_columns(data):
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        return [arr]
    if arr.ndim == 2:
        return [arr[:, j] for j in range(arr.shape[1])]
    raise ValueError("data must be 1-D or 2-D")


def symbolize(returns, spec: BinningSpec) -> SymbolSeries:
    """Map each value to its bin symbol: floor((x - lo)/width) + 1."""
    x = np.asarray(returns, dtype=float)
    if np.any(x < spec.lo) or np.any(x > spec.hi):
        bad = x[(x < spec.lo) | (x > spec.hi)][0]
        raise OutOfRange(f"value {bad} outside [{spec.lo}, {spec.hi}]")
    sym = np.floor((x - spec.lo) / spec.width).astype(np.int64) + 1
    # x == hi (and float round-up at interior edges) land in the last bin
    np.clip(sym, 1, spec.n_bins, out=sym)
    return SymbolSeries(sym, spec)


def symbolize_panel(values, spec: BinningSpec) -> np.ndarray:
    """Symbolize a T x N array in one shot; returns int64 symbols, same shape."""
    x = np.asarray(values, dtype=float)
    if np.any(x < spec.lo) or np.any(x > spec.hi):
        raise OutOfRange(f"panel values outside [{spec.lo}, {spec.hi}]")
    sym = np.floor((x - spec.lo) / spec.width).astype(np.int64) + 1
    np.clip(sym, 1, spec.n_bins, out=sym)
    return sym


@dataclass(frozen=True)
class JointCounts:
    """Sparse counts of (i_{n+1}, dest history of length k, source history of
    length l) tuples; histories are ordered most recent first."""

    k: int
    l: int
    table: dict
    total: int

    def marginal(self, keep):
        """Collapse to the coordinates named in ``keep`` (subset of
        {'next', 'dest', 'source'}), preserving counts exactly."""
        out = Counter()
        for (nxt, dest, src), c in self.table.items():
            parts = []
            if "next" in keep:
                parts.append((nxt,))
            if "dest" in keep:
                parts.append(dest)
            if "source" in keep:
                parts.append(src)
            flat = tuple(v for chunk in parts for v in chunk)
            out[flat] += c
        return dict(out)


def joint_counts(dest: SymbolSeries, source: SymbolSeries, k: int = 1, l: int = 1) -> JointCounts:
    """Count realized (next, dest-history, source-history) symbol tuples."""
    if len(dest) != len(source):
        raise LengthMismatch(f"{len(dest)} vs {len(source)}")
    if k < 1 or l < 1:
        raise ValueError("k and l must be >= 1")
    x = dest.symbols
    y = source.symbols
    T = len(x)
    m = max(k, l)
    if T <= m:
        raise LengthMismatch(f"series of length {T} too short for histories of {m}")
    table = Counter()
    for n in range(m - 1, T - 1):
        key = (
            int(x[n + 1]),
            tuple(int(v) for v in x[n - k + 1 : n + 1][::-1]),
            tuple(int(v) for v in y[n - l + 1 : n + 1][::-1]),
        )
        table[key] += 1
    return JointCounts(k=k, l=l, table=dict(table), total=T - m)
