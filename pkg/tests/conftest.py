import numpy as np
import pytest

from etenet.discretize import BinningSpec, SymbolSeries
from etenet.estimators import panel_from_array
from etenet.panel import PriceSeries, TradingCalendar


def sym(values, n_bins=None):
    """Wrap 1-based integer symbols in a SymbolSeries with a matching spec."""
    arr = np.asarray(values, dtype=np.int64)
    if n_bins is None:
        n_bins = int(arr.max())
    spec = BinningSpec(lo=0.0, hi=float(n_bins), width=1.0, n_bins=n_bins)
    return SymbolSeries(arr, spec)


def make_panel(values, labels=None):
    return panel_from_array(np.asarray(values, dtype=float), labels)


def prices(ticker, dates, closes, **meta):
    return PriceSeries(ticker, tuple(dates), np.asarray(closes, dtype=float), meta)


@pytest.fixture
def calendar5():
    return TradingCalendar(("2020-01-02", "2020-01-03", "2020-01-06",
                            "2020-01-07", "2020-01-08"))
