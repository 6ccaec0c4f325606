"""Equity impact statistics: daily returns, moments, z-scores, histograms.

Mirrors a simple event-day analysis: simple (not log) returns, sample
moments over a trailing window, and the event-day return expressed in
standard deviations from the mean.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date

import numpy as np


class InsufficientData(ValueError):
    """Not enough points for the requested computation."""


class ZeroVariance(ValueError):
    """z-score is undefined when the return spread is zero."""


@dataclass(frozen=True)
class PriceSeries:
    """Dated closing prices, strictly increasing dates, positive prices."""

    symbol: str
    points: tuple[tuple[date, float], ...]

    def __post_init__(self):
        last = None
        for day, close in self.points:
            if last is not None and day <= last:
                raise ValueError(f"dates must be strictly increasing at {day}")
            if not (math.isfinite(close) and close > 0):
                raise ValueError(f"price must be finite and positive on {day}: {close}")
            last = day


def load_price_csv(path, symbol: str | None = None) -> PriceSeries:
    """Read a "date,close" CSV (ISO dates, one row per trading day)."""
    points = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or "date" not in reader.fieldnames or "close" not in reader.fieldnames:
            raise ValueError(f"{path}: expected a 'date,close' header")
        for row in reader:
            points.append((date.fromisoformat(row["date"].strip()), float(row["close"])))
    return PriceSeries(symbol=symbol or str(path), points=tuple(points))


def daily_returns(series: PriceSeries) -> list[tuple[date, float]]:
    """Simple day-over-day returns, dated by the later day."""
    points = series.points
    if len(points) < 2:
        raise InsufficientData("need at least 2 price points")
    out = []
    for (_, prev_close), (day, close) in zip(points, points[1:]):
        out.append((day, (close - prev_close) / prev_close))
    return out


@dataclass(frozen=True)
class ReturnStats:
    mean: float
    std: float  # sample standard deviation (n-1 denominator)
    n: int


def return_stats(returns) -> ReturnStats:
    values = np.asarray(list(returns), dtype=float)
    if values.size < 2:
        raise InsufficientData("need at least 2 returns for sample moments")
    return ReturnStats(
        mean=float(values.mean()),
        std=float(values.std(ddof=1)),
        n=int(values.size),
    )


def event_day_zscore(r: float, stats: ReturnStats) -> float:
    """How many sample standard deviations the return sits from the mean."""
    if stats.std <= 0:
        raise ZeroVariance("standard deviation is zero")
    return (r - stats.mean) / stats.std


def return_histogram(returns, bins: int) -> list[tuple[float, float, int]]:
    """Equal-width bins spanning [min, max]; right-open except the last bin,
    which is closed, so counts always sum to len(returns)."""
    values = list(returns)
    if not values:
        raise InsufficientData("no returns to bin")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    lo = min(values)
    hi = max(values)
    width = (hi - lo) / bins
    counts = [0] * bins
    for x in values:
        if width > 0:
            idx = min(int((x - lo) / width), bins - 1)
        else:
            idx = 0
        counts[idx] += 1
    return [
        (lo + i * width, hi if i == bins - 1 else lo + (i + 1) * width, counts[i])
        for i in range(bins)
    ]


def paired_returns(series: PriceSeries, index: PriceSeries) -> list[tuple[date, float, float]]:
    """Inner-join two return series by date; for overlaying an index."""
    base = dict(daily_returns(series))
    other = dict(daily_returns(index))
    return [(day, base[day], other[day]) for day in sorted(base.keys() & other.keys())]
