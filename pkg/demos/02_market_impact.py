#!/usr/bin/env python3
"""Quantify how unusual an event-day price move is.

Builds a year of synthetic daily closes whose returns have a chosen mean
and spread, appends one sharply negative event day, and reports the
event-day z-score plus a terminal histogram of the trailing distribution.

    python demos/02_market_impact.py
"""

import random

from outcry import daily_returns, event_day_zscore, return_histogram, return_stats
from outcry.market import PriceSeries
from datetime import date, timedelta


def build_series(n_days=253, mean=5e-5, spread=0.009, event_return=-0.017, seed=9):
    rng = random.Random(seed)
    closes = [100.0]
    for _ in range(n_days - 2):
        closes.append(closes[-1] * (1.0 + rng.gauss(mean, spread)))
    closes.append(closes[-1] * (1.0 + event_return))
    start = date(2023, 4, 3)
    points = tuple((start + timedelta(days=i), c) for i, c in enumerate(closes))
    return PriceSeries(symbol="DEMO", points=points)


def ascii_histogram(bins, width=46):
    top = max(count for _, _, count in bins) or 1
    for lo, hi, count in bins:
        bar = "#" * round(width * count / top)
        print(f"  [{lo:+.4f}, {hi:+.4f}) {bar} {count}")


def main():
    series = build_series()
    returns = daily_returns(series)
    event_day, event_return = returns[-1]
    trailing = [r for _, r in returns[:-1]]

    stats = return_stats(trailing)
    z = event_day_zscore(event_return, stats)

    print(f"trailing window: {stats.n} daily returns")
    print(f"  mean {stats.mean:+.6f}   sample std {stats.std:.6f}")
    print(f"event day {event_day}: return {event_return:+.4f}")
    print(f"  z-score {z:+.3f}  ({abs(z):.1f} standard deviations "
          f"{'below' if z < 0 else 'above'} the mean)\n")

    print("distribution of trailing daily returns:")
    ascii_histogram(return_histogram(trailing, 15))

    print("\nsame thing via the CLI (given a date,close CSV):")
    print("  outcry market --prices prices.csv --event-date "
          f"{event_day} --window-days 252 --bins 20")


if __name__ == "__main__":
    main()
