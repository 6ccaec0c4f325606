"""Controversy scoring: burstiness, newsworthiness, sentiment, gate + rank.

An event is flagged controversial only when all three hold: mean sentiment is
negative, the entity's daily volume is bursting (and the cluster is active
today), and the cluster carries at least one verified news link.  A separate
continuous rank score orders events for display.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, timedelta

from .clustering import EventCluster
from .credibility import AllowList, unique_credible_links

BURST_BASELINE_DAYS = 7


@dataclass
class ControversyParams:
    burst_velocity_threshold: float = 2.0
    rank_weights: tuple[float, float, float] = (0.4, 0.3, 0.3)  # burst, news, sentiment
    news_count_gate: int = 1

    def __post_init__(self):
        if not (self.burst_velocity_threshold > 0):
            raise ValueError("burst_velocity_threshold must be positive")
        weights = tuple(float(w) for w in self.rank_weights)
        if len(weights) != 3 or any(w < 0 for w in weights):
            raise ValueError("rank_weights must be three nonnegative numbers")
        if abs(sum(weights) - 1.0) > 1e-6:
            raise ValueError("rank_weights must sum to 1")
        self.rank_weights = weights
        if self.news_count_gate < 1:
            raise ValueError("news_count_gate must be >= 1")


@dataclass
class DailyVolume:
    """Daily admitted-tweet counts for the tracked entity (stream-wide,
    not per-cluster)."""

    counts: Counter = field(default_factory=Counter)

    def add(self, day: date, n: int = 1) -> None:
        self.counts[day] += n

    def last_day(self) -> date | None:
        return max(self.counts) if self.counts else None


def burstiness(
    cluster: EventCluster,
    volume: DailyVolume,
    params: ControversyParams,
    today: date,
) -> tuple[bool, float]:
    """Velocity of today's entity volume against the trailing 7-day mean
    (missing days count as zero, floor of 1); flagged when the velocity
    clears the threshold and the cluster gained a member today."""
    baseline = sum(
        volume.counts.get(today - timedelta(days=k), 0) for k in range(1, BURST_BASELINE_DAYS + 1)
    ) / float(BURST_BASELINE_DAYS)
    velocity = volume.counts.get(today, 0) / max(1.0, baseline)
    flag = velocity >= params.burst_velocity_threshold and cluster.per_day_counts.get(today, 0) >= 1
    return flag, velocity


def event_sentiment(cluster: EventCluster) -> float:
    """Arithmetic mean of member sentiment scores."""
    if cluster.member_count < 1:
        raise ValueError("cluster has no members")
    return math.fsum(cluster.sentiments) / cluster.member_count


def newsworthiness(cluster: EventCluster, allowlist: AllowList) -> tuple[int, float]:
    """(count of unique verified news links, ln(1 + count))."""
    count = unique_credible_links(cluster, allowlist)
    return count, math.log1p(count)


@dataclass
class ControversyReport:
    cluster_id: int
    member_count: int
    burst_flag: bool
    burst_velocity: float
    news_count: int
    news_score: float
    sentiment_mean: float
    controversial: bool
    rank_score: float
    top_terms: list[tuple[str, int]]

    def as_dict(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "member_count": self.member_count,
            "burst_flag": self.burst_flag,
            "burst_velocity": self.burst_velocity,
            "news_count": self.news_count,
            "news_score": self.news_score,
            "sentiment_mean": self.sentiment_mean,
            "controversial": self.controversial,
            "rank_score": self.rank_score,
            "top_terms": [[term, count] for term, count in self.top_terms],
        }


def classify_and_rank(
    events: list[EventCluster],
    volume: DailyVolume,
    allowlist: AllowList,
    params: ControversyParams,
    today: date,
) -> list[ControversyReport]:
    """Score candidate events and order them: controversial first, then by
    rank score, then by cluster id (a total order, stable across runs)."""
    w_burst, w_news, w_sent = params.rank_weights
    threshold = params.burst_velocity_threshold
    reports = []
    for cluster in events:
        sentiment = event_sentiment(cluster)
        flag, velocity = burstiness(cluster, volume, params, today)
        count, news_score = newsworthiness(cluster, allowlist)
        controversial = sentiment < 0 and flag and count >= params.news_count_gate
        rank = (
            w_burst * min(velocity / threshold, 2.0) / 2.0
            + w_news * (news_score / (1.0 + news_score))
            + w_sent * (max(0.0, -sentiment) / 2.0)
        )
        reports.append(ControversyReport(
            cluster_id=cluster.cluster_id,
            member_count=cluster.member_count,
            burst_flag=flag,
            burst_velocity=velocity,
            news_count=count,
            news_score=news_score,
            sentiment_mean=sentiment,
            controversial=controversial,
            rank_score=rank,
            top_terms=cluster.top_terms(),
        ))
    reports.sort(key=lambda r: (not r.controversial, -r.rank_score, r.cluster_id))
    return reports
