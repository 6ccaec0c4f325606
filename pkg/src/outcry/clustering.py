"""Online incremental clustering of tweet vectors.

Each incoming vector merges into the closest existing cluster when the cosine
distance to the cluster average vector is below the merge threshold,
otherwise it opens a new singleton cluster.  Centroids are maintained as
running term sums (the mean is derived, so incremental and batch centroids
agree exactly), and an inverted term index limits distance computations to
clusters that actually share vocabulary -- disjoint clusters sit at distance
1.0 and can never win a merge.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from datetime import date, datetime, timedelta

from .features import TweetVector

MERGED = "merged"
CREATED = "created"

CHECKPOINT_VERSION = 1


class DegenerateVector(ValueError):
    """A vector (or centroid) with zero norm cannot be compared."""


@dataclass
class ClusterParams:
    """Knobs for the online clusterer.

    merge_threshold: cosine distance below which a vector joins a cluster;
        values above 1 are capped at 1 (cosine distance never exceeds 1).
    min_event_size: members needed before a cluster counts as an event.
    inactivity_expiry: idle time after which sub-event clusters are evicted.
    """

    merge_threshold: float = 0.7
    min_event_size: int = 5
    inactivity_expiry: timedelta = timedelta(hours=72)

    def __post_init__(self):
        if not (self.merge_threshold > 0):
            raise ValueError("merge_threshold must be positive")
        self.merge_threshold = min(self.merge_threshold, 1.0)
        if self.min_event_size < 1:
            raise ValueError("min_event_size must be >= 1")
        if self.inactivity_expiry <= timedelta(0):
            raise ValueError("inactivity_expiry must be positive")


class EventCluster:
    """A group of tweet vectors summarized by running term sums.

    ``centroid`` (mean term weights) is derived from the sums on demand;
    ``norm`` is the L2 norm of the sums, maintained incrementally.
    """

    __slots__ = (
        "cluster_id", "term_sums", "member_ids", "sentiments", "links",
        "per_day_counts", "per_day_sentiment", "created_at", "last_updated",
        "_norm_sq",
    )

    def __init__(self, cluster_id: int, vector: TweetVector):
        self.cluster_id = cluster_id
        self.term_sums: dict[str, float] = {}
        self.member_ids: list[str] = []
        self.sentiments: list[float] = []
        self.links: set[str] = set()
        self.per_day_counts: dict[date, int] = {}
        self.per_day_sentiment: dict[date, float] = {}
        self.created_at = vector.timestamp
        self.last_updated = vector.timestamp
        self._norm_sq = 0.0
        self.add(vector)

    @property
    def member_count(self) -> int:
        return len(self.member_ids)

    @property
    def norm(self) -> float:
        return math.sqrt(self._norm_sq)

    @property
    def centroid(self) -> dict[str, float]:
        n = len(self.member_ids)
        return {term: weight / n for term, weight in self.term_sums.items()}

    def add(self, vector: TweetVector) -> None:
        sums = self.term_sums
        norm_sq = self._norm_sq
        for term, count in vector.terms.items():
            old = sums.get(term, 0.0)
            norm_sq += count * (2.0 * old + count)
            sums[term] = old + count
        self._norm_sq = norm_sq
        self.member_ids.append(vector.tweet_id)
        self.sentiments.append(vector.sentiment)
        self.links.update(vector.links)
        day = vector.day
        self.per_day_counts[day] = self.per_day_counts.get(day, 0) + 1
        self.per_day_sentiment[day] = self.per_day_sentiment.get(day, 0.0) + vector.sentiment
        if vector.timestamp > self.last_updated:
            self.last_updated = vector.timestamp

    def recompute_norm(self) -> float:
        """Exact norm from the sums; debug guard against incremental drift."""
        self._norm_sq = math.fsum(w * w for w in self.term_sums.values())
        return self.norm

    def top_terms(self, limit: int = 5) -> list[tuple[str, int]]:
        ranked = sorted(self.term_sums.items(), key=lambda kv: (-kv[1], kv[0]))
        return [(term, int(weight)) for term, weight in ranked[:limit]]


def distance(vector: TweetVector, cluster: EventCluster) -> float:
    """Cosine distance in [0, 1] between the vector and the cluster average
    vector; 1.0 when term supports are disjoint."""
    terms = vector.terms
    if not terms:
        raise DegenerateVector("vector has no terms")
    v_norm = math.sqrt(sum(c * c for c in terms.values()))
    c_norm = cluster.norm
    if v_norm == 0.0 or c_norm == 0.0:
        raise DegenerateVector("zero-norm operand")
    dot = 0.0
    sums = cluster.term_sums
    for term, count in terms.items():
        weight = sums.get(term)
        if weight:
            dot += count * weight
    return min(1.0, max(0.0, 1.0 - dot / (v_norm * c_norm)))


class ClusterState:
    """All live clusters plus the bookkeeping for streaming assignment.

    Single-writer: ``assign`` mutates shared state and must be called in
    stream order.
    """

    def __init__(self, params: ClusterParams | None = None):
        self.params = params or ClusterParams()
        self.clusters: dict[int, EventCluster] = {}
        self.next_id = 1
        self.admitted = 0
        self.expired_clusters = 0
        self.expired_members = 0
        self._term_index: dict[str, set[int]] = {}

    def assign(self, vector: TweetVector) -> tuple[int, str]:
        """Merge the vector into the closest cluster when its distance is
        below the threshold (ties go to the lowest cluster id), else create
        a singleton.  Returns (cluster_id, "merged" | "created")."""
        terms = vector.terms
        if not terms:
            raise DegenerateVector("cannot assign an empty-term vector")

        index = self._term_index
        clusters = self.clusters
        dots: dict[int, float] = {}
        for term, count in terms.items():
            for cid in index.get(term, ()):
                dots[cid] = dots.get(cid, 0.0) + count * clusters[cid].term_sums[term]

        best_id = -1
        best_dist = math.inf
        if dots:
            v_norm = math.sqrt(sum(c * c for c in terms.values()))
            for cid in sorted(dots):
                d = 1.0 - dots[cid] / (v_norm * clusters[cid].norm)
                if d < 0.0:
                    d = 0.0
                if d < best_dist:
                    best_dist = d
                    best_id = cid

        self.admitted += 1
        if best_id >= 0 and best_dist < self.params.merge_threshold:
            cluster = clusters[best_id]
            known = cluster.term_sums
            new_terms = [t for t in terms if t not in known]
            cluster.add(vector)
            for term in new_terms:
                index.setdefault(term, set()).add(best_id)
            return best_id, MERGED

        cid = self.next_id
        self.next_id += 1
        clusters[cid] = EventCluster(cid, vector)
        for term in terms:
            index.setdefault(term, set()).add(cid)
        return cid, CREATED

    def candidate_events(self) -> list[EventCluster]:
        """Clusters large enough to count as events, biggest first."""
        events = [c for c in self.clusters.values()
                  if c.member_count >= self.params.min_event_size]
        events.sort(key=lambda c: (-c.member_count, c.cluster_id))
        return events

    def expire_inactive(self, now: datetime) -> int:
        """Drop sub-event clusters idle longer than the expiry window.
        Candidate events are never expired."""
        cutoff = now - self.params.inactivity_expiry
        doomed = [
            cid for cid, c in self.clusters.items()
            if c.last_updated < cutoff and c.member_count < self.params.min_event_size
        ]
        for cid in doomed:
            cluster = self.clusters.pop(cid)
            self.expired_clusters += 1
            self.expired_members += cluster.member_count
            for term in cluster.term_sums:
                bucket = self._term_index.get(term)
                if bucket is not None:
                    bucket.discard(cid)
                    if not bucket:
                        del self._term_index[term]
        return len(doomed)

    def recompute_norms(self) -> None:
        for cluster in self.clusters.values():
            cluster.recompute_norm()

    # -- checkpointing -----------------------------------------------------

    def save(self, path) -> None:
        """Write a versioned JSON checkpoint; loading restores bit-identical
        state (norms included, so resumed runs match uninterrupted ones)."""
        payload = {
            "schema_version": CHECKPOINT_VERSION,
            "params": {
                "merge_threshold": self.params.merge_threshold,
                "min_event_size": self.params.min_event_size,
                "inactivity_expiry_hours": self.params.inactivity_expiry.total_seconds() / 3600.0,
            },
            "next_id": self.next_id,
            "admitted": self.admitted,
            "expired_clusters": self.expired_clusters,
            "expired_members": self.expired_members,
            "clusters": [
                {
                    "cluster_id": c.cluster_id,
                    "term_sums": c.term_sums,
                    "norm_sq": c._norm_sq,
                    "member_ids": c.member_ids,
                    "sentiments": c.sentiments,
                    "links": sorted(c.links),
                    "per_day_counts": {d.isoformat(): n for d, n in sorted(c.per_day_counts.items())},
                    "per_day_sentiment": {d.isoformat(): s for d, s in sorted(c.per_day_sentiment.items())},
                    "created_at": c.created_at.isoformat(),
                    "last_updated": c.last_updated.isoformat(),
                }
                for _, c in sorted(self.clusters.items())
            ],
        }
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=1)
            handle.write("\n")

    @classmethod
    def load(cls, path) -> "ClusterState":
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        version = payload.get("schema_version")
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version: {version!r}")
        params = ClusterParams(
            merge_threshold=payload["params"]["merge_threshold"],
            min_event_size=payload["params"]["min_event_size"],
            inactivity_expiry=timedelta(hours=payload["params"]["inactivity_expiry_hours"]),
        )
        state = cls(params)
        state.next_id = payload["next_id"]
        state.admitted = payload["admitted"]
        state.expired_clusters = payload["expired_clusters"]
        state.expired_members = payload["expired_members"]
        for entry in payload["clusters"]:
            cluster = EventCluster.__new__(EventCluster)
            cluster.cluster_id = entry["cluster_id"]
            cluster.term_sums = dict(entry["term_sums"])
            cluster._norm_sq = entry["norm_sq"]
            cluster.member_ids = list(entry["member_ids"])
            cluster.sentiments = [float(s) for s in entry["sentiments"]]
            cluster.links = set(entry["links"])
            cluster.per_day_counts = {
                date.fromisoformat(d): n for d, n in entry["per_day_counts"].items()
            }
            cluster.per_day_sentiment = {
                date.fromisoformat(d): s for d, s in entry["per_day_sentiment"].items()
            }
            cluster.created_at = datetime.fromisoformat(entry["created_at"])
            cluster.last_updated = datetime.fromisoformat(entry["last_updated"])
            state.clusters[cluster.cluster_id] = cluster
            for term in cluster.term_sums:
                state._term_index.setdefault(term, set()).add(cluster.cluster_id)
        return state
