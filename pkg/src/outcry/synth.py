"""Deterministic synthetic tweet streams with injected ground-truth events.

The generator shares no hidden state with the detector: injected sentiment
comes from words that are actually in the shipped lexicon, credible links
point at domains from the shipped allowlist, and event tweets carry a fixed
core of proper-noun-shaped terms so expected cosine distances are easy to
reason about in tests.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta, timezone

from .config import InvalidConfig
from .credibility import AllowList
from .features import SentimentLexicon

_TOKEN_OK = re.compile(r"^\w+$")
_POOL_TERM_OK = re.compile(r"^[a-z][a-z ]*$")

_FILLERS = (" at the ", " over the ", " during the ", " near the ")
_SOURCES = ("web", "android", "iphone")
_NEUTRAL_WORDS = ("fine", "okay", "meh")

DEFAULT_START_DATE = date(2024, 3, 1)


@dataclass(frozen=True)
class InjectedEvent:
    start_day: int
    duration_days: int
    peak_rate: int
    term_pool: tuple[str, ...]
    sentiment_range: tuple[float, float]
    credible_link_count: int = 1
    noncredible_link_count: int = 0
    expected_controversial: bool = True

    def validate(self, days: int) -> None:
        if not (0 <= self.start_day < days):
            raise InvalidConfig(f"event start_day {self.start_day} outside scenario days")
        if self.duration_days < 1 or self.peak_rate < 1:
            raise InvalidConfig("event duration_days and peak_rate must be >= 1")
        if not self.term_pool:
            raise InvalidConfig("event term_pool must not be empty")
        for term in self.term_pool:
            if not _POOL_TERM_OK.match(term):
                raise InvalidConfig(f"event pool terms must be lowercase words: {term!r}")
        lo, hi = self.sentiment_range
        if not (-2.0 <= lo <= hi <= 2.0):
            raise InvalidConfig(f"sentiment_range must be ordered within [-2, 2]: {self.sentiment_range}")
        if self.credible_link_count < 0 or self.noncredible_link_count < 0:
            raise InvalidConfig("link counts must be >= 0")


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int
    days: int
    ambient_rate: int = 0
    ambient_topics: tuple[tuple[str, ...], ...] = ()
    injected_events: tuple[InjectedEvent, ...] = ()
    vocabulary_noise: float = 0.0
    entity: str = "AcmeCorp"
    ambient_days: int | None = None  # None -> ambient runs the whole scenario
    ambient_entity_rate: float = 1.0
    start_date: date = DEFAULT_START_DATE

    def validate(self) -> None:
        if self.days < 1:
            raise InvalidConfig("days must be >= 1")
        if self.ambient_rate < 0:
            raise InvalidConfig("ambient_rate must be >= 0")
        if self.ambient_rate > 0 and not self.ambient_topics:
            raise InvalidConfig("ambient_rate > 0 needs at least one ambient topic pool")
        for pool in self.ambient_topics:
            if not pool:
                raise InvalidConfig("ambient topic pools must not be empty")
            for term in pool:
                if not _TOKEN_OK.match(term):
                    raise InvalidConfig(f"ambient pool terms must be single tokens: {term!r}")
        if not (0.0 <= self.vocabulary_noise <= 1.0):
            raise InvalidConfig("vocabulary_noise must be in [0, 1]")
        if not (0.0 <= self.ambient_entity_rate <= 1.0):
            raise InvalidConfig("ambient_entity_rate must be in [0, 1]")
        if self.ambient_days is not None and self.ambient_days < 0:
            raise InvalidConfig("ambient_days must be >= 0")
        if not self.entity.strip():
            raise InvalidConfig("entity must be non-empty")
        for event in self.injected_events:
            event.validate(self.days)

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        if not isinstance(data, dict):
            raise InvalidConfig("scenario must be a JSON object")
        known = {
            "seed", "days", "ambient_rate", "ambient_topics", "injected_events",
            "vocabulary_noise", "entity", "ambient_days", "ambient_entity_rate",
            "start_date",
        }
        unknown = set(data) - known
        if unknown:
            raise InvalidConfig(f"unknown scenario keys: {sorted(unknown)}")
        try:
            events = []
            for entry in data.get("injected_events", []):
                event_known = {
                    "start_day", "duration_days", "peak_rate", "term_pool",
                    "sentiment_range", "credible_link_count",
                    "noncredible_link_count", "expected_controversial",
                }
                extra = set(entry) - event_known
                if extra:
                    raise InvalidConfig(f"unknown injected_event keys: {sorted(extra)}")
                events.append(InjectedEvent(
                    start_day=int(entry["start_day"]),
                    duration_days=int(entry["duration_days"]),
                    peak_rate=int(entry["peak_rate"]),
                    term_pool=tuple(entry["term_pool"]),
                    sentiment_range=tuple(float(x) for x in entry["sentiment_range"]),
                    credible_link_count=int(entry.get("credible_link_count", 1)),
                    noncredible_link_count=int(entry.get("noncredible_link_count", 0)),
                    expected_controversial=bool(entry.get("expected_controversial", True)),
                ))
            cfg = cls(
                seed=int(data["seed"]),
                days=int(data["days"]),
                ambient_rate=int(data.get("ambient_rate", 0)),
                ambient_topics=tuple(tuple(pool) for pool in data.get("ambient_topics", [])),
                injected_events=tuple(events),
                vocabulary_noise=float(data.get("vocabulary_noise", 0.0)),
                entity=str(data.get("entity", "AcmeCorp")),
                ambient_days=(None if data.get("ambient_days") is None
                              else int(data["ambient_days"])),
                ambient_entity_rate=float(data.get("ambient_entity_rate", 1.0)),
                start_date=(date.fromisoformat(data["start_date"])
                            if "start_date" in data else DEFAULT_START_DATE),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidConfig):
                raise
            raise InvalidConfig(f"bad scenario config: {exc}") from exc
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        try:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_dict(data)


@dataclass
class EventTruth:
    event_index: int
    expected_controversial: bool
    tweet_ids: list[str] = field(default_factory=list)


@dataclass
class GroundTruth:
    events: list[EventTruth] = field(default_factory=list)

    def save(self, path) -> None:
        payload = {
            "schema_version": 1,
            "events": [
                {
                    "event_index": e.event_index,
                    "expected_controversial": e.expected_controversial,
                    "tweet_ids": e.tweet_ids,
                }
                for e in self.events
            ],
        }
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=1)
            handle.write("\n")

    @classmethod
    def load(cls, path) -> "GroundTruth":
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        return cls(events=[
            EventTruth(
                event_index=e["event_index"],
                expected_controversial=e["expected_controversial"],
                tweet_ids=list(e["tweet_ids"]),
            )
            for e in payload["events"]
        ])


def _render_phrase(term: str) -> str:
    return " ".join(word.capitalize() for word in term.split())


def _sentiment_pool(lexicon: SentimentLexicon, lo: float, hi: float) -> list[str]:
    pool = sorted(w for w, v in lexicon.entries.items() if lo <= v <= hi)
    if not pool:
        raise InvalidConfig(f"no lexicon words with valence in [{lo}, {hi}]")
    return pool


def generate(cfg: ScenarioConfig) -> tuple[list[str], GroundTruth]:
    """Emit (JSONL lines in timestamp order, ground truth).

    Fully determined by cfg: same config -> byte-identical output.  Daily
    emission counts match the configured rates exactly.
    """
    cfg.validate()
    rng = random.Random(cfg.seed)
    lexicon = SentimentLexicon.load()
    credible_domains = sorted(AllowList.load().domains)

    event_words = [
        _sentiment_pool(lexicon, ev.sentiment_range[0], ev.sentiment_range[1])
        for ev in cfg.injected_events
    ]
    event_links: list[list[str]] = []
    for idx, ev in enumerate(cfg.injected_events):
        links = [
            f"https://{credible_domains[k % len(credible_domains)]}/story/{idx}/{k}"
            for k in range(ev.credible_link_count)
        ]
        links += [
            f"https://blog{k}.example/post/{idx}/{k}"
            for k in range(ev.noncredible_link_count)
        ]
        event_links.append(links)
    link_cursor = [0] * len(cfg.injected_events)

    truth = GroundTruth(events=[
        EventTruth(event_index=i, expected_controversial=ev.expected_controversial)
        for i, ev in enumerate(cfg.injected_events)
    ])

    ambient_days = cfg.days if cfg.ambient_days is None else min(cfg.ambient_days, cfg.days)
    lines: list[str] = []

    for day in range(cfg.days):
        jobs: list[int] = []  # -1 = ambient, otherwise event index
        if day < ambient_days:
            jobs.extend([-1] * cfg.ambient_rate)
        for idx, ev in enumerate(cfg.injected_events):
            if ev.start_day <= day < ev.start_day + ev.duration_days:
                jobs.extend([idx] * ev.peak_rate)
        if not jobs:
            continue
        rng.shuffle(jobs)
        day_start = datetime.combine(cfg.start_date + timedelta(days=day),
                                     time(0, 0), tzinfo=timezone.utc)
        for i, job in enumerate(jobs):
            stamp = day_start + timedelta(seconds=(i * 86400) // len(jobs))
            posting_id = f"syn-{day:03d}-{i:05d}"
            if job < 0:
                record = _ambient_record(cfg, rng, posting_id, stamp)
            else:
                record = _event_record(
                    cfg, rng, posting_id, stamp, job,
                    event_words[job], event_links[job], link_cursor,
                )
                truth.events[job].tweet_ids.append(posting_id)
            lines.append(json.dumps(record, ensure_ascii=False))

    return lines, truth


def _noise_tag(rng: random.Random) -> str:
    return f"zz{rng.randrange(10**8):08d}"


def _ambient_record(cfg: ScenarioConfig, rng: random.Random,
                    posting_id: str, stamp: datetime) -> dict:
    pool = cfg.ambient_topics[rng.randrange(len(cfg.ambient_topics))]
    tags = rng.sample(pool, k=min(3, len(pool)))
    parts = []
    if rng.random() < cfg.ambient_entity_rate:
        parts.append(f"{cfg.entity}:")
    parts.append("more of the usual")
    parts.extend(f"#{t}" for t in tags)
    if rng.random() < 0.5:
        parts.append(rng.choice(_NEUTRAL_WORDS))
    if rng.random() < cfg.vocabulary_noise:
        parts.append(f"#{_noise_tag(rng)}")
    return {
        "posting_id": posting_id,
        "creation_time": stamp.isoformat(),
        "text": " ".join(parts),
        "language": "en",
        "source": rng.choice(_SOURCES),
        "urls": [],
        "hashtags": [],
    }


def _event_record(cfg: ScenarioConfig, rng: random.Random, posting_id: str,
                  stamp: datetime, event_index: int, sentiment_words: list[str],
                  links: list[str], link_cursor: list[int]) -> dict:
    event = cfg.injected_events[event_index]
    chosen = list(event.term_pool[:3])
    extras = event.term_pool[3:]
    if extras and rng.random() < 0.5:
        chosen.append(rng.choice(extras))
    pieces = [f"{cfg.entity}:"]
    for k, term in enumerate(chosen):
        if k:
            pieces.append(_FILLERS[k % len(_FILLERS)].strip())
        pieces.append(_render_phrase(term))
    pieces.append(rng.choice(sentiment_words))
    urls = []
    if links:
        urls.append(links[link_cursor[event_index] % len(links)])
        link_cursor[event_index] += 1
    if rng.random() < cfg.vocabulary_noise:
        pieces.append(f"#{_noise_tag(rng)}")
    text = " ".join(pieces)
    if urls:
        text = f"{text} {urls[0]}"
    return {
        "posting_id": posting_id,
        "creation_time": stamp.isoformat(),
        "text": text,
        "language": "en",
        "source": rng.choice(_SOURCES),
        "urls": urls,
        "hashtags": [],
    }


@dataclass(frozen=True)
class EvalResult:
    precision: float
    recall: float
    f1: float


def evaluate(reports, state, truth: GroundTruth) -> EvalResult:
    """Precision/recall/F1 of the controversial flag against injected events.

    An injected event counts as detected when some flagged cluster contains
    more than half of its ground-truth tweet ids.  With no flagged clusters
    precision is 1.0 (no false alarms).
    """
    flagged = [r for r in reports if r.controversial]
    flagged_members = {
        r.cluster_id: set(state.clusters[r.cluster_id].member_ids)
        for r in flagged if r.cluster_id in state.clusters
    }
    expected = [e for e in truth.events if e.expected_controversial]

    def covers(members: set[str], event: EventTruth) -> bool:
        ids = event.tweet_ids
        if not ids:
            return False
        hits = sum(1 for tid in ids if tid in members)
        return hits / len(ids) > 0.5

    detected = sum(
        1 for event in expected
        if any(covers(members, event) for members in flagged_members.values())
    )
    recall = detected / len(expected) if expected else 1.0
    true_positives = sum(
        1 for members in flagged_members.values()
        if any(covers(members, event) for event in expected)
    )
    precision = true_positives / len(flagged) if flagged else 1.0
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return EvalResult(precision=precision, recall=recall, f1=f1)
