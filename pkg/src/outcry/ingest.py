"""Tweet record parsing and ordered stream replay.

Input is JSON-lines, one tweet object per line.  Replay applies a company
phrase filter the way a filtered streaming API would, re-orders records that
arrive slightly late inside a bounded lateness window, and drops (and counts)
anything later than that.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
import socket
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Iterator
from urllib.parse import urlparse


class IngestError(ValueError):
    """Base class for per-record ingest failures."""


class MalformedRecord(IngestError):
    """The line is not a single JSON object."""


class MissingField(IngestError):
    """A required attribute (posting_id, creation_time, text) is absent."""


class BadTimestamp(IngestError):
    """creation_time cannot be parsed into a finite UTC timestamp."""


class SourceUnavailable(OSError):
    """The stream source cannot be opened."""


@dataclass(frozen=True)
class Tweet:
    """One ingested posting.  Timestamps are timezone-aware UTC."""

    posting_id: str
    creation_time: datetime
    text: str
    language: str = "und"
    source: str = ""
    urls: tuple[str, ...] = ()
    hashtags: tuple[str, ...] = ()


@dataclass(frozen=True)
class PhraseFilter:
    """Ordered list of lowercase phrases used to retain stream records."""

    phrases: tuple[str, ...]

    def __init__(self, phrases: Iterable[str]):
        cleaned = tuple(p.lower() for p in phrases)
        if not cleaned:
            raise ValueError("phrase filter needs at least one phrase")
        if any(not p.strip() for p in cleaned):
            raise ValueError("phrases must not be empty or all-whitespace")
        object.__setattr__(self, "phrases", cleaned)

    @classmethod
    def from_csv(cls, spec: str) -> "PhraseFilter":
        """Build from a comma-separated spec like ``"starbucks, sbux"``."""
        return cls([p.strip() for p in spec.split(",") if p.strip()])


@dataclass
class ReplayStats:
    """Counters accumulated by :func:`replay_stream`.

    ``total == parse_errors + dropped_late + filtered_out + duplicates + yielded``
    holds after the stream is exhausted.
    """

    total: int = 0
    parse_errors: int = 0
    dropped_late: int = 0
    filtered_out: int = 0
    duplicates: int = 0
    yielded: int = 0

    @property
    def dropped(self) -> int:
        return self.dropped_late + self.filtered_out + self.duplicates

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "parse_errors": self.parse_errors,
            "dropped_late": self.dropped_late,
            "filtered_out": self.filtered_out,
            "duplicates": self.duplicates,
            "yielded": self.yielded,
        }


def _parse_timestamp(value) -> datetime:
    if isinstance(value, (int, float)):
        if not math.isfinite(value):
            raise BadTimestamp(f"non-finite epoch timestamp: {value!r}")
        return datetime.fromtimestamp(value, tz=timezone.utc)
    if isinstance(value, str):
        text = value.strip()
        if text.endswith(("Z", "z")):
            text = text[:-1] + "+00:00"
        try:
            parsed = datetime.fromisoformat(text)
        except ValueError as exc:
            raise BadTimestamp(f"unparseable creation_time: {value!r}") from exc
        if parsed.tzinfo is None:
            parsed = parsed.replace(tzinfo=timezone.utc)
        return parsed.astimezone(timezone.utc)
    raise BadTimestamp(f"creation_time has unsupported type: {value!r}")


def _valid_absolute_url(url: str) -> bool:
    try:
        parts = urlparse(url)
    except ValueError:
        return False
    return bool(parts.scheme) and bool(parts.netloc)


def parse_tweet_record(line: str) -> Tweet:
    """Parse one JSONL record into a :class:`Tweet`.

    posting_id, creation_time and text are required; urls and hashtags
    default to empty lists.  Syntactically invalid URLs are discarded so a
    parsed Tweet only ever carries absolute scheme+host URLs.
    """
    try:
        obj = json.loads(line)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedRecord(f"not valid JSON: {line[:80]!r}") from exc
    if not isinstance(obj, dict):
        raise MalformedRecord("record is not a JSON object")

    posting_id = obj.get("posting_id")
    if not isinstance(posting_id, str) or not posting_id:
        raise MissingField("posting_id")
    if "creation_time" not in obj:
        raise MissingField("creation_time")
    text = obj.get("text")
    if not isinstance(text, str):
        raise MissingField("text")

    creation_time = _parse_timestamp(obj["creation_time"])

    urls_raw = obj.get("urls") or []
    if not isinstance(urls_raw, list):
        raise MalformedRecord("urls must be an array")
    urls = tuple(u for u in urls_raw if isinstance(u, str) and _valid_absolute_url(u))

    tags_raw = obj.get("hashtags") or []
    if not isinstance(tags_raw, list):
        raise MalformedRecord("hashtags must be an array")
    hashtags = tuple(
        t.lstrip("#").lower() for t in tags_raw if isinstance(t, str) and t.lstrip("#")
    )

    return Tweet(
        posting_id=posting_id,
        creation_time=creation_time,
        text=text,
        language=str(obj.get("language") or "und"),
        source=str(obj.get("source") or ""),
        urls=urls,
        hashtags=hashtags,
    )


def matches_filter(tweet: Tweet, phrases: PhraseFilter) -> bool:
    """True iff any phrase occurs (case-insensitively) in the tweet text,
    in a hashtag, or in a URL host."""
    text = tweet.text.lower()
    hosts = None
    for phrase in phrases.phrases:
        if phrase in text:
            return True
        if any(phrase in tag for tag in tweet.hashtags):
            return True
        if hosts is None:
            hosts = [(urlparse(u).netloc or "").lower() for u in tweet.urls]
        if any(phrase in host for host in hosts):
            return True
    return False


@contextmanager
def _open_source(source):
    """Yield an iterable of lines from a path, ``tcp://host:port`` address,
    open file object, or any iterable of strings."""
    if isinstance(source, (str, Path)):
        spec = str(source)
        if spec.startswith("tcp://"):
            rest = spec[len("tcp://"):]
            host, _, port = rest.rpartition(":")
            try:
                conn = socket.create_connection((host, int(port)), timeout=30)
            except (OSError, ValueError) as exc:
                raise SourceUnavailable(f"cannot connect to {spec}: {exc}") from exc
            reader = conn.makefile("r", encoding="utf-8", errors="replace")
            try:
                yield reader
            finally:
                reader.close()
                conn.close()
            return
        try:
            handle = open(spec, "r", encoding="utf-8", errors="replace")
        except OSError as exc:
            raise SourceUnavailable(f"cannot open {spec}: {exc}") from exc
        try:
            yield handle
        finally:
            handle.close()
        return
    # Already a file-like object or iterable of lines.
    yield source


def replay_stream(
    source,
    phrases: PhraseFilter,
    *,
    lateness_seconds: float = 3600.0,
    dedup: bool = False,
    stats: ReplayStats | None = None,
) -> Iterator[Tweet]:
    """Replay matching tweets from ``source`` in nondecreasing time order.

    Records inside the lateness window are buffered and re-ordered; records
    older than ``newest_seen - lateness_seconds`` are dropped and counted.
    Per-record parse errors are counted and skipped, never fatal.  Pass a
    ``stats`` object to observe the counters after exhaustion.
    """
    stats = stats if stats is not None else ReplayStats()
    heap: list = []
    tiebreak = itertools.count()
    watermark: datetime | None = None
    newest: datetime | None = None
    seen_ids: set[str] | None = set() if dedup else None

    with _open_source(source) as lines:
        for line in lines:
            if not line.strip():
                continue
            stats.total += 1
            try:
                tweet = parse_tweet_record(line)
            except IngestError:
                stats.parse_errors += 1
                continue
            if not matches_filter(tweet, phrases):
                stats.filtered_out += 1
                continue
            if seen_ids is not None:
                if tweet.posting_id in seen_ids:
                    stats.duplicates += 1
                    continue
                seen_ids.add(tweet.posting_id)

            t = tweet.creation_time
            if watermark is not None and t < watermark:
                stats.dropped_late += 1
                continue
            heapq.heappush(heap, (t, next(tiebreak), tweet))
            if newest is None or t > newest:
                newest = t
                watermark = newest - timedelta(seconds=lateness_seconds)
            while heap and watermark is not None and heap[0][0] <= watermark:
                _, _, ready = heapq.heappop(heap)
                stats.yielded += 1
                yield ready

    while heap:
        _, _, ready = heapq.heappop(heap)
        stats.yielded += 1
        yield ready
