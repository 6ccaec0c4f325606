"""Run configuration: validated key/value config shared by the CLI commands.

Config files are flat JSON objects; unknown keys are rejected so typos fail
fast instead of silently falling back to defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import timedelta


class InvalidConfig(ValueError):
    """Config file or scenario config failed validation."""


# external config key -> RunConfig attribute
_KEY_MAP = {
    "phrases": "phrases",
    "input": "input",
    "out": "out",
    "state_out": "state_out",
    "format": "format",
    "lateness_seconds": "lateness_seconds",
    "dedup": "dedup",
    "language_filter": "language_filter",
    "merge_threshold_D": "merge_threshold",
    "min_event_size_N": "min_event_size",
    "inactivity_expiry_hours": "inactivity_expiry_hours",
    "burst_velocity_threshold": "burst_velocity_threshold",
    "rank_weights": "rank_weights",
    "news_count_gate": "news_count_gate",
    "resolver_mode": "resolver_mode",
    "network_timeout_ms": "network_timeout_ms",
    "lexicon_path": "lexicon_path",
    "stopwords_path": "stopwords_path",
    "verbs_path": "verbs_path",
    "gazetteer_path": "gazetteer_path",
    "allowlist_path": "allowlist_path",
    "redirect_map_path": "redirect_map_path",
    "daily_summary_clusters": "daily_summary_clusters",
}


@dataclass
class RunConfig:
    phrases: list[str] = field(default_factory=list)
    input: str | None = None
    out: str | None = None
    state_out: str | None = None
    format: str = "json"
    lateness_seconds: float = 3600.0
    dedup: bool = False
    language_filter: str | None = "en"
    merge_threshold: float = 0.7
    min_event_size: int = 5
    inactivity_expiry_hours: float = 72.0
    burst_velocity_threshold: float = 2.0
    rank_weights: tuple[float, float, float] = (0.4, 0.3, 0.3)
    news_count_gate: int = 1
    resolver_mode: str = "offline"
    network_timeout_ms: int = 3000
    lexicon_path: str | None = None
    stopwords_path: str | None = None
    verbs_path: str | None = None
    gazetteer_path: str | None = None
    allowlist_path: str | None = None
    redirect_map_path: str | None = None
    daily_summary_clusters: int = 5

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if isinstance(self.phrases, str):
            self.phrases = [p.strip() for p in self.phrases.split(",") if p.strip()]
        if self.format not in ("json", "table"):
            raise InvalidConfig(f"format must be 'json' or 'table', got {self.format!r}")
        if self.lateness_seconds < 0:
            raise InvalidConfig("lateness_seconds must be >= 0")
        if not (0 < self.merge_threshold):
            raise InvalidConfig("merge_threshold_D must be positive")
        if self.min_event_size < 1:
            raise InvalidConfig("min_event_size_N must be >= 1")
        if self.inactivity_expiry_hours <= 0:
            raise InvalidConfig("inactivity_expiry_hours must be positive")
        if self.burst_velocity_threshold <= 0:
            raise InvalidConfig("burst_velocity_threshold must be positive")
        weights = tuple(float(w) for w in self.rank_weights)
        if len(weights) != 3 or any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-6:
            raise InvalidConfig("rank_weights must be three nonnegative numbers summing to 1")
        self.rank_weights = weights
        if self.news_count_gate < 1:
            raise InvalidConfig("news_count_gate must be >= 1")
        if self.resolver_mode not in ("offline", "network"):
            raise InvalidConfig("resolver_mode must be 'offline' or 'network'")
        if self.network_timeout_ms <= 0:
            raise InvalidConfig("network_timeout_ms must be positive")
        if self.daily_summary_clusters < 1:
            raise InvalidConfig("daily_summary_clusters must be >= 1")

    @property
    def inactivity_expiry(self) -> timedelta:
        return timedelta(hours=self.inactivity_expiry_hours)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise InvalidConfig("config must be a JSON object")
        kwargs = {}
        for key, value in data.items():
            attr = _KEY_MAP.get(key)
            if attr is None:
                raise InvalidConfig(f"unknown config key: {key!r}")
            kwargs[attr] = value
        try:
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidConfig):
                raise
            raise InvalidConfig(str(exc)) from exc

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def as_dict(self) -> dict:
        out = {}
        for key, attr in _KEY_MAP.items():
            value = getattr(self, attr)
            if isinstance(value, tuple):
                value = list(value)
            out[key] = value
        return out
