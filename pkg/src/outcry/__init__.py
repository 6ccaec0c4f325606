"""Streaming controversy detection for company tweet streams.

Clusters tweet feature vectors into events with online incremental cosine
clustering, flags controversies by burstiness + verified news links +
negative sentiment, and quantifies market impact with daily-return
statistics.
"""

from .clustering import (
    CREATED,
    MERGED,
    ClusterParams,
    ClusterState,
    DegenerateVector,
    EventCluster,
    distance,
)
from .config import InvalidConfig, RunConfig
from .controversy import (
    ControversyParams,
    ControversyReport,
    DailyVolume,
    burstiness,
    classify_and_rank,
    event_sentiment,
    newsworthiness,
)
from .credibility import (
    AllowList,
    BadUrl,
    LiveRedirects,
    NetworkRedirectResolver,
    RedirectCycle,
    RedirectMap,
    is_credible,
    normalize_url,
    registrable_domain,
    unique_credible_links,
)
from .features import (
    FeatureExtractor,
    RuleTagger,
    SentimentLexicon,
    Token,
    TweetVector,
    build_tweet_vector,
    extract_5w_terms,
    load_gazetteer,
    load_stopwords,
    load_verb_list,
    merge_proper_nouns,
    score_sentiment,
    tag_pos,
    tokenize,
)
from .ingest import (
    BadTimestamp,
    MalformedRecord,
    MissingField,
    PhraseFilter,
    ReplayStats,
    SourceUnavailable,
    Tweet,
    matches_filter,
    parse_tweet_record,
    replay_stream,
)
from .market import (
    InsufficientData,
    PriceSeries,
    ReturnStats,
    ZeroVariance,
    daily_returns,
    event_day_zscore,
    load_price_csv,
    paired_returns,
    return_histogram,
    return_stats,
)
from .pipeline import DetectionResult, report_payload, run_detection
from .synth import (
    EvalResult,
    EventTruth,
    GroundTruth,
    InjectedEvent,
    ScenarioConfig,
    evaluate,
    generate,
)

__version__ = "0.1.0"

__all__ = [
    "AllowList", "BadTimestamp", "BadUrl", "ClusterParams", "ClusterState",
    "ControversyParams", "ControversyReport", "CREATED", "DailyVolume",
    "DegenerateVector", "DetectionResult", "EvalResult", "EventCluster",
    "EventTruth", "FeatureExtractor", "GroundTruth", "InjectedEvent",
    "InsufficientData", "InvalidConfig", "LiveRedirects", "MalformedRecord",
    "MERGED", "MissingField", "NetworkRedirectResolver", "PhraseFilter", "PriceSeries",
    "RedirectCycle", "RedirectMap", "ReplayStats", "ReturnStats", "RuleTagger",
    "RunConfig", "ScenarioConfig", "SentimentLexicon", "SourceUnavailable",
    "Token", "Tweet", "TweetVector", "ZeroVariance", "burstiness",
    "build_tweet_vector", "classify_and_rank", "daily_returns", "distance",
    "evaluate", "event_day_zscore", "event_sentiment", "extract_5w_terms",
    "generate", "is_credible", "load_gazetteer", "load_price_csv",
    "load_stopwords", "load_verb_list", "matches_filter", "merge_proper_nouns",
    "newsworthiness", "normalize_url", "paired_returns", "parse_tweet_record",
    "registrable_domain", "replay_stream", "report_payload", "return_histogram",
    "return_stats", "run_detection", "score_sentiment", "tag_pos", "tokenize",
    "unique_credible_links",
]
