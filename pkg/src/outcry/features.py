"""Tweet feature extraction: tokens, heuristic tagging, 5W terms, sentiment.

The tagger is a deliberately simple capitalization/word-list heuristic behind
a pluggable interface; swap in anything with the same ``tag`` signature to
use a statistical tagger instead.  All functions here are pure.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from datetime import date, datetime
from importlib import resources
from typing import Iterable, Sequence

from . import credibility
from .ingest import Tweet

# Token kinds
WORD = "word"
HASHTAG = "hashtag"
MENTION = "mention"
URL = "url"
PUNCT = "punctuation"

# POS tags
PROPER_NOUN = "proper_noun"
VERB = "verb"
OTHER = "other"

NEGATION_WINDOW = 3
SENTIMENT_MIN, SENTIMENT_MAX = -2.0, 2.0

_TOKEN_RE = re.compile(
    r"https?://\S+"        # URLs first so hosts/paths stay intact
    r"|#\w+"
    r"|@\w+"
    r"|\w+(?:'\w+)?"       # words, allowing an internal apostrophe
    r"|[^\w\s]+"           # runs of punctuation
)

_SENTENCE_END = re.compile(r"[.!?]")


@dataclass(frozen=True)
class Token:
    surface: str
    position: int
    kind: str


def tokenize(text: str) -> list[Token]:
    """Split text into word/hashtag/mention/url/punctuation tokens."""
    tokens = []
    for i, match in enumerate(_TOKEN_RE.finditer(text)):
        surface = match.group()
        first = surface[0]
        if surface.startswith(("http://", "https://")):
            kind = URL
        elif first == "#" and len(surface) > 1:
            kind = HASHTAG
        elif first == "@" and len(surface) > 1:
            kind = MENTION
        elif first.isalnum() or first == "_":
            kind = WORD
        else:
            kind = PUNCT
        tokens.append(Token(surface, i, kind))
    return tokens


def _read_data_lines(path) -> list[str]:
    out = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line and not line.startswith("#"):
                out.append(line)
    return out


def _bundled(name: str):
    return resources.files("outcry").joinpath("data", name)


def load_stopwords(path=None) -> frozenset[str]:
    return frozenset(w.lower() for w in _read_data_lines(path or _bundled("stopwords.txt")))


def load_verb_list(path=None) -> frozenset[str]:
    return frozenset(w.lower() for w in _read_data_lines(path or _bundled("verbs.txt")))


def load_gazetteer(path=None) -> tuple[tuple[str, ...], ...]:
    """Entity phrases as tuples of lowercase words, e.g. ("new", "york")."""
    phrases = []
    for line in _read_data_lines(path or _bundled("gazetteer.txt")):
        words = tuple(line.lower().split())
        if words:
            phrases.append(words)
    return tuple(phrases)


@dataclass(frozen=True)
class SentimentLexicon:
    """Token valences in [-2, +2] plus negator and intensifier word lists."""

    entries: dict[str, float]
    negators: frozenset[str]
    intensifiers: dict[str, float]

    def __post_init__(self):
        for token, valence in self.entries.items():
            if not (SENTIMENT_MIN <= valence <= SENTIMENT_MAX):
                raise ValueError(f"valence out of range for {token!r}: {valence}")
        for token, mult in self.intensifiers.items():
            if not (math.isfinite(mult) and mult > 0):
                raise ValueError(f"intensifier multiplier must be positive: {token!r}")

    @classmethod
    def load(cls, path=None) -> "SentimentLexicon":
        entries: dict[str, float] = {}
        negators: set[str] = set()
        intensifiers: dict[str, float] = {}
        section = "entries"
        for line in _read_data_lines(path or _bundled("sentiment_lexicon.txt")):
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1].lower()
                continue
            if section == "entries":
                token, _, value = line.partition("\t")
                entries[token.strip().lower()] = float(value)
            elif section == "negators":
                negators.add(line.lower())
            elif section == "intensifiers":
                token, _, value = line.partition("\t")
                intensifiers[token.strip().lower()] = float(value)
            else:
                raise ValueError(f"unknown lexicon section [{section}]")
        return cls(entries=entries, negators=frozenset(negators), intensifiers=intensifiers)


class RuleTagger:
    """Heuristic tagger: gazetteer match, then capitalized non-sentence-initial
    words as proper nouns, then verb-list lookup with suffix stripping."""

    def __init__(self, verbs: frozenset[str] | None = None,
                 gazetteer: Sequence[tuple[str, ...]] | None = None):
        self.verbs = verbs if verbs is not None else load_verb_list()
        gazetteer = gazetteer if gazetteer is not None else load_gazetteer()
        # Index phrases by first word, longest candidates first.
        self._gaz_index: dict[str, list[tuple[str, ...]]] = {}
        for phrase in gazetteer:
            self._gaz_index.setdefault(phrase[0], []).append(phrase)
        for candidates in self._gaz_index.values():
            candidates.sort(key=len, reverse=True)

    def verb_lemma(self, word: str) -> str | None:
        """Map a word to its verb-list entry, trying -s/-ed/-ing stripping;
        None when nothing matches."""
        w = word.lower()
        if w in self.verbs:
            return w
        candidates = []
        if w.endswith("ies") and len(w) > 4:
            candidates.append(w[:-3] + "y")
        if w.endswith("es") and len(w) > 3:
            candidates.append(w[:-2])
        if w.endswith("s") and len(w) > 2:
            candidates.append(w[:-1])
        if w.endswith("ed") and len(w) > 3:
            candidates.extend((w[:-1], w[:-2], w[:-3]))  # close(d) / arrest(ed) / stopp(ed)
        if w.endswith("ing") and len(w) > 4:
            candidates.extend((w[:-3], w[:-3] + "e", w[:-4]))
        for candidate in candidates:
            if candidate in self.verbs:
                return candidate
        return None

    @staticmethod
    def _capitalized(surface: str) -> bool:
        # Title-case style; all-caps words are treated as shouting, not names.
        return surface[0].isupper() and not surface.isupper()

    def tag(self, tokens: Sequence[Token]) -> list[tuple[Token, str]]:
        n = len(tokens)
        tags = [OTHER] * n

        # Gazetteer pass: mark every token of a matched phrase as proper noun.
        lowered = [t.surface.lower() if t.kind == WORD else None for t in tokens]
        for i in range(n):
            word = lowered[i]
            if word is None:
                continue
            for phrase in self._gaz_index.get(word, ()):
                end = i + len(phrase)
                if end <= n and all(lowered[i + k] == phrase[k] for k in range(len(phrase))):
                    for j in range(i, end):
                        tags[j] = PROPER_NOUN
                    break

        # Capitalization pass, skipping sentence-initial words.
        sentence_start = True
        for i, token in enumerate(tokens):
            if token.kind == PUNCT:
                if _SENTENCE_END.search(token.surface):
                    sentence_start = True
                continue
            if token.kind != WORD:
                continue
            if tags[i] != PROPER_NOUN and not sentence_start and self._capitalized(token.surface):
                tags[i] = PROPER_NOUN
            sentence_start = False

        # Verb pass on whatever is left.
        for i, token in enumerate(tokens):
            if token.kind == WORD and tags[i] == OTHER:
                if self.verb_lemma(token.surface) is not None:
                    tags[i] = VERB

        return list(zip(tokens, tags))


def tag_pos(tokens: Sequence[Token], tagger: RuleTagger | None = None) -> list[tuple[Token, str]]:
    """Tag tokens as proper_noun / verb / other with the default rule tagger."""
    return (tagger or _default_tagger()).tag(tokens)


def merge_proper_nouns(tagged: Sequence[tuple[Token, str]]) -> list[str]:
    """Join maximal runs of adjacent proper-noun tokens into lowercase phrases."""
    phrases = []
    run: list[str] = []
    for token, tag in tagged:
        if tag == PROPER_NOUN:
            run.append(token.surface.lower())
        elif run:
            phrases.append(" ".join(run))
            run = []
    if run:
        phrases.append(" ".join(run))
    return phrases


def _terms_from_tokens(
    tokens: Sequence[Token],
    extra_hashtags: Iterable[str],
    tagger: RuleTagger,
    stopwords: frozenset[str],
) -> Counter:
    terms: Counter = Counter()
    tagged = tagger.tag(tokens)
    for phrase in merge_proper_nouns(tagged):
        if phrase not in stopwords:
            terms[phrase] += 1
    for token, tag in tagged:
        if tag == VERB:
            lemma = tagger.verb_lemma(token.surface)
            if lemma and lemma not in stopwords:
                terms[lemma] += 1
    # Hashtags are kept verbatim (sans '#') and never stopword-filtered.
    for token in tokens:
        if token.kind == HASHTAG:
            terms[token.surface[1:].lower()] += 1
    for tag_text in extra_hashtags:
        terms[tag_text.lower()] += 1
    return terms


def extract_5w_terms(
    tweet: Tweet,
    tagger: RuleTagger | None = None,
    stopwords: frozenset[str] | None = None,
) -> Counter:
    """Multiset of event descriptor terms: merged proper-noun phrases, verbs,
    gazetteer entities, and hashtags, with stopwords removed."""
    return _terms_from_tokens(
        tokenize(tweet.text),
        tweet.hashtags,
        tagger or _default_tagger(),
        stopwords if stopwords is not None else _default_stopwords(),
    )


def score_sentiment(tokens: Sequence[Token], lexicon: SentimentLexicon) -> float:
    """Average lexicon valence over matched tokens with negation flipping
    (3-token lookback) and intensifier scaling, clamped to [-2, +2].
    Zero lexicon matches score exactly 0."""
    total = 0.0
    matched = 0
    for i, token in enumerate(tokens):
        if token.kind != WORD:
            continue
        word = token.surface.lower()
        valence = lexicon.entries.get(word)
        if valence is None:
            continue
        negated = False
        multiplier = 1.0
        for prev in tokens[max(0, i - NEGATION_WINDOW):i]:
            if prev.kind != WORD:
                continue
            prev_word = prev.surface.lower()
            if prev_word in lexicon.negators:
                negated = True
            multiplier *= lexicon.intensifiers.get(prev_word, 1.0)
        adjusted = valence * multiplier
        if negated:
            adjusted = -adjusted
        total += adjusted
        matched += 1
    score = total / max(1, matched)
    return min(SENTIMENT_MAX, max(SENTIMENT_MIN, score))


@dataclass(frozen=True)
class TweetVector:
    """Feature bundle a tweet contributes to clustering."""

    tweet_id: str
    timestamp: datetime
    terms: Counter
    sentiment: float
    links: frozenset[str]
    day: date


def build_tweet_vector(
    tweet: Tweet,
    lexicon: SentimentLexicon | None = None,
    *,
    tagger: RuleTagger | None = None,
    stopwords: frozenset[str] | None = None,
    redirects: credibility.RedirectMap | None = None,
) -> TweetVector | None:
    """Assemble a TweetVector; returns None (discard) when no terms survive.

    URLs that fail normalization are silently skipped; the vector's links
    only ever hold canonical URLs.
    """
    tokens = tokenize(tweet.text)
    terms = _terms_from_tokens(
        tokens,
        tweet.hashtags,
        tagger or _default_tagger(),
        stopwords if stopwords is not None else _default_stopwords(),
    )
    if not terms:
        return None
    sentiment = score_sentiment(tokens, lexicon or _default_lexicon())
    links = set()
    for raw in tweet.urls:
        try:
            links.add(credibility.normalize_url(raw, redirects))
        except (credibility.BadUrl, credibility.RedirectCycle):
            continue
    return TweetVector(
        tweet_id=tweet.posting_id,
        timestamp=tweet.creation_time,
        terms=terms,
        sentiment=sentiment,
        links=frozenset(links),
        day=tweet.creation_time.date(),
    )


class FeatureExtractor:
    """Bundles tagger, lexicon, stopword, and redirect resources so the
    pipeline can turn tweets into vectors without re-loading data files."""

    def __init__(
        self,
        lexicon: SentimentLexicon | None = None,
        tagger: RuleTagger | None = None,
        stopwords: frozenset[str] | None = None,
        redirects: credibility.RedirectMap | None = None,
    ):
        self.lexicon = lexicon or _default_lexicon()
        self.tagger = tagger or _default_tagger()
        self.stopwords = stopwords if stopwords is not None else _default_stopwords()
        self.redirects = redirects

    def vector(self, tweet: Tweet) -> TweetVector | None:
        return build_tweet_vector(
            tweet,
            self.lexicon,
            tagger=self.tagger,
            stopwords=self.stopwords,
            redirects=self.redirects,
        )


_TAGGER: RuleTagger | None = None
_STOPWORDS: frozenset[str] | None = None
_LEXICON: SentimentLexicon | None = None


def _default_tagger() -> RuleTagger:
    global _TAGGER
    if _TAGGER is None:
        _TAGGER = RuleTagger()
    return _TAGGER


def _default_stopwords() -> frozenset[str]:
    global _STOPWORDS
    if _STOPWORDS is None:
        _STOPWORDS = load_stopwords()
    return _STOPWORDS


def _default_lexicon() -> SentimentLexicon:
    global _LEXICON
    if _LEXICON is None:
        _LEXICON = SentimentLexicon.load()
    return _LEXICON
