"""URL normalization and credible-source verification.

Short links are resolved through an offline redirect map by default so runs
are deterministic; a network resolver with the same contract is available
when explicitly enabled.  Credibility is an allowlist lookup on the URL's
registrable domain.
"""

from __future__ import annotations

import concurrent.futures
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from importlib import resources
from urllib.parse import parse_qsl, urlencode, urlparse, urlunparse

MAX_REDIRECT_HOPS = 10


class BadUrl(ValueError):
    """URL is not an absolute http(s) URL with a host."""


class RedirectCycle(ValueError):
    """Redirect resolution looped or exceeded the hop limit."""


def _read_lines(path) -> list[str]:
    out = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line and not line.startswith("#"):
                out.append(line)
    return out


def _bundled(name: str):
    return resources.files("outcry").joinpath("data", name)


def load_public_suffixes(path=None) -> frozenset[str]:
    return frozenset(s.lower() for s in _read_lines(path or _bundled("public_suffixes.txt")))


_DEFAULT_SUFFIXES: frozenset[str] | None = None


def _default_suffixes() -> frozenset[str]:
    global _DEFAULT_SUFFIXES
    if _DEFAULT_SUFFIXES is None:
        _DEFAULT_SUFFIXES = load_public_suffixes()
    return _DEFAULT_SUFFIXES


def registrable_domain(host: str, suffixes: frozenset[str] | None = None) -> str:
    """Reduce a hostname to its registrable domain ("www.npr.org" -> "npr.org").

    Uses the bundled public-suffix snapshot; unknown TLDs fall back to the
    last two labels.
    """
    suffixes = suffixes if suffixes is not None else _default_suffixes()
    labels = host.lower().strip(".").split(".")
    if len(labels) <= 1:
        return host.lower()
    for take in range(len(labels) - 1, 0, -1):
        suffix = ".".join(labels[-take:])
        if suffix in suffixes:
            return ".".join(labels[-(take + 1):])
    return ".".join(labels[-2:])


@dataclass(frozen=True)
class AllowList:
    """Set of credible registrable domains, loaded from a one-per-line file."""

    domains: frozenset[str]
    loaded_from: str | None = None

    def __post_init__(self):
        if not self.domains:
            raise ValueError("allowlist must contain at least one domain")
        for entry in self.domains:
            if "://" in entry or "/" in entry or not entry:
                raise ValueError(f"allowlist entries must be bare domains, got {entry!r}")

    @classmethod
    def load(cls, path=None) -> "AllowList":
        src = path or _bundled("credible_domains.txt")
        domains = frozenset(d.lower() for d in _read_lines(src))
        return cls(domains=domains, loaded_from=str(src))


@dataclass(frozen=True)
class RedirectMap:
    """Offline short-URL resolution table: short URL -> final absolute URL."""

    mapping: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for target in self.mapping.values():
            if not _is_absolute(target):
                raise ValueError(f"redirect targets must be absolute URLs, got {target!r}")

    @classmethod
    def load(cls, path) -> "RedirectMap":
        mapping = {}
        for line in _read_lines(path):
            short, _, final = line.partition("\t")
            if not final:
                raise ValueError(f"redirect map line needs 'short<TAB>final': {line!r}")
            mapping[short.strip()] = final.strip()
        return cls(mapping=mapping)


EMPTY_REDIRECTS = RedirectMap()


def _is_absolute(url: str) -> bool:
    try:
        parts = urlparse(url)
    except ValueError:
        return False
    return bool(parts.scheme) and bool(parts.netloc)


def _canonicalize(url: str) -> str:
    try:
        parts = urlparse(url)
    except ValueError as exc:
        raise BadUrl(f"unparseable URL: {url!r}") from exc
    if parts.scheme.lower() not in ("http", "https") or not parts.netloc:
        raise BadUrl(f"not an absolute http(s) URL: {url!r}")
    query = urlencode(
        [(k, v) for k, v in parse_qsl(parts.query, keep_blank_values=True)
         if not k.lower().startswith("utm_")]
    )
    return urlunparse((
        parts.scheme.lower(),
        parts.netloc.lower(),
        parts.path,
        parts.params,
        query,
        "",  # fragment dropped
    ))


def normalize_url(raw: str, redirects: RedirectMap | None = None) -> str:
    """Canonicalize a URL: resolve the redirect map transitively (cycle-safe,
    max 10 hops), lowercase scheme/host, strip fragment and utm_* params.

    Normalization is idempotent: the result maps to itself.
    """
    mapping = redirects.mapping if redirects is not None else {}
    url = raw
    seen: set[str] = set()
    for _ in range(MAX_REDIRECT_HOPS + 1):
        canon = _canonicalize(url)
        if canon in seen:
            raise RedirectCycle(f"redirect cycle at {canon!r} (from {raw!r})")
        seen.add(canon)
        nxt = mapping.get(url)
        if nxt is None:
            nxt = mapping.get(canon)
        if nxt is None:
            return canon
        url = nxt
    raise RedirectCycle(f"more than {MAX_REDIRECT_HOPS} redirect hops from {raw!r}")


def is_credible(url: str, allowlist: AllowList) -> bool:
    """True iff the URL's domain is an allowlist entry or a subdomain of one."""
    host = (urlparse(url).hostname or "").lower()
    if not host:
        return False
    for entry in allowlist.domains:
        if host == entry or host.endswith("." + entry):
            return True
    return False


def unique_credible_links(cluster, allowlist: AllowList) -> int:
    """Count distinct credible URLs in a cluster (or any iterable of
    normalized URLs)."""
    links = getattr(cluster, "links", cluster)
    return len({u for u in links if is_credible(u, allowlist)})


class _ResolvingCache(dict):
    """Mapping view that resolves unseen URLs on demand and caches the
    answer; resolution failures make the URL map to itself (no redirect)."""

    def __init__(self, resolver):
        super().__init__()
        self._resolver = resolver

    def get(self, key, default=None):
        if key in self:
            value = dict.get(self, key)
            return value if value is not None else default
        try:
            final = self._resolver.resolve(key)
        except (OSError, ValueError, urllib.error.URLError):
            final = key
        value = final if final != key else None
        self[key] = value
        return value if value is not None else default


class LiveRedirects:
    """RedirectMap-compatible wrapper over a network resolver."""

    def __init__(self, resolver):
        self.mapping = _ResolvingCache(resolver)


class _NoRedirect(urllib.request.HTTPRedirectHandler):
    def redirect_request(self, req, fp, code, msg, headers, newurl):
        return None


class NetworkRedirectResolver:
    """Follows HTTP redirects to build the same short->final mapping the
    offline RedirectMap provides.  Off by default; enable via config."""

    def __init__(self, timeout_ms: int = 3000, max_hops: int = MAX_REDIRECT_HOPS,
                 max_in_flight: int = 8, opener=None):
        self.timeout = timeout_ms / 1000.0
        self.max_hops = max_hops
        self.max_in_flight = max_in_flight
        self._opener = opener or urllib.request.build_opener(_NoRedirect)

    def resolve(self, url: str) -> str:
        current = url
        seen = {current}
        for _ in range(self.max_hops):
            request = urllib.request.Request(current, method="HEAD")
            try:
                response = self._opener.open(request, timeout=self.timeout)
            except urllib.error.HTTPError as err:
                if err.code in (301, 302, 303, 307, 308):
                    location = err.headers.get("Location")
                    err.close()
                    if not location:
                        return current
                    if location in seen:
                        raise RedirectCycle(f"redirect cycle from {url!r}")
                    seen.add(location)
                    current = location
                    continue
                err.close()
                return current
            response.close()
            return current
        raise RedirectCycle(f"more than {self.max_hops} redirect hops from {url!r}")

    def as_redirects(self) -> "LiveRedirects":
        """Adapter so the pipeline can use this resolver wherever an offline
        RedirectMap is accepted."""
        return LiveRedirects(self)

    def resolve_many(self, urls, cancel=None) -> RedirectMap:
        """Resolve a batch with bounded concurrency; failures leave the URL
        unmapped rather than aborting the batch.  Set the optional
        ``cancel`` threading.Event to stop early with a partial map."""
        mapping: dict[str, str] = {}
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
            futures = {pool.submit(self.resolve, u): u for u in set(urls)}
            for future in concurrent.futures.as_completed(futures):
                if cancel is not None and cancel.is_set():
                    for pending in futures:
                        pending.cancel()
                    break
                source = futures[future]
                try:
                    final = future.result()
                except (OSError, RedirectCycle, urllib.error.URLError):
                    continue
                if final != source:
                    mapping[source] = final
        return RedirectMap(mapping=mapping)
