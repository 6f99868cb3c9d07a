"""Tag-wiki fetching from the Stack Exchange API, cache first.

Tag excerpts from the public API ("/2.3/tags/{tag}/wikis" on the Stack
Overflow site) are one-sentence definitions of software terms, which
makes them usable as extraction input.  Every fetched wiki lands in a
per-tag JSON cache file, cached tags never hit the network again, and
offline mode serves the cache only.  The client respects the API's
backoff field through an injectable sleeper and surfaces quota
exhaustion as a dedicated error so callers can keep partial results.

The optional annotation heuristic marks the first noun after a copula
("is/are/was/were" followed by "a/an/the") as the hypernym, which is
right often enough to bootstrap a silver-standard corpus.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import quote

from .postag import fallback_tag

API_BASE = "https://api.stackexchange.com/2.3"
SITE = "stackoverflow"
CACHE_ENV = "DEFHYPER_CACHE"
_THROTTLE_ERROR_ID = 502

_COPULAS = {"is", "are", "was", "were"}
_ARTICLES = {"a", "an", "the"}


class FetchError(Exception):
    pass


class QuotaExhausted(FetchError):
    """The API refused the request or the quota counter reached zero."""


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "defhyper"


@dataclass
class StackClient:
    """Cache-first client for tag wikis.

    ``transport`` only needs a ``get(url, params=...)`` returning an
    object with ``status_code`` and ``json()``; tests inject fakes and
    the default is a requests session.  ``sleeper`` receives backoff
    seconds.
    """

    cache_dir: Path = field(default_factory=default_cache_dir)
    offline: bool = False
    transport: object | None = None
    sleeper: object = time.sleep
    _exhausted: bool = field(default=False, repr=False)

    def _cache_path(self, tag: str) -> Path:
        return Path(self.cache_dir) / (quote(tag, safe="") + ".json")

    def tag_wiki(self, tag: str) -> dict:
        """{"tag": ..., "excerpt": str | None}, from cache or the API."""
        if not tag:
            raise ValueError("tag must be non-empty")
        path = self._cache_path(tag)
        if path.exists():
            with open(path, encoding="utf-8") as fh:
                return json.load(fh)
        if self.offline:
            raise FetchError(f"tag {tag!r} not cached and offline mode is on")
        wiki = self._fetch(tag)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(wiki, fh, sort_keys=True)
        return wiki

    def _fetch(self, tag: str) -> dict:
        if self._exhausted:
            raise QuotaExhausted("request quota already exhausted")
        if self.transport is None:
            import requests

            self.transport = requests.Session()
        url = f"{API_BASE}/tags/{quote(tag, safe='')}/wikis"
        resp = self.transport.get(url, params={"site": SITE})
        try:
            data = resp.json()
        except ValueError:
            data = {}
        if resp.status_code == 429 or data.get("error_id") == _THROTTLE_ERROR_ID:
            self._exhausted = True
            raise QuotaExhausted(f"throttled while fetching {tag!r}")
        if resp.status_code != 200:
            raise FetchError(f"HTTP {resp.status_code} for {tag!r}")
        if "backoff" in data:
            self.sleeper(float(data["backoff"]))
        if data.get("quota_remaining") == 0:
            self._exhausted = True
        items = data.get("items") or []
        excerpt = items[0].get("excerpt") if items else None
        return {"tag": tag, "excerpt": excerpt}


def annotate_copula(tokens: list[str]) -> int | None:
    """1-based index of the first noun after "is/are/was/were a/an/the".

    Scans for the first copula-article pair, then returns the first
    following token that the fallback tagger calls a noun.  None when
    the pattern is absent.
    """
    tags = fallback_tag(tokens) if tokens else []
    for k in range(len(tokens) - 2):
        if (tokens[k].lower() in _COPULAS
                and tokens[k + 1].lower() in _ARTICLES):
            for j in range(k + 2, len(tokens)):
                if tags[j] == "NN":
                    return j + 1
            return None
    return None


def wiki_to_record(wiki: dict, partners: list[str] | None = None,
                   annotate: bool = False) -> dict | None:
    """Raw definition record from a tag wiki, or None without an excerpt.

    Tokens are the whitespace-split excerpt; tags are left for the load
    step's fallback tagger.  Any hypernym_index written here is a
    heuristic pre-fill meant for human review, not gold truth.
    """
    excerpt = wiki.get("excerpt")
    if not excerpt:
        return None
    tokens = excerpt.split()
    if not tokens:
        return None
    record: dict = {"term": wiki["tag"], "tokens": tokens}
    if partners:
        record["tag_partners"] = list(partners)
    if annotate:
        idx = annotate_copula(tokens)
        if idx is not None:
            record["hypernym_index"] = idx
    return record


def read_tag_file(lines) -> list[tuple[str, list[str]]]:
    """(tag, co-listed partner tags) pairs, one per non-blank line.

    The first token on a line is the tag whose wiki is fetched; the rest
    are tags it co-occurs with (they feed the co-occurrence graph).
    """
    groups = []
    for line in lines:
        parts = line.split()
        if not parts:
            continue
        groups.append((parts[0], parts[1:]))
    return groups


def fetch_tags(client: StackClient, groups: list[tuple[str, list[str]]],
               annotate: bool = False) -> tuple[list[dict], list[str], bool]:
    """Records for each tag group, skipped-tag messages, truncation flag.

    On quota exhaustion the records collected so far are returned with
    the flag set, so callers can persist partial output and signal the
    failure through their exit status.
    """
    records, skipped = [], []
    for tag, partners in groups:
        try:
            wiki = client.tag_wiki(tag)
        except QuotaExhausted:
            skipped.append(f"{tag}: quota exhausted")
            return records, skipped, True
        except FetchError as exc:
            skipped.append(f"{tag}: {exc}")
            continue
        record = wiki_to_record(wiki, partners=partners, annotate=annotate)
        if record is None:
            skipped.append(f"{tag}: no excerpt")
            continue
        records.append(record)
    return records, skipped, False
