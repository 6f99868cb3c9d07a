"""Annotated-definition data model, ingestion, and preprocessing.

A corpus is a list of definitions loaded from JSON Lines.  Each record is
preprocessed on load: parenthetical spans removed, tags mapped into the
retained categories, punctuation and dropped-category tokens filtered.
Records whose gold hypernym cannot be resolved to a candidate noun are
rejected and reported rather than loaded.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from . import rng
from .postag import PosType, fallback_tag, map_penn_tag


class RecordError(Exception):
    """A record that cannot be loaded; carries the input line number."""

    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


class ParseError(RecordError):
    pass


class AnnotationError(RecordError):
    pass


@dataclass
class Definition:
    """One annotated definition sentence.

    ``W`` and ``Q`` are the retained surface tokens and their categories
    (same length, no NULL).  ``candidates`` are 1-based positions in W of
    nouns other than the term itself; ``gold`` is the subset annotated as
    the hypernym.  ``raw_tokens`` keeps the (surface, penn) pairs after
    parenthetical stripping but before category filtering, and ``w_raw``
    maps each W position back into it.
    """

    term: str
    raw_tokens: list[tuple[str, str]]
    W: list[str]
    Q: list[PosType]
    candidates: list[int]
    gold: set[int]
    tag_partners: list[str] = field(default_factory=list)
    w_raw: list[int] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.W)


@dataclass
class Corpus:
    definitions: list[Definition]
    frequency: dict[str, int]
    source: str = ""

    def __len__(self) -> int:
        return len(self.definitions)

    @classmethod
    def from_definitions(cls, definitions: list[Definition], source: str = "") -> "Corpus":
        freq: Counter[str] = Counter()
        for d in definitions:
            freq.update(w.lower() for w in d.W)
        return cls(definitions=definitions, frequency=dict(freq), source=source)


def strip_parentheticals(tokens: list[tuple[str, str]]) -> list[tuple[str, str]]:
    """Remove every balanced "( ... )" span, parentheses included.

    Nested spans go with their enclosing span.  An unmatched "(" removes
    everything to the end of the sentence; an unmatched ")" is dropped
    alone.  Idempotent.
    """
    out = []
    depth = 0
    for surface, penn in tokens:
        if surface == "(":
            depth += 1
        elif surface == ")":
            if depth > 0:
                depth -= 1
        elif depth == 0:
            out.append((surface, penn))
    return out


def _is_punctuation(surface: str) -> bool:
    return not any(ch.isalnum() for ch in surface)


def _build_definition(record: dict, lineno: int,
                      require_gold: bool = True) -> Definition:
    term = record.get("term")
    tokens = record.get("tokens")
    if not isinstance(term, str) or not term:
        raise ParseError(lineno, "missing or empty 'term'")
    if not isinstance(tokens, list) or not tokens or not all(isinstance(t, str) for t in tokens):
        raise ParseError(lineno, "missing or invalid 'tokens'")

    pos = record.get("pos")
    if pos is None:
        pos = fallback_tag(tokens)
    elif not isinstance(pos, list) or len(pos) != len(tokens):
        raise ParseError(lineno, "'pos' must parallel 'tokens'")

    stripped = strip_parentheticals(list(zip(tokens, pos)))

    W: list[str] = []
    Q: list[PosType] = []
    w_raw: list[int] = []
    for k, (surface, penn) in enumerate(stripped):
        if _is_punctuation(surface):
            continue
        p = map_penn_tag(penn)
        if p is None:
            continue
        W.append(surface)
        Q.append(p)
        w_raw.append(k)

    term_low = term.lower()
    candidates = [i + 1 for i, (w, q) in enumerate(zip(W, Q))
                  if q is PosType.NN and w.lower() != term_low]
    if not candidates:
        raise AnnotationError(lineno, "no hypernym candidates after preprocessing")

    gold = _resolve_gold(record, W, w_raw, candidates, lineno, require_gold)

    partners = record.get("tag_partners", [])
    if not isinstance(partners, list) or not all(isinstance(t, str) for t in partners):
        raise ParseError(lineno, "'tag_partners' must be a list of strings")

    return Definition(term=term, raw_tokens=stripped, W=W, Q=Q,
                      candidates=candidates, gold=gold,
                      tag_partners=list(partners), w_raw=w_raw)


def _resolve_gold(record: dict, W: list[str], w_raw: list[int],
                  candidates: list[int], lineno: int,
                  require_gold: bool = True) -> set[int]:
    has_surface = "hypernym" in record
    has_index = "hypernym_index" in record
    if has_surface and has_index:
        raise ParseError(lineno, "'hypernym' and 'hypernym_index' are mutually exclusive")
    if not has_surface and not has_index:
        if require_gold:
            raise ParseError(lineno, "one of 'hypernym' or 'hypernym_index' is required")
        return set()

    if has_index:
        idx = record["hypernym_index"]
        if not isinstance(idx, int) or idx < 1:
            raise ParseError(lineno, "'hypernym_index' must be a positive integer")
        try:
            pos = w_raw.index(idx - 1) + 1
        except ValueError:
            raise AnnotationError(lineno, "hypernym_index points at a removed token") from None
    else:
        surface = record["hypernym"]
        if not isinstance(surface, str) or not surface:
            raise ParseError(lineno, "'hypernym' must be a non-empty string")
        # Multi-word annotations resolve to their final token: the model
        # classifies single nouns, so the head of the phrase stands for it.
        head = surface.split()[-1].lower()
        pos = next((i for i in candidates if W[i - 1].lower() == head), None)
        if pos is None:
            raise AnnotationError(lineno, f"hypernym {surface!r} not found among candidates")

    if pos not in candidates:
        raise AnnotationError(lineno, "gold hypernym is not a candidate noun")
    return {pos}


def parse_record(line: str, lineno: int = 0,
                 require_gold: bool = True) -> Definition:
    """Parse one JSONL record into a Definition.

    Raises ParseError for malformed input and AnnotationError when the
    gold hypernym cannot be resolved to a candidate.  With
    ``require_gold=False`` an unannotated record loads with empty gold,
    which is what inference on new sentences needs.
    """
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(lineno, f"malformed JSON ({exc.msg})") from None
    if not isinstance(record, dict):
        raise ParseError(lineno, "record must be a JSON object")
    return _build_definition(record, lineno, require_gold)


def serialize_record(d: Definition) -> str:
    """JSONL line that parses back into an identical Definition."""
    record = {
        "term": d.term,
        "tokens": [s for s, _ in d.raw_tokens],
        "pos": [p for _, p in d.raw_tokens],
    }
    if d.gold:
        record["hypernym_index"] = d.w_raw[min(d.gold) - 1] + 1
    if d.tag_partners:
        record["tag_partners"] = d.tag_partners
    return json.dumps(record, ensure_ascii=False, sort_keys=True)


def load_corpus(lines, source: str = "",
                require_gold: bool = True) -> tuple[Corpus, list[RecordError]]:
    """Parse JSONL lines, collecting rejected records instead of failing.

    Blank lines are skipped.  Returns the corpus and the rejection list,
    in input order.
    """
    definitions = []
    rejected: list[RecordError] = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            definitions.append(parse_record(line, lineno, require_gold))
        except RecordError as err:
            rejected.append(err)
    return Corpus.from_definitions(definitions, source=source), rejected


def load_corpus_file(path, source: str | None = None,
                     require_gold: bool = True) -> tuple[Corpus, list[RecordError]]:
    with open(path, encoding="utf-8") as fh:
        return load_corpus(fh, source=source if source is not None else str(path),
                           require_gold=require_gold)


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for d in corpus.definitions:
            fh.write(serialize_record(d) + "\n")


def split(corpus: Corpus, train_fraction: float, seed: int) -> tuple[Corpus, Corpus]:
    """Deterministic shuffled split; frequencies recomputed per side.

    Test-time frequency features must come from the training split only,
    which falls out of the per-split recomputation.
    """
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    n = len(corpus.definitions)
    if n < 2:
        raise ValueError("cannot split a corpus with fewer than 2 records")
    order = rng.stream(seed, rng.SPLIT).permutation(n)
    cut = int(train_fraction * n)
    train = [corpus.definitions[i] for i in order[:cut]]
    test = [corpus.definitions[i] for i in order[cut:]]
    return (Corpus.from_definitions(train, source=f"{corpus.source}[train]"),
            Corpus.from_definitions(test, source=f"{corpus.source}[test]"))


def build_topk(train: Corpus, k: int) -> list[str]:
    """The K most frequent lowercased tokens of the training split.

    Ties break lexicographically; K=0 gives the empty list.
    """
    if k < 0:
        raise ValueError("K must be >= 0")
    ranked = sorted(train.frequency.items(), key=lambda kv: (-kv[1], kv[0]))
    return [token for token, _ in ranked[:k]]
