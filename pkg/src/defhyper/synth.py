"""Synthetic definition-corpus generator.

Emits template-based definition records with ground-truth tags and gold
hypernyms known by construction.  The template inventory is designed so
that the gold noun is recoverable from its tag context window, while two
of the template families are deliberately indistinguishable at the word
level (their context windows differ only in open-class categories whose
surfaces are rare).  A small "deceptive" family places a classic
is-a-style distractor next to a gold noun that only graph centrality can
rescue.

All randomness flows through one seeded stream, so equal configs and
seeds produce byte-identical corpora.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .corpus import Corpus, load_corpus

# Gold hypernym lemmas, most popular first.  The head of the list acts as
# the hub cluster of the co-occurrence structure.
LEMMAS = [
    "language", "database", "framework", "library", "protocol",
    "format", "tool", "system", "service", "platform",
    "interface", "compiler", "editor", "algorithm", "standard",
    "runtime", "engine", "debugger", "parser", "scheduler",
]

# Frequent non-hypernym nouns: in-vocabulary surfaces that never carry the
# gold label and never enter the co-occurrence graph.
FILLERS = [
    "data", "code", "users", "files", "projects", "queries", "text",
    "images", "tables", "records", "messages", "events", "tasks",
    "devices", "networks", "servers", "documents", "pages", "scripts",
    "objects", "values", "streams", "models", "graphs", "tests",
    "builds", "layouts", "widgets", "sessions", "tokens",
]

_FUNCTION_WORDS = {"a", "an", "the", "is", "of", "for", "in", "as",
                   "that", "which", "there", "to"}
_RESERVED = set(LEMMAS) | set(FILLERS) | _FUNCTION_WORDS

_ONSETS = ["b", "bl", "br", "d", "dr", "f", "fl", "g", "gl", "gr", "k",
           "kl", "kr", "m", "n", "p", "pl", "pr", "s", "sk", "sl", "sn",
           "sp", "st", "str", "t", "tr", "v", "z"]
_VOWELS = ["a", "e", "i", "o", "u"]
_CODAS = ["", "l", "m", "n", "r", "rn", "rm", "lt", "nd", "nt", "rk", "sk"]

_HUBS = 5  # size of the hub cluster at the top of LEMMAS


@dataclass
class SynthConfig:
    """Knobs for corpus generation.

    ``singleton_fraction`` is the per-slot probability of minting a fresh
    never-reused stem; together with the unique defined terms it lower
    bounds the share of the realized vocabulary that occurs exactly once.
    ``templates`` selects a subset of the template inventory by name; an
    empty list means the full inventory.
    """

    n_records: int = 1000
    vocab_size: int = 1500
    zipf_exponent: float = 1.1
    singleton_fraction: float = 0.2
    templates: list[str] = field(default_factory=list)


# Template slot kinds.  Tags are assigned by slot, not by a tagger.
#   lit:surface:PENN   literal token
#   dt / dt_a / in     sampled closed-class token
#   term               the defined term (always a fresh pseudo-word)
#   gold:lemma|top     the gold hypernym slot (top = hub lemmas only)
#   lemma_other        non-gold hypernym lemma, distinct from the gold
#   filler             frequent non-hypernym noun
#   rare_n             rare noun (pseudo-word; sometimes plural or -ing form)
#   rare_vbz / rare_vbg / rare_vbn / rare_vbd / rare_vb   rare verb forms

_TEMPLATES: dict[str, tuple[float, list[str]]] = {
    # "termw blims a language of snarling framework"
    "gerund": (0.17, ["term", "rare_vbz", "dt", "gold:lemma", "in",
                      "rare_vbg", "lemma_other"]),
    # "termw brelk a framework of stovaned language" -- word-level twin of
    # "gerund": same closed-class skeleton, open-class categories swapped.
    "nounpair": (0.17, ["term", "rare_n", "dt", "lemma_other", "in",
                        "rare_vbn", "gold:lemma"]),
    # "the brelk snarf is a database of quilm"
    "is_a": (0.15, ["lit:the:DT", "rare_n", "rare_n", "lit:is:VBZ",
                    "dt_a", "gold:lemma", "in", "rare_n"]),
    # "the brelk database is a data for quilm" -- deceptive: the classic
    # is-a slot holds a filler; the gold sits in the subject phrase and is
    # separable only through its graph centrality.
    "fetch": (0.08, ["lit:the:DT", "rare_n", "gold:top", "lit:is:VBZ",
                     "lit:a:DT", "filler", "lit:for:IN", "rare_n"]),
    # "termw sarned blimmed as the library that quilms brelk"
    "defined": (0.11, ["term", "rare_vbd", "rare_vbn", "lit:as:IN",
                       "lit:the:DT", "gold:lemma", "lit:that:WDT",
                       "rare_vbz", "rare_n"]),
    # "there is a service to brelk the data"
    "ex": (0.10, ["lit:there:EX", "lit:is:VBZ", "dt", "gold:lemma",
                  "lit:to:TO", "rare_vb", "lit:the:DT", "filler"]),
    # "termw is a platform which quilms code of brelk"
    "which": (0.08, ["term", "lit:is:VBZ", "dt_a", "gold:lemma",
                     "lit:which:WDT", "rare_vbz", "filler", "in",
                     "rare_n"]),
    # "format blim a runtime of snarfing quops of trel": the gold sits at
    # position 1 or 4 depending on the verb-form pairing (present+gerund
    # and past+participle point left, the crossed pairings point right),
    # so neither verb slot alone carries any signal about position 4.
    # Its lemmas come from below the hub cluster, keeping its centrality
    # band disjoint from the hub-gold family above.
    "xor": (0.14, []),
}

_ADJ_PROB = 0.25
_PAREN_PROB = 0.12
_CAP_PROB = 0.2
_TAIL_PROBS = [0.45, 0.35, 0.2]  # trailing junk phrases per sentence
_FETCH_HUBS = 3  # hub-gold family draws only from the densest hubs


def _related_ranks(rank: int, n: int) -> list[int]:
    near = {rank - 2, rank - 1, rank + 1, rank + 2}
    ranks = set(range(min(_HUBS, n))) | {r for r in near if 0 <= r < n}
    ranks.discard(rank)
    return sorted(ranks)


class _StemPool:
    """Core Zipf-distributed stems plus a fresh-singleton stream."""

    def __init__(self, cfg: SynthConfig, gen: np.random.Generator):
        self._gen = gen
        self._used: set[str] = set()
        self._core = [self._mint() for _ in range(cfg.vocab_size)]
        weights = 1.0 / (1 + np.arange(cfg.vocab_size)) ** cfg.zipf_exponent
        self._weights = weights / weights.sum()
        self._fresh_prob = cfg.singleton_fraction

    def _mint(self) -> str:
        while True:
            syllables = 2 if self._gen.random() < 0.7 else 1
            stem = "".join(
                self._gen.choice(_ONSETS) + self._gen.choice(_VOWELS)
                + (self._gen.choice(_CODAS) if k == syllables - 1 else "")
                for k in range(syllables))
            if len(stem) < 3 or stem in self._used:
                continue
            # No realized form may shadow a real vocabulary item.
            if any(f in _RESERVED for f in (stem, stem + "s", stem + "ing",
                                            stem + "ed")):
                continue
            self._used.add(stem)
            return stem

    def draw(self) -> str:
        if self._gen.random() < self._fresh_prob:
            return self._mint()
        return self._core[self._gen.choice(len(self._core), p=self._weights)]

    def fresh(self) -> str:
        return self._mint()


def _noun_form(stem: str, gen: np.random.Generator) -> str:
    u = gen.random()
    if u < 0.5:
        return stem + "s"
    if u < 0.65:
        return stem + "ing"
    return stem


def _rare_noun(pool: "_StemPool", gen: np.random.Generator
               ) -> tuple[str, str]:
    form = _noun_form(pool.draw(), gen)
    penn = "NNS" if form.endswith("s") else "NN"
    return _maybe_cap(form, gen, 0.05), penn


def _verb_form(stem: str, tag: str) -> str:
    return stem + {"VB": "", "VBP": "", "VBZ": "s", "VBG": "ing",
                   "VBN": "ed", "VBD": "ed"}[tag]


def generate_records(cfg: SynthConfig, seed: int) -> list[dict]:
    """Raw record dicts (pre-serialization), deterministic per seed."""
    if cfg.n_records < 1:
        raise ValueError("n_records must be >= 1")
    if not 0 <= cfg.singleton_fraction < 1:
        raise ValueError("singleton_fraction must lie in [0, 1)")
    if cfg.vocab_size < 10:
        raise ValueError("vocab_size must be >= 10")
    names = cfg.templates or list(_TEMPLATES)
    unknown = [t for t in names if t not in _TEMPLATES]
    if unknown:
        raise ValueError(f"unknown templates: {unknown}")

    gen = rng.stream(seed, rng.SYNTH)
    pool = _StemPool(cfg, gen)
    weights = np.array([_TEMPLATES[t][0] for t in names])
    weights = weights / weights.sum()

    lemma_zipf = 1.0 / (1 + np.arange(len(LEMMAS))) ** 0.8
    lemma_zipf = lemma_zipf / lemma_zipf.sum()

    lemma_terms: dict[str, list[str]] = {lem: [] for lem in LEMMAS}
    all_terms: list[str] = []
    records = []
    for _ in range(cfg.n_records):
        template = names[gen.choice(len(names), p=weights)]
        record, gold_lemma_rank, term = _realize(
            template, pool, gen, lemma_zipf)
        partners = _draw_partners(gen, gold_lemma_rank, lemma_terms, all_terms)
        if partners:
            record["tag_partners"] = partners
        lemma_terms[LEMMAS[gold_lemma_rank]].append(term)
        all_terms.append(term)
        records.append(record)
    return records


def _maybe_cap(surface: str, gen, prob: float = _CAP_PROB) -> str:
    if gen.random() < prob:
        return surface[0].upper() + surface[1:]
    return surface


def _realize(template: str, pool: _StemPool, gen: np.random.Generator,
             lemma_zipf: np.ndarray):
    term = pool.fresh()
    if gen.random() < 0.3:
        term = term + "-" + pool.fresh()

    if template == "xor":
        tokens, pos, gold_surface, gold_rank = _xor_body(pool, gen,
                                                         lemma_zipf)
        return _decorate(tokens, pos, gold_surface, gold_rank, term,
                         pool, gen)

    # The gold lemma is drawn before slot realization so that distractor
    # lemma slots can exclude it regardless of their order in the template.
    gold_slot = next(s for s in _TEMPLATES[template][1] if s.startswith("gold"))
    gold_arg = gold_slot.partition(":")[2]
    if gold_arg == "top":
        hub_w = lemma_zipf[:_FETCH_HUBS] / lemma_zipf[:_FETCH_HUBS].sum()
        gold_rank = int(gen.choice(_FETCH_HUBS, p=hub_w))
    else:
        gold_rank = int(gen.choice(len(LEMMAS), p=lemma_zipf))

    tokens: list[str] = []
    pos: list[str] = []
    gold_surface = None

    def emit(surface, penn):
        tokens.append(surface)
        pos.append(penn)

    for slot in _TEMPLATES[template][1]:
        kind, _, arg = slot.partition(":")
        if kind == "lit":
            surface, penn = arg.split(":")
            emit(surface, penn)
            continue
        if kind == "dt":
            emit(["a", "an", "the"][gen.choice(3)], "DT")
            continue
        if kind == "dt_a":
            emit(["a", "an"][gen.choice(2)], "DT")
            continue
        if kind == "in":
            emit(["of", "for", "in"][gen.choice(3)], "IN")
            continue
        if kind == "term":
            emit(term, "NN")
            continue

        # Open-class noun slots may attract a droppable adjective in front.
        if kind in ("gold", "lemma_other", "filler", "rare_n"):
            if gen.random() < _ADJ_PROB:
                emit(pool.draw() + gen.choice(["ic", "al", "ous", "ish"]),
                     "JJ")

        if kind == "gold":
            gold_surface = _maybe_cap(LEMMAS[gold_rank], gen)
            emit(gold_surface, "NN")
        elif kind == "lemma_other":
            other = int(gen.choice(len(LEMMAS), p=lemma_zipf))
            while other == gold_rank:
                other = int(gen.choice(len(LEMMAS), p=lemma_zipf))
            emit(_maybe_cap(LEMMAS[other], gen), "NN")
        elif kind == "filler":
            emit(FILLERS[gen.choice(len(FILLERS))], "NN")
        elif kind == "rare_n":
            emit(*_rare_noun(pool, gen))
        elif kind.startswith("rare_v"):
            tag = kind.removeprefix("rare_").upper()
            emit(_verb_form(pool.draw(), tag), tag)
        else:
            raise AssertionError(f"bad slot {slot!r}")

    assert gold_surface is not None
    return _decorate(tokens, pos, gold_surface, gold_rank, term, pool, gen)


def _xor_body(pool: _StemPool, gen: np.random.Generator,
              lemma_zipf: np.ndarray):
    """Verb-pairing family: matched pairings put the gold first, crossed
    pairings put it after the determiner, so each verb slot alone is
    uninformative about the noun between them.  Lemmas come from below
    the hub cluster so this family occupies a centrality band that never
    overlaps the hub-gold family."""
    u = gen.random()
    if u < 0.325:
        v1, v2, gold_pos = "VBP", "VBG", 1
    elif u < 0.65:
        v1, v2, gold_pos = "VBD", "VBN", 1
    elif u < 0.825:
        v1, v2, gold_pos = "VBP", "VBN", 4
    else:
        v1, v2, gold_pos = "VBD", "VBG", 4
    band = lemma_zipf[_HUBS:] / lemma_zipf[_HUBS:].sum()
    gold_rank = _HUBS + int(gen.choice(len(band), p=band))
    other = _HUBS + int(gen.choice(len(band), p=band))
    while other == gold_rank:
        other = _HUBS + int(gen.choice(len(band), p=band))
    first_rank = gold_rank if gold_pos == 1 else other
    second_rank = other if gold_pos == 1 else gold_rank

    tokens: list[str] = []
    pos: list[str] = []

    def emit(surface, penn):
        tokens.append(surface)
        pos.append(penn)

    def noun(surface):
        if gen.random() < _ADJ_PROB:
            emit(pool.draw() + gen.choice(["ic", "al", "ous", "ish"]), "JJ")
        emit(surface, "NN")

    first = _maybe_cap(LEMMAS[first_rank], gen)
    second = _maybe_cap(LEMMAS[second_rank], gen)
    noun(first)
    emit(_verb_form(pool.draw(), v1), v1)
    emit(["a", "an", "the"][gen.choice(3)], "DT")
    noun(second)
    emit(["of", "for", "in"][gen.choice(3)], "IN")
    emit(_verb_form(pool.draw(), v2), v2)
    emit(*_rare_noun(pool, gen))
    emit("of", "IN")
    emit(*_rare_noun(pool, gen))
    gold_surface = first if gold_pos == 1 else second
    return tokens, pos, gold_surface, gold_rank


def _decorate(tokens: list[str], pos: list[str], gold_surface: str,
              gold_rank, term: str, pool: _StemPool,
              gen: np.random.Generator):
    # Trailing junk phrases vary sentence length so that a token's
    # relative position is shared across families instead of pinning
    # each family to its own length.
    for _ in range(gen.choice(len(_TAIL_PROBS), p=_TAIL_PROBS)):
        tokens.append(["of", "for"][gen.choice(2)])
        pos.append("IN")
        surface, penn = _rare_noun(pool, gen)
        tokens.append(surface)
        pos.append(penn)

    if gen.random() < _PAREN_PROB:
        # Aside after the first noun; removed wholesale by preprocessing.
        at = next(k for k, p in enumerate(pos) if p in ("NN", "NNS")) + 1
        aside = [("(", "-LRB-"), (pool.draw() + "ish", "JJ"),
                 (pool.draw(), "NN"), (")", "-RRB-")]
        for off, (s, p) in enumerate(aside):
            tokens.insert(at + off, s)
            pos.insert(at + off, p)

    record = {"term": term, "tokens": tokens, "pos": pos,
              "hypernym": gold_surface}
    return record, gold_rank, term


def _draw_partners(gen: np.random.Generator, gold_lemma_rank: int,
                   lemma_terms: dict[str, list[str]],
                   all_terms: list[str]) -> list[str]:
    """Partner tags for one record, drawn from hypernym-related terms.

    Partners stay within the related-rank set (the hub cluster plus the
    gold's rank neighbors), so the co-occurrence graph keeps a sharp
    centrality gap between hubs and the rest instead of saturating into
    a near-complete graph.  A related lemma with no terms yet yields no
    partner rather than a random one.
    """
    if not all_terms or gen.random() < 0.25:
        return []
    count = int(gen.choice([1, 2, 3], p=[0.4, 0.4, 0.2]))
    partners: list[str] = []
    for _ in range(count):
        ranks = _related_ranks(gold_lemma_rank, len(LEMMAS))
        lemma = LEMMAS[ranks[gen.choice(len(ranks))]]
        terms = lemma_terms[lemma]
        if not terms:
            continue
        choice = terms[gen.choice(len(terms))]
        if choice not in partners:
            partners.append(choice)
    return partners


def synth_generate(cfg: SynthConfig, seed: int) -> Corpus:
    """Generate, serialize, and re-parse a corpus through the real loader.

    Going through the loader keeps the generator honest: a template that
    produced an unresolvable gold or an empty candidate set fails loudly
    here instead of surfacing later as a training mystery.
    """
    lines = [json.dumps(r, sort_keys=True) for r in generate_records(cfg, seed)]
    corpus, rejected = load_corpus(lines, source=f"synthetic(seed={seed})")
    if rejected:
        raise AssertionError(f"synthetic corpus produced rejects: {rejected[:3]}")
    return corpus


def save_records(records: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, sort_keys=True) + "\n")
