"""Closed PoS type system: Penn-Treebank mapping, one-hot encoding, fallback tagger.

The pipeline works over 15 retained PoS categories plus a null padding
element.  All four noun tags collapse into NN; everything else outside the
retained set (adjectives, adverbs, conjunctions, punctuation, ...) is
dropped before feature extraction.
"""

from __future__ import annotations

import enum

import numpy as np


class PosType(enum.Enum):
    """Retained PoS categories plus the null padding element.

    The enum value is the canonical 1-based index used by one-hot and
    integer encodings.  NULL is only ever produced by window padding,
    never by tag mapping.
    """

    DT = 1
    EX = 2
    IN = 3
    NN = 4
    TO = 5
    VB = 6
    VBD = 7
    VBG = 8
    VBN = 9
    VBP = 10
    VBZ = 11
    WDT = 12
    WP = 13
    WPS = 14  # Penn "WP$"
    WRB = 15
    NULL = 16

    @property
    def index(self) -> int:
        return self.value

    @property
    def label(self) -> str:
        """Display form; the possessive wh-pronoun prints as WP$."""
        return "WP$" if self is PosType.WPS else self.name


N_POS_TYPES = 16

#: All real (non-padding) categories, in canonical order.
REAL_POS_TYPES = tuple(p for p in PosType if p is not PosType.NULL)

# Penn tags that map onto a retained category.  The four noun tags collapse
# into NN; the rest map identically (WP$ spelled WPS internally).
_PENN_TO_POS = {
    "DT": PosType.DT,
    "EX": PosType.EX,
    "IN": PosType.IN,
    "NN": PosType.NN,
    "NNS": PosType.NN,
    "NNP": PosType.NN,
    "NNPS": PosType.NN,
    "TO": PosType.TO,
    "VB": PosType.VB,
    "VBD": PosType.VBD,
    "VBG": PosType.VBG,
    "VBN": PosType.VBN,
    "VBP": PosType.VBP,
    "VBZ": PosType.VBZ,
    "WDT": PosType.WDT,
    "WP": PosType.WP,
    "WP$": PosType.WPS,
    "WRB": PosType.WRB,
}


def map_penn_tag(tag: str) -> PosType | None:
    """Map a Penn-Treebank tag to its retained category, or None if dropped.

    Unknown tags are dropped silently, never raised: the preprocessing step
    removes non-essential categories wholesale.  Never returns NULL.
    """
    return _PENN_TO_POS.get(tag)


def one_hot(p: PosType) -> np.ndarray:
    """Length-16 one-hot vector with 1.0 at the canonical index of ``p``."""
    v = np.zeros(N_POS_TYPES)
    v[p.index - 1] = 1.0
    return v


# --- fallback tagger -------------------------------------------------------
#
# A deliberately small, deterministic stand-in for a real statistical tagger,
# used when input records carry no tags.  Closed-class lexicon plus suffix
# rules; everything else defaults to NN.  Its accuracy ceiling is low, and
# since tagging quality directly bounds extraction quality, pre-tagged input
# is always preferred.

_LEXICON = {
    "a": "DT", "an": "DT", "the": "DT", "this": "DT", "these": "DT",
    "those": "DT", "each": "DT", "every": "DT", "any": "DT", "some": "DT",
    "there": "EX",
    "of": "IN", "in": "IN", "for": "IN", "on": "IN", "with": "IN",
    "as": "IN", "by": "IN", "at": "IN", "from": "IN", "about": "IN",
    "into": "IN", "over": "IN", "under": "IN", "between": "IN",
    "within": "IN", "through": "IN", "during": "IN", "via": "IN",
    "that": "WDT", "which": "WDT",
    "who": "WP", "whom": "WP", "what": "WP",
    "whose": "WP$",
    "where": "WRB", "when": "WRB", "why": "WRB", "how": "WRB",
    "to": "TO",
    "be": "VB", "do": "VB", "have": "VB",
    "is": "VBZ", "does": "VBZ", "has": "VBZ",
    "are": "VBP", "am": "VBP",
    "was": "VBD", "were": "VBD", "did": "VBD", "had": "VBD",
    "been": "VBN", "done": "VBN",
    "being": "VBG", "having": "VBG", "doing": "VBG",
}

# Verb stems whose -s/-es form is tagged VBZ rather than a plural noun.
_VERB_STEMS = {
    "use", "run", "provide", "describe", "denote", "refer", "query",
    "allow", "enable", "support", "define", "represent", "contain",
    "specify", "mean", "make", "give", "take", "hold", "store",
    "manage", "handle", "create", "produce", "perform", "implement",
}

_BE_HAVE = {"is", "are", "was", "were", "be", "been", "being", "has",
            "have", "had", "having"}


def _strip_s(token: str) -> str | None:
    """Candidate verb stem for a 3rd-person-singular surface, else None."""
    if token.endswith("ies") and len(token) > 4:
        return token[:-3] + "y"
    if token.endswith("es") and len(token) > 3:
        stem = token[:-2]
        if stem in _VERB_STEMS:
            return stem
        return token[:-1] if token[:-1] in _VERB_STEMS else None
    if token.endswith("s") and len(token) > 2:
        return token[:-1]
    return None


def fallback_tag(tokens: list[str]) -> list[str]:
    """Assign one Penn tag per token using the lexicon and suffix rules.

    Deterministic: lexicon lookup first, then -ing -> VBG, -ed -> VBN after
    a form of be/have else VBD, -s over a known verb stem -> VBZ, default NN.
    """
    if not tokens:
        raise ValueError("fallback_tag requires a non-empty token list")
    tags = []
    for k, token in enumerate(tokens):
        low = token.lower()
        if low in _LEXICON:
            tags.append(_LEXICON[low])
            continue
        if low.endswith("ing") and len(low) > 4:
            tags.append("VBG")
            continue
        if low.endswith("ed") and len(low) > 3:
            prev = tokens[k - 1].lower() if k > 0 else ""
            tags.append("VBN" if prev in _BE_HAVE else "VBD")
            continue
        stem = _strip_s(low)
        if stem is not None and stem in _VERB_STEMS:
            tags.append("VBZ")
            continue
        tags.append("NN")
    return tags
