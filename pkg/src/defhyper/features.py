"""Candidate feature extraction.

A candidate at position ``i`` (1-based) of a definition is described to
the sequence models by its tag context: the ``L`` tags before it and the
``L`` tags after it, padded with the null tag beyond sentence bounds.
The forward net consumes the pre-window left to right, ending adjacent
to the candidate; the backward net consumes the post-window reversed,
also ending adjacent to the candidate.

Three encodings of those windows exist:

* one-hot over tag types, optionally prefixed by slots for the most
  frequent training words (a word in the top list occupies its word
  slot, anything else falls back to its tag slot);
* integer ids into an embedding table, either over words alone (with
  unknown and padding symbols) or over top words with tag fallback;
* a flat integer vector for the feature-vector baselines, where the
  pre-window keeps tag indices (1..16) and the post-window mirrors them
  to 33 - index (17..32), followed by the lexical scalars.

The second-stage refinement features for a candidate are
``[initial probability, relative position, capitalization, log-scaled
frequency, degree centrality]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Definition
from .postag import N_POS_TYPES, PosType

REFINE_DIM = 5
N_LEXICAL = 4  # position, capitalized, frequency, centrality


def tag_window(defn: Definition, i: int, window: int
               ) -> tuple[list[PosType], list[PosType]]:
    """Natural-order (pre, post) tag windows around 1-based position i."""
    if not 1 <= i <= defn.n:
        raise ValueError(f"position {i} outside 1..{defn.n}")
    if window < 1:
        raise ValueError("window must be >= 1")
    pre = [defn.Q[j - 1] if j >= 1 else PosType.NULL
           for j in range(i - window, i)]
    post = [defn.Q[j - 1] if j <= defn.n else PosType.NULL
            for j in range(i + 1, i + window + 1)]
    return pre, post


@dataclass
class OneHotEncoder:
    """One-hot window encoder with optional leading word slots.

    With an empty word list this is the pure tag encoder (16 dims).  With
    K words the dimension is K + 16 and in-list words claim their word
    slot while everything else lands in its tag slot, so K = 0 reproduces
    the tag encoder exactly, slot for slot.
    """

    words: list[str]

    def __post_init__(self):
        self._index = {w: k for k, w in enumerate(self.words)}
        if len(self._index) != len(self.words):
            raise ValueError("duplicate words in encoder vocabulary")

    @property
    def dim(self) -> int:
        return len(self.words) + N_POS_TYPES

    def _slot(self, defn: Definition, j: int) -> int:
        # Tag slots are 0-based within their block: slot K + index - 1,
        # so NULL occupies the final column K + 15.
        if not 1 <= j <= defn.n:
            return len(self.words) + PosType.NULL.index - 1
        k = self._index.get(defn.W[j - 1].lower())
        if k is not None:
            return k
        return len(self.words) + defn.Q[j - 1].index - 1

    def slots_candidate(self, defn: Definition, i: int, window: int
                        ) -> tuple[np.ndarray, np.ndarray]:
        """(pre, post) slot-index arrays of shape (window,).

        Indices are in net-consumption order: pre left to right, post
        reversed so the last entry sits adjacent to the candidate.
        """
        tag_window(defn, i, window)  # bounds validation
        pre = np.array([self._slot(defn, j) for j in range(i - window, i)],
                       dtype=np.int64)
        post = np.array([self._slot(defn, j)
                         for j in range(i + window, i, -1)], dtype=np.int64)
        return pre, post

    def encode_candidate(self, defn: Definition, i: int, window: int
                         ) -> tuple[np.ndarray, np.ndarray]:
        """(pre, post) one-hot arrays of shape (window, dim)."""
        pre, post = self.slots_candidate(defn, i, window)
        eye = np.eye(self.dim)
        return eye[pre], eye[post]


@dataclass
class EmbedEncoder:
    """Integer-id window encoder feeding an embedding table.

    ``hybrid=False``: ids 0..V-1 are the word list, V is the unknown
    symbol, V+1 the out-of-range padding symbol.  ``hybrid=True``: ids
    0..K-1 are the word list and K..K+15 the tag types; out-of-list words
    use their tag id and out-of-range positions the null-tag id, so no
    unknown or padding symbols exist.
    """

    words: list[str]
    hybrid: bool = False

    def __post_init__(self):
        self._index = {w: k for k, w in enumerate(self.words)}
        if len(self._index) != len(self.words):
            raise ValueError("duplicate words in encoder vocabulary")

    @property
    def n_symbols(self) -> int:
        if self.hybrid:
            return len(self.words) + N_POS_TYPES
        return len(self.words) + 2

    @property
    def unk_id(self) -> int | None:
        return None if self.hybrid else len(self.words)

    @property
    def pad_id(self) -> int | None:
        return None if self.hybrid else len(self.words) + 1

    def _id(self, defn: Definition, j: int) -> int:
        if not 1 <= j <= defn.n:
            if self.hybrid:
                return len(self.words) + PosType.NULL.index - 1
            return self.pad_id
        k = self._index.get(defn.W[j - 1].lower())
        if k is not None:
            return k
        if self.hybrid:
            return len(self.words) + defn.Q[j - 1].index - 1
        return self.unk_id

    def ids_candidate(self, defn: Definition, i: int, window: int
                      ) -> tuple[np.ndarray, np.ndarray]:
        """(pre, post) id arrays of shape (window,), consumption order."""
        tag_window(defn, i, window)
        pre = np.array([self._id(defn, j) for j in range(i - window, i)],
                       dtype=np.int64)
        post = np.array([self._id(defn, j)
                         for j in range(i + window, i, -1)], dtype=np.int64)
        return pre, post


def frequency_feature(count: int, max_count: int) -> float:
    """log(1 + count) / log(1 + max), clipped to [0, 1]; 0 for empty maps."""
    if max_count <= 0:
        return 0.0
    return min(np.log1p(count) / np.log1p(max_count), 1.0)


def lexical_features(defn: Definition, i: int, freq: dict[str, int],
                     max_count: int, dc_map: dict[str, float]) -> np.ndarray:
    """[position, capitalized, frequency, centrality] for candidate i."""
    surface = defn.W[i - 1]
    lowered = surface.lower()
    return np.array([
        i / defn.n,
        1.0 if surface[:1].isupper() else 0.0,
        frequency_feature(freq.get(lowered, 0), max_count),
        dc_map.get(lowered, 0.0),
    ])


def refine_vector(p_init: float, lexical: np.ndarray) -> np.ndarray:
    """Stage-two input: the initial probability then the lexical scalars."""
    return np.concatenate(([p_init], lexical))


def integer_encoding(defn: Definition, i: int, window: int,
                     freq: dict[str, int], max_count: int,
                     dc_map: dict[str, float]) -> np.ndarray:
    """Flat baseline features: mirrored tag indices plus lexical scalars.

    Pre-window tags keep their canonical index (1..16); post-window tags
    map to 33 - index (17..32) so the two directions occupy disjoint
    integer ranges.  Windows stay in natural sentence order.  The scalar
    tail is ordered [centrality, position, capitalized, frequency].
    """
    pre, post = tag_window(defn, i, window)
    lex = lexical_features(defn, i, freq, max_count, dc_map)
    head = [float(p.value) for p in pre] + [float(33 - p.value) for p in post]
    return np.concatenate((head, [lex[3], lex[0], lex[1], lex[2]]))
