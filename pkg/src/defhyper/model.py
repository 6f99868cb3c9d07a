"""Two-stage hypernym extraction model.

Stage one scores each candidate noun from its context windows: a forward
recurrent unit reads the pre-window, a backward one reads the reversed
post-window, their final states concatenate, pass through dropout and a
tanh layer, and a two-way softmax yields the initial probability that
the candidate is the hypernym.

Stage two refines that probability with sentence-level evidence the
windows cannot see: relative position, capitalization, training-corpus
frequency, and degree centrality in the hypernym co-occurrence graph.
A small tanh network over those five scalars emits the final
probability.  Per definition, the highest-scoring candidate is selected
when it clears the decision threshold; earlier positions win ties.

Four input encodings share this architecture: tag one-hots, trained
word embeddings, hybrid embeddings with tag fallback, and hybrid
one-hots with leading word slots.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import rng
from .cograph import build_graph, build_hypernym_map, degree_centrality
from .corpus import Corpus, build_topk
from .features import (REFINE_DIM, EmbedEncoder, OneHotEncoder,
                       lexical_features, refine_vector)
from .neural import (RMSProp, cross_entropy, dense_backward, dense_forward,
                     dropout_mask, gru_backward, gru_forward, init_dense,
                     init_embedding, init_gru, softmax, softmax_ce_backward)

MODES = ("pos", "word", "hybrid-embed", "hybrid-onehot")
MODEL_FORMAT = "defhyper-model"
MODEL_VERSION = 1
_CHUNK = 2048


@dataclass
class ModelConfig:
    mode: str = "pos"
    window: int = 3
    hidden: int = 64
    topk: int = 100          # word slots for the hybrid encodings
    vocab_cap: int = 4000    # vocabulary bound for the word encoding
    embed_dim: int = 100
    epochs: int = 30
    batch_size: int = 32
    lr: float = 1e-3
    decay: float = 0.9
    eps: float = 1e-8
    dropout: float = 0.5
    threshold: float = 0.5
    refine: bool = True
    refine_hidden: int = 16
    seed: int = 0

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.hidden < 1 or self.refine_hidden < 1:
            raise ValueError("hidden sizes must be >= 1")
        if self.topk < 0 or self.vocab_cap < 1 or self.embed_dim < 1:
            raise ValueError("vocabulary settings must be positive")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must lie in [0, 1)")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")


@dataclass
class Model:
    config: ModelConfig
    params: dict[str, np.ndarray]
    words: list[str]
    train_freq: dict[str, int]
    dc_map: dict[str, float]
    history: dict[str, list[float]] = field(default_factory=dict)

    @property
    def max_count(self) -> int:
        return max(self.train_freq.values(), default=0)


def make_encoder(config: ModelConfig, words: list[str]):
    if config.mode == "pos":
        return OneHotEncoder([])
    if config.mode == "hybrid-onehot":
        return OneHotEncoder(words)
    if config.mode == "word":
        return EmbedEncoder(words, hybrid=False)
    if config.mode == "hybrid-embed":
        return EmbedEncoder(words, hybrid=True)
    raise ValueError(f"unknown mode {config.mode!r}")


def _vocab_for(config: ModelConfig, train: Corpus) -> list[str]:
    if config.mode == "pos":
        return []
    if config.mode == "word":
        return build_topk(train, config.vocab_cap)
    return build_topk(train, config.topk)


def _sub(params: dict[str, np.ndarray], prefix: str) -> dict[str, np.ndarray]:
    n = len(prefix)
    return {k[n:]: v for k, v in params.items() if k.startswith(prefix)}


def _pref(grads: dict[str, np.ndarray], prefix: str) -> dict[str, np.ndarray]:
    return {prefix + k: v for k, v in grads.items()}


def _candidate_rows(corpus: Corpus) -> list[tuple[int, int, int]]:
    """(definition index, candidate position, gold label) per candidate."""
    rows = []
    for di, d in enumerate(corpus.definitions):
        for i in d.candidates:
            rows.append((di, i, 1 if i in d.gold else 0))
    return rows


def _window_ids(encoder, defn, i, window):
    if isinstance(encoder, OneHotEncoder):
        return encoder.slots_candidate(defn, i, window)
    return encoder.ids_candidate(defn, i, window)


def _encode_rows(encoder, corpus: Corpus, rows, window: int
                 ) -> tuple[np.ndarray, np.ndarray]:
    pre = np.empty((len(rows), window), dtype=np.int64)
    post = np.empty((len(rows), window), dtype=np.int64)
    for k, (di, i, _) in enumerate(rows):
        pre[k], post[k] = _window_ids(encoder, corpus.definitions[di],
                                      i, window)
    return pre, post


# ------------------------------------------------------------ networks


def stage1_forward(params: dict[str, np.ndarray], pre_in: np.ndarray,
                   post_in: np.ndarray, mask: np.ndarray | None = None
                   ) -> tuple[np.ndarray, tuple]:
    """Class probabilities for a batch of candidate windows.

    ``pre_in``/``post_in`` are (B, T, D) one-hot floats, or (B, T) symbol
    ids when the parameter set carries an embedding table.  ``mask`` is
    an inverted-dropout mask over the concatenated states, or None.
    """
    if "embed" in params:
        Xp = params["embed"][pre_in]
        Xn = params["embed"][post_in]
    else:
        Xp, Xn = pre_in, post_in
    hp, cache_p = gru_forward(_sub(params, "pre."), Xp)
    hn, cache_n = gru_forward(_sub(params, "post."), Xn)
    Y = np.concatenate([hp, hn], axis=1)
    Yd = Y * mask if mask is not None else Y
    A = np.tanh(dense_forward(_sub(params, "trunk."), Yd))
    probs = softmax(dense_forward(_sub(params, "head."), A))
    return probs, (pre_in, post_in, cache_p, cache_n, Yd, A, mask)


def stage1_backward(params: dict[str, np.ndarray], cache: tuple,
                    probs: np.ndarray, labels: np.ndarray
                    ) -> dict[str, np.ndarray]:
    pre_in, post_in, cache_p, cache_n, Yd, A, mask = cache
    dlogits = softmax_ce_backward(probs, labels)
    g_head, dA = dense_backward(_sub(params, "head."), A, dlogits)
    dZ = dA * (1.0 - A * A)
    g_trunk, dYd = dense_backward(_sub(params, "trunk."), Yd, dZ)
    dY = dYd * mask if mask is not None else dYd
    hidden = params["pre.bz"].shape[0]
    g_pre, dXp = gru_backward(_sub(params, "pre."), cache_p, dY[:, :hidden])
    g_post, dXn = gru_backward(_sub(params, "post."), cache_n, dY[:, hidden:])
    grads = {**_pref(g_head, "head."), **_pref(g_trunk, "trunk."),
             **_pref(g_pre, "pre."), **_pref(g_post, "post.")}
    if "embed" in params:
        dE = np.zeros_like(params["embed"])
        np.add.at(dE, pre_in, dXp)
        np.add.at(dE, post_in, dXn)
        grads["embed"] = dE
    return grads


def refine_forward(params: dict[str, np.ndarray], X: np.ndarray
                   ) -> tuple[np.ndarray, tuple]:
    A = np.tanh(dense_forward(_sub(params, "ref1."), X))
    probs = softmax(dense_forward(_sub(params, "ref2."), A))
    return probs, (X, A)


def refine_backward(params: dict[str, np.ndarray], cache: tuple,
                    probs: np.ndarray, labels: np.ndarray
                    ) -> dict[str, np.ndarray]:
    X, A = cache
    dlogits = softmax_ce_backward(probs, labels)
    g2, dA = dense_backward(_sub(params, "ref2."), A, dlogits)
    dZ = dA * (1.0 - A * A)
    g1, _ = dense_backward(_sub(params, "ref1."), X, dZ)
    return {**_pref(g1, "ref1."), **_pref(g2, "ref2.")}


def init_stage1(gen: np.random.Generator, in_dim: int, hidden: int
                ) -> dict[str, np.ndarray]:
    """Window nets, trunk, and head, in a fixed draw order."""
    params = {}
    params.update(_pref(init_gru(gen, in_dim, hidden), "pre."))
    params.update(_pref(init_gru(gen, in_dim, hidden), "post."))
    params.update(_pref(init_dense(gen, 2 * hidden, hidden), "trunk."))
    params.update(_pref(init_dense(gen, hidden, 2), "head."))
    return params


# ------------------------------------------------------------ training


def _stage1_scores(params: dict[str, np.ndarray], onehot_dim: int | None,
                   pre_ids: np.ndarray, post_ids: np.ndarray) -> np.ndarray:
    """Initial probabilities for encoded rows, chunked, no dropout."""
    eye = np.eye(onehot_dim) if onehot_dim is not None else None
    out = np.empty(len(pre_ids))
    for s in range(0, len(pre_ids), _CHUNK):
        bp, bn = pre_ids[s:s + _CHUNK], post_ids[s:s + _CHUNK]
        inp = (eye[bp], eye[bn]) if eye is not None else (bp, bn)
        probs, _ = stage1_forward(params, *inp)
        out[s:s + _CHUNK] = probs[:, 1]
    return out


def _refine_matrix(corpus: Corpus, rows, p_init: np.ndarray,
                   freq: dict[str, int], max_count: int,
                   dc_map: dict[str, float]) -> np.ndarray:
    X = np.empty((len(rows), REFINE_DIM))
    for k, (di, i, _) in enumerate(rows):
        lex = lexical_features(corpus.definitions[di], i, freq,
                               max_count, dc_map)
        X[k] = refine_vector(p_init[k], lex)
    return X


def train(train_corpus: Corpus, config: ModelConfig) -> Model:
    """Fit both stages on a training corpus.

    All randomness derives from config.seed through dedicated streams
    (weight init, epoch shuffling, dropout, embeddings, refinement), so
    equal inputs give bitwise-equal models.
    """
    config.validate()
    words = _vocab_for(config, train_corpus)
    encoder = make_encoder(config, words)
    rows = _candidate_rows(train_corpus)
    if not rows:
        raise ValueError("training corpus has no candidates")
    labels = np.array([lab for _, _, lab in rows], dtype=np.int64)
    pre_ids, post_ids = _encode_rows(encoder, train_corpus, rows,
                                     config.window)

    onehot = isinstance(encoder, OneHotEncoder)
    in_dim = encoder.dim if onehot else config.embed_dim
    params = init_stage1(rng.stream(config.seed, rng.INIT), in_dim,
                         config.hidden)
    if not onehot:
        params["embed"] = init_embedding(rng.stream(config.seed, rng.EMBED),
                                         encoder.n_symbols, config.embed_dim)

    shuffle_gen = rng.stream(config.seed, rng.SHUFFLE)
    drop_gen = rng.stream(config.seed, rng.DROPOUT)
    opt = RMSProp(config.lr, config.decay, config.eps)
    eye = np.eye(encoder.dim) if onehot else None
    n = len(rows)

    stage1_losses = []
    for _ in range(config.epochs):
        order = shuffle_gen.permutation(n)
        total = 0.0
        for s in range(0, n, config.batch_size):
            sel = order[s:s + config.batch_size]
            bp, bn, by = pre_ids[sel], post_ids[sel], labels[sel]
            inp = (eye[bp], eye[bn]) if onehot else (bp, bn)
            mask = None
            if config.dropout > 0.0:
                mask = dropout_mask(drop_gen, (len(sel), 2 * config.hidden),
                                    config.dropout)
            probs, cache = stage1_forward(params, *inp, mask=mask)
            total += cross_entropy(probs, by) * len(sel)
            grads = stage1_backward(params, cache, probs, by)
            opt.step(params, grads)
        stage1_losses.append(total / n)

    hyp_map = build_hypernym_map(train_corpus.definitions)
    dc_map = degree_centrality(build_graph(train_corpus.definitions, hyp_map))
    train_freq = dict(train_corpus.frequency)
    history = {"stage1": stage1_losses}

    if config.refine:
        ref_gen = rng.stream(config.seed, rng.REFINE)
        params.update(_pref(init_dense(ref_gen, REFINE_DIM,
                                       config.refine_hidden), "ref1."))
        params.update(_pref(init_dense(ref_gen, config.refine_hidden, 2),
                            "ref2."))
        p_init = _stage1_scores(params, encoder.dim if onehot else None,
                                pre_ids, post_ids)
        X = _refine_matrix(train_corpus, rows, p_init, train_freq,
                           max(train_freq.values(), default=0), dc_map)
        ropt = RMSProp(config.lr, config.decay, config.eps)
        refine_losses = []
        for _ in range(config.epochs):
            order = ref_gen.permutation(n)
            total = 0.0
            for s in range(0, n, config.batch_size):
                sel = order[s:s + config.batch_size]
                probs, cache = refine_forward(params, X[sel])
                total += cross_entropy(probs, labels[sel]) * len(sel)
                grads = refine_backward(params, cache, probs, labels[sel])
                ropt.step(params, grads)
            refine_losses.append(total / n)
        history["refine"] = refine_losses

    return Model(config=config, params=params, words=words,
                 train_freq=train_freq, dc_map=dc_map, history=history)


# ----------------------------------------------------------- inference


def candidate_scores(model: Model, corpus: Corpus
                     ) -> list[tuple[list[int], np.ndarray, np.ndarray]]:
    """Per definition: (candidate positions, initial, final probabilities).

    Final equals initial when the model was trained without refinement.
    """
    config = model.config
    encoder = make_encoder(config, model.words)
    rows = [(di, i, 0) for di, d in enumerate(corpus.definitions)
            for i in d.candidates]
    onehot = isinstance(encoder, OneHotEncoder)
    p_init = p_final = np.empty(0)
    if rows:
        pre_ids, post_ids = _encode_rows(encoder, corpus, rows, config.window)
        p_init = _stage1_scores(model.params, encoder.dim if onehot else None,
                                pre_ids, post_ids)
        if config.refine:
            X = _refine_matrix(corpus, rows, p_init, model.train_freq,
                               model.max_count, model.dc_map)
            p_final = refine_forward(model.params, X)[0][:, 1]
        else:
            p_final = p_init
    out = []
    at = 0
    for d in corpus.definitions:
        k = len(d.candidates)
        out.append((list(d.candidates), p_init[at:at + k],
                    p_final[at:at + k]))
        at += k
    return out


def predict(model: Model, corpus: Corpus) -> list[set[int]]:
    """Selected positions per definition: top candidate if it clears the
    threshold, otherwise nothing; the earliest position wins exact ties.
    """
    selections = []
    for positions, _, p_final in candidate_scores(model, corpus):
        best = int(np.argmax(p_final))
        if p_final[best] >= model.config.threshold:
            selections.append({positions[best]})
        else:
            selections.append(set())
    return selections


# --------------------------------------------------------- persistence


def save_model(model: Model, path) -> None:
    """Versioned JSON with exact float round-trip and stable key order."""
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "config": asdict(model.config),
        "weights": {k: {"shape": list(v.shape), "data": v.ravel().tolist()}
                    for k, v in model.params.items()},
        "words": model.words,
        "train_freq": model.train_freq,
        "dc_map": model.dc_map,
        "history": model.history,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"not a {MODEL_FORMAT} file: {path}")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {doc.get('version')}")
    config = ModelConfig(**doc["config"])
    config.validate()
    params = {k: np.array(w["data"], dtype=float).reshape(w["shape"])
              for k, w in doc["weights"].items()}
    return Model(config=config, params=params, words=list(doc["words"]),
                 train_freq={k: int(v) for k, v in doc["train_freq"].items()},
                 dc_map={k: float(v) for k, v in doc["dc_map"].items()},
                 history={k: list(map(float, v))
                          for k, v in doc.get("history", {}).items()})
