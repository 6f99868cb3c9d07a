"""Classical baselines over the flat integer candidate features.

Three per-candidate classifiers consume the mirrored-window integer
vectors: Gaussian naive Bayes, softmax regression, and a Gini decision
tree.  Selection mirrors the sequence model: per definition, the top
candidate by positive-class probability is chosen when it clears the
threshold, earliest position first on exact ties.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus
from .features import integer_encoding
from .neural import softmax

BASELINE_KINDS = ("nb", "softmax", "tree")
BASELINE_FORMAT = "defhyper-baseline"
BASELINE_VERSION = 1


class GaussianNB:
    """Per-feature Gaussian class densities with Laplace-smoothed priors."""

    def __init__(self, var_smoothing: float = 1e-9):
        self.var_smoothing = var_smoothing
        self.priors: np.ndarray | None = None
        self.means: np.ndarray | None = None
        self.variances: np.ndarray | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "GaussianNB":
        n, _ = X.shape
        counts = np.array([np.sum(y == c) for c in (0, 1)], dtype=float)
        self.priors = (counts + 1.0) / (n + 2.0)
        self.means = np.stack([X[y == c].mean(axis=0) for c in (0, 1)])
        raw_var = np.stack([X[y == c].var(axis=0) for c in (0, 1)])
        self.variances = raw_var + self.var_smoothing * X.var(axis=0).max()
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        logp = np.log(self.priors) - 0.5 * (
            np.log(2.0 * np.pi * self.variances).sum(axis=1)
            + (((X[:, None, :] - self.means) ** 2) / self.variances).sum(axis=2))
        return softmax(logp)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.predict_proba(X).argmax(axis=1)

    def to_dict(self) -> dict:
        return {"var_smoothing": self.var_smoothing,
                "priors": self.priors.tolist(),
                "means": self.means.tolist(),
                "variances": self.variances.tolist()}

    @classmethod
    def from_dict(cls, doc: dict) -> "GaussianNB":
        clf = cls(var_smoothing=doc["var_smoothing"])
        clf.priors = np.array(doc["priors"])
        clf.means = np.array(doc["means"])
        clf.variances = np.array(doc["variances"])
        return clf


class SoftmaxRegression:
    """Linear softmax classifier fit by full-batch gradient descent.

    Features are standardized internally (constant columns pass through),
    weights start at zero, and the loss is mean cross-entropy with an L2
    penalty on the weights (not the biases).
    """

    def __init__(self, lr: float = 0.1, epochs: int = 500, l2: float = 1e-4):
        self.lr = lr
        self.epochs = epochs
        self.l2 = l2
        self.W: np.ndarray | None = None
        self.b: np.ndarray | None = None
        self.mu: np.ndarray | None = None
        self.sd: np.ndarray | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "SoftmaxRegression":
        n, d = X.shape
        self.mu = X.mean(axis=0)
        sd = X.std(axis=0)
        self.sd = np.where(sd > 0, sd, 1.0)
        Xs = (X - self.mu) / self.sd
        onehot = np.zeros((n, 2))
        onehot[np.arange(n), y] = 1.0
        self.W = np.zeros((2, d))
        self.b = np.zeros(2)
        for _ in range(self.epochs):
            probs = softmax(Xs @ self.W.T + self.b)
            err = (probs - onehot) / n
            self.W -= self.lr * (err.T @ Xs + self.l2 * self.W)
            self.b -= self.lr * err.sum(axis=0)
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        Xs = (X - self.mu) / self.sd
        return softmax(Xs @ self.W.T + self.b)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.predict_proba(X).argmax(axis=1)

    def to_dict(self) -> dict:
        return {"lr": self.lr, "epochs": self.epochs, "l2": self.l2,
                "W": self.W.tolist(), "b": self.b.tolist(),
                "mu": self.mu.tolist(), "sd": self.sd.tolist()}

    @classmethod
    def from_dict(cls, doc: dict) -> "SoftmaxRegression":
        clf = cls(lr=doc["lr"], epochs=doc["epochs"], l2=doc["l2"])
        clf.W = np.array(doc["W"])
        clf.b = np.array(doc["b"])
        clf.mu = np.array(doc["mu"])
        clf.sd = np.array(doc["sd"])
        return clf


class DecisionTree:
    """Binary Gini tree with deterministic tie-breaking.

    Nodes split while depth and leaf-size budgets allow, even at zero
    impurity gain (required for patterns that only pay off two levels
    down).  Among equally impure splits the lowest feature index wins,
    then the lowest threshold.  Leaves predict class fractions.
    """

    def __init__(self, max_depth: int = 12, min_leaf: int = 5):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.nodes: list[dict] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> "DecisionTree":
        self.nodes = []
        self._grow(X, y, np.arange(len(y)), depth=0)
        return self

    def _leaf(self, y: np.ndarray, idx: np.ndarray) -> int:
        sub = y[idx]
        p1 = float(np.mean(sub))
        self.nodes.append({"leaf": True, "p": [1.0 - p1, p1]})
        return len(self.nodes) - 1

    def _grow(self, X: np.ndarray, y: np.ndarray, idx: np.ndarray,
              depth: int) -> int:
        sub = y[idx]
        if (depth >= self.max_depth or len(idx) < 2 * self.min_leaf
                or sub.min() == sub.max()):
            return self._leaf(y, idx)
        split = self._best_split(X, y, idx)
        if split is None:
            return self._leaf(y, idx)
        feature, threshold = split
        node_id = len(self.nodes)
        self.nodes.append({"leaf": False, "feature": int(feature),
                           "threshold": float(threshold),
                           "left": -1, "right": -1})
        mask = X[idx, feature] <= threshold
        self.nodes[node_id]["left"] = self._grow(X, y, idx[mask], depth + 1)
        self.nodes[node_id]["right"] = self._grow(X, y, idx[~mask], depth + 1)
        return node_id

    def _best_split(self, X: np.ndarray, y: np.ndarray, idx: np.ndarray):
        best = None
        best_score = np.inf
        n = len(idx)
        for j in range(X.shape[1]):
            values = X[idx, j]
            order = np.argsort(values, kind="stable")
            sorted_vals = values[order]
            sorted_y = y[idx][order]
            # Split points sit between consecutive distinct values.
            boundaries = np.nonzero(np.diff(sorted_vals) > 0)[0] + 1
            if len(boundaries) == 0:
                continue
            pos = np.cumsum(sorted_y)
            total_pos = pos[-1]
            k = boundaries.astype(float)
            left_pos = pos[boundaries - 1]
            right_pos = total_pos - left_pos
            left_n, right_n = k, n - k
            ok = (left_n >= self.min_leaf) & (right_n >= self.min_leaf)
            if not ok.any():
                continue
            pl = left_pos / left_n
            pr = right_pos / right_n
            gini = (left_n * 2 * pl * (1 - pl)
                    + right_n * 2 * pr * (1 - pr)) / n
            gini = np.where(ok, gini, np.inf)
            at = int(np.argmin(gini))  # lowest threshold wins ties
            if gini[at] < best_score - 1e-12:
                best_score = gini[at]
                cut = boundaries[at]
                best = (j, (sorted_vals[cut - 1] + sorted_vals[cut]) / 2.0)
        return best

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        out = np.empty((len(X), 2))
        self._apply(X, np.arange(len(X)), 0, out)
        return out

    def _apply(self, X: np.ndarray, idx: np.ndarray, node_id: int,
               out: np.ndarray) -> None:
        if len(idx) == 0:
            return
        node = self.nodes[node_id]
        if node["leaf"]:
            out[idx] = node["p"]
            return
        mask = X[idx, node["feature"]] <= node["threshold"]
        self._apply(X, idx[mask], node["left"], out)
        self._apply(X, idx[~mask], node["right"], out)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.predict_proba(X).argmax(axis=1)

    def to_dict(self) -> dict:
        return {"max_depth": self.max_depth, "min_leaf": self.min_leaf,
                "nodes": self.nodes}

    @classmethod
    def from_dict(cls, doc: dict) -> "DecisionTree":
        clf = cls(max_depth=doc["max_depth"], min_leaf=doc["min_leaf"])
        clf.nodes = doc["nodes"]
        return clf


_CLASSES = {"nb": GaussianNB, "softmax": SoftmaxRegression,
            "tree": DecisionTree}


def make_classifier(kind: str):
    if kind not in _CLASSES:
        raise ValueError(f"kind must be one of {BASELINE_KINDS}")
    return _CLASSES[kind]()


# --------------------------------------------------- corpus orchestration


@dataclass
class BaselineModel:
    kind: str
    clf: object
    window: int
    threshold: float
    train_freq: dict[str, int]
    dc_map: dict[str, float]

    @property
    def max_count(self) -> int:
        return max(self.train_freq.values(), default=0)


def feature_matrix(corpus: Corpus, window: int, freq: dict[str, int],
                   max_count: int, dc_map: dict[str, float]
                   ) -> tuple[np.ndarray, np.ndarray]:
    """Integer-encoding rows and gold labels for every candidate."""
    X, y = [], []
    for d in corpus.definitions:
        for i in d.candidates:
            X.append(integer_encoding(d, i, window, freq, max_count, dc_map))
            y.append(1 if i in d.gold else 0)
    return np.array(X), np.array(y, dtype=np.int64)


def train_baseline(kind: str, train_corpus: Corpus, window: int = 3,
                   threshold: float = 0.5) -> BaselineModel:
    from .cograph import build_graph, build_hypernym_map, degree_centrality

    freq = dict(train_corpus.frequency)
    max_count = max(freq.values(), default=0)
    hyp_map = build_hypernym_map(train_corpus.definitions)
    dc_map = degree_centrality(build_graph(train_corpus.definitions, hyp_map))
    X, y = feature_matrix(train_corpus, window, freq, max_count, dc_map)
    clf = make_classifier(kind).fit(X, y)
    return BaselineModel(kind=kind, clf=clf, window=window,
                         threshold=threshold, train_freq=freq, dc_map=dc_map)


def baseline_predict(bm: BaselineModel, corpus: Corpus) -> list[set[int]]:
    X, _ = feature_matrix(corpus, bm.window, bm.train_freq, bm.max_count,
                          bm.dc_map)
    if len(X) == 0:
        return [set() for _ in corpus.definitions]
    p1 = bm.clf.predict_proba(X)[:, 1]
    out = []
    at = 0
    for d in corpus.definitions:
        k = len(d.candidates)
        scores = p1[at:at + k]
        at += k
        best = int(np.argmax(scores))
        if scores[best] >= bm.threshold:
            out.append({d.candidates[best]})
        else:
            out.append(set())
    return out


def save_baseline(bm: BaselineModel, path) -> None:
    doc = {"format": BASELINE_FORMAT, "version": BASELINE_VERSION,
           "kind": bm.kind, "window": bm.window, "threshold": bm.threshold,
           "train_freq": bm.train_freq, "dc_map": bm.dc_map,
           "classifier": bm.clf.to_dict()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


def load_baseline(path) -> BaselineModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != BASELINE_FORMAT:
        raise ValueError(f"not a {BASELINE_FORMAT} file: {path}")
    if doc.get("version") != BASELINE_VERSION:
        raise ValueError(f"unsupported baseline version {doc.get('version')}")
    clf = _CLASSES[doc["kind"]].from_dict(doc["classifier"])
    return BaselineModel(kind=doc["kind"], clf=clf, window=int(doc["window"]),
                         threshold=float(doc["threshold"]),
                         train_freq={k: int(v)
                                     for k, v in doc["train_freq"].items()},
                         dc_map={k: float(v)
                                 for k, v in doc["dc_map"].items()})
