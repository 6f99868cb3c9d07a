"""Minimal neural network kit on numpy.

Everything here operates on plain ndarrays held in flat string-keyed
dicts, which keeps optimizers, serialization, and gradient checking
generic.  Batches are always the leading axis: sequence inputs are
(batch, time, dim), activations (batch, dim).

The recurrent unit is a gated recurrent unit with the update

    z = sigmoid(Wz x + Uz h + bz)
    r = sigmoid(Wr x + Ur h + br)
    c = tanh(Wh x + Uh (r * h) + bh)
    h' = (1 - z) * h + z * c

and exact backpropagation through time.  The loss head is a numerically
stable softmax with mean cross-entropy.  Dropout is inverted (scaled at
train time, identity at test time).  The optimizer is root-mean-square
propagation with elementwise caches.
"""

from __future__ import annotations

import numpy as np

CE_CLIP = 1e-12


def xavier_uniform(gen: np.random.Generator, rows: int, cols: int
                   ) -> np.ndarray:
    """Uniform init with bound sqrt(6 / (fan_in + fan_out))."""
    bound = np.sqrt(6.0 / (rows + cols))
    return gen.uniform(-bound, bound, size=(rows, cols))


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=float)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


# ---------------------------------------------------------------- GRU


def init_gru(gen: np.random.Generator, in_dim: int, hidden: int
             ) -> dict[str, np.ndarray]:
    params = {}
    for gate in ("z", "r", "h"):
        params[f"W{gate}"] = xavier_uniform(gen, hidden, in_dim)
        params[f"U{gate}"] = xavier_uniform(gen, hidden, hidden)
        params[f"b{gate}"] = np.zeros(hidden)
    return params


def gru_step(params: dict[str, np.ndarray], x: np.ndarray, h: np.ndarray
             ) -> tuple[np.ndarray, tuple]:
    """One recurrence step on a batch: x (B, D), h (B, H) -> h' (B, H)."""
    z = sigmoid(x @ params["Wz"].T + h @ params["Uz"].T + params["bz"])
    r = sigmoid(x @ params["Wr"].T + h @ params["Ur"].T + params["br"])
    c = np.tanh(x @ params["Wh"].T + (r * h) @ params["Uh"].T + params["bh"])
    h_new = (1.0 - z) * h + z * c
    return h_new, (x, h, z, r, c)


def gru_forward(params: dict[str, np.ndarray], X: np.ndarray
                ) -> tuple[np.ndarray, list]:
    """Run the unit over X (B, T, D) from zero state; returns (h_T, cache)."""
    B, T, _ = X.shape
    h = np.zeros((B, params["bz"].shape[0]))
    cache = []
    for t in range(T):
        h, step = gru_step(params, X[:, t, :], h)
        cache.append(step)
    return h, cache


def gru_backward(params: dict[str, np.ndarray], cache: list,
                 dh: np.ndarray) -> tuple[dict[str, np.ndarray], np.ndarray]:
    """Backpropagate dL/dh_T through the cached steps.

    Returns parameter gradients and dL/dX with X's original shape.
    """
    grads = {k: np.zeros_like(v) for k, v in params.items()}
    T = len(cache)
    B, D = cache[0][0].shape
    dX = np.zeros((B, T, D))
    for t in range(T - 1, -1, -1):
        x, h_prev, z, r, c = cache[t]
        dz = dh * (c - h_prev)
        dc = dh * z
        da_h = dc * (1.0 - c * c)
        da_z = dz * z * (1.0 - z)
        drh = da_h @ params["Uh"]
        dr = drh * h_prev
        da_r = dr * r * (1.0 - r)

        grads["Wz"] += da_z.T @ x
        grads["Uz"] += da_z.T @ h_prev
        grads["bz"] += da_z.sum(axis=0)
        grads["Wr"] += da_r.T @ x
        grads["Ur"] += da_r.T @ h_prev
        grads["br"] += da_r.sum(axis=0)
        grads["Wh"] += da_h.T @ x
        grads["Uh"] += da_h.T @ (r * h_prev)
        grads["bh"] += da_h.sum(axis=0)

        dX[:, t, :] = da_z @ params["Wz"] + da_r @ params["Wr"] \
            + da_h @ params["Wh"]
        dh = dh * (1.0 - z) + da_z @ params["Uz"] + da_r @ params["Ur"] \
            + drh * r
    return grads, dX


# -------------------------------------------------------------- layers


def init_dense(gen: np.random.Generator, in_dim: int, out_dim: int
               ) -> dict[str, np.ndarray]:
    return {"W": xavier_uniform(gen, out_dim, in_dim), "b": np.zeros(out_dim)}


def dense_forward(params: dict[str, np.ndarray], X: np.ndarray) -> np.ndarray:
    return X @ params["W"].T + params["b"]


def dense_backward(params: dict[str, np.ndarray], X: np.ndarray,
                   dY: np.ndarray) -> tuple[dict[str, np.ndarray], np.ndarray]:
    grads = {"W": dY.T @ X, "b": dY.sum(axis=0)}
    return grads, dY @ params["W"]


def init_embedding(gen: np.random.Generator, n_symbols: int, dim: int
                   ) -> np.ndarray:
    return xavier_uniform(gen, n_symbols, dim)


def embed_forward(E: np.ndarray, ids: np.ndarray) -> np.ndarray:
    return E[ids]


def embed_backward(E: np.ndarray, ids: np.ndarray, dX: np.ndarray
                   ) -> np.ndarray:
    dE = np.zeros_like(E)
    np.add.at(dE, ids, dX)
    return dE


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    ex = np.exp(shifted)
    return ex / ex.sum(axis=-1, keepdims=True)


def cross_entropy(probs: np.ndarray, labels: np.ndarray) -> float:
    """Mean negative log-likelihood of the labeled class, clipped."""
    picked = probs[np.arange(len(labels)), labels]
    return float(-np.mean(np.log(np.clip(picked, CE_CLIP, None))))


def softmax_ce_backward(probs: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """dL/dlogits for softmax followed by mean cross-entropy."""
    d = probs.copy()
    d[np.arange(len(labels)), labels] -= 1.0
    return d / len(labels)


def dropout_mask(gen: np.random.Generator, shape: tuple, rate: float
                 ) -> np.ndarray:
    """Inverted-dropout mask: zeros with probability rate, else 1/keep."""
    if not 0.0 <= rate < 1.0:
        raise ValueError("dropout rate must lie in [0, 1)")
    keep = 1.0 - rate
    return (gen.random(shape) < keep) / keep


# ----------------------------------------------------------- optimizer


class RMSProp:
    """Elementwise adaptive step: cache = d*cache + (1-d)*g^2."""

    def __init__(self, lr: float = 1e-3, decay: float = 0.9,
                 eps: float = 1e-8):
        self.lr = lr
        self.decay = decay
        self.eps = eps
        self._cache: dict[str, np.ndarray] = {}

    def step(self, params: dict[str, np.ndarray],
             grads: dict[str, np.ndarray]) -> None:
        for key, g in grads.items():
            cache = self._cache.get(key)
            if cache is None:
                cache = np.zeros_like(g)
            cache = self.decay * cache + (1.0 - self.decay) * g * g
            self._cache[key] = cache
            params[key] -= self.lr * g / (np.sqrt(cache) + self.eps)


# -------------------------------------------------------- verification


def grad_check(loss_fn, params: dict[str, np.ndarray],
               grads: dict[str, np.ndarray], eps: float = 1e-5,
               sample: int | None = None, seed: int = 0) -> float:
    """Largest relative error between analytic and numeric gradients.

    ``loss_fn`` is a zero-argument closure that reads ``params``; entries
    are perturbed in place with central differences.  ``sample`` limits
    the number of probed entries per array (all entries when None).
    Relative error is |a - n| / max(|a|, |n|, 1e-8).
    """
    gen = np.random.default_rng(seed)
    worst = 0.0
    for key, g in grads.items():
        theta = params[key]
        flat_g = np.asarray(g).reshape(-1)
        flat_t = theta.reshape(-1)
        idx = np.arange(flat_t.size)
        if sample is not None and flat_t.size > sample:
            idx = gen.choice(flat_t.size, size=sample, replace=False)
        for k in idx:
            orig = flat_t[k]
            flat_t[k] = orig + eps
            hi = loss_fn()
            flat_t[k] = orig - eps
            lo = loss_fn()
            flat_t[k] = orig
            numeric = (hi - lo) / (2.0 * eps)
            analytic = flat_g[k]
            err = abs(analytic - numeric) / max(abs(analytic),
                                                abs(numeric), 1e-8)
            worst = max(worst, err)
    return worst
