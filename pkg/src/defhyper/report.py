"""Figure rendering for evaluation artifacts.

Every renderer writes one PNG next to the delimited output it mirrors,
using the non-interactive backend so headless runs work.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .evaluation import Scores


def render_sweep(path, rows: list[tuple[object, Scores]],
                 xlabel: str) -> None:
    """Precision/recall/F1 against the swept value."""
    values = [v for v, _ in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    for key, style in (("precision", "o--"), ("recall", "s--"),
                       ("f1", "d-")):
        ax.plot(values, [getattr(s, key) for _, s in rows], style,
                label=key)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("score")
    ax.set_ylim(0.0, 1.05)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_loss(path, history: dict[str, list[float]]) -> None:
    """Mean training loss per epoch for each stage."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, losses in sorted(history.items()):
        ax.plot(range(1, len(losses) + 1), losses, label=name)
    ax.set_xlabel("epoch")
    ax.set_ylabel("mean cross-entropy")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_stats(path, rows: list[dict]) -> None:
    """Before-candidate share per tag category, gold versus other."""
    labels = [r["pos"] for r in rows]
    x = range(len(labels))
    width = 0.4
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.bar([k - width / 2 for k in x], [r["p1_h"] for r in rows],
           width, label="gold (before share)")
    ax.bar([k + width / 2 for k in x], [r["p1_n"] for r in rows],
           width, label="other (before share)")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylabel("share of adjacency events before the candidate")
    ax.set_ylim(0.0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_probability_histogram(path, detailed, gold_sets) -> None:
    """Final-probability distributions of gold and non-gold candidates.

    ``detailed`` is the per-definition (positions, initial, final) list;
    ``gold_sets`` the aligned gold position sets.
    """
    gold_p, other_p = [], []
    for (positions, _, p_final), gold in zip(detailed, gold_sets):
        for pos, p in zip(positions, p_final):
            (gold_p if pos in gold else other_p).append(float(p))
    fig, ax = plt.subplots(figsize=(6, 4))
    bins = [k / 20 for k in range(21)]
    ax.hist(other_p, bins=bins, alpha=0.6, label="other candidates")
    ax.hist(gold_p, bins=bins, alpha=0.6, label="gold candidates")
    ax.set_xlabel("final probability")
    ax.set_ylabel("candidates")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
