"""Scoring, tag-adjacency statistics, and hyperparameter sweeps.

Scoring is per definition: every selected position counts as one
prediction, a prediction is correct when it is a gold position, and
recall is measured against the number of annotated definitions.  The
adjacency table summarizes, for each retained tag category, how often it
appears immediately before versus immediately after a candidate, split
by whether the candidate is the gold hypernym; the two shares of a
(category, column) pair sum to one whenever events exist.
"""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass
from typing import Iterable

from .corpus import Corpus
from .postag import REAL_POS_TYPES, PosType


@dataclass
class Scores:
    precision: float
    recall: float
    f1: float
    predicted: int
    correct: int
    total_gold: int


def score(gold: list[set[int]], predicted: list[set[int]]) -> Scores:
    """Precision, recall, and F1 over aligned per-definition selections."""
    if len(gold) != len(predicted):
        raise ValueError("gold and predicted lists must align")
    n_predicted = sum(len(sel) for sel in predicted)
    n_correct = sum(len(sel & g) for sel, g in zip(predicted, gold))
    n_gold = sum(1 for g in gold if g)
    precision = n_correct / n_predicted if n_predicted else 0.0
    recall = n_correct / n_gold if n_gold else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall > 0 else 0.0)
    return Scores(precision=precision, recall=recall, f1=f1,
                  predicted=n_predicted, correct=n_correct,
                  total_gold=n_gold)


def evaluate_model(model, corpus: Corpus) -> Scores:
    from .model import predict
    return score([d.gold for d in corpus.definitions],
                 predict(model, corpus))


# ------------------------------------------------------ adjacency stats


def adjacency_counts(definitions: Iterable) -> dict[PosType, dict[str, int]]:
    """Immediate-neighbor tag counts around candidates.

    Keys per category: h_before/h_after for gold candidates,
    n_before/n_after for the rest.  Sentence-boundary neighbors do not
    exist and contribute nothing.
    """
    counts = {p: {"h_before": 0, "h_after": 0, "n_before": 0, "n_after": 0}
              for p in REAL_POS_TYPES}
    for d in definitions:
        for i in d.candidates:
            col = "h" if i in d.gold else "n"
            if i >= 2:
                counts[d.Q[i - 2]][f"{col}_before"] += 1
            if i <= d.n - 1:
                counts[d.Q[i]][f"{col}_after"] += 1
    return counts


def _shares(before: int, after: int) -> tuple[float, float]:
    total = before + after
    if total == 0:
        return 0.0, 0.0
    p1 = before / total
    return p1, 1.0 - p1


def stats_table(counts: dict[PosType, dict[str, int]]) -> list[dict]:
    """Per-category rows: before/after shares for non-gold and gold."""
    rows = []
    for p in REAL_POS_TYPES:
        c = counts[p]
        p1_n, p2_n = _shares(c["n_before"], c["n_after"])
        p1_h, p2_h = _shares(c["h_before"], c["h_after"])
        rows.append({"pos": p.label, "p1_n": p1_n, "p2_n": p2_n,
                     "p1_h": p1_h, "p2_h": p2_h})
    return rows


def pos_position_stats(corpus: Corpus) -> list[dict]:
    return stats_table(adjacency_counts(corpus.definitions))


def write_stats_csv(path, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pos", "p1_n", "p2_n", "p1_h", "p2_h"])
        for row in rows:
            writer.writerow([row["pos"]] + [f"{row[k]:.4f}" for k in
                                            ("p1_n", "p2_n", "p1_h", "p2_h")])


# --------------------------------------------------------------- sweeps


def sweep(train_corpus: Corpus, test_corpus: Corpus, config,
          field: str, values: list) -> list[tuple[object, Scores]]:
    """Retrain per value of one config field and score on the test split."""
    from .model import train
    if field not in {f.name for f in dataclasses.fields(type(config))}:
        raise ValueError(f"unknown config field {field!r}")
    rows = []
    for value in values:
        variant = dataclasses.replace(config, **{field: value})
        model = train(train_corpus, variant)
        rows.append((value, evaluate_model(model, test_corpus)))
    return rows


def write_sweep_csv(path, rows: list[tuple[object, Scores]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "precision", "recall", "f1"])
        for value, s in rows:
            writer.writerow([value, f"{s.precision:.4f}", f"{s.recall:.4f}",
                             f"{s.f1:.4f}"])


def write_eval_csv(path, rows: list[tuple[str, Scores]]) -> None:
    """Named result rows, same numeric format as the sweep output."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "precision", "recall", "f1"])
        for name, s in rows:
            writer.writerow([name, f"{s.precision:.4f}", f"{s.recall:.4f}",
                             f"{s.f1:.4f}"])
