"""Scoring arithmetic, adjacency statistics, and sweep plumbing."""

import csv

import pytest

from defhyper.evaluation import (
    adjacency_counts,
    evaluate_model,
    pos_position_stats,
    score,
    stats_table,
    sweep,
    write_eval_csv,
    write_stats_csv,
    write_sweep_csv,
)
from defhyper.postag import REAL_POS_TYPES, PosType


def test_score_hand_arithmetic():
    gold = [{4}, {2}, {7}, {1}, {3}]
    predicted = [{4}, {2}, {9}, {5}, set()]
    s = score(gold, predicted)
    # 4 predictions, 2 correct, 5 annotated definitions.
    assert s.predicted == 4
    assert s.correct == 2
    assert s.total_gold == 5
    assert s.precision == 0.5
    assert s.recall == 0.4
    assert s.f1 == pytest.approx(2 * 0.5 * 0.4 / 0.9)


def test_score_empty_predictions():
    s = score([{1}, {2}], [set(), set()])
    assert s.precision == 0.0
    assert s.recall == 0.0
    assert s.f1 == 0.0
    assert s.predicted == 0


def test_score_perfect():
    s = score([{1}, {2}], [{1}, {2}])
    assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)


def test_score_requires_alignment():
    with pytest.raises(ValueError):
        score([{1}], [{1}, {2}])


def test_adjacency_counts_on_figure_sentence(fig_definition):
    counts = adjacency_counts([fig_definition])
    # Gold "language" at position 4: DT before, IN after.
    assert counts[PosType.DT]["h_before"] == 1
    assert counts[PosType.IN]["h_after"] == 1
    # Non-gold "data" at position 7: VBG before, sentence end after.
    assert counts[PosType.VBG]["n_before"] == 1
    assert sum(c["n_after"] for c in counts.values()) == 0
    assert sum(c["h_before"] for c in counts.values()) == 1


def test_stats_rows_sum_to_one_or_are_empty(small_corpus):
    rows = pos_position_stats(small_corpus)
    assert len(rows) == len(REAL_POS_TYPES)
    counts = adjacency_counts(small_corpus.definitions)
    by_label = {p.label: counts[p] for p in REAL_POS_TYPES}
    for row in rows:
        c = by_label[row["pos"]]
        for col in ("n", "h"):
            if c[f"{col}_before"] + c[f"{col}_after"] > 0:
                assert row[f"p1_{col}"] + row[f"p2_{col}"] == 1.0
            else:
                assert row[f"p1_{col}"] == row[f"p2_{col}"] == 0.0


def test_stats_table_share_values():
    counts = {p: {"h_before": 0, "h_after": 0, "n_before": 0, "n_after": 0}
              for p in REAL_POS_TYPES}
    counts[PosType.DT]["h_before"] = 3
    counts[PosType.DT]["h_after"] = 1
    rows = {r["pos"]: r for r in stats_table(counts)}
    assert rows["DT"]["p1_h"] == 0.75
    assert rows["DT"]["p2_h"] == 0.25
    assert rows["DT"]["p1_n"] == 0.0


def test_evaluate_model_matches_manual_score(quick_model, small_split):
    from defhyper.model import predict
    _, test = small_split
    s = evaluate_model(quick_model, test)
    manual = score([d.gold for d in test.definitions],
                   predict(quick_model, test))
    assert s == manual


def test_sweep_rejects_unknown_field(small_split, quick_config):
    train, test = small_split
    with pytest.raises(ValueError):
        sweep(train, test, quick_config, "not_a_field", [1, 2])


def test_sweep_retrains_per_value(small_split, quick_config):
    train, test = small_split
    rows = sweep(train, test, quick_config, "window", [2, 3])
    assert [value for value, _ in rows] == [2, 3]
    for _, s in rows:
        assert 0.0 <= s.f1 <= 1.0


def test_stats_csv_format(tmp_path, small_corpus):
    path = tmp_path / "stats.csv"
    write_stats_csv(path, pos_position_stats(small_corpus))
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["pos", "p1_n", "p2_n", "p1_h", "p2_h"]
    assert len(rows) == 1 + len(REAL_POS_TYPES)
    for row in rows[1:]:
        for cell in row[1:]:
            assert len(cell.split(".")[1]) == 4  # four decimal places


def test_sweep_and_eval_csv_format(tmp_path):
    s = score([{1}, {2}], [{1}, set()])
    path = tmp_path / "sweep.csv"
    write_sweep_csv(path, [(2, s), (3, s)])
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["value", "precision", "recall", "f1"]
    assert rows[1] == ["2", "1.0000", "0.5000", "0.6667"]

    path = tmp_path / "eval.csv"
    write_eval_csv(path, [("pos", s)])
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["value", "precision", "recall", "f1"]
    assert rows[1] == ["pos", "1.0000", "0.5000", "0.6667"]
