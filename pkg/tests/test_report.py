"""Figure renderers write valid PNG files headlessly."""

import numpy as np

from defhyper.evaluation import Scores, pos_position_stats
from defhyper.report import (
    render_loss,
    render_probability_histogram,
    render_stats,
    render_sweep,
)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _is_png(path) -> bool:
    data = path.read_bytes()
    return len(data) > 100 and data[:8] == PNG_MAGIC


def _scores(f1: float) -> Scores:
    return Scores(precision=f1, recall=f1, f1=f1, predicted=10,
                  correct=int(10 * f1), total_gold=10)


def test_render_sweep(tmp_path):
    path = tmp_path / "sweep.png"
    render_sweep(path, [(2, _scores(0.8)), (3, _scores(0.9)),
                        (4, _scores(0.85))], xlabel="window")
    assert _is_png(path)


def test_render_loss(tmp_path):
    path = tmp_path / "loss.png"
    render_loss(path, {"stage1": [0.6, 0.4, 0.3], "refine": [0.5, 0.2]})
    assert _is_png(path)


def test_render_stats(tmp_path, small_corpus):
    path = tmp_path / "stats.png"
    render_stats(path, pos_position_stats(small_corpus))
    assert _is_png(path)


def test_render_probability_histogram(tmp_path):
    detailed = [
        ([4, 7], np.array([0.6, 0.2]), np.array([0.9, 0.1])),
        ([2], np.array([0.5]), np.array([0.4])),
    ]
    gold_sets = [{4}, set()]
    path = tmp_path / "hist.png"
    render_probability_histogram(path, detailed, gold_sets)
    assert _is_png(path)
