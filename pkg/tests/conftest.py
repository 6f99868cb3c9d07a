"""Shared fixtures: handcrafted definitions and small trained models.

Session-scoped fixtures cache the expensive artifacts (generated
corpora, trained models) so independent test modules can share them
without retraining.
"""

import json

import pytest

from defhyper.corpus import Corpus, parse_record, split
from defhyper.model import ModelConfig, train
from defhyper.synth import SynthConfig, synth_generate

# A definition with two candidates where only one is gold: "sql is a
# language for managing data" with explicit tags.
FIG_RECORD = {
    "term": "sql",
    "tokens": ["sql", "is", "a", "language", "for", "managing", "data"],
    "pos": ["NN", "VBZ", "DT", "NN", "IN", "VBG", "NN"],
    "hypernym": "language",
}


def make_definition(record=None, **overrides):
    rec = dict(record or FIG_RECORD)
    rec.update(overrides)
    return parse_record(json.dumps(rec), lineno=1)


@pytest.fixture
def fig_definition():
    return make_definition()


@pytest.fixture(scope="session")
def small_corpus() -> Corpus:
    """Small synthetic corpus for fast model-level tests."""
    return synth_generate(SynthConfig(n_records=160, vocab_size=300), seed=5)


@pytest.fixture(scope="session")
def small_split(small_corpus):
    return split(small_corpus, 0.8, seed=0)


@pytest.fixture(scope="session")
def quick_config() -> ModelConfig:
    return ModelConfig(mode="pos", epochs=4, hidden=16, refine_hidden=8,
                       seed=0)


@pytest.fixture(scope="session")
def quick_model(small_split, quick_config):
    train_corpus, _ = small_split
    return train(train_corpus, quick_config)
