"""Hypernym extraction from definition sentences.

A definition like "sql is a language for querying databases" names its
term's hypernym somewhere among the sentence's nouns.  This package
classifies each candidate noun from the part-of-speech context around
it with a pair of recurrent networks, then refines the scores with
lexical features and the candidate's centrality in a co-occurrence
graph of known hypernyms.  Everything is seeded and reproducible; the
``defhyper`` command exposes the full pipeline.
"""

from .corpus import Corpus, Definition, load_corpus_file, parse_record, split
from .evaluation import Scores, evaluate_model, pos_position_stats, score, sweep
from .model import Model, ModelConfig, load_model, predict, save_model, train
from .synth import SynthConfig, synth_generate

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "Definition",
    "Model",
    "ModelConfig",
    "Scores",
    "SynthConfig",
    "evaluate_model",
    "load_corpus_file",
    "load_model",
    "parse_record",
    "pos_position_stats",
    "predict",
    "save_model",
    "score",
    "split",
    "sweep",
    "synth_generate",
    "train",
    "__version__",
]
