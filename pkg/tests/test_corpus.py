"""Record parsing, preprocessing, serialization, and splitting."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defhyper.corpus import (AnnotationError, ParseError, RecordError,
                             build_topk, load_corpus, parse_record,
                             serialize_record, split, strip_parentheticals)
from defhyper.postag import PosType
from defhyper.synth import SynthConfig, synth_generate

from conftest import FIG_RECORD, make_definition


def _rec(**overrides):
    rec = dict(FIG_RECORD)
    rec.update(overrides)
    return json.dumps(rec)


# ------------------------------------------------------------ parsing


def test_fig_record_shapes(fig_definition):
    d = fig_definition
    assert d.n == 7
    assert d.W == ["sql", "is", "a", "language", "for", "managing", "data"]
    assert [q.label for q in d.Q] == ["NN", "VBZ", "DT", "NN", "IN",
                                      "VBG", "NN"]
    # Candidates are nouns other than the defined term, 1-based.
    assert d.candidates == [4, 7]
    assert d.gold == {4}


def test_unmapped_tags_and_punctuation_are_filtered():
    d = make_definition(
        tokens=["sql", ",", "a", "great", "language", "."],
        pos=["NN", ",", "DT", "JJ", "NN", "."],
    )
    assert d.W == ["sql", "a", "language"]
    assert [q.label for q in d.Q] == ["NN", "DT", "NN"]
    # w_raw maps retained positions back to raw token offsets.
    assert d.w_raw == [0, 2, 4]
    assert d.gold == {3}


def test_parenthetical_stripping_is_nested_and_total():
    tokens = list(zip("a ( b ( c ) d ) e".split(),
                      ["NN", "(", "NN", "(", "NN", ")", "NN", ")", "NN"]))
    assert strip_parentheticals(tokens) == [("a", "NN"), ("e", "NN")]


def test_unbalanced_parentheses_drop_to_end():
    tokens = [("a", "NN"), ("(", "("), ("b", "NN")]
    assert strip_parentheticals(tokens) == [("a", "NN")]


def test_noun_variants_collapse_to_one_category():
    d = make_definition(
        tokens=["sql", "is", "languages", "APIs", "Corpora"],
        pos=["NN", "VBZ", "NNS", "NNPS", "NNP"],
        hypernym="languages",
    )
    assert all(q is PosType.NN for q in (d.Q[0], d.Q[2], d.Q[3], d.Q[4]))
    assert d.candidates == [3, 4, 5]


def test_missing_pos_falls_back_to_heuristic_tags():
    rec = dict(FIG_RECORD)
    del rec["pos"]
    d = parse_record(json.dumps(rec))
    assert d.W == FIG_RECORD["tokens"]
    assert d.gold == {4}


def test_pos_length_mismatch_rejected():
    with pytest.raises(ParseError):
        parse_record(_rec(pos=["NN", "VBZ"]))


@pytest.mark.parametrize("missing", ["term", "tokens"])
def test_required_fields(missing):
    rec = dict(FIG_RECORD)
    del rec[missing]
    with pytest.raises(ParseError):
        parse_record(json.dumps(rec))


def test_gold_annotation_must_be_exactly_one_of_two_forms():
    with pytest.raises(ParseError):
        parse_record(_rec(hypernym_index=4))  # both present
    rec = dict(FIG_RECORD)
    del rec["hypernym"]
    with pytest.raises(ParseError):
        parse_record(json.dumps(rec))  # neither present
    d = parse_record(json.dumps(rec), require_gold=False)
    assert d.gold == set()


def test_hypernym_surface_resolution_uses_last_token_lowercased():
    d = make_definition(hypernym="a programming Language")
    assert d.gold == {4}


def test_hypernym_surface_must_match_a_candidate():
    with pytest.raises(AnnotationError):
        make_definition(hypernym="sql")  # the term is not a candidate
    with pytest.raises(AnnotationError):
        make_definition(hypernym="managing")  # not a noun


def _index_rec(**overrides):
    rec = dict(FIG_RECORD)
    del rec["hypernym"]
    rec.update(overrides)
    return json.dumps(rec)


def test_hypernym_index_is_raw_one_based_and_filter_aware():
    d = parse_record(_index_rec(
        tokens=["sql", ",", "is", "a", "language"],
        pos=["NN", ",", "VBZ", "DT", "NN"],
        hypernym_index=5,
    ))
    assert d.gold == {4}  # the comma offset is accounted for
    d = parse_record(_index_rec(hypernym_index=4))
    assert d.gold == {4}


def test_hypernym_index_must_point_at_a_candidate():
    with pytest.raises(AnnotationError):
        parse_record(_index_rec(hypernym_index=2))


def test_definition_without_candidates_is_an_annotation_error():
    rec = {"term": "sql", "tokens": ["sql", "is"], "pos": ["NN", "VBZ"],
           "hypernym_index": 1}
    with pytest.raises(AnnotationError):
        parse_record(json.dumps(rec))


def test_record_error_message_carries_line_number():
    corpus, rejected = load_corpus(["not json"], source="t")
    assert len(corpus) == 0
    assert len(rejected) == 1
    assert isinstance(rejected[0], RecordError)
    assert str(rejected[0]).startswith("line 1:")


def test_load_corpus_skips_blank_lines_and_collects_rejects():
    lines = [_rec(), "", "   ", "{bad", _rec(term="tcp")]
    corpus, rejected = load_corpus(lines)
    assert len(corpus) == 2
    assert [e.lineno for e in rejected] == [4]


def test_tag_partners_are_preserved():
    d = make_definition(tag_partners=["redis", "mysql"])
    assert d.tag_partners == ["redis", "mysql"]


# ------------------------------------------------------ serialization


def test_serialize_round_trip_identity():
    d = make_definition(tag_partners=["redis"])
    line = serialize_record(d)
    d2 = parse_record(line)
    assert d2 == d


def test_serialize_emits_index_form():
    rec = json.loads(serialize_record(make_definition()))
    assert rec["hypernym_index"] == 4
    assert "hypernym" not in rec


def test_serialize_round_trip_survives_punctuation_offsets():
    d = make_definition(
        tokens=["sql", ",", "is", "a", "language"],
        pos=["NN", ",", "VBZ", "DT", "NN"],
        hypernym="language",
    )
    assert parse_record(serialize_record(d)) == d


# ------------------------------------------------------------ corpora


def test_frequency_counts_lowercased_retained_tokens():
    corpus, _ = load_corpus([
        _rec(tokens=["sql", "is", "a", "Language", "for", "managing",
                     "data"]),
        _rec(term="tcp"),
    ])
    assert corpus.frequency["language"] == 2
    assert "Language" not in corpus.frequency
    assert corpus.frequency["sql"] == 2


def test_split_sizes_and_partition():
    corpus = synth_generate(SynthConfig(n_records=1871, vocab_size=500),
                            seed=3)
    train, test = split(corpus, 0.8, seed=0)
    assert (len(train), len(test)) == (1496, 375)
    key = lambda d: (d.term, tuple(d.W))
    assert sorted(map(key, train.definitions + test.definitions)) \
        == sorted(map(key, corpus.definitions))
    assert train.source.endswith("[train]")
    assert test.source.endswith("[test]")


def test_split_is_seed_deterministic_and_seed_sensitive(small_corpus):
    a1, b1 = split(small_corpus, 0.8, seed=9)
    a2, b2 = split(small_corpus, 0.8, seed=9)
    assert a1.definitions == a2.definitions
    assert b1.definitions == b2.definitions
    a3, _ = split(small_corpus, 0.8, seed=10)
    assert a1.definitions != a3.definitions


def test_split_recomputes_frequencies_per_side(small_corpus):
    train, test = split(small_corpus, 0.8, seed=0)
    for side in (train, test):
        expected: dict[str, int] = {}
        for d in side.definitions:
            for w in d.W:
                expected[w.lower()] = expected.get(w.lower(), 0) + 1
        assert side.frequency == expected


def test_build_topk_orders_by_count_then_token():
    corpus, _ = load_corpus([
        _rec(tokens=["sql", "is", "a", "zz", "for", "aa", "zz"],
             pos=["NN", "VBZ", "DT", "NN", "IN", "NN", "NN"],
             hypernym="zz"),
    ])
    # aa and zz tie on nothing: zz count 2, others 1; ties alphabetical.
    assert build_topk(corpus, 3) == ["zz", "a", "aa"]
    assert build_topk(corpus, 0) == []


# ------------------------------------------------------ property tests


@settings(max_examples=60)
@given(st.lists(st.sampled_from(["(", ")", "w"]), max_size=20))
def test_strip_parentheticals_is_idempotent_and_paren_free(symbols):
    tokens = [(s, "NN" if s == "w" else s) for s in symbols]
    once = strip_parentheticals(tokens)
    assert strip_parentheticals(once) == once
    assert all(s not in "()" for s, _ in once)


@settings(max_examples=25)
@given(frac=st.floats(0.05, 0.95), seed=st.integers(0, 50))
def test_split_cut_matches_floor(frac, seed):
    corpus = synth_generate(SynthConfig(n_records=53, vocab_size=120),
                            seed=11)
    train, test = split(corpus, frac, seed=seed)
    assert len(train) == int(frac * 53)
    assert len(train) + len(test) == 53
