"""Tag inventory layout and the fallback tagger's suffix rules."""

import pytest

from defhyper.postag import (N_POS_TYPES, REAL_POS_TYPES, PosType,
                             fallback_tag)


def test_inventory_is_fifteen_real_categories_plus_null():
    assert N_POS_TYPES == 16
    assert len(REAL_POS_TYPES) == 15
    assert PosType.NULL not in REAL_POS_TYPES


def test_canonical_one_based_indices():
    expected = {
        "DT": 1, "EX": 2, "IN": 3, "NN": 4, "TO": 5, "VB": 6, "VBD": 7,
        "VBG": 8, "VBN": 9, "VBP": 10, "VBZ": 11, "WDT": 12, "WP": 13,
        "WPS": 14, "WRB": 15, "NULL": 16,
    }
    for name, index in expected.items():
        assert PosType[name].index == index


def test_possessive_wh_pronoun_label_uses_dollar_sign():
    assert PosType.WPS.label == "WP$"
    assert PosType.DT.label == "DT"


@pytest.mark.parametrize("token,tag", [
    ("the", "DT"), ("an", "DT"), ("there", "EX"), ("of", "IN"),
    ("to", "TO"), ("which", "WDT"), ("who", "WP"), ("whose", "WP$"),
    ("where", "WRB"), ("is", "VBZ"), ("are", "VBP"), ("was", "VBD"),
    ("been", "VBN"), ("be", "VB"),
])
def test_fallback_lexicon(token, tag):
    assert fallback_tag([token]) == [tag]


def test_fallback_suffix_rules():
    assert fallback_tag(["managing"]) == ["VBG"]
    # -ed resolves on the left context: participle after be/have,
    # plain past otherwise.
    assert fallback_tag(["is", "stored"]) == ["VBZ", "VBN"]
    assert fallback_tag(["it", "stored"]) == ["NN", "VBD"]
    assert fallback_tag(["data"]) == ["NN"]


def test_fallback_defaults_to_noun():
    assert fallback_tag(["flibbertigibbet"]) == ["NN"]


def test_fallback_rejects_empty_input():
    with pytest.raises(ValueError):
        fallback_tag([])


def test_fallback_is_case_insensitive():
    assert fallback_tag(["The"]) == ["DT"]
