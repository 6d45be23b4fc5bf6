from __future__ import annotations

import json

import pytest

from wuglabels.errors import DuplicateSenseId
from wuglabels.lexicon import Lexicon, Sense, load_lexicon, senses_of

FIVE_SENSES = [
    Sense("bank.n.01", "bank", "sloping land beside a body of water", pos="n"),
    Sense("bank.n.02", "bank", "a financial institution", pos="n"),
    Sense("bank.v.01", "bank", "tip laterally", pos="v"),
    Sense("plane.n.01", "plane", "an aircraft", pos="n"),
    Sense("plane.n.02", "plane", "a flat surface", pos="n"),
]


def test_ordered_lookup_two_lemmas():
    lex = Lexicon(list(FIVE_SENSES))
    assert len(lex) == 5
    assert [s.sense_id for s in senses_of(lex, "bank")] == [
        "bank.n.01", "bank.n.02", "bank.v.01",
    ]
    assert [s.sense_id for s in senses_of(lex, "plane")] == [
        "plane.n.01", "plane.n.02",
    ]


def test_duplicate_sense_id_rejected():
    with pytest.raises(DuplicateSenseId):
        Lexicon([FIVE_SENSES[0], FIVE_SENSES[0]])


def test_pos_filtering():
    lex = Lexicon(list(FIVE_SENSES))
    nouns = senses_of(lex, "bank", pos="n")
    assert [s.sense_id for s in nouns] == ["bank.n.01", "bank.n.02"]


def test_pos_fallback_when_no_match():
    lex = Lexicon(list(FIVE_SENSES))
    out = senses_of(lex, "plane", pos="v")  # no verb senses: fall back to all
    assert [s.sense_id for s in out] == ["plane.n.01", "plane.n.02"]


def test_unknown_lemma_empty():
    lex = Lexicon(list(FIVE_SENSES))
    assert senses_of(lex, "zeppelin") == []


def test_unfiltered_is_superset_of_filtered():
    lex = Lexicon(list(FIVE_SENSES))
    all_senses = set(s.sense_id for s in senses_of(lex, "bank"))
    for pos in ("n", "v", "adj", None):
        subset = set(s.sense_id for s in senses_of(lex, "bank", pos))
        assert subset <= all_senses


def test_case_folded_by_default():
    lex = Lexicon(list(FIVE_SENSES))
    assert len(senses_of(lex, "Bank")) == 3
    strict = Lexicon(list(FIVE_SENSES), case_sensitive=True)
    assert senses_of(strict, "Bank") == []


def test_gloss_tokens_cached():
    s = FIVE_SENSES[0]
    assert s.gloss_tokens == ("sloping", "land", "beside", "a", "body", "of", "water")


def test_load_tsv(tmp_path):
    p = tmp_path / "lexicon.tsv"
    p.write_text(
        "sense_id\tlemma\tpos\tgloss\n"
        "bank.n.01\tbank\tn\tsloping land beside water\n"
        "bank.n.02\tbank\tn\ta financial institution\n",
        encoding="utf-8",
    )
    lex = load_lexicon(p)
    assert len(lex) == 2
    assert lex.sense("bank.n.02").gloss == "a financial institution"


def test_load_jsonl_117_senses(tmp_path):
    # inventory scale check at 1/1000 of a full WordNet-sized gloss set
    p = tmp_path / "lexicon.jsonl"
    rows = [
        {"sense_id": f"s{i}", "lemma": f"lemma{i % 40}", "pos": "n",
         "gloss": f"meaning number {i}"}
        for i in range(117)
    ]
    p.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    lex = load_lexicon(p)
    assert len(lex) == 117


def test_duplicate_in_file_rejected(tmp_path):
    p = tmp_path / "lexicon.tsv"
    p.write_text(
        "sense_id\tlemma\tpos\tgloss\n"
        "s1\tbank\tn\tgloss one\n"
        "s1\tbank\tn\tgloss two\n",
        encoding="utf-8",
    )
    with pytest.raises(DuplicateSenseId):
        load_lexicon(p)


def test_order_of():
    lex = Lexicon(list(FIVE_SENSES))
    assert lex.order_of("bank.n.01") == 0
    assert lex.order_of("plane.n.02") == 4
