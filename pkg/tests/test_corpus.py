import json
from datetime import date, datetime, timezone

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nameshift.corpus import (ANY_SUB_TERM, FULL_TERM, ChangePeriod, Corpus, CorpusError, Document, ingest_corpus,
                              is_english, parse_period, query_documents, write_corpus)
from nameshift.terms import term_key


def _rec(i, src, ts, content):
    return json.dumps({"id": i, "source_id": src, "published_at": ts, "content": content})


@pytest.fixture
def corpus_file(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text("\n".join([
        _rec("a", "s1", "2005-03-01T10:00:00Z", "Sean Combs became Diddy."),
        _rec("b", "s2", "2005-07-01T12:30:00.250000+02:00", "Puff Daddy and Sean were there."),
        "not json",
        _rec("c", "s1", "2006-01-01T00:00:00Z", "Nothing about Combs here, the end of it."),
        json.dumps({"id": "d", "source_id": "s3", "content": "no timestamp"}),
        _rec("a", "s9", "2005-01-01T00:00:00Z", "duplicate id"),
    ]) + "\n")
    return p


def test_ingest_skips_malformed(corpus_file):
    c = ingest_corpus(corpus_file)
    assert [d.id for d in c] == ["a", "b", "c"]
    assert c.skipped == 3
    assert set(c.sources) == {"s1", "s2"}
    assert c.get("b").published_at == datetime(2005, 7, 1, 10, 30, 0, 250000, tzinfo=timezone.utc)


def test_ingest_errors(tmp_path):
    with pytest.raises(CorpusError):
        ingest_corpus(tmp_path / "missing.jsonl")
    empty = tmp_path / "e.jsonl"
    empty.write_text("garbage\n")
    with pytest.raises(CorpusError):
        ingest_corpus(empty)
    with pytest.raises(CorpusError):
        ingest_corpus(empty, format="xml")


def test_roundtrip(corpus_file, tmp_path):
    c = ingest_corpus(corpus_file)
    out = tmp_path / "out.jsonl"
    write_corpus(c, out)
    assert ingest_corpus(out) == c


def test_english_gate(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text("\n".join([
        _rec("en", "s", "2005-01-01T00:00:00Z", "This is one of the posts that we wrote in the morning and it is fine."),
        _rec("de", "s", "2005-01-01T00:00:00Z", "Dies ist ein Beitrag, den wir morgens geschrieben haben, und gut."),
    ]))
    assert [d.id for d in ingest_corpus(p)] == ["en", "de"]
    assert [d.id for d in ingest_corpus(p, english_gate=True)] == ["en"]


@given(st.lists(st.sampled_from(["the", "zorp", "and", "blick", "of", "quux"]), min_size=1, max_size=40),
       st.lists(st.sampled_from(["zorp", "the"]), max_size=30))
def test_is_english_depends_on_first_thousand_words_only(head, tail):
    text = " ".join(head + ["x"] * (1000 - len(head)))
    assert is_english(text) == is_english(text + " " + " ".join(tail))


def test_parse_period():
    assert parse_period("2005") == ChangePeriod(date(2005, 1, 1), date(2005, 12, 31))
    assert parse_period("2005-06") == ChangePeriod(date(2005, 1, 1), date(2005, 12, 31))
    assert parse_period("2005-01") == ChangePeriod(date(2004, 1, 1), date(2005, 12, 31))
    assert parse_period("2005-03-01..2005-04-30") == ChangePeriod(date(2005, 3, 1), date(2005, 4, 30))
    for bad in ["05", "2005/06", "2006..2005"]:
        with pytest.raises(ValueError):
            parse_period(bad)


def test_period_relations():
    a, b = parse_period("2005"), parse_period("2005-06-01..2006-02-01")
    assert a.overlaps(b) and not b.within(a)
    assert parse_period("2005-06-01..2005-07-01").within(a)
    assert a.contains(datetime(2005, 12, 31, 23, 59, tzinfo=timezone.utc))


def test_query_documents_modes(corpus_file):
    c = ingest_corpus(corpus_file)
    q = term_key("Sean Combs")
    full = query_documents(c, q, parse_period("2005"), FULL_TERM)
    anysub = query_documents(c, q, parse_period("2005"), ANY_SUB_TERM)
    assert [d.id for d in full] == ["a"]
    assert [d.id for d in anysub] == ["a", "b"]
    assert [d.id for d in query_documents(c, q, parse_period("2006"), ANY_SUB_TERM)] == ["c"]
    with pytest.raises(ValueError):
        query_documents(c, q, parse_period("2005"), "fuzzy")


def test_time_range():
    docs = [Document("x", "A", datetime(2004, 5, 1, tzinfo=timezone.utc), "s"),
            Document("y", "B", datetime(2006, 2, 1, tzinfo=timezone.utc), "s")]
    assert Corpus(docs).time_range() == ChangePeriod(date(2004, 5, 1), date(2006, 2, 1))
