from hypothesis import given
from hypothesis import strategies as st

from nameshift.extraction import ExtractionCache, cooccurrences, extract_terms
from nameshift.terms import term_key


def surfaces(text):
    return [o.term.surface for o in extract_terms(text)]


def test_subphrases_of_capitalized_runs():
    got = surfaces("Yesterday the Union of Myanmar said no.")
    assert "Union of Myanmar" in got and "Union" in got and "Myanmar" in got
    assert "Union of" not in got and "of Myanmar" not in got


def test_runs_stop_at_punctuation_but_not_at_initials():
    assert "P Diddy" in surfaces("Then P. Diddy spoke.")
    assert "Combs Puff" not in surfaces("Sean Combs, Puff Daddy")


def test_length_limits():
    got = surfaces("Prime Minister Tony Blair arrived")
    assert "Prime Minister Tony Blair" not in got
    assert {"Prime Minister Tony", "Minister Tony Blair", "Tony Blair"} <= set(got)
    assert "Al" not in surfaces("Al went home")


def test_cooccurrence_window_uses_phrase_spans():
    text = "Tony Blair " + "x " * 9 + "Gordon Brown" + " y" * 12 + " Labour"
    occs = extract_terms(text, document_id="d")
    pairs = {frozenset((str(p.a), str(p.b))) for p in cooccurrences(occs, window=10)}
    assert frozenset(("Tony Blair", "Gordon Brown")) in pairs
    assert frozenset(("Tony", "Brown")) in pairs
    assert frozenset(("Gordon Brown", "Labour")) not in pairs
    # the run shared by Tony and Blair counts as one span
    assert frozenset(("Tony", "Blair")) in pairs


@given(st.lists(st.sampled_from(["Alpha", "beta", "Gamma", "of", "Delta", ",", "."]), max_size=30),
       st.integers(1, 12))
def test_cooccurrence_pairs_are_distinct_unordered(words, window):
    occs = extract_terms(" ".join(words), document_id="d")
    for p in cooccurrences(occs, window):
        assert p.a != p.b and p.a.sort_key <= p.b.sort_key


def test_cache_roundtrip(tmp_path):
    path = tmp_path / "x.jsonl"
    cache = ExtractionCache(path)
    first = cache.extract("d1", "Sean Combs met Puff Daddy")
    cache.flush()
    again = ExtractionCache(path).extract("d1", "ignored text, served from the cache")
    assert first == again
    assert [o.term.surface for o in again][0] == "Sean"
    stale = ExtractionCache(path, version="other")
    assert len(stale) == 0


def test_term_keys_match_lenient_normalization():
    occ = [o for o in extract_terms("We met Pope Benedict XVI today") if o.length == 3][0]
    assert occ.term == term_key("pope benedict xvi")
