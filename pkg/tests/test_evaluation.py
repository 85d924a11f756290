import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import T
from nameshift.corpus import Corpus, Document, parse_period
from nameshift.evaluation import (QueryResult, ResultSet, TestEntry, TestsetError, adapt_testset, evaluate,
                                  f_measure, is_correct, load_testset, precision, recall, recall_count,
                                  recall_threshold)

P2005 = parse_period("2005")


def entry(q="Sean Combs", groups=(("Diddy", "P. Diddy"), ("Puff Daddy",)), periods=(P2005,)):
    return TestEntry(T(q), tuple(frozenset(T(n) for n in g) for g in groups), tuple(periods))


def rs(*terms):
    return ResultSet.of(T("Sean Combs"), P2005, [T(t) for t in terms])


def test_load_testset_formats(tmp_path):
    p = tmp_path / "t.txt"
    p.write_text("# comment\n"
                 "Sean Combs | {Diddy, P. Diddy}, {Puff Daddy} | 2005\n"
                 "Kinect | Project Natal | 2010\n"
                 "Sean Combs | Puff Daddy; Sean John | 2006\n")
    entries = {str(e.query): e for e in load_testset(p)}
    combs = entries["Sean Combs"]
    assert len(combs.expected) == 3
    assert frozenset({T("Diddy"), T("P. Diddy")}) in combs.expected
    assert combs.periods == (parse_period("2005"), parse_period("2006"))
    empty = tmp_path / "e.txt"
    empty.write_text("")
    assert load_testset(empty) == []


@pytest.mark.parametrize("line", ["Sean Combs | Diddy", "Sean Combs | | 2005", "Sean Combs | Diddy | 20x5",
                                  "Sean Combs | {Diddy} extra | 2005"])
def test_load_testset_rejects_malformed(tmp_path, line):
    p = tmp_path / "t.txt"
    p.write_text(line + "\n")
    with pytest.raises(TestsetError):
        load_testset(p)


def _doc(i, day, text):
    from datetime import datetime, timezone
    return Document(i, text, datetime.fromisoformat(day).replace(tzinfo=timezone.utc), "s")


def test_adapt_testset():
    corpus = Corpus([_doc("1", "2005-03-01", "Sean Combs is Diddy now."), _doc("2", "2005-04-01", "Kinect")])
    adapted = adapt_testset([entry(), entry("Joseph Ratzinger"), entry(periods=(parse_period("1999"),)),
                             entry("Kinect", (("Project Natal",),))], corpus)
    assert len(adapted) == 1
    assert adapted[0].expected == (frozenset({T("Diddy")}),)


def test_recall_threshold_boundaries():
    assert [recall_threshold(x) for x in (0, 99, 100, 499, 500, 999, 1000)] == [5, 5, 10, 10, 50, 50, 100]
    with pytest.raises(ValueError):
        recall_threshold(-1)


def test_recall_counts_groups_above_threshold():
    freqs = {T("Diddy"): 40, T("P. Diddy"): 3, T("Puff Daddy"): 20}
    assert recall(rs("Puff Daddy"), entry(), freqs) == 0.5
    assert recall(rs("P. Diddy", "Puff Daddy"), entry(), freqs) == 1.0
    # sub-terms are not enough for recall
    assert recall(rs("Puff", "Daddy", "Diddy"), entry(), freqs) == 0.5
    # only frequent groups count
    assert recall(rs("Diddy"), entry(), {T("Diddy"): 40, T("Puff Daddy"): 2}) == 1.0


def test_rare_entity_clause():
    rare = {T("Diddy"): 1, T("Puff Daddy"): 4}
    assert recall_count(rs("Diddy"), entry(), rare).rare
    assert recall(rs("Diddy"), entry(), rare) == 1.0
    assert recall(rs("Sean"), entry(), rare) == 0.0


def test_precision_credits_sub_terms_and_query():
    e = entry()
    assert is_correct(T("Sean"), e) and is_correct(T("Daddy"), e) and is_correct(T("Sean Combs"), e)
    assert not is_correct(T("Sean Penn"), e)
    assert precision(rs("Sean", "Sean Penn", "Combs", "Diddy", "Puff Daddy", "Video Music Awards"), e) == 4 / 6
    assert precision(rs(), e) is None


def test_f_measure():
    assert f_measure(0, 0) == 0
    assert f_measure(1, 0.5) == pytest.approx(2 / 3)


names = st.sampled_from(["Sean", "Combs", "Diddy", "Puff Daddy", "Sean Penn", "MTV", "Daddy", "New York"])


@given(st.sets(names), st.sets(names), st.dictionaries(st.sampled_from(["Diddy", "P. Diddy", "Puff Daddy"]),
                                                       st.integers(0, 2000)))
def test_recall_monotone_and_bounded(a, b, raw_freqs):
    freqs = {T(k): v for k, v in raw_freqs.items()}
    small, big = rs(*a), rs(*(a | b))
    r1, r2 = recall(small, entry(), freqs), recall(big, entry(), freqs)
    assert 0 <= r1 <= r2 <= 1
    p = precision(big, entry())
    assert p is None or 0 <= p <= 1


def _qr(e, terms_by_stage, freqs=None):
    stages = {s: ResultSet.of(e.query, e.periods[0], [T(t) for t in ts]) for s, ts in terms_by_stage.items()}
    return QueryResult(e, e.periods[0], stages, freqs or {n: 50 for n in e.names})


def test_evaluate_macro_and_micro():
    a = _qr(entry(), {"unfiltered": ["Diddy", "Puff Daddy"], "frequency": ["Diddy"], "semantic": []})
    b = _qr(entry("Kinect", (("Project Natal",),)),
            {"unfiltered": ["Xbox", "Microsoft", "Nintendo"], "frequency": ["Xbox"], "semantic": []})
    report = evaluate([a, b])
    row = report.row("unfiltered")
    assert row.precision == 0.5 and row.recall == 0.5
    assert row.micro_precision == pytest.approx(2 / 5)
    assert report.row("semantic").no_result == 2
    assert report.row("semantic").precision == 0.0
    single = evaluate([a])
    assert single.row("frequency").precision == single.scores[1].precision
    data = json.loads(report.to_json())
    assert [r["stage"] for r in data["stages"]] == ["unfiltered", "frequency", "semantic"]
    assert "unfiltered\t50.0%" in report.to_text()
    with pytest.raises(ValueError):
        evaluate([])
    with pytest.raises(KeyError):
        report.row("bogus")
