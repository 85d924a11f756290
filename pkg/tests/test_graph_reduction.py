from datetime import date, datetime, timezone

import pytest

from helpers import T, make_graph
from nameshift.corpus import ChangePeriod, Corpus, Document, parse_period
from nameshift.graph import AprioriParams, QueryAbsentError, apriori_filter, build_context_graph, write_graph
from nameshift.reduction import NoFullTermOccurrence, filter_sources, focus_documents, narrow_period, reduce


def doc(i, src, day, text):
    return Document(i, text, datetime.fromisoformat(day).replace(tzinfo=timezone.utc), src)


DOCS = [
    doc("1", "a", "2005-02-01", "Sean Combs is now called Diddy by fans."),
    doc("2", "a", "2005-06-01", "Diddy and Puff Daddy were one person."),
    doc("3", "b", "2005-03-01", "Sean Penn and Sean Combs met."),
    doc("4", "c", "2005-04-01", "Combs spoke, Diddy agreed."),
    doc("5", "b", "2004-04-01", "Sean Combs in an older post."),
    doc("6", "b", "2005-09-15", "Sean Combs closes the year."),
]


def test_graph_frequencies():
    g = build_context_graph(DOCS[:4])
    assert g.n_documents == 4 and g.n_sources == 3
    assert g.nodes[T("Diddy")].doc_freq == 3
    assert g.nodes[T("Diddy")].src_freq == 2
    assert g.edge(T("Diddy"), T("Puff Daddy")).doc_freq == 1
    assert g.edge(T("Puff Daddy"), T("Diddy")) is g.edge(T("Diddy"), T("Puff Daddy"))
    assert T("Sean Combs") in g.neighbors(T("Diddy"))


def test_graph_surface_is_most_frequent_spelling():
    docs = [doc(str(i), "a", "2005-01-01", t) for i, t in enumerate(["Tony BLAIR", "Tony Blair", "Tony Blair"])]
    g = build_context_graph(docs)
    assert g.key(T("tony blair")).surface == "Tony Blair"


def test_write_graph(tmp_path):
    write_graph(build_context_graph(DOCS), tmp_path)
    assert (tmp_path / "nodes.tsv").read_text().startswith("term\t")
    assert (tmp_path / "edges.tsv").exists()


def test_reduction_keeps_whole_sources_and_narrows():
    c = Corpus(DOCS)
    ds = filter_sources(c, T("Sean Combs"), parse_period("2005"))
    assert ds.sources == {"a", "b"}
    assert {d.id for d in ds.documents} == {"1", "2", "3", "5", "6"}
    assert narrow_period(ds) == ChangePeriod(date(2005, 2, 1), date(2005, 9, 15))
    focus = focus_documents(ds, narrow_period(ds))
    assert {d.id for d in focus} == {"1", "3", "6"}
    red = reduce(c, T("Sean Combs"), parse_period("2005"))
    assert [d.id for d in red.documents] == [d.id for d in focus]


def test_reduction_without_occurrence():
    with pytest.raises(NoFullTermOccurrence):
        reduce(Corpus(DOCS), T("Sean Combs"), parse_period("2003"))


def _star(n_other=30):
    nodes = {"Sean Combs": (40, 10), "Sean": (60, 12), "Combs": (45, 11)}
    edges = {}
    for i in range(n_other):
        name = f"Term{chr(65 + i % 26)}{i}"
        nodes[name] = (i + 1, max(1, i // 3))
        edges[("Sean Combs", name)] = (1 + i % 4, 1 + i % 3)
    return make_graph(nodes, edges, n_documents=200, n_sources=40)


def test_apriori_keeps_query_terms_and_shrinks_with_thresholds():
    g = _star()
    strict = apriori_filter(g, T("Sean Combs"), AprioriParams(target_terms=1))
    assert {T("Sean"), T("Combs"), T("Sean Combs")} <= set(strict.nodes)
    loose = apriori_filter(g, T("Sean Combs"), AprioriParams(target_terms=25))
    assert set(strict.nodes) <= set(loose.nodes)
    assert len(loose.nodes) >= 25 or len(loose.nodes) == len(
        apriori_filter(g, T("Sean Combs"), AprioriParams(target_terms=10**6)).nodes)


def test_apriori_explicit_threshold_below_floor_is_kept():
    g = _star()
    res = apriori_filter(g, T("Sean Combs"),
                         AprioriParams(target_terms=10**6, min_doc_fr=1, min_src_fr=1, min_rel_src_fr=1))
    assert set(res.nodes) == set(g.nodes)


def test_apriori_absent_query():
    with pytest.raises(QueryAbsentError):
        apriori_filter(_star(), T("Joseph Ratzinger"))


def test_apriori_params_validation():
    with pytest.raises(ValueError):
        AprioriParams(decay=1.0)
    with pytest.raises(ValueError):
        AprioriParams(target_terms=0)
