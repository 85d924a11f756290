import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import BLAIR_TERMS, T, blair_graph, make_graph, prolong_graph
from nameshift.coref import (ClassGraph, Coreferences, UnknownTermError, compute_subterm_classes, consolidate,
                             detect, direct_corefs, format_classes, indirect_corefs, is_super_term, prolong,
                             prolong_candidates, sub_terms, super_terms)
from nameshift.graph import ContextGraph, EdgeStats, NodeStats, edge_key


def names(terms):
    return {str(t) for t in terms}


def test_sub_terms_ignore_stopwords():
    assert names(sub_terms(T("Union of Myanmar"))) == {"Union", "Myanmar"}
    assert sub_terms(T("Blair")) == set()


def test_super_term_is_multiset_containment():
    assert is_super_term(T("Prime Minister Blair"), T("Minister Blair"))
    assert is_super_term(T("Blair Prime"), T("Prime Blair"))
    assert not is_super_term(T("New York"), T("New New"))
    assert is_super_term(T("Tony"), T("Tony"))


def test_blair_classes_follow_definition():
    classes = compute_subterm_classes([T(t) for t in BLAIR_TERMS])
    assert len(classes) == 9
    assert names(classes[T("Tony Blair")].members) == {"Blair", "Tony"}
    assert names(classes[T("Minister")].members) == set()
    assert str(classes[T("Prime Minister Blair")]) == "Prime Minister Blair [Prime Minister, Blair, Minister]"


def test_soft_rule_needs_similar_frequencies_for_reordered_terms():
    a, b = T("Blair Tony"), T("Tony Blair")
    stats = {a: NodeStats(10, 3), b: NodeStats(40, 9)}
    assert b not in compute_subterm_classes([a, b], stats)[a].members
    stats[b] = NodeStats(15, 4)
    assert b in compute_subterm_classes([a, b], stats)[a].members
    # in-order containment never needs the frequency check
    c = T("Tony Blair Foundation")
    stats = {c: NodeStats(1, 1), b: NodeStats(500, 9)}
    assert b in compute_subterm_classes([b, c], stats)[c].members


def test_class_frequencies_sum_members():
    g = blair_graph()
    classes = compute_subterm_classes(g.nodes, g.nodes)
    c = classes[T("Tony Blair")]
    assert c.doc_freq == 15 + 25 + 16
    assert c.src_freq == 6 + 9 + 6


def test_format_classes_orders_long_first():
    out = format_classes(compute_subterm_classes([T(t) for t in BLAIR_TERMS])).splitlines()
    assert out[0].startswith("Prime Minister Tony Blair [")
    assert out[-1] == "Tony []"


def test_prolong_candidates_and_acceptance(kb):
    g = prolong_graph()
    cands = prolong_candidates(g)
    assert T("Prime Minister Tony Blair") in cands
    assert cands[T("Prime Minister Tony Blair")].doc_freq == 9
    assert T("Prime Minister Blair Witch Project") in cands
    rejected = {}
    accepted = prolong(g, kb, rejected=rejected)
    assert set(accepted) == {T("Prime Minister Tony Blair")}
    assert accepted[T("Prime Minister Tony Blair")] == NodeStats(9, 6)
    assert rejected[T("Prime Minister Blair Witch Project")] == "longer than 4 words"


def test_prolong_without_length_cap_still_needs_kb(kb):
    rejected = {}
    accepted = prolong(prolong_graph(), kb, max_tokens=None, rejected=rejected)
    assert T("Prime Minister Blair Witch Project") not in accepted
    assert rejected[T("Prime Minister Blair Witch Project")] == "no knowledge-base resource"


def test_prolong_is_single_pass(kb):
    g, coref = detect(prolong_graph(), kb)
    assert T("Prime Minister Tony Blair") in g.nodes
    merged = set(g.nodes) - set(prolong_graph().nodes)
    assert merged == {T("Prime Minister Tony Blair")}
    # relations arrive through consolidation only
    assert not g.neighbors(T("Prime Minister Tony Blair"))
    assert coref.all(T("Prime Minister Tony Blair"))


def test_consolidation_adds_each_edge_once_per_class_pair():
    g = make_graph({"Tony Blair": (5, 2), "Tony": (6, 2), "Blair": (7, 3), "Brown": (4, 2)},
                   {("Tony Blair", "Brown"): (3, 2), ("Blair", "Brown"): (2, 1)})
    classes = compute_subterm_classes(g.nodes, g.nodes)
    cg = consolidate(g, classes)
    # Blair-Brown also counts for the Tony Blair class, which holds Blair
    assert cg.edge(T("Tony Blair"), T("Brown")).doc_freq == 3 + 2
    assert cg.edge(T("Blair"), T("Brown")).doc_freq == 2
    assert cg.edge(T("Tony"), T("Brown")) is None
    assert cg.edge(T("Tony Blair"), T("Blair")) is None


def test_corefs_direct_and_indirect():
    g = blair_graph()
    _, coref = detect(g, None, use_prolong=False)
    w = T("Prime Minister Blair")
    assert names(coref.direct(w)) == {"Prime Minister Tony Blair", "Prime Minister", "Minister", "Blair", "Tony Blair",
                                      "Tony"}
    assert T("Brown") in coref.indirect(w)
    assert not coref.direct(w) & coref.indirect(w)
    assert coref.direct(w) | coref.indirect(w) == coref.all(w)


def test_unknown_term():
    classes = compute_subterm_classes([T("Blair")])
    with pytest.raises(UnknownTermError):
        direct_corefs(T("Brown"), classes)
    with pytest.raises(UnknownTermError):
        Coreferences(ClassGraph(classes)).key(T("Brown"))


WORDS = ["alpha", "beta", "gamma", "delta", "alpha"]
terms_st = st.lists(st.lists(st.sampled_from(WORDS[:4]), min_size=1, max_size=3).map(lambda ws: T(" ".join(ws))),
                    min_size=1, max_size=10, unique_by=lambda t: t.sort_key)


@given(terms_st)
def test_direct_corefs_match_brute_force(terms):
    classes = compute_subterm_classes(terms)
    for w in classes:
        assert w in super_terms(w, classes)
        want = {v for v in classes if v != w and any(is_super_term(s, w) and is_super_term(s, v) for s in classes)}
        assert direct_corefs(w, classes) == want


@given(terms_st, st.randoms(use_true_random=False))
def test_indirect_definition(terms, rnd):
    nodes = {t: NodeStats(rnd.randint(1, 9), rnd.randint(1, 4)) for t in terms}
    keys = list(nodes)
    edges = {}
    for _ in range(rnd.randint(0, 15)):
        a, b = rnd.choice(keys), rnd.choice(keys)
        if a != b:
            edges[edge_key(a, b)] = EdgeStats(rnd.randint(1, 5), rnd.randint(1, 3))
    g = ContextGraph(nodes, edges)
    cg = consolidate(g, compute_subterm_classes(g.nodes, g.nodes))
    for w in cg.classes:
        assert indirect_corefs(w, cg) == cg.related(w) - direct_corefs(w, cg.classes)
