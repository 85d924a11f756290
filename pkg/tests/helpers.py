"""Shared builders for hand-made context graphs."""
from __future__ import annotations

from nameshift.graph import ContextGraph, EdgeStats, NodeStats, edge_key
from nameshift.terms import term_key


def T(text: str):
    return term_key(text)


def make_graph(nodes: dict[str, tuple[int, int]], edges: dict[tuple[str, str], tuple[int, int]],
               n_documents: int = 100, n_sources: int = 20) -> ContextGraph:
    keys = {name: term_key(name) for name in nodes}
    g_nodes = {keys[n]: NodeStats(*s) for n, s in nodes.items()}
    g_edges = {edge_key(keys[a], keys[b]): EdgeStats(*s) for (a, b), s in edges.items()}
    return ContextGraph(g_nodes, g_edges, n_documents, n_sources)


BLAIR_TERMS = ["Prime Minister Tony Blair", "Prime Minister Blair", "Prime Minister Brown", "Prime Minister",
               "Tony Blair", "Blair", "Brown", "Minister", "Tony"]


def blair_graph() -> ContextGraph:
    nodes = {
        "Prime Minister Tony Blair": (3, 2), "Prime Minister Blair": (5, 3), "Prime Minister Brown": (4, 3),
        "Prime Minister": (20, 8), "Tony Blair": (15, 6), "Blair": (25, 9), "Brown": (12, 5),
        "Minister": (22, 8), "Tony": (16, 6),
    }
    edges = {
        ("Prime Minister", "Tony Blair"): (6, 4), ("Prime Minister Blair", "Brown"): (2, 2),
        ("Tony Blair", "Brown"): (5, 3), ("Prime Minister", "Brown"): (4, 3), ("Minister", "Tony"): (3, 2),
        ("Prime Minister Brown", "Blair"): (1, 1), ("Blair", "Brown"): (7, 4),
    }
    return make_graph(nodes, edges)


def prolong_graph() -> ContextGraph:
    """Overlapping terms as the extractor cuts them from longer capitalized runs."""
    nodes = {
        "Prime Minister": (30, 10), "Minister Tony Blair": (6, 4), "Prime Minister Tony": (6, 4),
        "Tony Blair": (25, 9), "Prime Minister Blair": (8, 5), "Blair Witch Project": (4, 3),
        "Witch Project": (4, 3), "Blair": (40, 12), "Minister": (32, 11), "Tony": (26, 9),
    }
    edges = {
        ("Prime Minister", "Tony Blair"): (9, 6), ("Prime Minister", "Blair Witch Project"): (2, 2),
        ("Prime Minister Blair", "Witch Project"): (1, 1), ("Prime Minister Tony", "Blair"): (5, 3),
        ("Tony Blair", "Minister"): (3, 2),
    }
    return make_graph(nodes, edges)
