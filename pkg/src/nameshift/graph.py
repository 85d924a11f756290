"""Co-occurrence context graph with document/source frequencies, and the a-priori filter."""
from __future__ import annotations

import csv
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .corpus import Document
from .extraction import DEFAULT_WINDOW, ExtractionCache, cooccurrences, extract_terms
from .terms import STOPWORDS, TermKey, single_token_key

log = logging.getLogger(__name__)


class QueryAbsentError(LookupError):
    pass


@dataclass
class NodeStats:
    doc_freq: int
    src_freq: int


@dataclass
class EdgeStats:
    doc_freq: int
    src_freq: int

    def __add__(self, other: "EdgeStats") -> "EdgeStats":
        return EdgeStats(self.doc_freq + other.doc_freq, self.src_freq + other.src_freq)


def edge_key(a: TermKey, b: TermKey) -> tuple[TermKey, TermKey]:
    return (a, b) if a.sort_key <= b.sort_key else (b, a)


@dataclass
class ContextGraph:
    nodes: dict[TermKey, NodeStats] = field(default_factory=dict)
    edges: dict[tuple[TermKey, TermKey], EdgeStats] = field(default_factory=dict)
    n_documents: int = 0
    n_sources: int = 0

    def __contains__(self, term) -> bool:
        return term in self.nodes

    def edge(self, a: TermKey, b: TermKey) -> EdgeStats | None:
        return self.edges.get(edge_key(a, b))

    def neighbors(self, term: TermKey) -> set[TermKey]:
        out = set()
        for a, b in self.edges:
            if a == term:
                out.add(b)
            elif b == term:
                out.add(a)
        return out

    def key(self, term: TermKey) -> TermKey:
        """The graph's own key for ``term`` (carrying the most frequent spelling)."""
        for k in self.nodes:
            if k == term:
                return k
        return term

    def subgraph(self, nodes: Iterable[TermKey], edges: Iterable[tuple[TermKey, TermKey]]) -> "ContextGraph":
        keep = set(nodes)
        sub_edges = {e: self.edges[e] for e in edges}
        for a, b in sub_edges:
            keep.add(a)
            keep.add(b)
        return ContextGraph(
            {n: s for n, s in self.nodes.items() if n in keep},
            sub_edges,
            self.n_documents,
            self.n_sources,
        )


def build_context_graph(documents: Iterable[Document], window: int = DEFAULT_WINDOW,
                        cache: ExtractionCache | None = None, stopwords=STOPWORDS) -> ContextGraph:
    """Aggregate extracted terms and windowed co-occurrences over ``documents``."""
    node_docs: Counter = Counter()
    node_srcs: dict[TermKey, set[str]] = defaultdict(set)
    edge_docs: Counter = Counter()
    edge_srcs: dict[tuple, set[str]] = defaultdict(set)
    spellings: dict[TermKey, Counter] = defaultdict(Counter)
    n_docs = 0
    sources = set()
    for doc in documents:
        n_docs += 1
        sources.add(doc.source_id)
        if cache is not None:
            occs = cache.extract(doc.id, doc.content, stopwords)
        else:
            occs = extract_terms(doc.content, stopwords, doc.id)
        seen = set()
        for o in occs:
            spellings[o.term][o.term.surface] += 1
            seen.add(o.term)
        for t in seen:
            node_docs[t] += 1
            node_srcs[t].add(doc.source_id)
        for pair in cooccurrences(occs, window):
            k = (pair.a, pair.b)
            edge_docs[k] += 1
            edge_srcs[k].add(doc.source_id)

    canon = {}
    for t, counts in spellings.items():
        surface = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        canon[t] = t.with_surface(surface)
    nodes = {canon[t]: NodeStats(node_docs[t], len(node_srcs[t])) for t in sorted(node_docs, key=lambda t: t.sort_key)}
    edges = {}
    for (a, b) in sorted(edge_docs, key=lambda e: (e[0].sort_key, e[1].sort_key)):
        edges[(canon[a], canon[b])] = EdgeStats(edge_docs[(a, b)], len(edge_srcs[(a, b)]))
    return ContextGraph(nodes, edges, n_docs, len(sources))


def query_units(q: TermKey) -> list[TermKey]:
    """The query's single-word content constituents (the query itself when it is one word)."""
    units = [single_token_key(q, i) for i, stop in enumerate(q.stops) if not stop]
    seen = []
    for u in units:
        if u not in seen:
            seen.append(u)
    return seen


@dataclass
class AprioriParams:
    """Schedule for the adaptive a-priori filter.

    Explicit ``min_doc_fr``/``min_src_fr``/``min_rel_src_fr`` override the
    start values derived from the graph.
    """

    target_terms: int = 50
    decay: float = 0.5
    doc_fraction: float = 0.1
    src_fraction: float = 0.1
    rel_src_fraction: float = 0.05
    floor: float = 2.0
    min_doc_fr: float | None = None
    min_src_fr: float | None = None
    min_rel_src_fr: float | None = None

    def __post_init__(self):
        if not 0 < self.decay < 1:
            raise ValueError("decay must lie in (0, 1)")
        if self.target_terms < 1:
            raise ValueError("target_terms must be >= 1")


def _relevant_to_query(term: TermKey, units: set[str]) -> bool:
    return any(tok in units for tok in term.content)


def apriori_filter(graph: ContextGraph, q: TermKey, params: AprioriParams | None = None) -> ContextGraph:
    """Keep frequent terms, terms sharing a word with the query, and source-frequent relations.

    Thresholds start at a fraction of the lowest query sub-term document
    frequency and of the source count, and are multiplied by ``decay`` until
    at least ``target_terms`` nodes survive or every threshold sits at its
    floor.
    """
    params = params or AprioriParams()
    units = query_units(q)
    present = [graph.nodes[u] for u in units if u in graph.nodes]
    if not present:
        raise QueryAbsentError(f"no sub-term of {q} occurs in the context graph")
    unit_tokens = {u.tokens[0] for u in units}

    n = graph.n_sources
    doc_t = params.min_doc_fr if params.min_doc_fr is not None else max(params.doc_fraction * min(s.doc_freq for s in present), params.floor)
    src_t = params.min_src_fr if params.min_src_fr is not None else max(params.src_fraction * n, params.floor)
    rel_t = params.min_rel_src_fr if params.min_rel_src_fr is not None else max(params.rel_src_fraction * n, params.floor)

    exempt = {t for t in graph.nodes if _relevant_to_query(t, unit_tokens)}
    step = 0
    while True:
        kept = {t for t, s in graph.nodes.items() if s.doc_freq >= doc_t and s.src_freq >= src_t} | exempt
        kept_edges = [e for e, s in graph.edges.items() if (e[0] in kept and e[1] in kept) or s.src_freq >= rel_t]
        result = graph.subgraph(kept, kept_edges)
        log.debug("a-priori step %d: minDocFr=%.3g minSrcFr=%.3g minRelSrcFr=%.3g -> %d nodes",
                  step, doc_t, src_t, rel_t, len(result.nodes))
        if len(result.nodes) >= params.target_terms or max(doc_t, src_t, rel_t) <= params.floor:
            return result
        # thresholds already under the floor (explicit settings) stay where they are
        doc_t, src_t, rel_t = (max(t * params.decay, min(t, params.floor)) for t in (doc_t, src_t, rel_t))
        step += 1


def write_graph(graph: ContextGraph, directory) -> None:
    """Dump ``nodes.tsv`` and ``edges.tsv`` for inspection."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / "nodes.tsv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["term", "doc_freq", "src_freq"])
        for t, s in graph.nodes.items():
            w.writerow([t.surface, s.doc_freq, s.src_freq])
    with open(directory / "edges.tsv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["a", "b", "doc_freq", "src_freq"])
        for (a, b), s in graph.edges.items():
            w.writerow([a.surface, b.surface, s.doc_freq, s.src_freq])
