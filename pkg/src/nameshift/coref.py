"""Sub-term classes, the knowledge-base-checked prolong rule, consolidation and co-reference sets.

A term ``a`` is a super-term of ``b`` when the content words of ``b`` (stopwords
ignored) form a sub-multiset of those of ``a``. Every term represents its own
sub-term class whose members are the other terms it is a super-term of. When
``b``'s words occur in ``a`` in a different order the membership additionally
needs similar document frequencies (the soft rule), if frequencies are known.
"""
from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import _kernels
from .graph import ContextGraph, EdgeStats, NodeStats, edge_key
from .terms import MAX_TERM_TOKENS, TermKey, single_token_key

log = logging.getLogger(__name__)

SOFT_RATIO = (0.5, 2.0)


class UnknownTermError(KeyError):
    pass


def sub_terms(w: TermKey) -> set[TermKey]:
    """Single-word content constituents of ``w``; empty for a one-word term."""
    if len(w.content) <= 1 and len(w) <= 1:
        return set()
    out = {single_token_key(w, i) for i, stop in enumerate(w.stops) if not stop}
    out.discard(w)
    return out


def is_super_term(a: TermKey, b: TermKey) -> bool:
    return Counter(b.content) <= Counter(a.content)


def _in_order(a: tuple[str, ...], b: tuple[str, ...]) -> bool:
    it = iter(a)
    return all(tok in it for tok in b)


@dataclass(frozen=True)
class SubTermClass:
    representative: TermKey
    members: frozenset[TermKey]
    doc_freq: int = 0
    src_freq: int = 0

    @property
    def terms(self) -> frozenset[TermKey]:
        return self.members | {self.representative}

    def __str__(self) -> str:
        inner = ", ".join(t.surface or str(t) for t in sorted(self.members, key=_display_order))
        return f"{self.representative} [{inner}]"


def _display_order(t: TermKey):
    return (-len(t.content), str(t).lower())


def _membership(terms: list[TermKey]):
    """Boolean matrix ``m[a, b]``: content multiset of ``b`` within that of ``a``."""
    vocab: dict[tuple[str, int], int] = {}
    rows = []
    for t in terms:
        seen: Counter = Counter()
        row = set()
        for tok in t.content:
            seen[tok] += 1
            row.add(vocab.setdefault((tok, seen[tok]), len(vocab)))
        rows.append(row)
    return _kernels.subset_matrix(_kernels.pack_sets(rows, len(vocab)))


def compute_subterm_classes(terms: Iterable[TermKey], stats: Mapping[TermKey, NodeStats] | None = None,
                            soft_ratio: tuple[float, float] = SOFT_RATIO) -> dict[TermKey, SubTermClass]:
    """One class per term, keyed by its representative.

    Without ``stats`` membership is plain content-multiset containment.
    With ``stats`` an out-of-order containment only counts when the
    document-frequency ratio sub/super lies within ``soft_ratio``.
    """
    terms = sorted(set(terms), key=lambda t: t.sort_key)
    terms = [t for t in terms if t.content]
    contains = _membership(terms)
    lo, hi = soft_ratio
    classes = {}
    for a, rep in enumerate(terms):
        members = set()
        for b, other in enumerate(terms):
            if a == b or not contains[a, b]:
                continue
            if stats is not None and not _in_order(rep.content, other.content):
                da, db = stats[rep].doc_freq, stats[other].doc_freq
                if da == 0 or not lo <= db / da <= hi:
                    continue
            members.add(other)
        df = sf = 0
        if stats is not None:
            for t in members | {rep}:
                df += stats[t].doc_freq
                sf += stats[t].src_freq
        classes[rep] = SubTermClass(rep, frozenset(members), df, sf)
    return classes


def format_classes(classes: Mapping[TermKey, SubTermClass]) -> str:
    ordered = sorted(classes.values(), key=lambda c: _display_order(c.representative))
    return "\n".join(str(c) for c in ordered)


# -- prolong rule ---------------------------------------------------------------

def _merged(a: TermKey, b: TermKey, k: int) -> TermKey:
    aw = a.words or a.tokens
    bw = b.words or b.tokens
    words = tuple(aw) + tuple(bw[k:])
    return TermKey(a.tokens + b.tokens[k:], a.stops + b.stops[k:], " ".join(words), words)


def prolong_candidates(graph: ContextGraph) -> dict[TermKey, EdgeStats]:
    """Merged terms of lexically overlapping node pairs whose prefix/suffix split is an edge.

    The value is the stats of the strongest splitting edge.
    """
    by_tokens = {(t.tokens, t.stops): t for t in graph.nodes}
    heads: dict[str, list[TermKey]] = defaultdict(list)
    for t in graph.nodes:
        heads[t.tokens[0]].append(t)
    out: dict[TermKey, EdgeStats] = {}
    for a in graph.nodes:
        for k in range(1, len(a)):
            for b in heads.get(a.tokens[len(a) - k], ()):
                if k >= len(b) or b.tokens[:k] != a.tokens[len(a) - k:]:
                    continue
                merged = _merged(a, b, k)
                if (merged.tokens, merged.stops) in by_tokens:
                    continue
                best = None
                for i in range(1, len(merged)):
                    pre = by_tokens.get((merged.tokens[:i], merged.stops[:i]))
                    suf = by_tokens.get((merged.tokens[i:], merged.stops[i:]))
                    if pre is None or suf is None or pre == suf:
                        continue
                    e = graph.edge(pre, suf)
                    if e is not None and (best is None or e.doc_freq > best.doc_freq):
                        best = e
                if best is None:
                    continue
                prev = out.get(merged)
                if prev is None or best.doc_freq > prev.doc_freq:
                    out[merged] = best
    return out


def prolong(graph: ContextGraph, kb, max_tokens: int | None = MAX_TERM_TOKENS,
            rejected: dict | None = None) -> dict[TermKey, NodeStats]:
    """Accepted prolonged terms with their node stats.

    A merged term is kept only if it has at most ``max_tokens`` words and the
    knowledge base resolves its name. Merging happens once; merged terms are
    not merged again. ``rejected`` collects the turned-down terms with a reason.
    """
    accepted: dict[TermKey, NodeStats] = {}
    for term, e in sorted(prolong_candidates(graph).items(), key=lambda kv: kv[0].sort_key):
        if max_tokens is not None and len(term) > max_tokens:
            reason = f"longer than {max_tokens} words"
        elif kb is None or kb.lookup(term.surface) is None:
            reason = "no knowledge-base resource"
        else:
            accepted[term] = NodeStats(e.doc_freq, e.src_freq)
            continue
        log.debug("prolong: rejected %s (%s)", term, reason)
        if rejected is not None:
            rejected[term] = reason
    return accepted


def with_terms(graph: ContextGraph, extra: Mapping[TermKey, NodeStats]) -> ContextGraph:
    """Copy of ``graph`` with additional edge-less nodes; their relations arrive via consolidation."""
    nodes = dict(graph.nodes)
    for t, s in extra.items():
        nodes.setdefault(t, s)
    return ContextGraph(nodes, dict(graph.edges), graph.n_documents, graph.n_sources)


# -- consolidation ---------------------------------------------------------------

@dataclass
class ClassGraph:
    classes: dict[TermKey, SubTermClass]
    edges: dict[tuple[TermKey, TermKey], EdgeStats] = field(default_factory=dict)
    _adj: dict[TermKey, set[TermKey]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        adj = defaultdict(set)
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        self._adj = dict(adj)

    def related(self, rep: TermKey) -> set[TermKey]:
        if rep not in self.classes:
            raise UnknownTermError(rep)
        return set(self._adj.get(rep, ()))

    def edge(self, a: TermKey, b: TermKey) -> EdgeStats | None:
        return self.edges.get(edge_key(a, b))


def consolidate(graph: ContextGraph, classes: Mapping[TermKey, SubTermClass]) -> ClassGraph:
    """Lift term edges to class edges; each term edge adds its weight once per class pair it links."""
    holders: dict[TermKey, list[TermKey]] = defaultdict(list)
    for rep, cls in classes.items():
        for t in cls.terms:
            holders[t].append(rep)
    acc: dict[tuple[TermKey, TermKey], list[int]] = {}
    for (x, y), e in graph.edges.items():
        pairs = set()
        for cx in holders.get(x, ()):
            for cy in holders.get(y, ()):
                if cx != cy:
                    pairs.add(edge_key(cx, cy))
        for p in pairs:
            slot = acc.setdefault(p, [0, 0])
            slot[0] += e.doc_freq
            slot[1] += e.src_freq
    edges = {p: EdgeStats(df, sf) for p, (df, sf) in sorted(acc.items(), key=lambda kv: (kv[0][0].sort_key, kv[0][1].sort_key))}
    return ClassGraph(dict(classes), edges)


# -- co-reference sets ------------------------------------------------------------

def _require(w: TermKey, classes) -> None:
    if w not in classes:
        raise UnknownTermError(w)


def super_terms(w: TermKey, classes: Mapping[TermKey, SubTermClass]) -> set[TermKey]:
    _require(w, classes)
    return {rep for rep, c in classes.items() if rep == w or w in c.members}


def direct_corefs(w: TermKey, classes: Mapping[TermKey, SubTermClass]) -> set[TermKey]:
    """All terms of the classes represented by super-terms of ``w``, except ``w``."""
    out = set()
    for s in super_terms(w, classes):
        out |= classes[s].terms
    out.discard(w)
    return out


def corefs(w: TermKey, cg: ClassGraph) -> set[TermKey]:
    """Representatives of classes linked to ``w``'s class, plus its direct co-references.

    A term always co-occurs with its super-terms, so the direct set is part of
    the linked set whenever the graph is complete; it is added explicitly so
    that pruned edges cannot separate the two.
    """
    return cg.related(w) | direct_corefs(w, cg.classes)


def indirect_corefs(w: TermKey, cg: ClassGraph, classes: Mapping[TermKey, SubTermClass] | None = None) -> set[TermKey]:
    classes = cg.classes if classes is None else classes
    return corefs(w, cg) - direct_corefs(w, classes)


class Coreferences:
    """Cached co-reference lookups over one class graph."""

    def __init__(self, cg: ClassGraph):
        self.cg = cg
        self._direct: dict[TermKey, frozenset[TermKey]] = {}

    @property
    def classes(self):
        return self.cg.classes

    def key(self, term: TermKey) -> TermKey:
        for k in self.cg.classes:
            if k == term:
                return k
        raise UnknownTermError(term)

    def direct(self, w: TermKey) -> frozenset[TermKey]:
        if w not in self._direct:
            self._direct[w] = frozenset(direct_corefs(w, self.cg.classes))
        return self._direct[w]

    def all(self, w: TermKey) -> frozenset[TermKey]:
        return frozenset(self.cg.related(w)) | self.direct(w)

    def indirect(self, w: TermKey) -> frozenset[TermKey]:
        return self.all(w) - self.direct(w)


def detect(graph: ContextGraph, kb=None, use_prolong: bool = True, soft_ratio=SOFT_RATIO,
           rejected: dict | None = None) -> tuple[ContextGraph, Coreferences]:
    """Prolong, build sub-term classes over the graph's nodes and consolidate."""
    if use_prolong and kb is not None:
        graph = with_terms(graph, prolong(graph, kb, rejected=rejected))
    classes = compute_subterm_classes(graph.nodes, graph.nodes, soft_ratio)
    return graph, Coreferences(consolidate(graph, classes))
