"""Resolve terms to knowledge-base resources and filter out semantically incompatible candidates."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol, Sequence

import numpy as np

from .. import _kernels
from ..terms import TermKey, count_sequence, stem_text, term_key
from .kb import DISAMBIGUATES, DISAMBIGUATION_SUFFIX, KBUnavailable, KnowledgeBase, PropertyIndex, Resource

log = logging.getLogger(__name__)

_YEAR_RE = re.compile(r"(?<!\d)([12]\d{3})(?!\d)")

KEEP = "keep"
DROP = "drop"


@dataclass
class SemanticProfile:
    resource: Resource | None
    properties: PropertyIndex
    types: frozenset[str]
    subjects: frozenset[str]
    years: frozenset[int]

    @classmethod
    def from_index(cls, resource: Resource | None, index: PropertyIndex) -> "SemanticProfile":
        types = frozenset(v.value for v in index.get("type"))
        subjects = frozenset(v.value for v in index.get("subject"))
        years = set()
        for _, v in index.items(include_inverse=False):
            if not v.is_resource:
                years.update(int(y) for y in _YEAR_RE.findall(v.value))
        return cls(resource, index, types, subjects, frozenset(years))


def extract_years(text: str) -> set[int]:
    return {int(y) for y in _YEAR_RE.findall(text)}


class TermContext(Protocol):
    def direct(self, term: TermKey) -> list[tuple[TermKey, int]]: ...

    def indirect(self, term: TermKey) -> list[tuple[TermKey, int]]: ...


@dataclass
class StaticContext:
    """Fixed co-reference context, handy for tests and one-off lookups."""

    direct_map: Mapping[TermKey, Sequence[tuple[TermKey, int]]] = field(default_factory=dict)
    indirect_map: Mapping[TermKey, Sequence[tuple[TermKey, int]]] = field(default_factory=dict)

    def direct(self, term):
        return list(self.direct_map.get(term, ()))

    def indirect(self, term):
        return list(self.indirect_map.get(term, ()))


class CorefContext:
    """Context drawn from a co-reference index; frequencies are term document frequencies."""

    def __init__(self, coref, graph):
        self.coref = coref
        self.graph = graph

    def _freq(self, t: TermKey) -> int:
        s = self.graph.nodes.get(t)
        return s.doc_freq if s else 0

    def _with_freqs(self, terms):
        return [(t, self._freq(t)) for t in sorted(terms, key=lambda t: t.sort_key)]

    def direct(self, term):
        if term not in self.coref.classes:
            return []
        return self._with_freqs(self.coref.direct(term))

    def indirect(self, term):
        if term not in self.coref.classes:
            return []
        return self._with_freqs(self.coref.indirect(term))


def resolution_order(direct: Iterable[tuple[TermKey, int]]) -> list[tuple[TermKey, int]]:
    """Longer terms first; among equally long ones the rarer first."""
    return sorted(direct, key=lambda tf: (-len(tf[0]), tf[1], tf[0].sort_key))


def resolve(term: TermKey, direct: Iterable[tuple[TermKey, int]], kb: KnowledgeBase) -> Resource | None:
    """The term's own resource, else that of the first resolvable direct co-reference."""
    hit = kb.lookup(str(term))
    if hit is not None:
        return hit
    for t, _ in resolution_order(direct):
        hit = kb.lookup(str(t))
        if hit is not None:
            log.debug("resolved %s via direct co-reference %s", term, t)
            return hit
    return None


def fetch_profile(resource: Resource, kb: KnowledgeBase) -> SemanticProfile:
    return SemanticProfile.from_index(resource, kb.properties(resource))


def follow_redirects(resource: Resource, kb: KnowledgeBase) -> tuple[Resource, PropertyIndex]:
    """Follow redirects to the end, aggregating the properties of every resource on the way."""
    index = kb.properties(resource)
    seen = {resource}
    current = resource
    while True:
        target = kb.redirect_target(current)
        if target is None or target in seen:
            return current, index
        seen.add(target)
        index.extend(kb.properties(target))
        current = target


def find_disambiguation(resource: Resource, kb: KnowledgeBase, index: PropertyIndex | None = None) -> Resource | None:
    """The resource named "<name> (disambiguation)" among the inverse disambiguation links."""
    index = index if index is not None else kb.properties(resource)
    wanted = resource.name + DISAMBIGUATION_SUFFIX
    for v in index.get(DISAMBIGUATES, inverse=True):
        if v.is_resource and Resource(v.value).name == wanted:
            return Resource(v.value)
    return None


def disambiguate_direct(candidates: Sequence[Resource], direct: Iterable[tuple[TermKey, int]]) -> Resource | None:
    by_key: dict[TermKey, Resource] = {}
    for c in candidates:
        by_key.setdefault(term_key(c.name), c)
    for t, _ in resolution_order(direct):
        if t in by_key:
            return by_key[t]
    return None


def occurrence_vector(index: PropertyIndex, indirect: Sequence[TermKey]) -> np.ndarray:
    """How often each indirect term occurs in the property values of one resource."""
    texts = [stem_text(v.text) for _, v in index.items()]
    return np.array([sum(count_sequence(s, t.tokens) for s in texts) for t in indirect], dtype=np.float64)


@dataclass
class IndirectChoice:
    resource: Resource
    scores: dict[Resource, float]
    low_confidence: bool = False


def disambiguate_indirect(candidates: Sequence[Resource], indirect: Sequence[tuple[TermKey, int]],
                          kb: KnowledgeBase) -> IndirectChoice:
    """Candidate whose property values best match the weighted indirect co-references (cosine)."""
    if not candidates:
        raise ValueError("no disambiguation candidates")
    terms = [t for t, _ in indirect]
    if not terms:
        return IndirectChoice(candidates[0], {c: 0.0 for c in candidates}, low_confidence=True)
    v_ind = np.array([f for _, f in indirect], dtype=np.float64)
    rows = np.stack([occurrence_vector(kb.properties(c), terms) for c in candidates])
    scores = _kernels.cosine_scores(v_ind, rows)
    best = int(np.argmax(scores))
    return IndirectChoice(candidates[best], dict(zip(candidates, scores.tolist())), low_confidence=bool(scores[best] <= 0))


@dataclass
class Resolution:
    term: TermKey
    resource: Resource | None
    profile: SemanticProfile | None
    steps: list[str] = field(default_factory=list)
    low_confidence: bool = False

    @property
    def resolved(self) -> bool:
        return self.resource is not None


def resolve_profile(term: TermKey, context: TermContext, kb: KnowledgeBase) -> Resolution:
    """Name resolution followed by the redirect, ambiguation and disambiguation strategies."""
    direct = context.direct(term)
    start = resolve(term, direct, kb)
    if start is None:
        return Resolution(term, None, None, ["unresolved"])
    steps = [f"resolved:{start.name}"]
    current, index = follow_redirects(start, kb)
    if current != start:
        steps.append(f"redirect:{current.name}")
    candidates = kb.disambiguation_candidates(current)
    if not candidates:
        page = find_disambiguation(current, kb, index)
        if page is not None:
            steps.append(f"ambiguation:{page.name}")
            index = kb.properties(page)
            candidates = kb.disambiguation_candidates(page)
    low = False
    if candidates:
        chosen = disambiguate_direct(candidates, direct)
        if chosen is not None:
            steps.append(f"direct:{chosen.name}")
        else:
            pick = disambiguate_indirect(candidates, context.indirect(term), kb)
            chosen, low = pick.resource, pick.low_confidence
            steps.append(f"indirect:{chosen.name}")
        chosen, extra = follow_redirects(chosen, kb)
        index.extend(extra)
        current = chosen
    return Resolution(term, current, SemanticProfile.from_index(current, index), steps, low)


def similarity_filter(q: SemanticProfile, c: SemanticProfile) -> str:
    """Drop when no applicable dimension (types; years, else subjects) overlaps.

    A dimension applies only when both sides carry values for it.
    """
    applicable = []
    if q.types and c.types:
        applicable.append(bool(q.types & c.types))
    if q.years and c.years:
        applicable.append(bool(q.years & c.years))
    elif q.subjects and c.subjects:
        applicable.append(bool(q.subjects & c.subjects))
    if applicable and not any(applicable):
        return DROP
    return KEEP


def type_chain(type_id: str, kb: KnowledgeBase) -> list[str]:
    chain = [type_id]
    seen = {type_id}
    while True:
        parent = kb.super_type(chain[-1])
        if parent is None or parent in seen:
            return chain
        chain.append(parent)
        seen.add(parent)


def _hierarchy(types: Iterable[str], kb: KnowledgeBase) -> tuple[set[str], dict[str, str]]:
    nodes, parent = set(), {}
    for t in types:
        chain = type_chain(t, kb)
        nodes.update(chain)
        for child, sup in zip(chain, chain[1:]):
            parent[child] = sup
    return nodes, parent


def type_hierarchy_filter(q: SemanticProfile, c: SemanticProfile, kb: KnowledgeBase) -> str:
    """Drop when, below some shared type, both sides have sub-types and none of them agree."""
    if not q.types or not c.types:
        return KEEP
    qn, qp = _hierarchy(q.types, kb)
    cn, cp = _hierarchy(c.types, kb)
    for common in sorted(qn & cn):
        q_children = {t for t in qn if qp.get(t) == common}
        c_children = {t for t in cn if cp.get(t) == common}
        if q_children and c_children and not q_children & c_children:
            log.debug("type conflict below %s: %s vs %s", common, sorted(q_children), sorted(c_children))
            return DROP
    return KEEP


@dataclass
class Decision:
    term: TermKey
    verdict: str
    reason: str
    resource: Resource | None = None


def semantic_filter(q: TermKey, candidates: Iterable, context: TermContext, kb: KnowledgeBase,
                    decisions: list | None = None) -> list:
    """Candidates that survive the similarity and type-hierarchy filters.

    Each candidate (anything with a ``term`` attribute, or a bare TermKey) is
    judged against the query on its own. Unresolvable candidates are kept; an
    unresolvable query keeps everything.
    """
    cands = list(candidates)
    decisions = decisions if decisions is not None else []
    try:
        qres = resolve_profile(q, context, kb)
    except KBUnavailable as exc:
        log.warning("knowledge base unavailable for query %s: %s", q, exc)
        qres = Resolution(q, None, None, ["unavailable"])
    if not qres.resolved:
        decisions.extend(Decision(_term(c), KEEP, "query unresolvable") for c in cands)
        return cands
    kept = []
    for c in cands:
        d = _judge(qres, _term(c), context, kb)
        decisions.append(d)
        if d.verdict == KEEP:
            kept.append(c)
    return kept


def _term(c) -> TermKey:
    return c if isinstance(c, TermKey) else c.term


def _judge(qres: Resolution, term: TermKey, context: TermContext, kb: KnowledgeBase) -> Decision:
    try:
        cres = resolve_profile(term, context, kb)
    except KBUnavailable as exc:
        log.warning("knowledge base unavailable for %s, keeping it: %s", term, exc)
        return Decision(term, KEEP, "unavailable")
    if not cres.resolved:
        return Decision(term, KEEP, "unresolvable")
    if cres.resource == qres.resource:
        return Decision(term, KEEP, "same resource", cres.resource)
    if similarity_filter(qres.profile, cres.profile) == DROP:
        return Decision(term, DROP, "no shared type, subject or year", cres.resource)
    try:
        verdict = type_hierarchy_filter(qres.profile, cres.profile, kb)
    except KBUnavailable as exc:
        log.warning("type hierarchy unavailable for %s, keeping it: %s", term, exc)
        return Decision(term, KEEP, "unavailable", cres.resource)
    if verdict == DROP:
        return Decision(term, DROP, "conflicting sub-types", cres.resource)
    return Decision(term, KEEP, "compatible", cres.resource)
