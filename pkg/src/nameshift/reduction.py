"""Dataset reduction: keep only sources that mention the full query, then tighten the period."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .corpus import ANY_SUB_TERM, FULL_TERM, ChangePeriod, Corpus, Document, query_documents
from .terms import TermKey

log = logging.getLogger(__name__)


class NoFullTermOccurrence(LookupError):
    pass


@dataclass(frozen=True)
class ReducedDataset:
    documents: tuple[Document, ...]
    sources: frozenset[str]
    query: TermKey
    period: ChangePeriod
    # the corpus the dataset was cut from; its stem index serves term lookups
    corpus: Corpus | None = field(default=None, compare=False, repr=False)

    @property
    def empty(self) -> bool:
        return not self.sources


def filter_sources(corpus: Corpus, q: TermKey, period: ChangePeriod) -> ReducedDataset:
    """All documents of every source with at least one full-query document inside ``period``."""
    hits = query_documents(corpus, q, period, FULL_TERM)
    sources = frozenset(d.source_id for d in hits)
    if not sources:
        log.info("query %s absent in period %s", q, period)
    docs = tuple(d for d in corpus.documents if d.source_id in sources)
    return ReducedDataset(docs, sources, q, period, corpus)


def _corpus(dataset: ReducedDataset) -> Corpus:
    return dataset.corpus if dataset.corpus is not None else Corpus(dataset.documents)


def narrow_period(dataset: ReducedDataset, q: TermKey | None = None, period: ChangePeriod | None = None) -> ChangePeriod:
    """[earliest, latest] publication day of full-query documents, across all retained sources."""
    q = q or dataset.query
    period = period or dataset.period
    hits = query_documents(_corpus(dataset), q, period, FULL_TERM, dataset.documents)
    if not hits:
        raise NoFullTermOccurrence(f"no full-term occurrence of {q} in {period}")
    days = [d.published_at.date() for d in hits]
    return ChangePeriod(min(days), max(days))


def focus_documents(dataset: ReducedDataset, period: ChangePeriod) -> list[Document]:
    """Documents of the retained sources that mention any query sub-term within ``period``."""
    return query_documents(_corpus(dataset), dataset.query, period, ANY_SUB_TERM, dataset.documents)


@dataclass(frozen=True)
class Reduction:
    dataset: ReducedDataset
    period: ChangePeriod
    documents: tuple[Document, ...]


def reduce(corpus: Corpus, q: TermKey, period: ChangePeriod) -> Reduction:
    dataset = filter_sources(corpus, q, period)
    narrowed = narrow_period(dataset, q, period)
    docs = tuple(focus_documents(dataset, narrowed))
    log.info("query %s: %d sources, period %s -> %s, %d focus documents",
             q, len(dataset.sources), period, narrowed, len(docs))
    return Reduction(dataset, narrowed, docs)
