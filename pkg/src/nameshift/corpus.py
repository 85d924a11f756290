"""Multi-source, timestamped document store.

The on-disk format is JSON Lines, one document per line::

    {"id": "d1", "source_id": "blog-a", "published_at": "2005-03-01T10:00:00Z", "content": "..."}

Newlines inside ``content`` are escaped by the JSON encoding.
"""
from __future__ import annotations

import json
import logging
import os
import re
import tempfile
from collections import defaultdict
from dataclasses import dataclass
from datetime import date, datetime, timezone
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .terms import STOPWORDS, TermKey, contains_sequence, stem_text

log = logging.getLogger(__name__)

FORMAT_JSONL = "jsonl"
ENGLISH_WINDOW = 1000
ENGLISH_MIN_FRACTION = 0.30

FULL_TERM = "full-term"
ANY_SUB_TERM = "any-sub-term"


class CorpusError(Exception):
    pass


@dataclass(frozen=True)
class Source:
    id: str

    def __post_init__(self):
        if not self.id:
            raise ValueError("source id must be non-empty")


@dataclass(frozen=True)
class Document:
    id: str
    content: str
    published_at: datetime
    source_id: str


@dataclass(frozen=True, order=True)
class ChangePeriod:
    start: date
    end: date

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"period start {self.start} is after end {self.end}")

    def contains(self, when: datetime | date) -> bool:
        day = when.date() if isinstance(when, datetime) else when
        return self.start <= day <= self.end

    def within(self, other: "ChangePeriod") -> bool:
        return other.start <= self.start and self.end <= other.end

    def overlaps(self, other: "ChangePeriod") -> bool:
        return self.start <= other.end and other.start <= self.end

    def __str__(self) -> str:
        return f"{self.start.isoformat()}..{self.end.isoformat()}"


_PERIOD_RE = re.compile(r"^(\d{4})(?:-(\d{2}))?$")


def parse_period(text: str) -> ChangePeriod:
    """Parse ``YYYY``, ``YYYY-MM``, ``YYYY..YYYY`` or ``YYYY-MM-DD..YYYY-MM-DD``.

    A year expands to Jan 1..Dec 31. ``YYYY-01`` (a change annotated in
    January) also admits the preceding year.
    """
    text = text.strip()
    if ".." in text:
        lo, hi = (p.strip() for p in text.split("..", 1))
        return ChangePeriod(_bound(lo, first=True), _bound(hi, first=False))
    m = _PERIOD_RE.match(text)
    if not m:
        raise ValueError(f"unrecognized period {text!r}")
    year = int(m.group(1))
    start_year = year - 1 if m.group(2) == "01" else year
    return ChangePeriod(date(start_year, 1, 1), date(year, 12, 31))


def _bound(text: str, first: bool) -> date:
    if re.fullmatch(r"\d{4}", text):
        return date(int(text), 1, 1) if first else date(int(text), 12, 31)
    return date.fromisoformat(text)


def parse_timestamp(value: str) -> datetime:
    value = value.strip()
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    ts = datetime.fromisoformat(value)
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


class Corpus:
    """Immutable collection of documents grouped by source."""

    def __init__(self, documents: Iterable[Document], skipped: int = 0):
        docs = tuple(documents)
        ids = set()
        for d in docs:
            if d.id in ids:
                raise CorpusError(f"duplicate document id {d.id!r}")
            ids.add(d.id)
        self._documents = docs
        self._by_id = {d.id: d for d in docs}
        self._sources = {sid: Source(sid) for sid in sorted({d.source_id for d in docs})}
        self.skipped = skipped

    @property
    def documents(self) -> tuple[Document, ...]:
        return self._documents

    @property
    def sources(self) -> dict[str, Source]:
        return dict(self._sources)

    def __len__(self):
        return len(self._documents)

    def __iter__(self):
        return iter(self._documents)

    def __eq__(self, other):
        return isinstance(other, Corpus) and self._documents == other._documents

    def __hash__(self):
        return hash(self._documents)

    def get(self, doc_id: str) -> Document:
        return self._by_id[doc_id]

    def time_range(self) -> ChangePeriod | None:
        if not self._documents:
            return None
        days = [d.published_at.date() for d in self._documents]
        return ChangePeriod(min(days), max(days))

    @cached_property
    def _stems(self) -> dict[str, list[str]]:
        return {d.id: stem_text(d.content) for d in self._documents}

    @cached_property
    def _postings(self) -> dict[str, set[str]]:
        post: dict[str, set[str]] = defaultdict(set)
        for doc_id, stems in self._stems.items():
            for s in stems:
                post[s].add(doc_id)
        return post

    def stems(self, doc_id: str) -> list[str]:
        return self._stems[doc_id]

    def contains(self, doc_id: str, tokens: tuple[str, ...]) -> bool:
        return contains_sequence(self._stems[doc_id], tokens)

    def candidates(self, tokens: Iterable[str]) -> set[str]:
        """Ids of documents containing every one of ``tokens`` (in any order)."""
        result = None
        for tok in tokens:
            ids = self._postings.get(tok, set())
            result = set(ids) if result is None else result & ids
            if not result:
                return set()
        return result or set()


def is_english(text: str, stopwords=STOPWORDS) -> bool:
    """True iff more than 30% of the first 1000 whitespace-delimited words are stopwords."""
    if not stopwords:
        raise ValueError("stopword set must be non-empty")
    words = text.split()[:ENGLISH_WINDOW]
    if not words:
        return False
    hits = sum(1 for w in words if w.casefold() in stopwords)
    return hits / len(words) > ENGLISH_MIN_FRACTION


def _parse_record(line: str) -> Document:
    rec = json.loads(line)
    if not isinstance(rec, dict):
        raise ValueError("record is not an object")
    doc_id, source_id, content = rec["id"], rec["source_id"], rec["content"]
    if not (isinstance(doc_id, str) and doc_id):
        raise ValueError("missing id")
    if not (isinstance(source_id, str) and source_id):
        raise ValueError("missing source_id")
    if not isinstance(content, str):
        raise ValueError("content is not text")
    return Document(doc_id, content, parse_timestamp(rec["published_at"]), source_id)


def ingest_corpus(path, format: str = FORMAT_JSONL, english_gate: bool = False, stopwords=STOPWORDS) -> Corpus:
    """Read a corpus file. Malformed records are skipped and counted on ``Corpus.skipped``."""
    if format != FORMAT_JSONL:
        raise CorpusError(f"unsupported corpus format {format!r}")
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc
    docs: list[Document] = []
    seen: set[str] = set()
    skipped = 0
    gated = 0
    with fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                doc = _parse_record(line)
            except (ValueError, KeyError, TypeError) as exc:
                log.warning("%s:%d: skipping malformed record (%s)", path, lineno, exc)
                skipped += 1
                continue
            if doc.id in seen:
                log.warning("%s:%d: skipping duplicate document id %r", path, lineno, doc.id)
                skipped += 1
                continue
            if english_gate and not is_english(doc.content, stopwords):
                gated += 1
                continue
            seen.add(doc.id)
            docs.append(doc)
    if not docs:
        raise CorpusError(f"zero valid records in {path}")
    if skipped or gated:
        log.info("ingested %d documents from %s (%d malformed, %d non-English)", len(docs), path, skipped, gated)
    return Corpus(docs, skipped=skipped)


def write_corpus(corpus: Corpus, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        for d in corpus:
            rec = {"id": d.id, "source_id": d.source_id, "published_at": format_timestamp(d.published_at), "content": d.content}
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    os.replace(tmp, path)


def query_documents(corpus: Corpus, term: TermKey, period: ChangePeriod, mode: str = FULL_TERM,
                    documents: Iterable[Document] | None = None) -> list[Document]:
    """Documents published in ``period`` that contain ``term``.

    In ``any-sub-term`` mode a document qualifies when it contains the full
    term or any single content word of it. ``documents`` restricts the search
    to a subset of the corpus.
    """
    if not term.tokens:
        raise ValueError("empty query term")
    if mode == FULL_TERM:
        ids = {i for i in corpus.candidates(term.tokens) if corpus.contains(i, term.tokens)}
    elif mode == ANY_SUB_TERM:
        ids = {i for i in corpus.candidates(term.tokens) if corpus.contains(i, term.tokens)}
        for tok in set(term.content):
            ids |= corpus.candidates((tok,))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    pool = corpus.documents if documents is None else documents
    return [d for d in pool if d.id in ids and period.contains(d.published_at)]
