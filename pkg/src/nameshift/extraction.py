"""Candidate name extraction and windowed co-occurrence pairs.

Names are found with a capitalization heuristic: phrases of one to three
words whose first and last words are capitalized non-stopwords and whose
interior words are stopwords or capitalized. Every qualifying sub-phrase of
a longer phrase is emitted as well, so "Union of Myanmar" also yields
"Union" and "Myanmar".
"""
from __future__ import annotations

import json
import os
import tempfile
import threading
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from . import _kernels
from .terms import (EXTRACTED_MAX_TOKENS, MIN_TERM_CHARS, STOPWORDS, TermKey, Token, _key_from_words,
                    is_capitalized, tokenize)

EXTRACTOR_VERSION = "1"
DEFAULT_WINDOW = 10


@dataclass(frozen=True)
class TermOccurrence:
    term: TermKey
    document_id: str
    token_offset: int
    length: int = 1
    # inclusive token span of the capitalized run the occurrence was cut from;
    # window distances are measured between these spans
    phrase_start: int = -1
    phrase_end: int = -1

    def __post_init__(self):
        if self.phrase_start < 0:
            object.__setattr__(self, "phrase_start", self.token_offset)
        if self.phrase_end < 0:
            object.__setattr__(self, "phrase_end", self.token_offset + self.length - 1)


@dataclass(frozen=True)
class CooccurrencePair:
    a: TermKey
    b: TermKey
    document_id: str
    source_id: str | None = None

    @classmethod
    def of(cls, x: TermKey, y: TermKey, document_id: str, source_id=None) -> "CooccurrencePair":
        if x == y:
            raise ValueError("a term does not co-occur with itself")
        if y.sort_key < x.sort_key:
            x, y = y, x
        return cls(x, y, document_id, source_id)


def _runs(tokens: list[Token], stopwords) -> list[tuple[int, int]]:
    runs = []
    start = None
    for i, tok in enumerate(tokens):
        eligible = is_capitalized(tok.word) or tok.word.lower() in stopwords
        if start is not None and (not eligible or tok.brk):
            runs.append((start, i))
            start = None
        if eligible and start is None:
            start = i
    if start is not None:
        runs.append((start, len(tokens)))
    return runs


def _anchor(word: str, stopwords) -> bool:
    return is_capitalized(word) and word.lower() not in stopwords


def extract_terms(text: str, stopwords=STOPWORDS, document_id: str = "") -> list[TermOccurrence]:
    """All name occurrences in ``text``, ordered by token offset then length."""
    tokens = tokenize(text)
    out: list[TermOccurrence] = []
    for run_start, run_end in _runs(tokens, stopwords):
        found = []
        for i in range(run_start, run_end):
            if not _anchor(tokens[i].word, stopwords):
                continue
            for n in range(1, EXTRACTED_MAX_TOKENS + 1):
                j = i + n
                if j > run_end:
                    break
                words = [t.word for t in tokens[i:j]]
                if not _anchor(words[-1], stopwords):
                    continue
                if len(" ".join(words)) < MIN_TERM_CHARS:
                    continue
                found.append((i, n, words))
        if not found:
            continue
        lo = min(i for i, _, _ in found)
        hi = max(i + n - 1 for i, n, _ in found)
        for i, n, words in found:
            key = _key_from_words(words, " ".join(words), stopwords)
            out.append(TermOccurrence(key, document_id, i, n, lo, hi))
    out.sort(key=lambda o: (o.token_offset, o.length))
    return out


def cooccurrences(occurrences: Iterable[TermOccurrence], window: int = DEFAULT_WINDOW,
                  source_id: str | None = None) -> set[CooccurrencePair]:
    """Unordered pairs of distinct terms whose phrases lie at most ``window`` tokens apart."""
    if window < 1:
        raise ValueError("window must be >= 1")
    by_doc: dict[str, list[TermOccurrence]] = defaultdict(list)
    for occ in occurrences:
        by_doc[occ.document_id].append(occ)
    pairs: set[CooccurrencePair] = set()
    for doc_id, occs in by_doc.items():
        if len(occs) < 2:
            continue
        occs.sort(key=lambda o: (o.phrase_start, o.phrase_end, o.token_offset, o.length))
        lo = np.fromiter((o.phrase_start for o in occs), dtype=np.int64, count=len(occs))
        hi = np.fromiter((o.phrase_end for o in occs), dtype=np.int64, count=len(occs))
        for i, j in _kernels.window_pairs(lo, hi, window):
            a, b = occs[i].term, occs[j].term
            if a != b:
                pairs.add(CooccurrencePair.of(a, b, doc_id, source_id))
    return pairs


class ExtractionCache:
    """Line-delimited cache of extracted occurrences keyed by (document id, extractor version).

    Each line is ``{"document_id": ..., "version": ..., "occurrences": [[surface, offset, length, phrase_start, phrase_end], ...]}``.
    """

    def __init__(self, path=None, version: str = EXTRACTOR_VERSION):
        self.path = Path(path) if path else None
        self.version = version
        self._entries: dict[str, list[list]] = {}
        self._dirty = False
        self._lock = threading.Lock()
        if self.path and self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    rec = json.loads(line)
                    if rec.get("version") == version:
                        self._entries[rec["document_id"]] = rec["occurrences"]

    def __len__(self):
        return len(self._entries)

    def extract(self, document_id: str, text: str, stopwords=STOPWORDS) -> list[TermOccurrence]:
        with self._lock:
            rows = self._entries.get(document_id)
        if rows is None:
            occs = extract_terms(text, stopwords, document_id)
            rows = [[o.term.surface, o.token_offset, o.length, o.phrase_start, o.phrase_end] for o in occs]
            with self._lock:
                self._entries[document_id] = rows
                self._dirty = True
            return occs
        out = []
        for surface, offset, length, lo, hi in rows:
            words = surface.split(" ")
            out.append(TermOccurrence(_key_from_words(words, surface, stopwords), document_id, offset, length, lo, hi))
        return out

    def flush(self) -> None:
        if not (self.path and self._dirty):
            return
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                for doc_id in sorted(self._entries):
                    rec = {"document_id": doc_id, "version": self.version, "occurrences": self._entries[doc_id]}
                    fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
            os.replace(tmp, self.path)
            self._dirty = False
