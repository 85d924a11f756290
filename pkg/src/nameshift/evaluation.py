"""Test sets, precision/recall with sub-term credit and frequency-dependent recall, and reports.

Test-set lines look like::

    # query | expected groups | change periods
    Sean Combs | Diddy, P. Diddy; Puff Daddy | 2005

Names inside a group are interchangeable spellings of one expected name. The
brace form ``{Diddy, P. Diddy}, {Puff Daddy}`` is accepted too.
"""
from __future__ import annotations

import json
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import FULL_TERM, ChangePeriod, Corpus, parse_period, query_documents
from .coref import is_super_term
from .terms import TermKey, term_key

log = logging.getLogger(__name__)

STAGES = ("unfiltered", "frequency", "semantic")


class TestsetError(ValueError):
    __test__ = False


@dataclass(frozen=True)
class TestEntry:
    __test__ = False  # not a pytest class

    query: TermKey
    expected: tuple[frozenset[TermKey], ...]
    periods: tuple[ChangePeriod, ...]

    def __post_init__(self):
        if not self.expected:
            raise TestsetError(f"{self.query}: no expected names")
        if not self.periods:
            raise TestsetError(f"{self.query}: no change periods")

    @property
    def names(self) -> set[TermKey]:
        return set().union(*self.expected)


@dataclass(frozen=True)
class ResultSet:
    query: TermKey
    period: ChangePeriod
    terms: Mapping[TermKey, int] = field(default_factory=dict)

    @classmethod
    def of(cls, query, period, terms: Iterable) -> "ResultSet":
        out: dict[TermKey, int] = {}
        for t in terms:
            key, freq = (t.term, t.df) if hasattr(t, "term") else (t, 0)
            out[key] = max(out.get(key, 0), freq)
        return cls(query, period, out)

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self.terms


_BRACES = re.compile(r"\{([^{}]*)\}")


def _parse_groups(text: str) -> list[frozenset[TermKey]]:
    if "{" in text:
        raw = _BRACES.findall(text)
        if _BRACES.sub("", text).strip(" ,;"):
            raise TestsetError(f"stray text outside braces in {text!r}")
    else:
        raw = text.split(";")
    groups = []
    for chunk in raw:
        names = frozenset(term_key(n) for n in chunk.split(",") if n.strip())
        if names:
            groups.append(names)
    return groups


def _parse_periods(text: str) -> list[ChangePeriod]:
    return [parse_period(p) for p in re.split(r"[,\s]+", text.strip()) if p]


def load_testset(path) -> list[TestEntry]:
    """Parse a test-set file; repeated queries are merged into one entry."""
    merged: dict[TermKey, tuple[list, list]] = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise TestsetError(f"cannot read test set {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 3 or not parts[0]:
            raise TestsetError(f"{path}:{lineno}: expected 'query | groups | periods'")
        try:
            q = term_key(parts[0])
            groups = _parse_groups(parts[1])
            periods = _parse_periods(parts[2])
        except ValueError as exc:
            raise TestsetError(f"{path}:{lineno}: {exc}") from exc
        if not groups or not periods:
            raise TestsetError(f"{path}:{lineno}: empty groups or periods")
        slot = merged.setdefault(q, ([], []))
        slot[0].extend(g for g in groups if g not in slot[0])
        slot[1].extend(p for p in periods if p not in slot[1])
    return [TestEntry(q, tuple(g), tuple(sorted(p))) for q, (g, p) in merged.items()]


def _appears(corpus: Corpus, term: TermKey, span: ChangePeriod) -> bool:
    return bool(term.tokens) and bool(query_documents(corpus, term, span, FULL_TERM))


def adapt_testset(testset: Sequence[TestEntry], corpus: Corpus) -> list[TestEntry]:
    """Drop what the corpus cannot support: absent queries, periods outside it, absent names."""
    span = corpus.time_range()
    if span is None:
        return []
    out = []
    for entry in testset:
        if not _appears(corpus, entry.query, span):
            log.info("test set: dropping %s (absent from corpus)", entry.query)
            continue
        periods = tuple(p for p in entry.periods if p.within(span) or p.overlaps(span))
        if not periods:
            log.info("test set: dropping %s (periods outside corpus)", entry.query)
            continue
        groups = []
        for g in entry.expected:
            kept = frozenset(n for n in g if _appears(corpus, n, span))
            if kept:
                groups.append(kept)
        if not groups:
            log.info("test set: dropping %s (no expected name in corpus)", entry.query)
            continue
        out.append(TestEntry(entry.query, tuple(groups), periods))
    return out


def recall_threshold(max_expected_freq: int) -> int:
    if max_expected_freq < 0:
        raise ValueError("frequency must be non-negative")
    if max_expected_freq >= 1000:
        return 100
    if max_expected_freq >= 500:
        return 50
    if max_expected_freq >= 100:
        return 10
    return 5


def expected_frequencies(corpus: Corpus, entry: TestEntry, period: ChangePeriod) -> dict[TermKey, int]:
    """Number of documents in ``period`` containing each expected name."""
    return {n: len(query_documents(corpus, n, period, FULL_TERM)) for n in sorted(entry.names, key=lambda t: t.sort_key)}


@dataclass(frozen=True)
class RecallCount:
    found: int
    eligible: int
    rare: bool = False

    @property
    def value(self) -> float:
        return self.found / self.eligible if self.eligible else 0.0


def recall_count(result: ResultSet, entry: TestEntry, freqs: Mapping[TermKey, int]) -> RecallCount:
    group_freq = [max(freqs.get(n, 0) for n in g) for g in entry.expected]
    found = [any(n in result for n in g) for g in entry.expected]
    threshold = recall_threshold(max(group_freq, default=0))
    eligible = [i for i, f in enumerate(group_freq) if f >= threshold]
    if eligible:
        return RecallCount(sum(found[i] for i in eligible), len(eligible))
    # rarely mentioned entity: finding any expected name counts as full recall
    return RecallCount(int(any(found)), 1, rare=True)


def recall(result: ResultSet, entry: TestEntry, freqs: Mapping[TermKey, int]) -> float:
    return recall_count(result, entry, freqs).value


def is_correct(term: TermKey, entry: TestEntry) -> bool:
    """Equal to, or a sub-term of, an expected name or the query itself."""
    return any(is_super_term(n, term) for n in entry.names | {entry.query})


def precision(result: ResultSet, entry: TestEntry) -> float | None:
    """Fraction of correct result terms; ``None`` for an empty result."""
    if not result.terms:
        return None
    return sum(is_correct(t, entry) for t in result.terms) / len(result.terms)


def f_measure(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass
class QueryResult:
    entry: TestEntry
    period: ChangePeriod
    stages: dict[str, ResultSet]
    freqs: dict[TermKey, int]
    narrowed: ChangePeriod | None = None


@dataclass(frozen=True)
class QueryScore:
    query: str
    period: str
    stage: str
    precision: float | None
    recall: float
    n_results: int
    correct: int
    found: int
    eligible: int


@dataclass(frozen=True)
class StageRow:
    stage: str
    precision: float
    recall: float
    f: float
    micro_precision: float
    micro_recall: float
    micro_f: float
    queries: int
    no_result: int


@dataclass
class EvalReport:
    rows: list[StageRow]
    scores: list[QueryScore]
    failures: list[tuple[str, str, str]] = field(default_factory=list)

    def row(self, stage: str) -> StageRow:
        for r in self.rows:
            if r.stage == stage:
                return r
        raise KeyError(stage)

    def to_text(self) -> str:
        out = ["stage\tprecision\trecall\tf\tmicro_p\tmicro_r\tmicro_f\tqueries\tno_result"]
        for r in self.rows:
            out.append(f"{r.stage}\t{_pct(r.precision)}\t{_pct(r.recall)}\t{_pct(r.f)}\t{_pct(r.micro_precision)}\t"
                       f"{_pct(r.micro_recall)}\t{_pct(r.micro_f)}\t{r.queries}\t{r.no_result}")
        out.append("")
        out.append("query\tperiod\tstage\tprecision\trecall\tresults")
        for s in self.scores:
            p = "-" if s.precision is None else _pct(s.precision)
            out.append(f"{s.query}\t{s.period}\t{s.stage}\t{p}\t{_pct(s.recall)}\t{s.n_results}")
        if self.failures:
            out.append("")
            out.append("failed\tperiod\treason")
            out.extend("\t".join(f) for f in self.failures)
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        data = {
            "stages": [r.__dict__ for r in self.rows],
            "queries": [s.__dict__ for s in self.scores],
            "failures": [list(f) for f in self.failures],
        }
        return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _pct(x: float) -> str:
    return f"{100 * x:.1f}%"


def evaluate(results: Sequence[QueryResult], stages: Sequence[str] = STAGES,
             failures: Sequence[tuple[str, str, str]] = ()) -> EvalReport:
    """Macro averages over (query, period) units, plus micro averages, for every stage."""
    if not results:
        raise ValueError("no evaluated queries: the results cover no test entry")
    rows, scores = [], []
    for stage in stages:
        ps, rs = [], []
        correct = total = found = eligible = 0
        no_result = 0
        for qr in results:
            rset = qr.stages[stage]
            p = precision(rset, qr.entry)
            rc = recall_count(rset, qr.entry, qr.freqs)
            n_ok = sum(is_correct(t, qr.entry) for t in rset.terms)
            scores.append(QueryScore(str(qr.entry.query), str(qr.period), stage, p, rc.value, len(rset), n_ok,
                                     rc.found, rc.eligible))
            if p is None:
                no_result += 1
            else:
                ps.append(p)
            rs.append(rc.value)
            correct += n_ok
            total += len(rset)
            found += rc.found
            eligible += rc.eligible
        mp = math.fsum(ps) / len(ps) if ps else 0.0
        mr = math.fsum(rs) / len(rs)
        up = correct / total if total else 0.0
        ur = found / eligible if eligible else 0.0
        rows.append(StageRow(stage, mp, mr, f_measure(mp, mr), up, ur, f_measure(up, ur), len(results), no_result))
    return EvalReport(rows, scores, list(failures))
