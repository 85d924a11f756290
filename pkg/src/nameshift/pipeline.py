"""The batch job chain: reduce, build the context graph, detect co-references, filter, evaluate.

Detection output is persisted per (query, period) as a JSON "unit" so the
filter, sweep and evaluate steps can run on their own. A unit stores a hash
of everything that influenced it and is reused while that hash matches.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import os
import re
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import __version__
from .coref import Coreferences, UnknownTermError, detect, format_classes
from .corpus import ChangePeriod, Corpus, CorpusError, ingest_corpus, parse_period, write_corpus
from .evaluation import (STAGES, EvalReport, QueryResult, ResultSet, TestEntry, adapt_testset, evaluate,
                         expected_frequencies, load_testset)
from .extraction import DEFAULT_WINDOW, EXTRACTOR_VERSION, ExtractionCache
from .graph import AprioriParams, QueryAbsentError, apriori_filter, build_context_graph, write_graph
from .postfilter import MODES, PROSE, Candidate, PostFilterParams, aposteriori_filter, candidates_for, sweep_parameters
from .reduction import NoFullTermOccurrence, reduce
from .semantic import KnowledgeBase, SnapshotKB, SparqlKB, StaticContext, semantic_filter
from .semantic.filtering import CorefContext
from .terms import TermKey, term_key

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}
_PATH_KEYS = ("corpus", "testset", "kb_snapshot", "kb_cache", "output")


@dataclass
class PipelineConfig:
    corpus: Path | None = None
    testset: Path | None = None
    kb_snapshot: Path | None = None
    kb_endpoint: str | None = None
    kb_cache: Path | None = None
    output: Path = Path("nameshift-out")
    window: int = DEFAULT_WINDOW
    english_gate: bool = False
    target_terms: int = 50
    decay: float = 0.5
    doc_fraction: float = 0.1
    src_fraction: float = 0.1
    rel_src_fraction: float = 0.05
    floor: float = 2.0
    soft_ratio_low: float = 0.5
    soft_ratio_high: float = 2.0
    k: float = 0.25
    l: float = 0.25
    postfilter_mode: str = PROSE
    prolong: bool = True
    frequency_filter: bool = True
    semantic_filter: bool = True
    sweep_step: float = 0.05
    workers: int = 1

    @property
    def apriori(self) -> AprioriParams:
        return AprioriParams(target_terms=self.target_terms, decay=self.decay, doc_fraction=self.doc_fraction,
                             src_fraction=self.src_fraction, rel_src_fraction=self.rel_src_fraction, floor=self.floor)

    @property
    def postfilter(self) -> PostFilterParams:
        return PostFilterParams(self.k, self.l, self.postfilter_mode)

    @property
    def needs_kb(self) -> bool:
        return self.prolong or self.semantic_filter

    def updated(self, **overrides) -> "PipelineConfig":
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def validate(self, need=("corpus", "testset")) -> "PipelineConfig":
        for key in need:
            path = getattr(self, key)
            if path is None:
                raise ConfigError(f"missing required setting {key!r}")
            if not Path(path).is_file():
                raise ConfigError(f"{key} file {path} does not exist")
        if self.kb_snapshot and self.kb_endpoint:
            raise ConfigError("select exactly one knowledge base: kb_snapshot or kb_endpoint")
        if self.needs_kb and not (self.kb_snapshot or self.kb_endpoint):
            raise ConfigError("prolong rule and semantic filter need a knowledge base (kb_snapshot or kb_endpoint)")
        if self.kb_snapshot and not Path(self.kb_snapshot).is_file():
            raise ConfigError(f"kb_snapshot file {self.kb_snapshot} does not exist")
        if self.window < 1:
            raise ConfigError("window must be >= 1")
        if self.postfilter_mode not in MODES:
            raise ConfigError(f"postfilter_mode must be one of {MODES}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        try:
            self.apriori
            self.postfilter
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return self

    def detection_hash(self, corpus_digest: str) -> str:
        keys = ("window", "english_gate", "target_terms", "decay", "doc_fraction", "src_fraction",
                "rel_src_fraction", "floor", "soft_ratio_low", "soft_ratio_high", "prolong")
        blob = {k: getattr(self, k) for k in keys}
        blob.update(corpus=corpus_digest, kb=str(self.kb_snapshot or self.kb_endpoint or ""),
                    version=__version__, extractor=EXTRACTOR_VERSION)
        return hashlib.sha256(json.dumps(blob, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _coerce(name: str, raw: str, base: Path | None):
    fld = {f.name: f for f in dataclasses.fields(PipelineConfig)}.get(name)
    if fld is None:
        raise ConfigError(f"unknown configuration key {name!r}")
    default = getattr(PipelineConfig(), name)
    raw = raw.strip()
    try:
        if name in _PATH_KEYS:
            p = Path(raw).expanduser()
            return p if p.is_absolute() or base is None else base / p
        if isinstance(default, bool):
            return _BOOL[raw.lower()]
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return raw
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad value for {name}: {raw!r}") from exc


def load_config(path) -> PipelineConfig:
    """Read ``key = value`` lines; relative paths are taken relative to the file."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = _coerce(key.replace("-", "_"), raw, path.parent)
    return PipelineConfig(**values)


def open_kb(config: PipelineConfig) -> KnowledgeBase | None:
    if config.kb_snapshot:
        return SnapshotKB.load(config.kb_snapshot)
    if config.kb_endpoint:
        return SparqlKB(config.kb_endpoint, cache_dir=config.kb_cache)
    return None


def _digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()[:16]


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def unit_slug(query: TermKey, period: ChangePeriod) -> str:
    name = re.sub(r"[^a-z0-9]+", "-", str(query).lower()).strip("-") or "query"
    return f"{name}_{period.start.isoformat()}_{period.end.isoformat()}"


# -- detection units ----------------------------------------------------------------

@dataclass
class DetectionUnit:
    query: TermKey
    period: ChangePeriod
    narrowed: ChangePeriod
    candidates: list[Candidate]
    context: StaticContext
    freqs: dict[TermKey, int]
    key: str = ""
    info: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> str:
        def pairs(items):
            return [[str(t), f] for t, f in items]

        terms = [self.query] + [c.term for c in self.candidates]
        return json.dumps({
            "query": str(self.query),
            "period": str(self.period),
            "narrowed": str(self.narrowed),
            "key": self.key,
            "info": self.info,
            "candidates": [[str(c.term), c.df, c.sf, sorted(str(m) for m in c.sub)] for c in self.candidates],
            "context": {str(t): {"direct": pairs(self.context.direct(t)), "indirect": pairs(self.context.indirect(t))}
                        for t in terms},
            "freqs": pairs(sorted(self.freqs.items(), key=lambda kv: kv[0].sort_key)),
        }, indent=1, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "DetectionUnit":
        d = json.loads(text)

        def pairs(items):
            return [(term_key(s), int(f)) for s, f in items]

        context = StaticContext({term_key(s): pairs(v["direct"]) for s, v in d["context"].items()},
                                {term_key(s): pairs(v["indirect"]) for s, v in d["context"].items()})
        cands = [Candidate(term_key(s), int(df), int(sf), frozenset(term_key(m) for m in sub))
                 for s, df, sf, sub in d["candidates"]]
        return cls(term_key(d["query"]), parse_period(d["period"]), parse_period(d["narrowed"]), cands, context,
                   dict(pairs(d["freqs"])), d.get("key", ""), d.get("info", {}))


def detect_unit(corpus: Corpus, q: TermKey, period: ChangePeriod, config: PipelineConfig,
                kb: KnowledgeBase | None, cache: ExtractionCache | None = None,
                artifacts: Path | None = None, entry: TestEntry | None = None) -> DetectionUnit:
    """Reduction, graph building, a-priori filter and co-reference detection for one query and period.

    With a test entry the expected names' frequencies are stored for evaluation.
    """
    red = reduce(corpus, q, period)
    graph = build_context_graph(red.documents, config.window, cache)
    filtered = apriori_filter(graph, q, config.apriori)
    rejected: dict = {}
    graph2, coref = detect(filtered, kb if config.prolong else None, config.prolong,
                           (config.soft_ratio_low, config.soft_ratio_high), rejected)
    qk = coref.key(q)
    cands = candidates_for(qk, coref)
    ctx = CorefContext(coref, graph2)
    terms = [qk] + [c.term for c in cands]
    context = StaticContext({t: ctx.direct(t) for t in terms}, {t: ctx.indirect(t) for t in terms})
    info = {
        "sources": len(red.dataset.sources),
        "documents": len(red.documents),
        "graph_nodes": len(graph.nodes),
        "filtered_nodes": len(filtered.nodes),
        "prolonged": sorted(str(t) for t in graph2.nodes if t not in filtered.nodes),
        "prolong_rejected": sorted(str(t) for t in rejected),
    }
    if artifacts is not None:
        write_graph(filtered, artifacts)
        _write_atomic(artifacts / "classes.txt", format_classes(coref.classes) + "\n")
    freqs = expected_frequencies(corpus, entry, period) if entry is not None else {}
    return DetectionUnit(qk, period, red.period, cands, context, freqs, info=info)


@dataclass
class StageResult:
    stages: dict[str, list[Candidate]]
    decisions: list = field(default_factory=list)


def filter_unit(unit: DetectionUnit, config: PipelineConfig, kb: KnowledgeBase | None,
                params: PostFilterParams | None = None) -> StageResult:
    unfiltered = list(unit.candidates)
    freq = aposteriori_filter(unfiltered, params or config.postfilter) if config.frequency_filter else unfiltered
    decisions: list = []
    if config.semantic_filter and kb is not None:
        sem = semantic_filter(unit.query, freq, unit.context, kb, decisions)
    else:
        sem = list(freq)
    return StageResult({"unfiltered": unfiltered, "frequency": freq, "semantic": sem}, decisions)


def _query_result(unit: DetectionUnit, entry: TestEntry, stages: Mapping[str, Sequence[Candidate]]) -> QueryResult:
    sets = {s: ResultSet.of(unit.query, unit.period, stages[s]) for s in stages}
    return QueryResult(entry, unit.period, sets, dict(unit.freqs), unit.narrowed)


# -- orchestration --------------------------------------------------------------------

@dataclass
class PipelineRun:
    report: EvalReport | None
    results: list[QueryResult]
    units: list[DetectionUnit]
    failures: list[tuple[str, str, str]]

    @property
    def partial(self) -> bool:
        return bool(self.failures)


class Pipeline:
    def __init__(self, config: PipelineConfig):
        self.config = config
        self.out = Path(config.output)
        self._corpus: Corpus | None = None
        self._kb: KnowledgeBase | None = None
        self._kb_loaded = False

    def _ingest_stamp(self) -> dict:
        return {"source": _digest(self.config.corpus), "english_gate": self.config.english_gate}

    @property
    def corpus(self) -> Corpus:
        """The ingested corpus from ``ingest`` when it is current, else a fresh ingestion."""
        if self._corpus is None:
            stamp_path = self.out / "ingest.json"
            try:
                if stamp_path.exists() and json.loads(stamp_path.read_text())["stamp"] == self._ingest_stamp():
                    self._corpus = ingest_corpus(self.out / "corpus.jsonl")
                else:
                    self._corpus = ingest_corpus(self.config.corpus, english_gate=self.config.english_gate)
            except CorpusError as exc:
                raise ConfigError(str(exc)) from exc
        return self._corpus

    def ingest(self) -> dict:
        try:
            corpus = ingest_corpus(self.config.corpus, english_gate=self.config.english_gate)
        except CorpusError as exc:
            raise ConfigError(str(exc)) from exc
        write_corpus(corpus, self.out / "corpus.jsonl")
        span = corpus.time_range()
        summary = {"stamp": self._ingest_stamp(), "documents": len(corpus), "sources": len(corpus.sources),
                   "skipped": corpus.skipped, "time_range": str(span) if span else None}
        _write_atomic(self.out / "ingest.json", json.dumps(summary, indent=1, sort_keys=True) + "\n")
        self._corpus = corpus
        return summary

    @property
    def kb(self) -> KnowledgeBase | None:
        if not self._kb_loaded:
            try:
                self._kb = open_kb(self.config)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            self._kb_loaded = True
        return self._kb

    def testset(self) -> list[TestEntry]:
        return adapt_testset(load_testset(self.config.testset), self.corpus)

    def unit_path(self, q: TermKey, period: ChangePeriod) -> Path:
        return self.out / "units" / f"{unit_slug(q, period)}.json"

    def detect_one(self, q: TermKey, period: ChangePeriod) -> DetectionUnit:
        """Ad hoc detection for a query outside the test set (not cached)."""
        return detect_unit(self.corpus, q, period, self.config, self.kb, None,
                           self.out / "units" / unit_slug(q, period))

    def detect(self) -> tuple[list[tuple[TestEntry, DetectionUnit]], list[tuple[str, str, str]]]:
        entries = self.testset()
        digest = _digest(self.config.corpus)
        key = self.config.detection_hash(digest)
        cache = ExtractionCache(self.out / "cache" / f"extraction-{digest}.jsonl")
        jobs = [(e, p) for e in entries for p in e.periods]

        def run(job):
            entry, period = job
            path = self.unit_path(entry.query, period)
            if path.exists():
                try:
                    unit = DetectionUnit.from_json(path.read_text(encoding="utf-8"))
                    if unit.key == key:
                        return entry, unit, None
                except (ValueError, KeyError) as exc:
                    log.warning("ignoring unreadable unit %s: %s", path, exc)
            try:
                unit = detect_unit(self.corpus, entry.query, period, self.config, self.kb, cache,
                                   self.out / "units" / unit_slug(entry.query, period), entry)
            except (NoFullTermOccurrence, QueryAbsentError, UnknownTermError) as exc:
                return entry, None, (str(entry.query), str(period), f"{type(exc).__name__}: {exc}")
            unit.key = key
            _write_atomic(path, unit.to_json())
            return entry, unit, None

        with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
            outcomes = list(pool.map(run, jobs))
        cache.flush()
        units, failures = [], []
        for entry, unit, failure in outcomes:
            if failure:
                log.warning("query %s, period %s failed: %s", *failure)
                failures.append(failure)
            else:
                units.append((entry, unit))
        _write_atomic(self.out / "failures.tsv", "".join("\t".join(f) + "\n" for f in failures))
        return units, failures

    def load_units(self) -> tuple[list[tuple[TestEntry, DetectionUnit]], list[tuple[str, str, str]]]:
        units, failures = [], []
        for entry in self.testset():
            for period in entry.periods:
                path = self.unit_path(entry.query, period)
                if path.exists():
                    units.append((entry, DetectionUnit.from_json(path.read_text(encoding="utf-8"))))
        fpath = self.out / "failures.tsv"
        if fpath.exists():
            failures = [tuple(line.split("\t")) for line in fpath.read_text(encoding="utf-8").splitlines() if line]
        if not units and not failures:
            raise FileNotFoundError(f"no detection output under {self.out / 'units'}; run 'detect' first")
        return units, failures

    def filter(self, units, params: PostFilterParams | None = None) -> list[QueryResult]:
        results = []
        for entry, unit in units:
            staged = filter_unit(unit, self.config, self.kb, params)
            results.append(_query_result(unit, entry, staged.stages))
            out = {s: [[str(c.term), c.df, c.sf] for c in staged.stages[s]] for s in STAGES}
            out["semantic_decisions"] = [[str(d.term), d.verdict, d.reason, d.resource.name if d.resource else None]
                                         for d in staged.decisions]
            _write_atomic(self.out / "results" / f"{unit_slug(unit.query, unit.period)}.json",
                          json.dumps(out, indent=1, ensure_ascii=False) + "\n")
        return results

    def load_results(self) -> list[QueryResult]:
        results = []
        units, _ = self.load_units()
        for entry, unit in units:
            path = self.out / "results" / f"{unit_slug(unit.query, unit.period)}.json"
            if not path.exists():
                raise FileNotFoundError(f"no filter output {path}; run 'filter' first")
            d = json.loads(path.read_text(encoding="utf-8"))
            stages = {s: [Candidate(term_key(t), int(df), int(sf)) for t, df, sf in d[s]] for s in STAGES}
            results.append(_query_result(unit, entry, stages))
        return results

    def evaluate(self, results: list[QueryResult], failures) -> EvalReport:
        report = evaluate(results, STAGES, failures)
        _write_atomic(self.out / "report.txt", report.to_text())
        _write_atomic(self.out / "report.json", report.to_json())
        return report

    def sweep(self, units, step: float | None = None):
        """Grid over (k, l) scored after semantic filtering.

        Candidates are judged independently by the semantic filter, so each
        candidate's verdict is computed once and reused in every cell.
        """
        verdicts = {}
        for entry, unit in units:
            if self.config.semantic_filter and self.kb is not None:
                kept = semantic_filter(unit.query, unit.candidates, unit.context, self.kb)
            else:
                kept = unit.candidates
            verdicts[id(unit)] = {c.term for c in kept}
        by_id = {str(id(u)): (e, u) for e, u in units}

        def score(filtered):
            results = []
            for uid, cands in filtered.items():
                entry, unit = by_id[uid]
                sem = [c for c in cands if c.term in verdicts[id(unit)]]
                results.append(_query_result(unit, entry, {"semantic": sem}))
            row = evaluate(results, ("semantic",)).rows[0]
            return row.precision, row.recall

        from .postfilter import grid_values
        values = grid_values(step or self.config.sweep_step)
        result = sweep_parameters({uid: u.candidates for uid, (e, u) in by_id.items()}, score, values,
                                  self.config.postfilter_mode)
        _write_atomic(self.out / "sweep.tsv", result.table())
        return result

    def run(self) -> PipelineRun:
        units, failures = self.detect()
        if not units:
            return PipelineRun(None, [], [], failures)
        results = self.filter(units)
        report = self.evaluate(results, failures)
        return PipelineRun(report, results, [u for _, u in units], failures)


def run_pipeline(config: PipelineConfig) -> PipelineRun:
    config.validate()
    return Pipeline(config).run()
