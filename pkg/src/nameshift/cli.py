"""Command-line entry point.

Exit codes: 0 success, 1 some queries failed, 2 configuration error.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .corpus import parse_period
from .coref import UnknownTermError
from .evaluation import STAGES, TestsetError
from .graph import QueryAbsentError
from .pipeline import ConfigError, Pipeline, PipelineConfig, filter_unit, load_config
from .postfilter import MODES
from .reduction import NoFullTermOccurrence
from .semantic import KBUnavailable, SnapshotError
from .terms import term_key

EXIT_OK, EXIT_PARTIAL, EXIT_CONFIG = 0, 1, 2

log = logging.getLogger("nameshift")


def _flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("inputs")
    g.add_argument("--config", type=Path, help="key = value file; flags override its entries")
    g.add_argument("--corpus", type=Path, help="line-delimited JSON corpus")
    g.add_argument("--testset", type=Path, help="test-set file (query | groups | periods)")
    g.add_argument("--output", type=Path, help="output directory (default nameshift-out)")
    g.add_argument("--english-gate", action="store_true", default=None, help="drop documents that do not look English")
    g = p.add_argument_group("knowledge base")
    g.add_argument("--kb-snapshot", type=Path, help="offline JSONL snapshot")
    g.add_argument("--kb-endpoint", help="SPARQL endpoint URL")
    g.add_argument("--kb-cache", type=Path, help="response cache directory for --kb-endpoint")
    g = p.add_argument_group("detection")
    g.add_argument("--query", help="run a single query instead of the test set")
    g.add_argument("--period", help="change period for --query: YYYY or YYYY-MM")
    g.add_argument("--window", type=int, help="co-occurrence window in tokens (default 10)")
    g.add_argument("--target-terms", type=int, help="a-priori filter stops once this many terms remain (default 50)")
    g.add_argument("--decay", type=float, help="a-priori threshold decay factor (default 0.5)")
    g.add_argument("--floor", type=float, help="lowest a-priori threshold (default 2)")
    g.add_argument("--no-prolong", dest="prolong", action="store_false", default=None, help="skip the prolong rule")
    g = p.add_argument_group("filtering")
    g.add_argument("--k", type=float, help="document-frequency fraction (default 0.25)")
    g.add_argument("--l", type=float, help="source-frequency fraction (default 0.25)")
    g.add_argument("--mode", dest="postfilter_mode", choices=MODES, help="frequency-filter variant (default prose)")
    g.add_argument("--no-frequency", dest="frequency_filter", action="store_false", default=None,
                   help="pass candidates through the frequency filter unchanged")
    g.add_argument("--no-semantic", dest="semantic_filter", action="store_false", default=None,
                   help="pass candidates through the semantic filter unchanged")
    g.add_argument("--sweep", dest="sweep_step", type=float, help="grid step for the sweep command (default 0.05)")
    g.add_argument("--workers", type=int, help="queries processed in parallel (default 1)")
    p.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nameshift", description="Detect temporal co-references of named entities.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [("ingest", "validate the corpus and store a normalized copy"),
                       ("detect", "reduce, build context graphs and detect co-reference candidates"),
                       ("filter", "apply the frequency and semantic filters to detected candidates"),
                       ("evaluate", "score filtered results against the test set"),
                       ("sweep", "grid search over the frequency-filter fractions"),
                       ("run", "detect, filter and evaluate in one go")]:
        _flags(sub.add_parser(name, help=text, description=text))
    return parser


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    config = load_config(args.config) if args.config else PipelineConfig()
    names = {f.name for f in dataclasses.fields(PipelineConfig)}
    return config.updated(**{k: v for k, v in vars(args).items() if k in names})


def _print_stages(stages) -> None:
    for stage in STAGES:
        print(f"[{stage}]")
        for c in stages[stage]:
            print(f"  {c.term}\tdf={c.df}\tsf={c.sf}")


def _single(pipe: Pipeline, args) -> int:
    if not args.period:
        raise ConfigError("--query needs --period")
    unit = pipe.detect_one(term_key(args.query), parse_period(args.period))
    print(f"query {unit.query}, period {unit.period}, narrowed to {unit.narrowed}")
    if args.command == "detect":
        for c in unit.candidates:
            print(f"  {c.term}\tdf={c.df}\tsf={c.sf}")
        return EXIT_OK
    _print_stages(filter_unit(unit, pipe.config, pipe.kb).stages)
    return EXIT_OK


def dispatch(args) -> int:
    config = config_from_args(args)
    if args.command == "ingest":
        _validate_ingest(config)
    else:
        config.validate(("corpus",) if args.query else ("corpus", "testset"))
    pipe = Pipeline(config)
    if args.query:
        return _single(pipe, args)
    if args.command == "ingest":
        summary = pipe.ingest()
        print(f"ingested {summary['documents']} documents from {summary['sources']} sources "
              f"({summary['skipped']} skipped), {summary['time_range']}")
        return EXIT_OK
    if args.command == "detect":
        units, failures = pipe.detect()
        print(f"{len(units)} units written to {pipe.out / 'units'}, {len(failures)} failed")
        return EXIT_PARTIAL if failures else EXIT_OK
    if args.command == "filter":
        units, failures = pipe.load_units()
        pipe.filter(units)
        print(f"{len(units)} results written to {pipe.out / 'results'}")
        return EXIT_PARTIAL if failures else EXIT_OK
    if args.command == "evaluate":
        _, failures = pipe.load_units()
        report = pipe.evaluate(pipe.load_results(), failures)
        sys.stdout.write(report.to_text())
        return EXIT_PARTIAL if failures else EXIT_OK
    if args.command == "sweep":
        units, failures = pipe.load_units()
        result = pipe.sweep(units)
        k, l = result.best
        print(f"best k={k:.2f} l={l:.2f}; grid written to {pipe.out / 'sweep.tsv'}")
        return EXIT_PARTIAL if failures else EXIT_OK
    run = pipe.run()
    if run.report is not None:
        sys.stdout.write(run.report.to_text())
    else:
        print("no query could be processed", file=sys.stderr)
    return EXIT_PARTIAL if run.partial else EXIT_OK


def _validate_ingest(config: PipelineConfig) -> None:
    if config.corpus is None or not Path(config.corpus).is_file():
        raise ConfigError(f"corpus file {config.corpus} does not exist")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return dispatch(args)
    except (NoFullTermOccurrence, QueryAbsentError, UnknownTermError) as exc:
        print(f"nameshift: query failed: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    except (ConfigError, TestsetError, SnapshotError, ValueError) as exc:
        print(f"nameshift: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"nameshift: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KBUnavailable as exc:
        print(f"nameshift: knowledge base unavailable: {exc}", file=sys.stderr)
        return EXIT_PARTIAL


if __name__ == "__main__":
    sys.exit(main())
