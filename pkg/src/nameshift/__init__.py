"""Temporal co-reference detection for named entities in blog corpora.

The usual entry points are :func:`run_pipeline` with a :class:`PipelineConfig`
and the ``nameshift`` command line tool. The building blocks are exported
here for library use.
"""

__version__ = "0.1.0"

from .corpus import ChangePeriod, Corpus, Document, ingest_corpus, parse_period
from .coref import (Coreferences, compute_subterm_classes, consolidate, corefs, detect, direct_corefs,
                    indirect_corefs, prolong)
from .evaluation import EvalReport, TestEntry, evaluate, load_testset, precision, recall, recall_threshold
from .extraction import extract_terms
from .graph import AprioriParams, ContextGraph, apriori_filter, build_context_graph
from .pipeline import ConfigError, Pipeline, PipelineConfig, load_config, run_pipeline
from .postfilter import Candidate, PostFilterParams, aposteriori_filter, sweep_parameters
from .reduction import reduce
from .semantic import SnapshotKB, SparqlKB, StaticContext, semantic_filter
from .terms import TermKey, term_key

__all__ = [
    "AprioriParams", "Candidate", "ChangePeriod", "ConfigError", "ContextGraph", "Coreferences", "Corpus",
    "Document", "EvalReport", "Pipeline", "PipelineConfig", "PostFilterParams", "SnapshotKB", "SparqlKB",
    "StaticContext", "TermKey", "TestEntry", "aposteriori_filter", "apriori_filter", "build_context_graph",
    "compute_subterm_classes", "consolidate", "corefs", "detect", "direct_corefs", "evaluate", "extract_terms",
    "indirect_corefs", "ingest_corpus", "load_config", "load_testset", "parse_period", "precision", "prolong",
    "recall", "recall_threshold", "reduce", "run_pipeline", "semantic_filter", "sweep_parameters", "term_key",
]
