"""A-posteriori frequency filter over the co-reference candidates of a query, and its (k, l) sweep.

Two keep predicates are available:

``prose``    keep iff ``df >= k * max_df`` or ``sf >= l * max_sf``
             (drop only what falls below both lower bounds)
``formula``  keep iff ``df <= k * max_df`` or ``sf <= l * max_sf``
             (the set-builder reading, which acts as an upper bound)
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .coref import Coreferences
from .terms import TermKey

PROSE = "prose"
FORMULA = "formula"
MODES = (PROSE, FORMULA)


@dataclass(frozen=True)
class Candidate:
    term: TermKey
    df: int
    sf: int
    sub: frozenset[TermKey] = frozenset()

    def __post_init__(self):
        if self.df < 1:
            raise ValueError(f"candidate {self.term} has df {self.df} < 1")
        if self.sf < 0:
            raise ValueError(f"candidate {self.term} has negative sf")


@dataclass(frozen=True)
class PostFilterParams:
    k: float = 0.25
    l: float = 0.25
    mode: str = PROSE

    def __post_init__(self):
        for name in ("k", "l"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.mode not in MODES:
            raise ValueError(f"unknown post-filter mode {self.mode!r}")


def candidates_for(q: TermKey, coref: Coreferences) -> list[Candidate]:
    """``(w, df_w, sf_w, sub_w)`` for every co-reference ``w`` of ``q``.

    ``df_w`` is the consolidated document frequency of ``w``'s class and
    ``sf_w`` the source frequency of the class edge between ``q`` and ``w``
    (0 for a direct co-reference whose edge was pruned).
    """
    q = coref.key(q)
    out = []
    for w in sorted(coref.all(q), key=lambda t: t.sort_key):
        cls = coref.classes[w]
        e = coref.cg.edge(q, w)
        out.append(Candidate(w, max(cls.doc_freq, 1), e.src_freq if e else 0, cls.members))
    return out


def aposteriori_filter(candidates: Iterable[Candidate], params: PostFilterParams | None = None) -> list[Candidate]:
    params = params or PostFilterParams()
    cands = list(candidates)
    if not cands:
        return []
    max_df = max(c.df for c in cands)
    max_sf = max(c.sf for c in cands)
    # exact rational bounds keep the predicate invariant under integer rescaling
    df_bound = Fraction(params.k) * max_df
    sf_bound = Fraction(params.l) * max_sf
    if params.mode == PROSE:
        return [c for c in cands if c.df >= df_bound or c.sf >= sf_bound]
    return [c for c in cands if c.df <= df_bound or c.sf <= sf_bound]


@dataclass
class SweepResult:
    best: tuple[float, float]
    grid: dict[tuple[float, float], tuple[float, float, float]]  # (k, l) -> (precision, recall, f)
    values: tuple[float, ...]

    def table(self) -> str:
        lines = ["k\tl\tprecision\trecall\tf"]
        for (k, l), (p, r, f) in sorted(self.grid.items()):
            lines.append(f"{k:.2f}\t{l:.2f}\t{p:.4f}\t{r:.4f}\t{f:.4f}")
        return "\n".join(lines) + "\n"


def grid_values(step: float = 0.05) -> tuple[float, ...]:
    if not 0 < step <= 1:
        raise ValueError("step must lie in (0, 1]")
    n = int(round(1.0 / step))
    return tuple(float(x) for x in np.round(np.linspace(0.0, 1.0, n + 1), 10))


def sweep_parameters(candidate_sets: Mapping[str, Sequence[Candidate]],
                     score: Callable[[Mapping[str, list[Candidate]]], tuple[float, float]],
                     values: Sequence[float] | None = None, mode: str = PROSE) -> SweepResult:
    """Evaluate every ``(k, l)`` cell and pick the best F-measure.

    ``score`` maps the filtered candidate sets (per query) to ``(precision,
    recall)``; it is where downstream semantic filtering and evaluation plug
    in. Ties go to the smallest ``(k, l)``.
    """
    if not candidate_sets:
        raise ValueError("empty test set: nothing to sweep")
    values = tuple(values) if values is not None else grid_values()
    grid = {}
    best, best_f = None, -1.0
    for k, l in itertools.product(values, values):
        params = PostFilterParams(k, l, mode)
        filtered = {q: aposteriori_filter(c, params) for q, c in candidate_sets.items()}
        p, r = score(filtered)
        f = 2 * p * r / (p + r) if p + r > 0 else 0.0
        grid[(k, l)] = (p, r, f)
        if f > best_f + 1e-12:
            best, best_f = (k, l), f
    return SweepResult(best, grid, values)
