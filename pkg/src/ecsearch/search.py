"""Greedy hill-climbing over essential graphs with the inclusion boundary neighbourhood."""
from __future__ import annotations

import csv
import logging
import random
import time
from dataclasses import dataclass, field
from typing import Sequence

from .essential import EssentialGraph, essentialize, validate_essential
from .graph import MixedGraph, iter_pairs
from .neighbourhood import Characterization, EnumerationLimits, inclusion_boundary
from .scoring import BDeu, DataError, Dataset, Metric, Scorer

log = logging.getLogger(__name__)

TIE_BREAK_LEXICOGRAPHIC = "lexicographic"


@dataclass
class SearchConfig:
    """Hill-climbing settings.

    ``start`` is ``"empty"``, ``"complete"`` or an essential graph. ``seed``
    only matters when ``restarts`` > 0; each restart begins from the
    essential graph of a random DAG.
    """

    metric: Metric = field(default_factory=BDeu)
    start: str | MixedGraph = "empty"
    max_iterations: int = 1000
    max_subsets_per_pair: int | None = None
    tie_break: str = TIE_BREAK_LEXICOGRAPHIC
    seed: int | None = None
    restarts: int = 0
    threads: int = 1
    min_improvement: float = 1e-9

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.tie_break != TIE_BREAK_LEXICOGRAPHIC:
            raise ValueError(f"unknown tie-break rule {self.tie_break!r}")
        if isinstance(self.start, str) and self.start not in ("empty", "complete"):
            raise ValueError(f"unknown start {self.start!r}")
        if self.restarts < 0:
            raise ValueError("restarts must be non-negative")


@dataclass(frozen=True)
class TraceStep:
    iteration: int
    characterization: Characterization
    delta: float
    score: float
    n_neighbours: int
    partial: bool
    seconds: float


@dataclass
class SearchResult:
    graph: EssentialGraph
    score: float
    trace: list[TraceStep]
    partial: bool = False
    stopped: str = "local_optimum"

    @property
    def certificate(self) -> str:
        """``local_optimum`` when every neighbourhood was enumerated exactly."""
        if self.stopped != "local_optimum":
            return self.stopped
        return "best_found" if self.partial else "local_optimum"


def _start_graph(start, n: int) -> EssentialGraph:
    if start == "empty":
        return MixedGraph.empty(n)
    if start == "complete":
        return MixedGraph.complete_undirected(n)
    if start.n != n:
        raise DataError("start graph and dataset have different numbers of variables")
    res = validate_essential(start)
    if not res:
        raise ValueError(f"start graph is not essential: {res.violation.describe()}")
    return start


def random_essential_graph(n: int, rng: random.Random, p: float = 0.3) -> EssentialGraph:
    order = list(range(n))
    rng.shuffle(order)
    arrows = [(order[i], order[j]) for i, j in iter_pairs(n) if rng.random() < p]
    return essentialize(MixedGraph(n, arrows))


def _climb(start: EssentialGraph, scorer: Scorer, cfg: SearchConfig) -> SearchResult:
    limits = EnumerationLimits(cfg.max_subsets_per_pair)
    current = start
    score = scorer.score_graph(current)
    trace: list[TraceStep] = []
    partial = False
    for it in range(1, cfg.max_iterations + 1):
        t0 = time.perf_counter()
        nbs = inclusion_boundary(current, limits, cfg.threads)
        partial |= nbs.partial
        best = None
        best_key = None
        for nb in nbs:
            d = scorer.delta(nb.delta)
            key = (-d, nb.characterization.sort_key())
            if best_key is None or key < best_key:
                best, best_key = nb, key
        if best is None or -best_key[0] <= cfg.min_improvement:
            return SearchResult(current, score, trace, partial, "local_optimum")
        delta = -best_key[0]
        current = best.result
        score += delta
        trace.append(TraceStep(it, best.characterization, delta, score, len(nbs), nbs.partial,
                               time.perf_counter() - t0))
        log.debug("iteration %d: %s delta=%.6g score=%.6f |N|=%d", it, best.op, delta, score, len(nbs))
    return SearchResult(current, score, trace, partial, "max_iterations")


def hill_climb(data: Dataset, cfg: SearchConfig) -> SearchResult:
    """Move to the best strictly improving neighbour until none exists.

    Ties are broken by the smallest (pair, operator kind, created v-structures).
    """
    n = len(data.names)
    scorer = Scorer(data, cfg.metric)
    if cfg.start == "complete":
        log.warning("starting from the complete graph: the neighbourhood removes one edge "
                    "at a time, so pruning from the top is slow")
    best = _climb(_start_graph(cfg.start, n), scorer, cfg)
    rng = random.Random(cfg.seed)
    for _ in range(cfg.restarts):
        res = _climb(random_essential_graph(n, rng), scorer, cfg)
        if res.score > best.score + cfg.min_improvement:
            best = res
    return best


def format_characterization(c: Characterization, names: Sequence[str]) -> tuple[str, str, str]:
    a, b = c.op.a, c.op.b
    o = ";".join(f"{names[v.head]}:{names[v.tails[0]]},{names[v.tails[1]]}" for v in sorted(c.o))
    return f"{names[a]}|{names[b]}", c.op.kind, o


def write_trace(path, trace: Sequence[TraceStep], names: Sequence[str]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "pair", "kind", "created", "delta", "score",
                    "neighbours", "partial", "seconds"])
        for s in trace:
            pair, kind, o = format_characterization(s.characterization, names)
            w.writerow([s.iteration, pair, kind, o, repr(s.delta), repr(s.score),
                        s.n_neighbours, int(s.partial), f"{s.seconds:.6f}"])
