"""Decomposable, score-equivalent metrics (BIC, BDeu) over categorical data."""
from __future__ import annotations

import csv
import math
import threading
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import gammaln

from .essential import consistent_extension
from .graph import GraphError, MixedGraph


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class Dataset:
    names: tuple[str, ...]
    arities: tuple[int, ...]
    values: np.ndarray  # (rows, variables), integer category codes

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 2 or vals.shape[1] != len(self.names):
            raise DataError("data matrix does not match the variable list")
        if len(self.arities) != len(self.names):
            raise DataError("one arity per variable is required")
        if any(r < 1 for r in self.arities):
            raise DataError("arities must be at least 1")
        if vals.size and (vals.min() < 0 or np.any(vals.max(axis=0) >= np.asarray(self.arities))):
            raise DataError("a cell exceeds its variable's arity")
        object.__setattr__(self, "values", vals.astype(np.int64, copy=False))

    @classmethod
    def from_array(cls, values, names: Sequence[str] | None = None,
                   arities: Sequence[int] | None = None) -> "Dataset":
        values = np.asarray(values, dtype=np.int64)
        if names is None:
            names = [f"x{i}" for i in range(values.shape[1])]
        if arities is None:
            arities = [int(values[:, j].max()) + 1 if len(values) else 1 for j in range(values.shape[1])]
        return cls(tuple(names), tuple(int(r) for r in arities), values)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    def reorder(self, names: Sequence[str]) -> "Dataset":
        """Columns rearranged to follow ``names`` (which must be the same variable set)."""
        if sorted(names) != sorted(self.names):
            raise DataError(
                f"graph vertices {sorted(names)} do not match data variables {sorted(self.names)}"
            )
        idx = [self.names.index(nm) for nm in names]
        return Dataset(tuple(names), tuple(self.arities[i] for i in idx), self.values[:, idx])


def read_csv(path, arity: Mapping[str, int] | None = None) -> Dataset:
    """Load categorical data; header row holds the variable names.

    A column whose cells are all non-negative integers is used as-is;
    any other column is coded by order of first appearance. Arities default
    to max code + 1 unless given in ``arity``.
    """
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise DataError(f"{path}: empty file")
    names, body = [c.strip() for c in rows[0]], rows[1:]
    if not body:
        raise DataError(f"{path}: no data rows")
    if any(len(r) != len(names) for r in body):
        raise DataError(f"{path}: ragged rows")
    cols = []
    for j in range(len(names)):
        cells = [r[j].strip() for r in body]
        if all(c.isdigit() for c in cells):
            cols.append([int(c) for c in cells])
        else:
            codes: dict[str, int] = {}
            cols.append([codes.setdefault(c, len(codes)) for c in cells])
    values = np.array(cols, dtype=np.int64).T
    arity = dict(arity or {})
    unknown = set(arity) - set(names)
    if unknown:
        raise DataError(f"arity given for unknown variables {sorted(unknown)}")
    arities = [arity.get(nm, int(values[:, j].max()) + 1) for j, nm in enumerate(names)]
    return Dataset(tuple(names), tuple(arities), values)


@dataclass(frozen=True)
class BIC:
    name = "bic"


@dataclass(frozen=True)
class BDeu:
    ess: float = 1.0
    name = "bdeu"

    def __post_init__(self):
        if not self.ess > 0:
            raise ValueError("equivalent sample size must be positive")


Metric = BIC | BDeu


def make_metric(name: str, ess: float = 1.0) -> Metric:
    name = name.lower()
    if name == "bic":
        return BIC()
    if name == "bdeu":
        return BDeu(ess)
    raise ValueError(f"unknown metric {name!r}")


def _counts(data: Dataset, x: int, parents: Sequence[int]) -> np.ndarray:
    """Contingency table: one row per observed parent configuration, one column per state of x."""
    r = data.arities[x]
    cols = data.values
    if parents:
        config = np.ravel_multi_index(cols[:, list(parents)].T, [data.arities[p] for p in parents])
        _, config = np.unique(config, return_inverse=True)
        q = int(config.max()) + 1
    else:
        config = np.zeros(data.n_rows, dtype=np.int64)
        q = 1
    return np.bincount(config * r + cols[:, x], minlength=q * r).reshape(q, r)


def local_score(x: int, parents: Iterable[int], data: Dataset, metric: Metric) -> float:
    parents = sorted(set(parents))
    if x in parents:
        raise GraphError(f"vertex {x} listed among its own parents")
    if not 0 <= x < len(data.names) or any(not 0 <= p < len(data.names) for p in parents):
        raise GraphError("local score key refers to unknown variables")
    if data.n_rows == 0:
        raise DataError("empty dataset")
    counts = _counts(data, x, parents)
    r = data.arities[x]
    q_all = math.prod(data.arities[p] for p in parents)
    n_j = counts.sum(axis=1)
    if isinstance(metric, BIC):
        c = counts[counts > 0]
        ll = float(np.sum(c * np.log(c)) - np.sum(n_j * np.log(n_j)))
        return ll - 0.5 * math.log(data.n_rows) * (r - 1) * q_all
    if isinstance(metric, BDeu):
        a_j = metric.ess / q_all
        a_jk = a_j / r
        # unobserved parent configurations contribute zero
        return float(
            np.sum(gammaln(a_j) - gammaln(a_j + n_j))
            + np.sum(gammaln(a_jk + counts) - gammaln(a_jk))
        )
    raise TypeError(f"unsupported metric {metric!r}")


@dataclass
class LocalScoreCache:
    """Memoized local scores for one dataset and metric; safe to share across threads."""

    data: Dataset
    metric: Metric
    hits: int = 0
    misses: int = 0
    _table: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def local(self, x: int, parents: Iterable[int]) -> float:
        key = (x, tuple(sorted(parents)))
        with self._lock:
            val = self._table.get(key)
            if val is not None:
                self.hits += 1
                return val
        val = local_score(x, key[1], self.data, self.metric)
        with self._lock:
            self.misses += 1
            self._table.setdefault(key, val)
        return val

    def __len__(self) -> int:
        return len(self._table)


class Scorer:
    """Scores graphs against a dataset, optionally through a local-score cache."""

    def __init__(self, data: Dataset, metric: Metric, cache: bool = True):
        self.data = data
        self.metric = metric
        self.cache = LocalScoreCache(data, metric) if cache else None

    def local(self, x: int, parents: Iterable[int]) -> float:
        if self.cache is not None:
            return self.cache.local(x, parents)
        return local_score(x, parents, self.data, self.metric)

    def score_dag(self, d: MixedGraph) -> float:
        return sum(self.local(x, d.parents(x)) for x in d.vertices)

    def score_graph(self, g: MixedGraph) -> float:
        """Score of a DAG, or of an essential graph through one of its consistent extensions."""
        if g.n != len(self.data.names):
            raise DataError("graph and dataset have different numbers of variables")
        if g.is_directed():
            if not g.is_dag():
                raise GraphError("directed graph has a cycle")
            return self.score_dag(g)
        d = consistent_extension(g)
        if d is None:
            raise GraphError("graph has no consistent extension")
        return self.score_dag(d)

    def delta(self, spec) -> float:
        if spec.old_parents == spec.new_parents:
            return 0.0
        return self.local(spec.x, spec.new_parents) - self.local(spec.x, spec.old_parents)

    def apply_delta(self, base_score: float, spec) -> float:
        return base_score + self.delta(spec)


def score_graph(g: MixedGraph, data: Dataset, metric: Metric) -> float:
    return Scorer(data, metric, cache=False).score_graph(g)


def apply_delta(base_score: float, spec, data: Dataset, metric: Metric) -> float:
    return Scorer(data, metric, cache=False).apply_delta(base_score, spec)
