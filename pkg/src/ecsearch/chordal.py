"""Chordality and perfect orderings via maximum cardinality search."""
from __future__ import annotations

from typing import Sequence

from .graph import GraphError, MixedGraph


def _require_undirected(u: MixedGraph) -> None:
    if not u.is_undirected():
        raise GraphError("expected an undirected graph (no arrows)")


def is_perfect_ordering(u: MixedGraph, order: Sequence[int]) -> bool:
    """True iff the earlier neighbours of every vertex form a complete set.

    Equivalently, directing lines from earlier to later vertices yields no
    v-structure (acyclicity is automatic).
    """
    pos = {v: i for i, v in enumerate(order)}
    if len(pos) != len(order) or set(pos) != set(u.vertices):
        return False
    for v in order:
        earlier = [w for w in u.neighbours(v) if pos[w] < pos[v]]
        if not u.is_complete_set(earlier):
            return False
    return True


def mcs_ordering(u: MixedGraph, prefix: Sequence[int] = ()) -> list[int] | None:
    """Maximum cardinality search seeded with a complete ``prefix``.

    Returns a perfect ordering that starts with ``prefix`` verbatim, or None
    if ``u`` is not chordal. Ties go to the smallest vertex id.
    """
    _require_undirected(u)
    prefix = list(prefix)
    if len(set(prefix)) != len(prefix):
        raise GraphError("prefix vertices must be distinct")
    if any(not 0 <= v < u.n for v in prefix):
        raise GraphError("prefix contains unknown vertices")
    if not u.is_complete_set(prefix):
        raise GraphError("prefix does not induce a complete subgraph")

    weight = [0] * u.n
    visited = [False] * u.n
    order: list[int] = []

    def visit(v: int) -> None:
        visited[v] = True
        order.append(v)
        for w in u.neighbours(v):
            if not visited[w]:
                weight[w] += 1

    for v in prefix:
        visit(v)
    while len(order) < u.n:
        best = max((v for v in u.vertices if not visited[v]), key=lambda v: (weight[v], -v))
        visit(best)
    return order if is_perfect_ordering(u, order) else None


def is_chordal(u: MixedGraph) -> bool:
    return mcs_ordering(u) is not None


def orient_by_ordering(u: MixedGraph, order: Sequence[int]) -> MixedGraph:
    _require_undirected(u)
    if sorted(order) != list(u.vertices):
        raise GraphError("ordering is not a permutation of the vertices")
    pos = {v: i for i, v in enumerate(order)}
    return MixedGraph(u.n, {(a, b) for a, b in u.edges if pos[a] < pos[b]})
