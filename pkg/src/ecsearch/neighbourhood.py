"""The inclusion boundary neighbourhood of an essential graph.

Neighbours are produced pair by pair. For each unordered pair ``{a, b}`` one
of three pseudo-operators applies, depending on the edge between ``a`` and
``b``: removing an arrow, removing a line, or adding an edge. Each returns
every neighbour whose skeleton differs from the current one exactly at
``{a, b}``, together with the local score change needed to rank it.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

from .chordal import mcs_ordering
from .essential import EssentialGraph, consistent_extension, essentialize, remove_line_fast
from .graph import (
    GraphError,
    MixedGraph,
    VStructure,
    chain_components,
    iter_pairs,
    orient_all,
    v_structures,
)

REMOVE_ARROW = "remove-arrow"
REMOVE_LINE = "remove-line"
ADD_EDGE = "add-edge"

PLUS = "+"   # more independences (an edge removed)
MINUS = "-"  # fewer independences (an edge added)

DEFAULT_HEAD_LIMIT = 12
DEFAULT_SUBSET_CAP = 4096


@dataclass(frozen=True, order=True)
class PairOp:
    a: int
    b: int
    kind: str

    @property
    def pair(self) -> tuple[int, int]:
        return (min(self.a, self.b), max(self.a, self.b))


@dataclass(frozen=True)
class Characterization:
    op: PairOp
    o: frozenset[VStructure]

    def sort_key(self) -> tuple:
        return (self.op.pair, self.op.kind, tuple(sorted(self.o)))


@dataclass(frozen=True)
class DeltaSpec:
    """Vertex whose parent set changes, before and after the move."""

    x: int
    old_parents: frozenset[int]
    new_parents: frozenset[int]


@dataclass(frozen=True)
class Neighbour:
    characterization: Characterization
    result: EssentialGraph
    delta: DeltaSpec
    direction: str

    @property
    def op(self) -> PairOp:
        return self.characterization.op


@dataclass(frozen=True)
class EnumerationLimits:
    """Cap on complete subsets visited per pair.

    ``None`` means unlimited when the candidate set has at most 12 vertices
    and 4096 otherwise; an explicit value always applies, ``0`` meaning no cap.
    """

    max_subsets_per_pair: int | None = None

    def cap_for(self, n_candidates: int) -> int | None:
        if self.max_subsets_per_pair is None:
            return None if n_candidates <= DEFAULT_HEAD_LIMIT else DEFAULT_SUBSET_CAP
        return self.max_subsets_per_pair or None


NO_LIMITS = EnumerationLimits(0)


class NeighbourList(list):
    """List of neighbours; ``partial`` is set when subset enumeration was truncated."""

    partial: bool = False

    @property
    def plus(self) -> list[Neighbour]:
        return [nb for nb in self if nb.direction == PLUS]

    @property
    def minus(self) -> list[Neighbour]:
        return [nb for nb in self if nb.direction == MINUS]


def _limits(limits: EnumerationLimits | None) -> EnumerationLimits:
    return limits if limits is not None else EnumerationLimits()


def complete_subsets(
    g: MixedGraph, vs: Sequence[int], cap: int | None = None
) -> tuple[list[frozenset[int]], bool]:
    """All complete subsets of ``vs`` (the empty set included), in lexicographic order.

    Only complete sets are ever visited: each extension is drawn from the
    vertices adjacent to everything chosen so far. Returns the subsets and
    whether ``cap`` cut the enumeration short.
    """
    out: list[frozenset[int]] = []
    truncated = False

    def rec(chosen: list[int], cands: list[int]) -> bool:
        nonlocal truncated
        if cap is not None and len(out) >= cap:
            truncated = True
            return False
        out.append(frozenset(chosen))
        for i, v in enumerate(cands):
            nxt = [w for w in cands[i + 1:] if g.adjacent(v, w)]
            if not rec(chosen + [v], nxt):
                return False
        return True

    rec([], sorted(vs))
    return out, truncated


def result_key(g: MixedGraph) -> tuple:
    """Class identity of a graph: skeleton pairs plus v-structures."""
    pairs = frozenset((min(a, b), max(a, b)) for a, b in g.edges)
    return (pairs, v_structures(g))


# -- removal of an arrow ----------------------------------------------------


def w_set_arrow(e: EssentialGraph, a: int, b: int) -> frozenset[int]:
    """Heads ``h`` with ``a -> h`` and ``b - h``: removing ``a -> b`` may create ``(h, {a, b})``."""
    if not e.has_arrow(a, b):
        raise GraphError(f"arrow {a} -> {b} not in graph")
    return e.children(a) & e.neighbours(b)


def _component_of(e: MixedGraph, v: int) -> frozenset[int]:
    for comp in chain_components(e):
        if v in comp:
            return comp
    raise AssertionError("vertex missing from chain components")  # pragma: no cover


def _warm_start(e: EssentialGraph, removed: MixedGraph, anchor: int, prefix: list[int],
                clique: frozenset[int]) -> EssentialGraph:
    """Orient the anchor's chain component by a perfect ordering starting with ``prefix``,
    turn arrows inside ``clique`` back into lines, and essentialize."""
    comp = _component_of(e, anchor)
    u = MixedGraph.build(
        e.n, lines=[(x, y) for x, y in itertools.combinations(sorted(comp), 2) if e.has_line(x, y)]
    )
    order = mcs_ordering(u, prefix)
    if order is None:  # pragma: no cover - components of an essential graph are chordal
        raise GraphError("chain component is not chordal")
    g = orient_all(removed, order, comp)
    g = g.with_edges(add=[(y, x) for x, y in itertools.permutations(clique, 2) if g.has_arrow(x, y)])
    return essentialize(g)


def remove_arrow_neighbours(
    e: EssentialGraph, a: int, b: int, limits: EnumerationLimits | None = None
) -> NeighbourList:
    heads = w_set_arrow(e, a, b)
    subsets, truncated = complete_subsets(e, heads, _limits(limits).cap_for(len(heads)))
    removed = e.without_pair(a, b)
    pa_b = e.parents(b)
    op = PairOp(a, b, REMOVE_ARROW)
    out = NeighbourList()
    out.partial = truncated
    for clique in subsets:
        o = frozenset(VStructure.of(h, a, b) for h in heads - clique)
        result = _warm_start(e, removed, b, sorted(clique) + [b], clique)
        delta = DeltaSpec(b, pa_b | clique, (pa_b - {a}) | clique)
        out.append(Neighbour(Characterization(op, o), result, delta, PLUS))
    return out


# -- removal of a line ------------------------------------------------------


def w_set_line(e: EssentialGraph, a: int, b: int) -> frozenset[int]:
    """Heads ``h`` with ``a - h`` and ``b - h`` (an undirected triangle through ``a - b``)."""
    if not e.has_line(a, b):
        raise GraphError(f"line {a} -- {b} not in graph")
    return e.neighbours(a) & e.neighbours(b)


def remove_line_neighbours(
    e: EssentialGraph, a: int, b: int, limits: EnumerationLimits | None = None
) -> NeighbourList:
    heads = w_set_line(e, a, b)
    op = PairOp(a, b, REMOVE_LINE)
    pa_b = e.parents(b)
    out = NeighbourList()
    if not heads:
        result = remove_line_fast(e, a, b)
        out.append(Neighbour(Characterization(op, frozenset()), result,
                             DeltaSpec(b, pa_b | {a}, pa_b), PLUS))
        return out
    subsets, truncated = complete_subsets(e, heads, _limits(limits).cap_for(len(heads)))
    out.partial = truncated
    removed = e.without_pair(a, b)
    for clique in subsets:
        o = frozenset(VStructure.of(h, a, b) for h in heads - clique)
        result = _warm_start(e, removed, b, sorted(clique) + [a, b], clique)
        delta = DeltaSpec(b, pa_b | clique | {a}, pa_b | clique)
        out.append(Neighbour(Characterization(op, o), result, delta, PLUS))
    return out


# -- addition of an edge ----------------------------------------------------


@dataclass(frozen=True)
class PPartition:
    """Candidate v-structures created by adding an edge between ``a`` and ``b``.

    p1/p2: head ``b``, third vertex joined to ``b`` by a line / an arrow;
    p3/p4: head ``a``, likewise. The third vertex is never adjacent to the
    other endpoint.
    """

    p1: frozenset[VStructure]
    p2: frozenset[VStructure]
    p3: frozenset[VStructure]
    p4: frozenset[VStructure]


def p_partition(e: EssentialGraph, a: int, b: int) -> PPartition:
    if e.adjacent(a, b):
        raise GraphError(f"{a} and {b} are already adjacent")

    def vs(head: int, other: int, ts) -> frozenset[VStructure]:
        return frozenset(VStructure.of(head, other, t) for t in ts if not e.adjacent(t, other))

    return PPartition(
        vs(b, a, e.neighbours(b)),
        vs(b, a, e.parents(b)),
        vs(a, b, e.neighbours(a)),
        vs(a, b, e.parents(a)),
    )


def _third(v: VStructure, endpoint: int) -> int:
    t1, t2 = v.tails
    return t2 if t1 == endpoint else t1


def _addition_candidates(e: EssentialGraph, a: int, b: int, part: PPartition,
                         limits: EnumerationLimits) -> tuple[list, bool]:
    """Admissible (created v-structures, tail, head, partially directed graph) candidates.

    Besides the added arrow and the lines turned towards the head to create
    the requested v-structures, every line ``h - head`` with ``h`` also joined
    by a line to the tail is directed into the head: the opposite choice
    forces ``tail -> h <- head``, and then dropping the new arrow again would
    leave a v-structure the source class does not have.
    """
    cands = []
    truncated = False
    common = e.neighbours(a) & e.neighbours(b)
    for tail, head, free, forced in ((a, b, part.p1, part.p2), (b, a, part.p3, part.p4)):
        thirds = {_third(v, tail): v for v in free}
        subsets, cut = complete_subsets(e, thirds, limits.cap_for(len(thirds)))
        truncated |= cut
        for f in subsets:
            o = forced | {thirds[t] for t in f}
            into_head = f | common
            g = e.with_edges(remove=[(head, t) for t in into_head], add=[(tail, head)])
            cands.append((frozenset(o), tail, head, g))
    return cands, truncated


def _extension_matches(e: EssentialGraph, m: MixedGraph, tail: int, head: int,
                       o: frozenset[VStructure]) -> bool:
    """``m`` creates exactly ``o`` and dropping the added arrow lands back in the class of ``e``."""
    ve = v_structures(e)
    return v_structures(m) - ve == o and v_structures(m.without_pair(tail, head)) == ve


def add_edge_neighbours(
    e: EssentialGraph, a: int, b: int, limits: EnumerationLimits | None = None
) -> NeighbourList:
    part = p_partition(e, a, b)
    cands, truncated = _addition_candidates(e, a, b, part, _limits(limits))
    op = PairOp(a, b, ADD_EDGE)
    out = NeighbourList()
    out.partial = truncated
    seen = set()
    for o, tail, head, g in sorted(cands, key=lambda c: (len(c[0]), sorted(c[0]), c[1])):
        if o in seen:
            continue
        m = consistent_extension(g)
        if m is None or not _extension_matches(e, m, tail, head, o):
            continue
        seen.add(o)
        delta = DeltaSpec(head, m.parents(head) - {tail}, m.parents(head))
        out.append(Neighbour(Characterization(op, o), essentialize(m), delta, MINUS))
    return out


# -- whole neighbourhood ----------------------------------------------------


def pair_neighbours(
    e: EssentialGraph, a: int, b: int, limits: EnumerationLimits | None = None
) -> NeighbourList:
    """Dispatch to the pseudo-operator matching the edge between ``a`` and ``b``."""
    if e.has_arrow(a, b):
        return remove_arrow_neighbours(e, a, b, limits)
    if e.has_arrow(b, a):
        return remove_arrow_neighbours(e, b, a, limits)
    if e.has_line(a, b):
        return remove_line_neighbours(e, min(a, b), max(a, b), limits)
    return add_edge_neighbours(e, min(a, b), max(a, b), limits)


def inclusion_boundary(
    e: EssentialGraph, limits: EnumerationLimits | None = None, threads: int = 1
) -> NeighbourList:
    """Every neighbour of ``e``; ``partial`` is set if any pair was truncated."""
    pairs = list(iter_pairs(e.n))
    if threads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda p: pair_neighbours(e, p[0], p[1], limits), pairs))
    else:
        parts = [pair_neighbours(e, a, b, limits) for a, b in pairs]
    out = NeighbourList()
    out.partial = any(p.partial for p in parts)
    for p in parts:
        out.extend(p)
    return out


def iter_neighbour_graphs(e: EssentialGraph) -> Iterator[MixedGraph]:
    for nb in inclusion_boundary(e, NO_LIMITS):
        yield nb.result
