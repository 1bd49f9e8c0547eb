"""Essential graphs: validation, essentialization, consistent extension and class members."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .chordal import is_chordal
from .graph import (
    GraphError,
    MixedGraph,
    chain_components,
    directed_cycle_witness,
    skeleton,
    strong_protection_witness,
    v_structures,
)

# Names of the four characterizing conditions, in checking order.
CHAIN_GRAPH = "chain_graph"
CHORDAL_COMPONENTS = "chordal_components"
NO_ARROW_LINE = "no_arrow_line_pattern"
STRONGLY_PROTECTED = "strongly_protected"
CONDITIONS = (CHAIN_GRAPH, CHORDAL_COMPONENTS, NO_ARROW_LINE, STRONGLY_PROTECTED)

# An essential graph is a MixedGraph that passes validate_essential.
EssentialGraph = MixedGraph


class NotEssentialError(GraphError):
    pass


@dataclass(frozen=True)
class Violation:
    condition: str
    witness: tuple

    def describe(self, names=None) -> str:
        nm = (lambda v: names[v]) if names else str
        w = self.witness
        if self.condition == CHAIN_GRAPH:
            return f"directed cycle through arrow {nm(w[0])} -> {nm(w[1])}"
        if self.condition == CHORDAL_COMPONENTS:
            return "chain component {" + ", ".join(nm(v) for v in w) + "} is not chordal"
        if self.condition == NO_ARROW_LINE:
            return f"induced subgraph {nm(w[0])} -> {nm(w[1])} -- {nm(w[2])}"
        return f"arrow {nm(w[0])} -> {nm(w[1])} is not strongly protected"


@dataclass(frozen=True)
class Validation:
    ok: bool
    violation: Violation | None = None

    def __bool__(self) -> bool:
        return self.ok

    @property
    def condition(self) -> str | None:
        return self.violation.condition if self.violation else None


def _cycle_violation(g: MixedGraph) -> Violation | None:
    w = directed_cycle_witness(g)
    return Violation(CHAIN_GRAPH, w) if w else None


def _chordal_violation(g: MixedGraph) -> Violation | None:
    for comp in chain_components(g):
        if len(comp) < 4:
            continue
        lines = [(a, b) for a, b in itertools.combinations(sorted(comp), 2) if g.has_line(a, b)]
        if not is_chordal(MixedGraph.build(g.n, lines=lines)):
            return Violation(CHORDAL_COMPONENTS, tuple(sorted(comp)))
    return None


def _arrow_line_violation(g: MixedGraph) -> Violation | None:
    for a, b in g.arrows():
        for c in sorted(g.neighbours(b)):
            if c != a and not g.adjacent(a, c):
                return Violation(NO_ARROW_LINE, (a, b, c))
    return None


def _protection_violation(g: MixedGraph) -> Violation | None:
    for a, b in g.arrows():
        if strong_protection_witness(g, a, b) is None:
            return Violation(STRONGLY_PROTECTED, (a, b))
    return None


_CHECKS = (_cycle_violation, _chordal_violation, _arrow_line_violation, _protection_violation)


def essential_violations(g: MixedGraph) -> list[Violation]:
    """Every violated condition, each checked on its own."""
    return [v for check in _CHECKS if (v := check(g)) is not None]


def validate_essential(g: MixedGraph) -> Validation:
    """Check the four conditions in order, reporting the first violated one."""
    for check in _CHECKS:
        v = check(g)
        if v is not None:
            return Validation(False, v)
    return Validation(True)


def is_essential(g: MixedGraph) -> bool:
    return validate_essential(g).ok


def weakly_protected_arrows(g: MixedGraph) -> list[tuple[int, int]]:
    return [(a, b) for a, b in g.arrows() if strong_protection_witness(g, a, b) is None]


def essentialize(g0: MixedGraph, check: bool = True) -> EssentialGraph:
    """Repeatedly turn every arrow lacking strong protection into a line, all at once.

    ``g0`` should be a DAG or a warm start built from one; the fixpoint is
    validated unless ``check`` is False.
    """
    g = g0
    while True:
        weak = weakly_protected_arrows(g)
        if not weak:
            break
        g = g.with_edges(add=[(b, a) for a, b in weak])
    if check:
        res = validate_essential(g)
        if not res:
            raise NotEssentialError(
                f"essentialization fixpoint is not essential: {res.violation.describe()}"
            )
    return g


def _require_dag(d: MixedGraph) -> None:
    if not d.is_dag():
        raise GraphError("expected a DAG")


def same_class(d1: MixedGraph, d2: MixedGraph) -> bool:
    _require_dag(d1)
    _require_dag(d2)
    if d1.n != d2.n:
        raise GraphError("DAGs have different vertex counts")
    return skeleton(d1) == skeleton(d2) and v_structures(d1) == v_structures(d2)


def consistent_extension(g: MixedGraph) -> MixedGraph | None:
    """A DAG with the skeleton and v-structures of ``g`` keeping its arrows, or None.

    Peels off, one at a time, a vertex with no outgoing arrow whose line
    neighbours are adjacent to all its other neighbours, orienting its lines
    towards it.
    """
    remaining = set(g.vertices)
    oriented = set(g.arrows())
    while remaining:
        for x in sorted(remaining):
            if g.children(x) & remaining:
                continue
            adj = g.adjacents(x) & remaining
            nbrs = g.neighbours(x) & remaining
            if all(adj - {y} <= g.adjacents(y) for y in nbrs):
                break
        else:
            return None
        oriented.update((y, x) for y in nbrs)
        remaining.discard(x)
    d = MixedGraph(g.n, oriented)
    if skeleton(d) != skeleton(g) or v_structures(d) != v_structures(g) or not d.is_dag():
        return None
    return d


def _component_orientations(e: MixedGraph, comp: frozenset[int]) -> list[frozenset[tuple[int, int]]]:
    """Distinct arrow sets from orienting the lines of ``comp`` by perfect orderings.

    Orderings are explored depth first in lexicographic order; a vertex may be
    appended only when its already placed neighbours form a complete set.
    """
    verts = sorted(comp)
    seen: dict[frozenset[tuple[int, int]], None] = {}
    placed: list[int] = []
    pos: dict[int, int] = {}

    def rec() -> None:
        if len(placed) == len(verts):
            arrows = frozenset(
                (a, b) if pos[a] < pos[b] else (b, a)
                for a in verts
                for b in e.neighbours(a)
                if a < b
            )
            seen.setdefault(arrows)
            return
        for v in verts:
            if v in pos:
                continue
            earlier = [w for w in e.neighbours(v) if w in pos]
            if not e.is_complete_set(earlier):
                continue
            pos[v] = len(placed)
            placed.append(v)
            rec()
            placed.pop()
            del pos[v]

    rec()
    return list(seen)


def class_members(e: EssentialGraph) -> Iterator[MixedGraph]:
    """Every DAG of the class represented by ``e``, each exactly once."""
    base = set(e.arrows())
    per_comp = [_component_orientations(e, c) for c in chain_components(e) if len(c) > 1]
    for combo in itertools.product(*per_comp):
        arrows = set(base)
        for part in combo:
            arrows |= part
        yield MixedGraph(e.n, arrows)


def remove_line_fast(e: EssentialGraph, a: int, b: int) -> EssentialGraph:
    """Drop ``a - b`` from ``e`` when no ``h`` has lines to both ends; the result stays essential."""
    if not e.has_line(a, b):
        raise GraphError(f"line {a} -- {b} not in graph")
    common = e.neighbours(a) & e.neighbours(b)
    if common:
        raise GraphError(
            f"line {a} -- {b} lies in an undirected triangle with {min(common)}; "
            "removal needs the general construction"
        )
    return e.without_pair(a, b)
