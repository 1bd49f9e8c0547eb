"""Mixed graphs (lines and arrows) and the structural predicates used everywhere else.

A graph is stored as a set of ordered pairs over integer vertex ids. Both
``(a, b)`` and ``(b, a)`` present means the line ``a - b``; only ``(a, b)``
present means the arrow ``a -> b``. Vertex names live outside the graph and
are only resolved when reading or writing the text format.
"""
from __future__ import annotations

import graphlib
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    """Raised on malformed graphs or violated operation preconditions."""


@dataclass(frozen=True, order=True)
class VStructure:
    """A v-structure ``t1 -> head <- t2``; ``tails`` is stored sorted."""

    head: int
    tails: tuple[int, int]

    @classmethod
    def of(cls, head: int, t1: int, t2: int) -> "VStructure":
        if t1 == t2 or head in (t1, t2):
            raise GraphError(f"degenerate v-structure ({head}, {{{t1}, {t2}}})")
        return cls(head, (min(t1, t2), max(t1, t2)))


class MixedGraph:
    """Immutable graph over vertices ``0..n-1`` with lines and arrows."""

    __slots__ = ("n", "_edges", "_pa", "_ch", "_ne", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        edges = frozenset((int(a), int(b)) for a, b in edges)
        pa: list[set[int]] = [set() for _ in range(n)]
        ch: list[set[int]] = [set() for _ in range(n)]
        ne: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if a == b:
                raise GraphError(f"self-loop on vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge ({a}, {b}) outside vertex range 0..{n - 1}")
            if (b, a) in edges:
                ne[a].add(b)
            else:
                ch[a].add(b)
                pa[b].add(a)
        self.n = n
        self._edges = edges
        self._pa = tuple(frozenset(s) for s in pa)
        self._ch = tuple(frozenset(s) for s in ch)
        self._ne = tuple(frozenset(s) for s in ne)
        self._hash = hash((n, edges))

    @classmethod
    def build(
        cls,
        n: int,
        arrows: Iterable[tuple[int, int]] = (),
        lines: Iterable[tuple[int, int]] = (),
    ) -> "MixedGraph":
        edges = set(arrows)
        for a, b in lines:
            edges.add((a, b))
            edges.add((b, a))
        return cls(n, edges)

    @classmethod
    def empty(cls, n: int) -> "MixedGraph":
        return cls(n)

    @classmethod
    def complete_undirected(cls, n: int) -> "MixedGraph":
        return cls.build(n, lines=itertools.combinations(range(n), 2))

    # -- queries ---------------------------------------------------------

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return self._edges

    @property
    def vertices(self) -> range:
        return range(self.n)

    def has_line(self, a: int, b: int) -> bool:
        return b in self._ne[a]

    def has_arrow(self, a: int, b: int) -> bool:
        return b in self._ch[a]

    def adjacent(self, a: int, b: int) -> bool:
        return b in self._ne[a] or b in self._ch[a] or b in self._pa[a]

    def parents(self, x: int) -> frozenset[int]:
        return self._pa[x]

    def children(self, x: int) -> frozenset[int]:
        return self._ch[x]

    def neighbours(self, x: int) -> frozenset[int]:
        """Vertices joined to ``x`` by a line."""
        return self._ne[x]

    def adjacents(self, x: int) -> frozenset[int]:
        return self._ne[x] | self._pa[x] | self._ch[x]

    def arrows(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a in range(self.n) for b in self._ch[a])

    def lines(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a in range(self.n) for b in self._ne[a] if a < b)

    def is_directed(self) -> bool:
        return not any(self._ne)

    def is_undirected(self) -> bool:
        return not any(self._ch)

    def is_dag(self) -> bool:
        return self.is_directed() and topological_order(self) is not None

    def is_complete_set(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        return all(self.adjacent(a, b) for a, b in itertools.combinations(vs, 2))

    # -- edits (each returns a new graph) --------------------------------

    def without_pair(self, a: int, b: int) -> "MixedGraph":
        return MixedGraph(self.n, self._edges - {(a, b), (b, a)})

    def with_arrow(self, a: int, b: int) -> "MixedGraph":
        return MixedGraph(self.n, (self._edges - {(b, a)}) | {(a, b)})

    def with_line(self, a: int, b: int) -> "MixedGraph":
        return MixedGraph(self.n, self._edges | {(a, b), (b, a)})

    def with_edges(
        self,
        remove: Iterable[tuple[int, int]] = (),
        add: Iterable[tuple[int, int]] = (),
    ) -> "MixedGraph":
        return MixedGraph(self.n, (self._edges - set(remove)) | set(add))

    # -- dunder ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        parts = [f"{a}->{b}" for a, b in self.arrows()]
        parts += [f"{a}--{b}" for a, b in self.lines()]
        return f"MixedGraph(n={self.n}, [{', '.join(parts)}])"


def skeleton(g: MixedGraph) -> MixedGraph:
    return MixedGraph(g.n, g.edges | {(b, a) for a, b in g.edges})


def v_structures(g: MixedGraph) -> frozenset[VStructure]:
    out = set()
    for h in g.vertices:
        for t1, t2 in itertools.combinations(sorted(g.parents(h)), 2):
            if not g.adjacent(t1, t2):
                out.add(VStructure(h, (t1, t2)))
    return frozenset(out)


def chain_components(g: MixedGraph) -> list[frozenset[int]]:
    """Connected components of the line-only subgraph, ordered by smallest vertex."""
    seen = [False] * g.n
    comps = []
    for s in g.vertices:
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], {s}
        while stack:
            v = stack.pop()
            for w in g.neighbours(v):
                if not seen[w]:
                    seen[w] = True
                    comp.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return comps


def component_index(g: MixedGraph) -> list[int]:
    index = [0] * g.n
    for i, comp in enumerate(chain_components(g)):
        for v in comp:
            index[v] = i
    return index


def topological_order(g: MixedGraph) -> list[int] | None:
    """Topological order of the arrows of ``g`` (lines ignored), or None on a directed cycle."""
    ts = graphlib.TopologicalSorter({v: g.parents(v) for v in g.vertices})
    try:
        return list(ts.static_order())
    except graphlib.CycleError:
        return None


def directed_cycle_witness(g: MixedGraph) -> tuple[int, int] | None:
    """An arrow lying on a directed cycle of ``g`` (lines traversable both ways), or None.

    Chain components are collapsed to single nodes; the arrows between them
    must then admit a topological order.
    """
    comp = component_index(g)
    quotient: dict[int, set[int]] = {i: set() for i in set(comp)}
    for a, b in g.arrows():
        if comp[a] == comp[b]:
            return (a, b)
        quotient[comp[b]].add(comp[a])
    try:
        list(graphlib.TopologicalSorter(quotient).static_order())
    except graphlib.CycleError as exc:
        cyc = exc.args[1]
        # each reported node is a predecessor of the next one
        for a, b in g.arrows():
            if comp[a] == cyc[0] and comp[b] == cyc[1]:
                return (a, b)
        raise AssertionError("cycle reported without a matching arrow")  # pragma: no cover
    return None


def is_chain_graph(g: MixedGraph) -> bool:
    return directed_cycle_witness(g) is None


def _require_arrow(g: MixedGraph, a: int, b: int) -> None:
    if not g.has_arrow(a, b):
        raise GraphError(f"arrow {a} -> {b} not in graph")


def is_protected(g: MixedGraph, a: int, b: int) -> bool:
    _require_arrow(g, a, b)
    return g.parents(a) != g.parents(b) - {a}


def strong_protection_witness(g: MixedGraph, a: int, b: int) -> tuple[str, tuple[int, ...]] | None:
    """First induced configuration strongly protecting ``a -> b``, or None.

    Configurations, with ``a -> b`` present in each:
      a: ``c -> a``, c and b non-adjacent
      b: ``c -> b``, c and a non-adjacent
      c: ``a -> c -> b``
      d: ``a - c1 -> b`` and ``a - c2 -> b``, c1 and c2 non-adjacent
    """
    _require_arrow(g, a, b)
    for c in sorted(g.parents(a)):
        if not g.adjacent(c, b):
            return ("a", (c,))
    for c in sorted(g.parents(b)):
        if c != a and not g.adjacent(c, a):
            return ("b", (c,))
    for c in sorted(g.children(a) & g.parents(b)):
        return ("c", (c,))
    cands = sorted(g.neighbours(a) & g.parents(b))
    for c1, c2 in itertools.combinations(cands, 2):
        if not g.adjacent(c1, c2):
            return ("d", (c1, c2))
    return None


def is_strongly_protected(g: MixedGraph, a: int, b: int) -> bool:
    return strong_protection_witness(g, a, b) is not None


def induced_subgraph(g: MixedGraph, vs: Iterable[int]) -> MixedGraph:
    """Edges of ``g`` with both endpoints in ``vs``; vertex ids are kept."""
    vs = set(vs)
    bad = [v for v in vs if not 0 <= v < g.n]
    if bad:
        raise GraphError(f"unknown vertices {sorted(bad)}")
    return MixedGraph(g.n, {(a, b) for a, b in g.edges if a in vs and b in vs})


def orient_all(g: MixedGraph, order: Sequence[int], vs: Iterable[int] | None = None) -> MixedGraph:
    """Direct each line (restricted to ``vs`` if given) from earlier to later in ``order``."""
    pos = {v: i for i, v in enumerate(order)}
    keep = None if vs is None else set(vs)
    drop = []
    for a, b in g.lines():
        if keep is not None and (a not in keep or b not in keep):
            continue
        drop.append((b, a) if pos[a] < pos[b] else (a, b))
    return g.with_edges(remove=drop)


# -- text format ---------------------------------------------------------


def parse_graph(text: str) -> tuple[MixedGraph, list[str]]:
    """Parse the text graph format.

    The first non-comment line declares ``vertices: name1 name2 ...``; every
    other line holds one edge, ``a -> b`` or ``a -- b``. ``#`` starts a comment.
    """
    names: list[str] | None = None
    index: dict[str, int] = {}
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if names is None:
            head, sep, rest = line.partition(":")
            if not sep or head.strip() != "vertices":
                raise GraphError(f"line {lineno}: expected 'vertices: ...' header")
            names = rest.split()
            if len(set(names)) != len(names):
                raise GraphError(f"line {lineno}: duplicate vertex names")
            index = {name: i for i, name in enumerate(names)}
            continue
        toks = line.split()
        if len(toks) != 3 or toks[1] not in ("->", "--"):
            raise GraphError(f"line {lineno}: cannot parse edge {raw!r}")
        try:
            a, b = index[toks[0]], index[toks[2]]
        except KeyError as exc:
            raise GraphError(f"line {lineno}: unknown vertex {exc.args[0]!r}") from None
        if a == b:
            raise GraphError(f"line {lineno}: self-loop on {toks[0]!r}")
        pair = {(a, b), (b, a)}
        if edges & pair:
            raise GraphError(f"line {lineno}: second edge between {toks[0]!r} and {toks[2]!r}")
        edges |= pair if toks[1] == "--" else {(a, b)}
    if names is None:
        raise GraphError("missing 'vertices:' header")
    return MixedGraph(len(names), edges), names


def format_graph(g: MixedGraph, names: Sequence[str] | None = None) -> str:
    """Canonical text: declared vertex order, edges sorted by endpoint ids."""
    if names is None:
        names = default_names(g.n)
    if len(names) != g.n:
        raise GraphError("name table does not match vertex count")
    out = ["vertices: " + " ".join(names)]
    for a, b in itertools.combinations(range(g.n), 2):
        if g.has_line(a, b):
            out.append(f"{names[a]} -- {names[b]}")
        elif g.has_arrow(a, b):
            out.append(f"{names[a]} -> {names[b]}")
        elif g.has_arrow(b, a):
            out.append(f"{names[b]} -> {names[a]}")
    return "\n".join(out) + "\n"


def default_names(n: int) -> list[str]:
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"v{i}" for i in range(n)]


def iter_pairs(n: int) -> Iterator[tuple[int, int]]:
    return itertools.combinations(range(n), 2)
