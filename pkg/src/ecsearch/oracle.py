"""Brute-force ground truth at desk scale.

Nothing here calls the essentialization or neighbourhood machinery unless the
function is explicitly about cross-checking it (``boundary_by_arrow_changes``).
Classes are grouped by d-separation fingerprints and essential graphs are
formed as plain edge unions over each group.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Iterator

from .graph import GraphError, MixedGraph, iter_pairs

MAX_ENUMERATION_N = 5
MAX_DEFINITION_N = 4


def enumerate_dags(n: int) -> list[MixedGraph]:
    """Every labeled DAG on ``n`` vertices, each exactly once."""
    if n > MAX_ENUMERATION_N:
        raise GraphError(f"DAG enumeration is capped at n = {MAX_ENUMERATION_N}")
    if n < 0:
        raise GraphError("negative vertex count")
    pairs = list(iter_pairs(n))
    out = []
    for states in itertools.product((0, 1, 2), repeat=len(pairs)):
        arrows = []
        for (a, b), s in zip(pairs, states):
            if s == 1:
                arrows.append((a, b))
            elif s == 2:
                arrows.append((b, a))
        g = MixedGraph(n, arrows)
        if g.is_dag():
            out.append(g)
    return out


def count_labeled_dags(n: int) -> int:
    """Robinson's recurrence for the number of labeled DAGs."""
    a = [1]
    for m in range(1, n + 1):
        a.append(sum((-1) ** (k + 1) * math.comb(m, k) * 2 ** (k * (m - k)) * a[m - k]
                     for k in range(1, m + 1)))
    return a[n]


# -- d-separation ---------------------------------------------------------


def _ancestors_incl(d: MixedGraph, zs: Iterable[int]) -> set[int]:
    out = set(zs)
    stack = list(out)
    while stack:
        v = stack.pop()
        for p in d.parents(v):
            if p not in out:
                out.add(p)
                stack.append(p)
    return out


def reachable(d: MixedGraph, sources: Iterable[int], given: Iterable[int]) -> set[int]:
    """Vertices joined to some source by an active trail given ``given``."""
    z = set(given)
    anc = _ancestors_incl(d, z)
    todo = [(s, "up") for s in sources]
    visited = set()
    out = set()
    while todo:
        y, how = todo.pop()
        if (y, how) in visited:
            continue
        visited.add((y, how))
        if y not in z:
            out.add(y)
        if how == "up" and y not in z:
            todo.extend((p, "up") for p in d.parents(y))
            todo.extend((c, "down") for c in d.children(y))
        elif how == "down":
            if y not in z:
                todo.extend((c, "down") for c in d.children(y))
            if y in anc:
                todo.extend((p, "up") for p in d.parents(y))
    return out


def d_separated(d: MixedGraph, us: Iterable[int], vs: Iterable[int], given: Iterable[int]) -> bool:
    us, vs, given = set(us), set(vs), set(given)
    return not (reachable(d, us, given) & vs)


def independences(d: MixedGraph) -> int:
    """Pairwise d-separation statements ``u _|_ v | W`` packed into an int bitmask.

    Bit ``pair_index * 2**n + mask(W)`` is set when the statement holds.
    Pairwise statements suffice: d-separation satisfies composition and
    decomposition, so a set statement holds iff all its pairwise ones do.
    """
    n = d.n
    bits = 0
    for idx, (u, v) in enumerate(iter_pairs(n)):
        rest = [w for w in range(n) if w not in (u, v)]
        for k in range(len(rest) + 1):
            for ws in itertools.combinations(rest, k):
                if v not in reachable(d, [u], ws):
                    mask = sum(1 << w for w in ws)
                    bits |= 1 << (idx * (1 << n) + mask)
    return bits


def full_independences(d: MixedGraph) -> frozenset[tuple[frozenset, frozenset, frozenset]]:
    """All set-level statements ``U _|_ V | W`` with disjoint ``U``, ``V`` non-empty.

    Exponential; meant for validating the pairwise restriction at tiny n.
    """
    n = d.n
    out = set()
    for labels in itertools.product(range(4), repeat=n):
        us = frozenset(v for v in range(n) if labels[v] == 1)
        vs = frozenset(v for v in range(n) if labels[v] == 2)
        ws = frozenset(v for v in range(n) if labels[v] == 3)
        if not us or not vs or min(us) > min(vs):
            continue
        if d_separated(d, us, vs, ws):
            out.add((us, vs, ws))
    return frozenset(out)


# -- classes and the boundary by definition --------------------------------


@lru_cache(maxsize=None)
def _class_table(n: int) -> tuple[dict[MixedGraph, int], dict[MixedGraph, tuple[MixedGraph, ...]]]:
    groups: dict[int, list[MixedGraph]] = {}
    for d in enumerate_dags(n):
        groups.setdefault(independences(d), []).append(d)
    fp_of: dict[MixedGraph, int] = {}
    members: dict[MixedGraph, tuple[MixedGraph, ...]] = {}
    for fp, dags in groups.items():
        union = set()
        for d in dags:
            union |= d.edges
        e = MixedGraph(n, union)
        fp_of[e] = fp
        members[e] = tuple(dags)
    return fp_of, members


def enumerate_classes(n: int) -> list[MixedGraph]:
    """Essential graphs of every equivalence class on ``n`` vertices, as edge unions."""
    fp_of, _ = _class_table(n)
    return sorted(fp_of, key=lambda g: sorted(g.edges))


def brute_force_members(e: MixedGraph) -> tuple[MixedGraph, ...]:
    _, members = _class_table(e.n)
    try:
        return members[e]
    except KeyError:
        raise GraphError("graph is not the essential graph of any class") from None


def fingerprint_of_class(e: MixedGraph) -> int:
    fp_of, _ = _class_table(e.n)
    try:
        return fp_of[e]
    except KeyError:
        raise GraphError("graph is not the essential graph of any class") from None


def _subset(x: int, y: int) -> bool:
    return x & y == x and x != y


def boundary_by_definition(e: MixedGraph) -> tuple[frozenset[MixedGraph], frozenset[MixedGraph]]:
    """(N+, N-) from strict inclusion of independence sets, keeping only covers."""
    if e.n > MAX_DEFINITION_N:
        raise GraphError(f"definitional boundary is capped at n = {MAX_DEFINITION_N}")
    fp_of, _ = _class_table(e.n)
    fp = fingerprint_of_class(e)
    above = {g: f for g, f in fp_of.items() if _subset(fp, f)}
    below = {g: f for g, f in fp_of.items() if _subset(f, fp)}
    plus = frozenset(g for g, f in above.items() if not any(_subset(h, f) for h in above.values()))
    minus = frozenset(g for g, f in below.items() if not any(_subset(f, h) for h in below.values()))
    return plus, minus


def boundary_by_arrow_changes(e: MixedGraph) -> tuple[frozenset[MixedGraph], frozenset[MixedGraph]]:
    """(N+, N-) by essentializing every one-arrow removal / addition of every class member."""
    from .essential import class_members, essentialize

    plus, minus = set(), set()
    for dag in class_members(e):
        for a, b in dag.arrows():
            plus.add(essentialize(dag.without_pair(a, b)))
        for a, b in itertools.permutations(range(e.n), 2):
            if dag.adjacent(a, b):
                continue
            k = dag.with_arrow(a, b)
            if k.is_dag():
                minus.add(essentialize(k))
    return frozenset(plus), frozenset(minus)


# -- naive checkers --------------------------------------------------------


def _simple_cycles(n: int, step: dict[int, set[int]]) -> Iterator[list[int]]:
    """Every simple cycle of a relation (each rotation rooted at its smallest vertex)."""
    for s in range(n):
        stack = [(s, [s])]
        while stack:
            v, path = stack.pop()
            for w in step[v]:
                if w == s and len(path) >= 2:
                    yield path
                elif w > s and w not in path:
                    stack.append((w, path + [w]))


def naive_is_chordal(u: MixedGraph) -> bool:
    """Every undirected cycle of length >= 4 has a chord (direct cycle enumeration)."""
    step = {v: set(u.neighbours(v)) for v in u.vertices}
    for cyc in _simple_cycles(u.n, step):
        if len(cyc) < 4:
            continue
        k = len(cyc)
        if not any(
            u.has_line(cyc[i], cyc[j])
            for i in range(k)
            for j in range(i + 2, k)
            if not (i == 0 and j == k - 1)
        ):
            return False
    return True


def _line_components(g: MixedGraph) -> list[set[int]]:
    reach = [[a == b or g.has_line(a, b) for b in range(g.n)] for a in range(g.n)]
    for k in range(g.n):
        for i in range(g.n):
            for j in range(g.n):
                reach[i][j] = reach[i][j] or (reach[i][k] and reach[k][j])
    comps: list[set[int]] = []
    for v in range(g.n):
        if not any(v in c for c in comps):
            comps.append({w for w in range(g.n) if reach[v][w]})
    return comps


def _induces(g: MixedGraph, verts: tuple[int, ...], arrows=(), lines=()) -> bool:
    want = set(arrows)
    for a, b in lines:
        want |= {(a, b), (b, a)}
    have = {(a, b) for a, b in g.edges if a in verts and b in verts}
    return have == want


def naive_strongly_protected(g: MixedGraph, p: int, q: int) -> bool:
    others = [v for v in g.vertices if v not in (p, q)]
    for c in others:
        t = (p, q, c)
        if (_induces(g, t, arrows=[(c, p), (p, q)])
                or _induces(g, t, arrows=[(p, q), (c, q)])
                or _induces(g, t, arrows=[(p, q), (p, c), (c, q)])):
            return True
    for c1, c2 in itertools.combinations(others, 2):
        if _induces(g, (p, q, c1, c2), arrows=[(p, q), (c1, q), (c2, q)], lines=[(p, c1), (p, c2)]):
            return True
    return False


def naive_violated_conditions(g: MixedGraph) -> set[str]:
    """Which of the four essential-graph conditions fail, each by exhaustive search."""
    from .essential import CHAIN_GRAPH, CHORDAL_COMPONENTS, NO_ARROW_LINE, STRONGLY_PROTECTED

    bad = set()
    step = {v: {w for w in g.vertices if (v, w) in g.edges} for v in g.vertices}
    for cyc in _simple_cycles(g.n, step):
        closed = cyc + [cyc[0]]
        if any(g.has_arrow(x, y) for x, y in zip(closed, closed[1:])):
            bad.add(CHAIN_GRAPH)
            break
    for comp in _line_components(g):
        lines = [(a, b) for a, b in itertools.combinations(sorted(comp), 2) if g.has_line(a, b)]
        if not naive_is_chordal(MixedGraph.build(g.n, lines=lines)):
            bad.add(CHORDAL_COMPONENTS)
    for a, b, c in itertools.permutations(g.vertices, 3):
        if _induces(g, (a, b, c), arrows=[(a, b)], lines=[(b, c)]):
            bad.add(NO_ARROW_LINE)
            break
    if any(not naive_strongly_protected(g, p, q) for p, q in g.arrows()):
        bad.add(STRONGLY_PROTECTED)
    return bad


def all_mixed_graphs(n: int) -> Iterator[MixedGraph]:
    """Every graph on ``n`` vertices with at most one edge per pair (4 states per pair)."""
    pairs = list(iter_pairs(n))
    for states in itertools.product(range(4), repeat=len(pairs)):
        edges = set()
        for (a, b), s in zip(pairs, states):
            if s == 1:
                edges.add((a, b))
            elif s == 2:
                edges.add((b, a))
            elif s == 3:
                edges |= {(a, b), (b, a)}
        yield MixedGraph(n, edges)
