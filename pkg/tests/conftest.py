import random

import pytest
from hypothesis import strategies as st

from ecsearch.graph import MixedGraph, parse_graph


def G(text: str) -> MixedGraph:
    """Graph from a compact spec like ``"a b c | a->b b--c"`` (names are letters)."""
    verts, _, edges = text.partition("|")
    lines = ["vertices: " + verts.strip()]
    for tok in edges.split():
        op = "->" if "->" in tok else "--"
        x, y = tok.split(op)
        lines.append(f"{x} {op} {y}")
    return parse_graph("\n".join(lines))[0]


def random_dag(n: int, rng: random.Random, p: float = 0.4) -> MixedGraph:
    order = list(range(n))
    rng.shuffle(order)
    return MixedGraph(n, [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)
                          if rng.random() < p])


def random_undirected(n: int, rng: random.Random, p: float = 0.5) -> MixedGraph:
    return MixedGraph.build(n, lines=[(i, j) for i in range(n) for j in range(i + 1, n)
                                      if rng.random() < p])


@st.composite
def mixed_graphs(draw, min_n=0, max_n=6):
    n = draw(st.integers(min_n, max_n))
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            s = draw(st.integers(0, 3))
            if s == 1:
                edges.add((i, j))
            elif s == 2:
                edges.add((j, i))
            elif s == 3:
                edges |= {(i, j), (j, i)}
    return MixedGraph(n, edges)


@st.composite
def dags(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    arrows = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())]
    return MixedGraph(n, arrows)


@pytest.fixture
def rng():
    return random.Random(20240611)


# -- acceptance reporting ----------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
