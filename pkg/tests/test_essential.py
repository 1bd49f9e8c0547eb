import random

import pytest

from ecsearch import oracle
from ecsearch.essential import (
    CHAIN_GRAPH,
    CHORDAL_COMPONENTS,
    NO_ARROW_LINE,
    STRONGLY_PROTECTED,
    class_members,
    consistent_extension,
    essential_violations,
    essentialize,
    remove_line_fast,
    same_class,
    validate_essential,
)
from ecsearch.graph import GraphError, MixedGraph, skeleton, v_structures

from conftest import G, random_dag


def test_validate_examples():
    assert validate_essential(G("a b c |"))
    res = validate_essential(G("a b | a->b"))
    assert not res and res.condition == STRONGLY_PROTECTED
    assert res.violation.witness == (0, 1)
    assert validate_essential(G("a b c | a->c b->c"))


@pytest.mark.parametrize("spec, condition, witness", [
    ("a b c | a->b b--c c--a", CHAIN_GRAPH, (0, 1)),
    ("a b c d | a--b b--c c--d d--a", CHORDAL_COMPONENTS, (0, 1, 2, 3)),
    ("a b c | a->b b--c", NO_ARROW_LINE, (0, 1, 2)),
])
def test_validate_reports_condition(spec, condition, witness):
    res = validate_essential(G(spec))
    assert res.condition == condition
    if witness is not None:
        assert res.violation.witness == witness


def test_violation_describe_uses_names():
    res = validate_essential(G("a b | a->b"))
    assert res.violation.describe(["x", "y"]) == "arrow x -> y is not strongly protected"


@pytest.mark.parametrize("dag, expected", [
    ("a b c | a->b b->c", "a b c | a--b b--c"),
    ("a b c | a->c b->c", "a b c | a->c b->c"),
    ("a b c | a->b a->c b->c", "a b c | a--b a--c b--c"),
    ("a b c d | a->c b->c c->d", "a b c d | a->c b->c c->d"),
])
def test_essentialize_examples(dag, expected):
    assert essentialize(G(dag)) == G(expected)


def test_essentialize_converts_all_weak_arrows_per_round():
    # a->b->c->d chain: every arrow is weak in the first round
    assert essentialize(G("a b c d | a->b b->c c->d")).is_undirected()


def test_same_class_examples():
    assert same_class(G("a b c | a->b b->c"), G("a b c | b->a b->c"))
    assert not same_class(G("a b c | a->b b->c"), G("a b c | a->b c->b"))
    d = G("a b c | a->b")
    assert same_class(d, d)
    with pytest.raises(GraphError):
        same_class(G("a b | a--b"), d)


def test_consistent_extension_examples():
    d = G("a b c | a->b c->b")
    assert consistent_extension(d) == d
    path = G("a b c | a--b b--c")
    ext = consistent_extension(path)
    assert ext.is_dag() and skeleton(ext) == skeleton(path) and not v_structures(ext)
    assert consistent_extension(G("a b c | a->b b--c")) == G("a b c | a->b b->c")
    assert consistent_extension(G("a b c d | a--b b--c c--d d--a")) is None
    assert consistent_extension(G("a b c | a->b b->c c->a")) is None


@pytest.mark.parametrize("spec, count", [
    ("a b | a--b", 2),
    ("a b c | a--b b--c", 3),
    ("a b c | a->c b->c", 1),
    ("a b c | a--b b--c a--c", 6),
    ("a b c d | a--b b--c c--d", 4),
])
def test_class_members_counts(spec, count):
    members = list(class_members(G(spec)))
    assert len(members) == len(set(members)) == count
    assert all(m.is_dag() for m in members)


def test_remove_line_fast_examples():
    assert remove_line_fast(G("a b | a--b"), 0, 1) == G("a b |")
    out = remove_line_fast(G("a b c | a--b b--c"), 0, 1)
    assert out == G("a b c | b--c") and validate_essential(out)
    with pytest.raises(GraphError):
        remove_line_fast(G("a b c | a--b b--c a--c"), 0, 1)
    with pytest.raises(GraphError):
        remove_line_fast(G("a b | a->b"), 0, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_essentialize_is_edge_union_of_brute_force_class(n):
    for e in oracle.enumerate_classes(n):
        for d in oracle.brute_force_members(e):
            assert essentialize(d) == e


@pytest.mark.parametrize("n", [3, 4])
def test_same_class_iff_same_essential_graph(n):
    dags = oracle.enumerate_dags(n)
    ess = {d: essentialize(d) for d in dags}
    rng = random.Random(n)
    pairs = [(d1, d2) for d1 in dags for d2 in dags] if n == 3 else \
        [(rng.choice(dags), rng.choice(dags)) for _ in range(20000)]
    for d1, d2 in pairs:
        assert same_class(d1, d2) == (ess[d1] == ess[d2])


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_class_members_and_extension_cover_class(n):
    classes = oracle.enumerate_classes(n) if n <= 4 else None
    if classes is None:
        rng = random.Random(5)
        classes = {essentialize(random_dag(5, rng, rng.random())) for _ in range(300)}
    for e in classes:
        members = list(class_members(e))
        assert len(set(members)) == len(members)
        if n <= 4:
            assert set(members) == set(oracle.brute_force_members(e))
        d = members[0]
        assert all(same_class(m, d) for m in members)
        ext = consistent_extension(e)
        assert ext in members


def test_validate_random_essentializations_n8():
    rng = random.Random(8)
    for _ in range(10000):
        e = essentialize(random_dag(8, rng, rng.random()))
        assert validate_essential(e)


def test_warm_start_from_partial_union():
    # a union of some class members satisfies the warm-start hypotheses
    rng = random.Random(3)
    for _ in range(300):
        d = random_dag(6, rng, rng.random())
        e = essentialize(d)
        members = list(class_members(e))
        pick = rng.sample(members, min(len(members), rng.randint(1, 3)))
        union = set()
        for m in pick:
            union |= m.edges
        assert essentialize(MixedGraph(6, union)) == e


def test_essential_violations_lists_every_condition():
    g = G("a b c d e | a->b b--c c--a")
    assert {v.condition for v in essential_violations(g)} == {CHAIN_GRAPH, STRONGLY_PROTECTED}
    bad = G("a b c d | a--b b--c c--d d--a")
    assert [v.condition for v in essential_violations(bad)] == [CHORDAL_COMPONENTS]
