import csv
import random

import numpy as np
import pytest

from ecsearch.graph import MixedGraph
from ecsearch.neighbourhood import ADD_EDGE, NO_LIMITS, inclusion_boundary
from ecsearch.scoring import BDeu, BIC, Dataset, Scorer
from ecsearch.search import SearchConfig, hill_climb, random_essential_graph, write_trace

from conftest import G


def noise(n, rows, seed):
    rng = np.random.default_rng(seed)
    return Dataset.from_array(rng.integers(0, 2, size=(rows, n)), arities=[2] * n)


def chain_data(rows, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, rows)
    b = np.where(rng.random(rows) < 0.9, a, 1 - a)
    c = np.where(rng.random(rows) < 0.9, b, 1 - b)
    return Dataset.from_array(np.column_stack([a, b, c]), names=["a", "b", "c"])


def test_independent_noise_stays_empty():
    res = hill_climb(noise(4, 2000, 0), SearchConfig(metric=BIC()))
    assert res.graph == MixedGraph.empty(4)
    assert res.trace == []
    assert res.certificate == "local_optimum"


def test_perfectly_correlated_pair_is_joined():
    rng = np.random.default_rng(1)
    a = rng.integers(0, 2, 1000)
    res = hill_climb(Dataset.from_array(np.column_stack([a, a])), SearchConfig(metric=BIC()))
    assert res.graph == G("a b | a--b")


def test_chain_is_recovered():
    res = hill_climb(chain_data(3000, 2), SearchConfig())
    assert res.graph == G("a b c | a--b b--c")


def test_max_iterations():
    with pytest.raises(ValueError):
        SearchConfig(max_iterations=0)
    res = hill_climb(chain_data(3000, 2), SearchConfig(max_iterations=1))
    assert len(res.trace) == 1
    assert res.certificate == "max_iterations"


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(tie_break="random")
    with pytest.raises(ValueError):
        SearchConfig(start="middle")
    with pytest.raises(ValueError):
        SearchConfig(restarts=-1)


def test_scores_increase_and_result_is_local_optimum():
    rng = np.random.default_rng(3)
    x = rng.integers(0, 3, (800, 5))
    x[:, 2] = (x[:, 0] + x[:, 1]) % 3
    x[:, 4] = np.where(rng.random(800) < 0.8, x[:, 2], x[:, 4])
    data = Dataset.from_array(x)
    res = hill_climb(data, SearchConfig())
    scores = [s.score for s in res.trace]
    assert all(b > a for a, b in zip(scores, scores[1:]))
    assert all(s.delta > 1e-9 for s in res.trace)
    scorer = Scorer(data, BDeu())
    assert res.score == pytest.approx(scorer.score_graph(res.graph), abs=1e-8)
    for nb in inclusion_boundary(res.graph, NO_LIMITS):
        assert scorer.score_graph(nb.result) <= res.score + 1e-9


def test_search_is_deterministic():
    data = chain_data(500, 4)
    cfg = SearchConfig(restarts=2, seed=7)
    a, b = hill_climb(data, cfg), hill_climb(data, cfg)
    assert a.graph == b.graph and a.score == b.score
    assert [s.characterization for s in a.trace] == [s.characterization for s in b.trace]


def test_threads_do_not_change_the_path():
    data = chain_data(500, 5)
    one = hill_climb(data, SearchConfig())
    two = hill_climb(data, SearchConfig(threads=3))
    assert [s.characterization for s in one.trace] == [s.characterization for s in two.trace]


def test_start_graph_is_checked():
    data = chain_data(200, 6)
    with pytest.raises(ValueError):
        hill_climb(data, SearchConfig(start=G("a b c | a->b")))
    res = hill_climb(data, SearchConfig(start=G("a b c | a--b b--c")))
    assert res.graph == G("a b c | a--b b--c")


def test_complete_start_prunes():
    res = hill_climb(chain_data(3000, 2), SearchConfig(start="complete"))
    assert res.graph == G("a b c | a--b b--c")


def test_random_essential_graph_is_essential():
    from ecsearch.essential import is_essential

    rng = random.Random(0)
    assert all(is_essential(random_essential_graph(6, rng, 0.4)) for _ in range(50))


def test_write_trace(tmp_path):
    res = hill_climb(chain_data(1000, 8), SearchConfig())
    path = tmp_path / "trace.csv"
    write_trace(path, res.trace, ["a", "b", "c"])
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == len(res.trace) == 2
    assert rows[0]["kind"] == ADD_EDGE
    assert float(rows[-1]["score"]) == pytest.approx(res.score)
