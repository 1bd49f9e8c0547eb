import csv
import json

import numpy as np
import pytest

from ecsearch.cli import run
from ecsearch.graph import format_graph, parse_graph

from conftest import G


@pytest.fixture
def graph_file(tmp_path):
    def make(text, name="g.txt"):
        """Write ``text``; compact ``"a b | a->b"`` specs are converted to the file format."""
        if "|" in text:
            names = text.partition("|")[0].split()
            text = format_graph(G(text), names)
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return make


@pytest.fixture
def data_file(tmp_path):
    rng = np.random.default_rng(0)
    a = rng.integers(0, 2, 600)
    b = np.where(rng.random(600) < 0.9, a, 1 - a)
    c = rng.integers(0, 2, 600)
    p = tmp_path / "data.csv"
    with p.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["a", "b", "c"])
        w.writerows(np.column_stack([a, b, c]).tolist())
    return str(p)


def test_essentialize_chain(graph_file, capsys):
    assert run(["essentialize", graph_file("a b c | a->b b->c")]) == 0
    g, names = parse_graph(capsys.readouterr().out)
    assert sorted(g.lines()) == [(0, 1), (1, 2)] and not g.arrows()


def test_essentialize_rejects_non_dag(graph_file, capsys):
    assert run(["essentialize", graph_file("a b | a--b")]) == 1
    assert "DAG" in capsys.readouterr().err


def test_validate(graph_file, capsys):
    assert run(["validate", graph_file("a b c | a->c b->c")]) == 0
    assert capsys.readouterr().out.strip() == "essential"
    assert run(["validate", graph_file("a b | a->b")]) == 1
    out = capsys.readouterr()
    assert out.out.startswith("not essential: strongly_protected")
    assert out.err


def test_members(graph_file, capsys):
    assert run(["members", "--count", graph_file("a b c | a--b b--c")]) == 0
    assert capsys.readouterr().out.strip() == "3"
    assert run(["members", graph_file("a b | a->b")]) == 1


def test_output_is_byte_identical(graph_file, capsys):
    path = graph_file("a b c d | a--b b--c c--d")
    outs = []
    for _ in range(2):
        assert run(["neighbours", path]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_round_trip(graph_file, capsys):
    run(["essentialize", graph_file("x y z | x->z y->z")])
    text = capsys.readouterr().out
    assert run(["essentialize", graph_file(text, "again.txt")]) == 0
    assert capsys.readouterr().out == text


def test_neighbours_text_and_json(graph_file, capsys):
    path = graph_file("a b c |")
    assert run(["neighbours", path]) == 0
    assert capsys.readouterr().out.count("# neighbour") == 3
    assert run(["neighbours", "--json", path]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["partial"] is False
    assert len(doc["neighbours"]) == 3
    first = doc["neighbours"][0]
    assert first["pair"] == ["a", "b"] and first["direction"] == "-"
    assert first["result"]["lines"] == [["a", "b"]]


def test_neighbours_with_data(graph_file, data_file, capsys):
    assert run(["neighbours", "--json", "--data", data_file, "--score", "bic",
                graph_file("a b c |")]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert all(isinstance(nb["delta"], float) for nb in doc["neighbours"])


def test_neighbours_partial_requires_opt_in(graph_file, capsys):
    path = graph_file("a b c d e | a--b a--c a--d a--e b--c b--d b--e c--d c--e d--e")
    assert run(["neighbours", "--max-subsets", "2", path]) == 1
    assert "partial" in capsys.readouterr().err
    assert run(["neighbours", "--max-subsets", "2", "--partial-ok", path]) == 0
    assert capsys.readouterr().out.startswith("# PARTIAL")


def test_neighbours_rejects_non_essential(graph_file, capsys):
    assert run(["neighbours", graph_file("a b | a->b")]) == 1


def test_learn(tmp_path, data_file, capsys):
    out, trace = tmp_path / "out.txt", tmp_path / "trace.csv"
    assert run(["learn", "--data", data_file, "--out", str(out), "--trace", str(trace)]) == 0
    g, names = parse_graph(out.read_text())
    assert names == ["a", "b", "c"]
    assert g.lines() == [(0, 1)]
    assert len(list(csv.DictReader(trace.open()))) == 1
    assert "local_optimum" in capsys.readouterr().out


def test_learn_rejects_zero_iterations(data_file):
    assert run(["learn", "--data", data_file, "--max-iter", "0"]) == 2


def test_score(graph_file, data_file, capsys):
    assert run(["score", "--data", data_file, graph_file("a b c | a--b")]) == 0
    s1 = float(capsys.readouterr().out)
    assert run(["score", "--data", data_file, graph_file("a b c | b->a")]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(s1, abs=1e-9)
    assert run(["score", "--data", data_file, graph_file("a b | a--b")]) == 1


def test_oracle_commands(capsys):
    assert run(["oracle", "enumerate", "--n", "3"]) == 0
    assert "dags=25 recurrence=25 classes=11" in capsys.readouterr().out
    assert run(["oracle", "check-boundary", "--n", "3"]) == 0
    assert "failures=0" in capsys.readouterr().out
    assert run(["oracle", "check-essentialize", "--n", "3"]) == 0
    assert run(["oracle", "check-boundary", "--n", "6"]) == 2


def test_usage_errors(graph_file, capsys):
    assert run([]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["validate", "/nonexistent/graph.txt"]) == 1
    assert run(["validate", graph_file("vertices: a b\na -> c\n")]) == 1
    assert "unknown vertex" in capsys.readouterr().err


def test_threads_env(graph_file, capsys, monkeypatch):
    monkeypatch.setenv("ECSEARCH_THREADS", "x")
    assert run(["neighbours", graph_file("a b |")]) == 1
    monkeypatch.setenv("ECSEARCH_THREADS", "2")
    assert run(["neighbours", graph_file("a b |")]) == 0
