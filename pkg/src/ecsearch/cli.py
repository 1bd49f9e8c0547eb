"""Command-line entry point: ``ecsearch <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

from . import oracle
from .essential import NotEssentialError, class_members, essentialize, validate_essential
from .graph import GraphError, MixedGraph, format_graph, parse_graph
from .neighbourhood import EnumerationLimits, inclusion_boundary
from .scoring import DataError, Scorer, make_metric, read_csv
from .search import SearchConfig, format_characterization, hill_climb, write_trace

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class DomainError(Exception):
    pass


def _read_graph(path: str) -> tuple[MixedGraph, list[str]]:
    text = sys.stdin.read() if path == "-" else open(path).read()
    return parse_graph(text)


def _read_essential(path: str) -> tuple[MixedGraph, list[str]]:
    g, names = _read_graph(path)
    res = validate_essential(g)
    if not res:
        raise DomainError(f"{path}: not an essential graph: {res.violation.describe(names)}")
    return g, names


def _arity_map(items: Sequence[str] | None) -> dict[str, int]:
    out = {}
    for item in items or ():
        name, sep, val = item.partition("=")
        if not sep or not val.isdigit():
            raise DomainError(f"--arity expects NAME=K, got {item!r}")
        out[name] = int(val)
    return out


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("ECSEARCH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainError(f"ECSEARCH_THREADS must be an integer, got {env!r}") from None
    return 1


def _load_data(args, names: Sequence[str] | None = None):
    data = read_csv(args.data, _arity_map(args.arity))
    return data.reorder(names) if names is not None else data


# -- commands --------------------------------------------------------------


def cmd_essentialize(args) -> int:
    g, names = _read_graph(args.graph)
    if not g.is_dag():
        raise DomainError(f"{args.graph}: input must be a DAG")
    sys.stdout.write(format_graph(essentialize(g), names))
    return EXIT_OK


def cmd_validate(args) -> int:
    g, names = _read_graph(args.graph)
    res = validate_essential(g)
    if res:
        print("essential")
        return EXIT_OK
    print(f"not essential: {res.condition}")
    print(f"{args.graph}: {res.condition}: {res.violation.describe(names)}", file=sys.stderr)
    return EXIT_DOMAIN


def cmd_members(args) -> int:
    e, names = _read_essential(args.graph)
    members = list(class_members(e))
    if args.count:
        print(len(members))
        return EXIT_OK
    members.sort(key=lambda d: d.arrows())
    sys.stdout.write("\n".join(format_graph(d, names) for d in members))
    return EXIT_OK


def cmd_score(args) -> int:
    g, names = _read_graph(args.graph)
    data = _load_data(args, names)
    score = Scorer(data, make_metric(args.score, args.ess)).score_graph(g)
    print(repr(score))
    return EXIT_OK


def _neighbour_record(nb, names, delta):
    pair, kind, _ = format_characterization(nb.characterization, names)
    r = nb.result
    return {
        "pair": [names[nb.op.a], names[nb.op.b]],
        "kind": kind,
        "direction": nb.direction,
        "created": [{"head": names[v.head], "tails": [names[t] for t in v.tails]}
                    for v in sorted(nb.characterization.o)],
        "result": {
            "vertices": list(names),
            "arrows": [[names[a], names[b]] for a, b in r.arrows()],
            "lines": [[names[a], names[b]] for a, b in r.lines()],
        },
        "delta_spec": {
            "vertex": names[nb.delta.x],
            "old_parents": sorted(names[p] for p in nb.delta.old_parents),
            "new_parents": sorted(names[p] for p in nb.delta.new_parents),
        },
        "delta": delta,
    }


def cmd_neighbours(args) -> int:
    e, names = _read_essential(args.graph)
    limits = EnumerationLimits(args.max_subsets)
    nbs = inclusion_boundary(e, limits, _threads(args))
    if nbs.partial and not args.partial_ok:
        raise DomainError("complete-subset enumeration was truncated by the cap; "
                          "pass --partial-ok to accept a partial neighbourhood")
    scorer = None
    if args.data:
        scorer = Scorer(_load_data(args, names), make_metric(args.score, args.ess))
    deltas = [scorer.delta(nb.delta) if scorer else None for nb in nbs]
    if args.json:
        doc = {"partial": nbs.partial,
               "neighbours": [_neighbour_record(nb, names, d) for nb, d in zip(nbs, deltas)]}
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    if nbs.partial:
        print("# PARTIAL: enumeration truncated")
    for i, (nb, d) in enumerate(zip(nbs, deltas), 1):
        pair, kind, o = format_characterization(nb.characterization, names)
        extra = f" delta={d!r}" if d is not None else ""
        print(f"# neighbour {i}: pair={pair} kind={kind} N{nb.direction} created={{{o}}}{extra}")
        sys.stdout.write(format_graph(nb.result, names))
    return EXIT_OK


def cmd_learn(args) -> int:
    data = read_csv(args.data, _arity_map(args.arity))
    names = list(data.names)
    start: str | MixedGraph = args.start
    if args.start not in ("empty", "complete"):
        start, gnames = _read_essential(args.start)
        data = data.reorder(gnames)
        names = gnames
    elif args.start == "complete":
        print("warning: the inclusion boundary is a poor fit for pruning down from the "
              "complete graph", file=sys.stderr)
    cfg = SearchConfig(
        metric=make_metric(args.score, args.ess),
        start=start,
        max_iterations=args.max_iter,
        max_subsets_per_pair=args.max_subsets,
        seed=args.seed,
        restarts=args.restarts,
        threads=_threads(args),
    )
    res = hill_climb(data, cfg)
    text = format_graph(res.graph, names)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.trace:
        write_trace(args.trace, res.trace, names)
    print(f"# score={res.score!r} moves={len(res.trace)} status={res.certificate}",
          file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_oracle_enumerate(args) -> int:
    dags = oracle.enumerate_dags(args.n)
    classes = oracle.enumerate_classes(args.n)
    expected = oracle.count_labeled_dags(args.n)
    print(f"n={args.n} dags={len(dags)} recurrence={expected} classes={len(classes)}")
    return EXIT_OK if len(dags) == expected else EXIT_DOMAIN


def cmd_oracle_check_boundary(args) -> int:
    from .neighbourhood import NO_LIMITS

    failures = 0
    classes = oracle.enumerate_classes(args.n)
    for e in classes:
        nbs = inclusion_boundary(e, NO_LIMITS)
        got = (frozenset(nb.result for nb in nbs.plus), frozenset(nb.result for nb in nbs.minus))
        if not got == oracle.boundary_by_definition(e) == oracle.boundary_by_arrow_changes(e):
            failures += 1
            print(f"mismatch:\n{format_graph(e)}", file=sys.stderr)
    print(f"n={args.n} classes={len(classes)} failures={failures}")
    return EXIT_OK if failures == 0 else EXIT_DOMAIN


def cmd_oracle_check_essentialize(args) -> int:
    failures = 0
    dags = oracle.enumerate_dags(args.n)
    for d in dags:
        union = set()
        for m in dags:
            if m.n == d.n and oracle.independences(m) == oracle.independences(d):
                union |= m.edges
        e = essentialize(d)
        if e != MixedGraph(d.n, union) or not validate_essential(e):
            failures += 1
    print(f"n={args.n} dags={len(dags)} failures={failures}")
    return EXIT_OK if failures == 0 else EXIT_DOMAIN


# -- parser ----------------------------------------------------------------


def _add_data_opts(p, required: bool) -> None:
    p.add_argument("--data", required=required, help="CSV dataset, header row = variable names")
    p.add_argument("--score", choices=("bic", "bdeu"), default="bdeu")
    p.add_argument("--ess", type=float, default=1.0, help="BDeu equivalent sample size")
    p.add_argument("--arity", action="append", metavar="NAME=K", help="declare a variable's arity")


def _positive_int(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return val


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecsearch", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="hill-climb from data")
    _add_data_opts(p, required=True)
    p.add_argument("--start", default="empty", help="empty, complete, or a graph file")
    p.add_argument("--max-iter", type=_positive_int, default=1000)
    p.add_argument("--max-subsets", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--trace")
    p.add_argument("--threads", type=_positive_int)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("neighbours", help="list the inclusion boundary of an essential graph")
    p.add_argument("graph")
    _add_data_opts(p, required=False)
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-subsets", type=int, default=None)
    p.add_argument("--partial-ok", action="store_true")
    p.add_argument("--threads", type=_positive_int)
    p.set_defaults(func=cmd_neighbours)

    for name, func, help_ in (
        ("essentialize", cmd_essentialize, "essential graph of a DAG"),
        ("validate", cmd_validate, "check the essential-graph conditions"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("graph")
        p.set_defaults(func=func)

    p = sub.add_parser("members", help="DAGs of the class of an essential graph")
    p.add_argument("graph")
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=cmd_members)

    p = sub.add_parser("score", help="score a DAG or essential graph")
    p.add_argument("graph")
    _add_data_opts(p, required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("oracle", help="brute-force verification")
    osub = p.add_subparsers(dest="oracle_command", required=True)
    for name, func, cap in (
        ("enumerate", cmd_oracle_enumerate, oracle.MAX_ENUMERATION_N),
        ("check-boundary", cmd_oracle_check_boundary, oracle.MAX_DEFINITION_N),
        ("check-essentialize", cmd_oracle_check_essentialize, oracle.MAX_ENUMERATION_N),
    ):
        q = osub.add_parser(name)
        q.add_argument("--n", type=int, required=True, choices=range(1, cap + 1))
        q.set_defaults(func=func)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (DomainError, GraphError, DataError, NotEssentialError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
