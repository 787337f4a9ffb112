"""Command-line front end: solve, bench, oracle, and onetree.

Exit codes are part of the contract: 0 on success, 1 on user error
(bad flags, unparsable input, infeasible or contradictory constraint
sets, oracle size limit), 2 when an internal invariant fails. All
numeric output reuses the benchmark row formatting, so the printed
values and any CSV written never disagree.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from sctsp.bench import (
    BenchConfig,
    BenchRow,
    CSV_HEADER,
    format_summary,
    head_to_head,
    load_optima,
    row_from_outcome,
    run_bench,
    summarize,
    write_csv,
)
from sctsp.instance import (
    Edge,
    Rng,
    TspInstance,
    TsplibError,
    edge,
    held_karp_optimal,
    load_instance,
    random_start_tour,
    tour_length,
)
from sctsp.onetree import constrained_one_tree
from sctsp.search import ALGOS, SearchParams, run_search

ORACLE_MAX_N = 12


class _UsageError(Exception):
    """Raised by the parser instead of exiting, so main controls the code."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _parse_edge_list(text: str, inst: TspInstance) -> frozenset[Edge]:
    """Parse `1,4;2,3` into normalized edges, validating endpoints."""
    edges = set()
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        pieces = part.split(",")
        if len(pieces) != 2:
            raise ValueError(f"edge {part!r} is not of the form i,j")
        i, j = (int(p) for p in pieces)
        for node in (i, j):
            if not 1 <= node <= inst.n:
                raise ValueError(f"node {node} outside 1..{inst.n}")
        edges.add(edge(i, j))
    return frozenset(edges)


def _print_row(row: BenchRow) -> None:
    for field in CSV_HEADER:
        value = getattr(row, field)
        if value is None:
            continue
        if field in ("pct_dev", "stq", "wall_ms"):
            print(f"{field} {value:.2f}")
        else:
            print(f"{field} {value}")


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    optimum = load_optima(args.optima).get(inst.name) if args.optima else None
    if args.optima and optimum is None:
        print(f"warning: no registered optimum for {inst.name}", file=sys.stderr)
    start = random_start_tour(inst, Rng(args.seed))
    params = SearchParams(algo=args.algo, seed=args.seed, chain_cap=args.chain_cap)
    outcome = run_search(inst, start, params)
    row = row_from_outcome(
        inst.name,
        inst.n,
        args.algo,
        args.seed,
        tour_length(inst, start),
        outcome,
        optimum,
    )
    _print_row(row)
    if args.csv:
        write_csv([row], args.csv)
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    paths = tuple(sorted(str(p) for p in Path(args.instances).glob("*.tsp")))
    if not paths:
        raise _UsageError(f"no .tsp files found in {args.instances}")
    algos = tuple(a.strip() for a in args.algos.split(",") if a.strip())
    workers = int(os.environ.get("SCTSP_BENCH_WORKERS", "1"))
    cfg = BenchConfig(
        instances=paths,
        algos=algos,
        repeats=args.repeats,
        base_seed=args.seed_base,
        chain_cap=args.chain_cap,
        optima_path=args.optima,
        out_path=args.out,
        workers=workers,
    )
    rows = run_bench(cfg)
    summaries = summarize(rows)
    print(format_summary(summaries))
    if "isec" in algos and "sec" in algos:
        wins, comparable = head_to_head(summaries, "isec", "sec")
        print(f"isec beats sec on {wins} of {comparable} instances")
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    if inst.n > ORACLE_MAX_N:
        print(
            f"error: exact oracle is limited to n <= {ORACLE_MAX_N}, "
            f"got n = {inst.n}",
            file=sys.stderr,
        )
        return 1
    _, length = held_karp_optimal(inst)
    print(length)
    return 0


def _cmd_onetree(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    include = _parse_edge_list(args.include, inst) if args.include else frozenset()
    exclude = _parse_edge_list(args.exclude, inst) if args.exclude else frozenset()
    tree = constrained_one_tree(inst, include, exclude)
    if tree is None:
        print("infeasible: no 1-tree satisfies the constraints", file=sys.stderr)
        return 1
    print(f"f {tree.total_weight}")
    print(f"g {tree.white_weight}")
    print(f"h {tree.nonwhite_weight}")
    print("edges " + " ".join(f"{i},{j}" for i, j in sorted(tree.edges)))
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="sctsp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run one engine on one instance")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--algo", required=True, choices=ALGOS)
    solve.add_argument("--seed", required=True, type=int)
    solve.add_argument("--chain-cap", default="full", choices=("full", "half"))
    solve.add_argument("--optima", default=None)
    solve.add_argument("--csv", default=None)
    solve.set_defaults(func=_cmd_solve)

    bench = sub.add_parser("bench", help="run the full benchmark campaign")
    bench.add_argument("--instances", required=True, help="directory of .tsp files")
    bench.add_argument("--algos", default=",".join(ALGOS))
    bench.add_argument("--repeats", type=int, default=10)
    bench.add_argument("--seed-base", type=int, default=0)
    bench.add_argument("--chain-cap", default="full", choices=("full", "half"))
    bench.add_argument("--optima", default=None)
    bench.add_argument("--out", required=True)
    bench.set_defaults(func=_cmd_bench)

    oracle = sub.add_parser("oracle", help="print the exact optimum (n <= 12)")
    oracle.add_argument("--instance", required=True)
    oracle.set_defaults(func=_cmd_oracle)

    onetree = sub.add_parser("onetree", help="print a constrained 1-tree bound")
    onetree.add_argument("--instance", required=True)
    onetree.add_argument("--include", default=None, help='edges as "1,4;2,3"')
    onetree.add_argument("--exclude", default=None, help='edges as "1,4;2,3"')
    onetree.set_defaults(func=_cmd_onetree)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (TsplibError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"internal error: invariant violated: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
