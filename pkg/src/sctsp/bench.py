"""Benchmark harness: seeded repeated runs, metrics, and CSV emission.

The protocol pairs algorithms on identical start tours. For every
(instance, repeat) pair a start tour is drawn from seed
base_seed XOR repeat, and every requested algorithm runs from that
same tour, so per-repeat comparisons are paired rather than
independent draws. One row is produced per (instance, repeat, algo).

Rows carry the solve statistics plus two quality metrics relative to
the registered optimum: pct_dev = 100 * (best - opt) / opt and
stq = start / opt. Both are stored already rounded to two decimals so
a written CSV parses back to exactly the in-memory rows.

Runs are independent, so they may execute across worker processes;
each run's seed depends only on (base_seed, repeat), and rows are
sorted into canonical (instance, repeat, algo) order after the
gather, so the worker count never changes the output.
"""

from __future__ import annotations

import csv
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean

import numpy as np

from sctsp.instance import (
    Rng,
    Tour,
    load_instance,
    random_start_tour,
    read_optima_registry,
    tour_length,
)
from sctsp.search import ALGOS, SearchOutcome, SearchParams, run_search

CSV_HEADER = (
    "instance",
    "n",
    "algo",
    "seed",
    "start_length",
    "best_length",
    "optimum",
    "pct_dev",
    "stq",
    "nodes_expanded",
    "nodes_generated",
    "onetrees_computed",
    "onetrees_reused",
    "wall_ms",
)

# columns written with two fractional digits
_FLOAT_FIELDS = ("pct_dev", "stq", "wall_ms")


@dataclass(frozen=True)
class BenchConfig:
    """One benchmark campaign.

    Attributes:
        instances: TSPLIB file paths, in reporting order.
        algos: engines to run, a non-empty subset of sec/isec/fisec;
            order is preserved in rows and summaries.
        repeats: paired start tours per instance, at least 1.
        base_seed: 64-bit seed; repeat r runs with seed base_seed ^ r.
        chain_cap: "full" (2n levels) or "half" (n levels).
        optima_path: optional `name,optimum` registry for pct_dev/stq.
        out_path: optional CSV destination for the row dump.
        workers: process count; results are identical for any value.
    """

    instances: tuple[str, ...]
    algos: tuple[str, ...] = ALGOS
    repeats: int = 10
    base_seed: int = 0
    chain_cap: str = "full"
    optima_path: str | None = None
    out_path: str | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.instances:
            raise ValueError("config needs at least one instance")
        if not self.algos:
            raise ValueError("config needs at least one algo")
        bad = [a for a in self.algos if a not in ALGOS]
        if bad or len(set(self.algos)) != len(self.algos):
            raise ValueError(f"algos must be distinct members of {ALGOS}")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")
        if not 0 <= self.base_seed < 2**64:
            raise ValueError("base_seed must fit in 64 bits")
        if self.chain_cap not in ("full", "half"):
            raise ValueError("chain_cap must be 'full' or 'half'")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass(frozen=True)
class BenchRow:
    """One (instance, repeat, algo) run. Field order matches CSV_HEADER."""

    instance: str
    n: int
    algo: str
    seed: int
    start_length: int
    best_length: int
    optimum: int | None
    pct_dev: float | None
    stq: float | None
    nodes_expanded: int
    nodes_generated: int
    onetrees_computed: int
    onetrees_reused: int
    wall_ms: float


@dataclass(frozen=True)
class BenchSummary:
    """Aggregates over the repeat dimension for one (instance, algo)."""

    instance: str
    n: int
    algo: str
    runs: int
    min_pct_dev: float | None
    mean_pct_dev: float | None
    mean_cpu: float
    mean_stq: float | None


def row_from_outcome(
    name: str,
    n: int,
    algo: str,
    seed: int,
    start_length: int,
    outcome: SearchOutcome,
    optimum: int | None,
) -> BenchRow:
    """Assemble a row, quantizing float metrics to the CSV precision."""
    pct_dev = stq = None
    if optimum is not None:
        pct_dev = round(100.0 * (outcome.best_length - optimum) / optimum, 2)
        stq = round(start_length / optimum, 2)
    return BenchRow(
        instance=name,
        n=n,
        algo=algo,
        seed=seed,
        start_length=start_length,
        best_length=outcome.best_length,
        optimum=optimum,
        pct_dev=pct_dev,
        stq=stq,
        nodes_expanded=outcome.nodes_expanded,
        nodes_generated=outcome.nodes_generated,
        onetrees_computed=outcome.onetrees_computed,
        onetrees_reused=outcome.onetrees_reused,
        wall_ms=round(outcome.wall_ms, 2),
    )


def _solve_one(
    path: str, algo: str, seed: int, chain_cap: str, optimum: int | None
) -> BenchRow:
    inst = load_instance(path)
    start = random_start_tour(inst, Rng(seed))
    params = SearchParams(algo=algo, seed=seed, chain_cap=chain_cap)
    outcome = run_search(inst, start, params)
    return row_from_outcome(
        inst.name, inst.n, algo, seed, tour_length(inst, start), outcome, optimum
    )


def _run_task(task: tuple) -> tuple[tuple[int, int, int], BenchRow]:
    # top-level so ProcessPoolExecutor can pickle it
    inst_idx, repeat, algo_idx, path, algo, seed, chain_cap, optimum = task
    row = _solve_one(path, algo, seed, chain_cap, optimum)
    return (inst_idx, repeat, algo_idx), row


def load_optima(path: str | None) -> dict[str, int]:
    """Read the optima registry, or warn and carry on without one."""
    if path is None:
        return {}
    try:
        return read_optima_registry(path)
    except FileNotFoundError:
        print(f"warning: optima registry {path} not found", file=sys.stderr)
        return {}


def run_bench(cfg: BenchConfig) -> list[BenchRow]:
    """Execute the campaign and return rows in canonical order.

    The order is (instance as configured, repeat, algo as configured).
    Instances missing from the optima registry get empty pct_dev/stq
    and a warning on stderr.
    """
    optima = load_optima(cfg.optima_path)
    tasks = []
    for inst_idx, path in enumerate(cfg.instances):
        inst = load_instance(path)
        optimum = optima.get(inst.name)
        if optimum is None and optima:
            print(
                f"warning: no registered optimum for {inst.name}",
                file=sys.stderr,
            )
        for repeat in range(cfg.repeats):
            seed = cfg.base_seed ^ repeat
            for algo_idx, algo in enumerate(cfg.algos):
                tasks.append(
                    (
                        inst_idx,
                        repeat,
                        algo_idx,
                        path,
                        algo,
                        seed,
                        cfg.chain_cap,
                        optimum,
                    )
                )
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            keyed = list(pool.map(_run_task, tasks))
    else:
        keyed = [_run_task(t) for t in tasks]
    keyed.sort(key=lambda kr: kr[0])
    rows = [row for _, row in keyed]
    if cfg.out_path is not None:
        write_csv(rows, cfg.out_path)
    return rows


def _fmt(value: int | float | str | None, field: str) -> str:
    if value is None:
        return ""
    if field in _FLOAT_FIELDS:
        return f"{value:.2f}"
    return str(value)


def write_csv(rows: list[BenchRow], path: str | Path) -> None:
    """Write rows under the fixed header, floats with two decimals."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(
                _fmt(getattr(row, field), field) for field in CSV_HEADER
            )


def read_csv(path: str | Path) -> list[BenchRow]:
    """Parse a CSV written by write_csv back into rows."""
    rows: list[BenchRow] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        for rec in reader:
            rows.append(
                BenchRow(
                    instance=rec["instance"],
                    n=int(rec["n"]),
                    algo=rec["algo"],
                    seed=int(rec["seed"]),
                    start_length=int(rec["start_length"]),
                    best_length=int(rec["best_length"]),
                    optimum=int(rec["optimum"]) if rec["optimum"] else None,
                    pct_dev=float(rec["pct_dev"]) if rec["pct_dev"] else None,
                    stq=float(rec["stq"]) if rec["stq"] else None,
                    nodes_expanded=int(rec["nodes_expanded"]),
                    nodes_generated=int(rec["nodes_generated"]),
                    onetrees_computed=int(rec["onetrees_computed"]),
                    onetrees_reused=int(rec["onetrees_reused"]),
                    wall_ms=float(rec["wall_ms"]),
                )
            )
    return rows


def summarize(rows: list[BenchRow]) -> list[BenchSummary]:
    """Aggregate min/mean metrics per (instance, algo).

    Groups keep first-appearance order. pct_dev and stq aggregates are
    None when no row in the group has a registered optimum.
    """
    if not rows:
        raise ValueError("no rows to summarize")
    groups: dict[tuple[str, str], list[BenchRow]] = {}
    for row in rows:
        groups.setdefault((row.instance, row.algo), []).append(row)
    out = []
    for (instance, algo), members in groups.items():
        devs = [r.pct_dev for r in members if r.pct_dev is not None]
        stqs = [r.stq for r in members if r.stq is not None]
        out.append(
            BenchSummary(
                instance=instance,
                n=members[0].n,
                algo=algo,
                runs=len(members),
                min_pct_dev=min(devs) if devs else None,
                mean_pct_dev=fmean(devs) if devs else None,
                mean_cpu=fmean(r.wall_ms for r in members),
                mean_stq=fmean(stqs) if stqs else None,
            )
        )
    return out


def format_summary(summaries: list[BenchSummary]) -> str:
    """Render summaries as an aligned text table."""
    header = ("instance", "n", "algo", "runs", "min%", "mean%", "cpu_ms", "stq")
    body = [
        (
            s.instance,
            str(s.n),
            s.algo,
            str(s.runs),
            _fmt(s.min_pct_dev, "pct_dev"),
            _fmt(s.mean_pct_dev, "pct_dev"),
            _fmt(s.mean_cpu, "wall_ms"),
            _fmt(s.mean_stq, "stq"),
        )
        for s in summaries
    ]
    widths = [
        max(len(header[c]), *(len(row[c]) for row in body)) if body else len(header[c])
        for c in range(len(header))
    ]
    lines = [
        "  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip()
        for row in [header, *body]
    ]
    return "\n".join(lines)


def write_summary_csv(summaries: list[BenchSummary], path: str | Path) -> None:
    """Write summaries as CSV with the same float precision as rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ("instance", "n", "algo", "runs", "min_pct_dev", "mean_pct_dev",
             "mean_cpu", "mean_stq")
        )
        for s in summaries:
            writer.writerow(
                (
                    s.instance,
                    s.n,
                    s.algo,
                    s.runs,
                    _fmt(s.min_pct_dev, "pct_dev"),
                    _fmt(s.mean_pct_dev, "pct_dev"),
                    _fmt(s.mean_cpu, "wall_ms"),
                    _fmt(s.mean_stq, "stq"),
                )
            )


def head_to_head(
    summaries: list[BenchSummary], challenger: str, baseline: str
) -> tuple[int, int]:
    """Count instances where the challenger's mean pct_dev is lower.

    Returns (wins, comparable): comparable counts instances where both
    algos have a mean pct_dev.
    """
    means: dict[str, dict[str, float]] = {}
    for s in summaries:
        if s.mean_pct_dev is not None:
            means.setdefault(s.instance, {})[s.algo] = s.mean_pct_dev
    wins = comparable = 0
    for per_algo in means.values():
        if challenger in per_algo and baseline in per_algo:
            comparable += 1
            if per_algo[challenger] < per_algo[baseline]:
                wins += 1
    return wins, comparable


def expansion_slope(rows: list[BenchRow], algo: str) -> float:
    """Least-squares slope of mean nodes_expanded against n for one algo.

    A positive slope confirms chain effort grows with instance size.
    """
    per_inst: dict[str, tuple[int, list[int]]] = {}
    for row in rows:
        if row.algo != algo:
            continue
        per_inst.setdefault(row.instance, (row.n, []))[1].append(row.nodes_expanded)
    if len(per_inst) < 2:
        raise ValueError("need rows for at least two instances")
    ns = np.array([n for n, _ in per_inst.values()], dtype=float)
    means = np.array([fmean(e) for _, e in per_inst.values()], dtype=float)
    slope, _ = np.polyfit(ns, means, 1)
    return float(slope)
