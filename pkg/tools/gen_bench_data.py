"""Generate the benchmark instance set with certified optimal lengths.

Three constructions, each with a proof that the registered optimum is
exact for the rounded Euclidean weights the parser produces:

- ring<n>: n points on a circle of radius R. Points in strictly
  convex position admit a unique optimal visiting order (the hull
  order): any other tour contains a crossing pair of edges, and
  uncrossing strictly shortens it. The certificate computes G, the
  minimum true-length gain of any single uncrossing, and requires
  G > 2n; since rounding shifts any tour length by at most n/2, every
  non-hull tour stays strictly longer after rounding.

- grid<n>: an m x k lattice (m even) with spacing s. Every pairwise
  rounded weight is at least s (asserted on the parsed matrix), so
  every tour costs at least n*s; the boustrophedon cycle uses only
  unit steps and costs exactly n*s.

- clust<n>: k clusters of c points each, cluster centres on a circle
  of radius D, points within rho of their centre. With the separation
  margins asserted below, every optimal tour visits each cluster in
  one contiguous run and the clusters in hull order; the exact
  optimum over that family is found by dynamic programming (bitmask
  Hamiltonian paths inside clusters, entry/exit chaining between
  them) on the rounded weights.

Small instances of each family are cross-checked against the exact
dynamic-programming oracle before anything is written.

Usage: python3 tools/gen_bench_data.py [--out DIR]
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import tempfile
from itertools import combinations
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from sctsp.instance import (  # noqa: E402
    Rng,
    TspInstance,
    held_karp_optimal,
    load_instance,
    random_start_tour,
    tour_length,
)


def write_euc2d(path: Path, name: str, coords: list[tuple[float, float]]) -> None:
    lines = [
        f"NAME : {name}",
        "TYPE : TSP",
        "COMMENT : synthetic instance with certified optimum",
        f"DIMENSION : {len(coords)}",
        "EDGE_WEIGHT_TYPE : EUC_2D",
        "NODE_COORD_SECTION",
    ]
    for i, (x, y) in enumerate(coords, start=1):
        lines.append(f"{i} {x:.6f} {y:.6f}")
    lines.append("EOF")
    path.write_text("\n".join(lines) + "\n")


# -- ring ----------------------------------------------------------------------


def ring_coords(n: int, radius: float, phase: float) -> list[tuple[float, float]]:
    return [
        (
            radius * math.cos(phase + 2.0 * math.pi * k / n),
            radius * math.sin(phase + 2.0 * math.pi * k / n),
        )
        for k in range(n)
    ]


def min_uncross_gain(n: int, radius: float) -> float:
    """Minimum true-length gain of uncrossing any chord pair.

    For evenly spaced circle points the gain of replacing crossing
    chords (0, a+b), (a, a+b+c) by either non-crossing completion
    depends only on the gap triple (a, b, c); both completions are
    scanned for every triple.
    """
    chord = np.array(
        [2.0 * radius * math.sin(math.pi * g / n) for g in range(2 * n)]
    )
    best = math.inf
    for a in range(1, n - 2):
        for b in range(1, n - 1 - a):
            c = np.arange(1, n - a - b)
            crossing = chord[a + b] + chord[b + c]
            near = chord[a] + chord[c]
            far = chord[a + b + c] + chord[b]
            gain = np.minimum(crossing - near, crossing - far).min()
            best = min(best, float(gain))
    return best


def build_ring(n: int, out_dir: Path) -> tuple[str, int]:
    radius, phase = 2.0e6, 0.35
    name = f"ring{n}"
    write_euc2d(out_dir / f"{name}.tsp", name, ring_coords(n, radius, phase))
    inst = load_instance(out_dir / f"{name}.tsp")
    assert inst.n == n and inst.name == name
    # coordinate quantization moves each chord by well under one unit
    gain = min_uncross_gain(n, radius) - 1.0
    assert gain > 2 * n, f"uncross margin {gain:.1f} too small for n={n}"
    optimum = tour_length(inst, tuple(range(1, n + 1)))
    return name, optimum


# -- grid ----------------------------------------------------------------------


def grid_coords(rows: int, cols: int, spacing: float) -> list[tuple[float, float]]:
    return [
        (c * spacing, r * spacing) for r in range(rows) for c in range(cols)
    ]


def serpentine_tour(rows: int, cols: int) -> tuple[int, ...]:
    """Unit-step cycle: snake over columns 2..cols, return up column 1."""
    assert rows % 2 == 0, "the closing column needs an even row count"

    def node(r: int, c: int) -> int:
        return r * cols + c + 1

    order = [node(0, 0)]
    for r in range(rows):
        cs = range(1, cols) if r % 2 == 0 else range(cols - 1, 0, -1)
        order.extend(node(r, c) for c in cs)
    order.extend(node(r, 0) for r in range(rows - 1, 0, -1))
    return tuple(order)


def build_grid(rows: int, cols: int, out_dir: Path) -> tuple[str, int]:
    spacing = 10.0
    n = rows * cols
    name = f"grid{n}"
    write_euc2d(out_dir / f"{name}.tsp", name, grid_coords(rows, cols, spacing))
    inst = load_instance(out_dir / f"{name}.tsp")
    off_diag = inst.weights[1:, 1:][~np.eye(n, dtype=bool)]
    assert off_diag.min() >= spacing, "a pair rounded below the lattice spacing"
    tour = serpentine_tour(rows, cols)
    optimum = tour_length(inst, tour)
    assert optimum == n * int(spacing), "serpentine cycle must use unit steps only"
    return name, optimum


# -- clusters --------------------------------------------------------------------


def cluster_coords(
    k: int, c: int, big_radius: float, rho: float, seed: int
) -> tuple[list[tuple[float, float]], list[tuple[float, float]]]:
    rng = Rng(seed)
    centres = ring_coords(k, big_radius, 0.2)
    coords = []
    for cx, cy in centres:
        for _ in range(c):
            # rejection-free polar jitter, radius strictly below rho
            r = rho * 0.95 * math.sqrt(rng.randrange(10**6) / 10**6)
            t = 2.0 * math.pi * rng.randrange(10**6) / 10**6
            coords.append((cx + r * math.cos(t), cy + r * math.sin(t)))
    return coords, centres


def min_path_costs(inst: TspInstance, nodes: list[int]) -> dict[tuple[int, int], int]:
    """Exact min Hamiltonian path cost between every ordered node pair.

    Bitmask DP over the (at most eight) nodes of one cluster.
    """
    c = len(nodes)
    w = [[int(inst.weight(a, b)) if a != b else 0 for b in nodes] for a in nodes]
    inf = float("inf")
    costs: dict[tuple[int, int], int] = {}
    for s in range(c):
        dp = [[inf] * c for _ in range(1 << c)]
        dp[1 << s][s] = 0
        for mask in range(1 << c):
            for last in range(c):
                cur = dp[mask][last]
                if cur == inf or not mask >> last & 1:
                    continue
                for nxt in range(c):
                    if mask >> nxt & 1:
                        continue
                    nmask = mask | 1 << nxt
                    cand = cur + w[last][nxt]
                    if cand < dp[nmask][nxt]:
                        dp[nmask][nxt] = cand
        full = (1 << c) - 1
        for e in range(c):
            if e == s and c > 1:
                continue  # no Hamiltonian s-to-s path once c exceeds 1
            assert dp[full][e] != inf
            costs[(nodes[s], nodes[e])] = int(dp[full][e])
    return costs


def clustered_optimum(inst: TspInstance, k: int, c: int) -> int:
    """Exact optimum over hull-order contiguous cluster tours."""
    clusters = [[i * c + j + 1 for j in range(c)] for i in range(k)]
    paths = [min_path_costs(inst, cl) for cl in clusters]
    best = math.inf
    for first_entry in clusters[0]:
        # state: cost of reaching each possible exit of the current cluster
        state = {
            e: paths[0][(first_entry, e)]
            for e in clusters[0]
            if e != first_entry or c == 1
        }
        for i in range(1, k):
            nxt: dict[int, float] = {}
            for entry in clusters[i]:
                arrive = min(
                    cost + inst.weight(exit_, entry)
                    for exit_, cost in state.items()
                )
                for exit_ in clusters[i]:
                    if exit_ == entry and c > 1:
                        continue
                    cand = arrive + paths[i][(entry, exit_)]
                    if cand < nxt.get(exit_, math.inf):
                        nxt[exit_] = cand
            state = nxt
        close = min(
            cost + inst.weight(exit_, first_entry)
            for exit_, cost in state.items()
        )
        best = min(best, close)
    return int(best)


def assert_cluster_margins(
    inst: TspInstance,
    centres: list[tuple[float, float]],
    k: int,
    c: int,
    rho: float,
    big_radius: float,
) -> None:
    n = inst.n
    coords = inst.coords
    for i, (cx, cy) in enumerate(centres):
        for j in range(c):
            x, y = coords[i * c + j]
            assert math.hypot(x - cx, y - cy) <= rho, "point left its cluster"
    gaps = [
        math.dist(a, b) for a, b in combinations(centres, 2)
    ]
    g_min = min(gaps)
    centre_ring = [math.dist(centres[i], centres[(i + 1) % k]) for i in range(k)]
    hull_len = sum(centre_ring)
    # family upper bound: hull-order hops plus within-cluster paths
    ub_family = hull_len + 2 * n * rho
    # split visit: at least k + 1 inter-cluster hops
    lb_split = (k + 1) * (g_min - 2 * rho)
    assert lb_split - ub_family > 2 * n, "cluster separation too small"
    # wrong order: centre tour pays at least one uncrossing gain
    g_centres = min_uncross_gain(k, big_radius) - 1.0
    assert g_centres - 2 * rho * (k + n) > 2 * n, "centre ring too tight"


def build_clusters(k: int, c: int, seed: int, out_dir: Path) -> tuple[str, int]:
    big_radius, rho = 1.0e6, 100.0
    n = k * c
    name = f"clust{n}"
    coords, centres = cluster_coords(k, c, big_radius, rho, seed)
    write_euc2d(out_dir / f"{name}.tsp", name, coords)
    inst = load_instance(out_dir / f"{name}.tsp")
    assert_cluster_margins(inst, centres, k, c, rho, big_radius)
    return name, clustered_optimum(inst, k, c)


# -- cross-checks and main -------------------------------------------------------


def cross_check(tmp_dir: Path) -> None:
    """Every family construction must match the exact oracle at small n."""
    name, opt = build_ring(12, tmp_dir)
    _, exact = held_karp_optimal(load_instance(tmp_dir / f"{name}.tsp"))
    assert opt == exact, f"ring certificate {opt} != oracle {exact}"

    name, opt = build_grid(4, 3, tmp_dir)
    _, exact = held_karp_optimal(load_instance(tmp_dir / f"{name}.tsp"))
    assert opt == exact, f"grid certificate {opt} != oracle {exact}"

    name, opt = build_clusters(4, 3, 5, tmp_dir)
    _, exact = held_karp_optimal(load_instance(tmp_dir / f"{name}.tsp"))
    assert opt == exact, f"cluster certificate {opt} != oracle {exact}"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data")
    args = parser.parse_args()
    out = Path(args.out)
    inst_dir = out / "instances"
    inst_dir.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        cross_check(Path(tmp))
    print("small-instance cross-checks against the exact oracle: ok")

    entries = [
        build_ring(29, inst_dir),
        build_grid(6, 8, inst_dir),
        build_clusters(10, 6, 11, inst_dir),
        build_grid(8, 8, inst_dir),
        build_grid(8, 10, inst_dir),
        build_clusters(12, 8, 23, inst_dir),
        build_grid(10, 10, inst_dir),
    ]
    for name, optimum in entries:
        inst = load_instance(inst_dir / f"{name}.tsp")
        for s in range(50):
            tour = random_start_tour(inst, Rng(s))
            assert tour_length(inst, tour) >= optimum, f"{name}: optimum too high"
        print(f"{name}: n={inst.n} optimum={optimum}")

    with open(out / "optima.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("name", "optimum"))
        writer.writerows(entries)
    print(f"wrote {len(entries)} instances and {out / 'optima.csv'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
