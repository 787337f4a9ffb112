"""Symmetric TSP instances, tours, and small exact oracles.

Instances come from TSPLIB-format text (EUC_2D, CEIL_2D, or EXPLICIT
weights) and are stored as a dense integer weight matrix. Node ids are
1-based everywhere. Alongside the parser live tour costing, a seeded
start-tour generator, and a Held-Karp dynamic program that serves as the
exact optimum oracle for small instances.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

# An undirected edge is always stored as (lo, hi) with lo < hi.
Edge = tuple[int, int]

# A tour is a permutation of 1..n; the closing edge is implicit.
Tour = tuple[int, ...]

# Weights must stay below this so priority offsets added elsewhere
# cannot overflow a signed 64-bit accumulator.
MAX_WEIGHT = 2**30


class TsplibError(ValueError):
    """Raised for malformed or unsupported TSPLIB input."""


def edge(i: int, j: int) -> Edge:
    """Return the normalized undirected edge (min, max).

    Raises:
        ValueError: if i == j; self-loops never occur in a tour.
    """
    if i == j:
        raise ValueError(f"self-loop edge ({i},{i}) is not allowed")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True, eq=False)
class TspInstance:
    """A complete symmetric TSP instance with integer weights.

    The weight matrix is (n+1)x(n+1) so it can be indexed directly by
    1-based node ids; row/column 0 are unused. It is marked read-only,
    which makes instances safe to share across worker processes.
    """

    name: str
    n: int
    weights: np.ndarray
    weight_type: str = "EXPLICIT"
    coords: tuple[tuple[float, float], ...] | None = None
    optimum: int | None = None
    max_weight: int = field(init=False)

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError(f"instance needs at least 3 nodes, got {self.n}")
        w = np.asarray(self.weights, dtype=np.int64)
        if w.shape != (self.n + 1, self.n + 1):
            raise ValueError(
                f"weight matrix shape {w.shape} does not match n={self.n}"
            )
        body = w[1:, 1:]
        if not np.array_equal(body, body.T):
            raise ValueError("weight matrix must be symmetric")
        if np.any(np.diagonal(body) != 0):
            raise ValueError("weight matrix diagonal must be zero")
        if body.min() < 0:
            raise ValueError("edge weights must be non-negative")
        if body.max() >= MAX_WEIGHT:
            raise ValueError(f"edge weights must be below {MAX_WEIGHT}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "max_weight", int(body.max()))

    def weight(self, i: int, j: int) -> int:
        """Weight of edge (i, j); i and j must differ."""
        if i == j:
            raise ValueError(f"edge weight of self-loop ({i},{i}) is undefined")
        return int(self.weights[i, j])


def edge_weight(inst: TspInstance, i: int, j: int) -> int:
    """Integer weight of the undirected edge between nodes i and j."""
    return inst.weight(i, j)


def tour_length(inst: TspInstance, t: Tour) -> int:
    """Total weight of a tour, including the closing edge.

    Args:
        inst: the instance whose weights to use.
        t: a permutation of 1..n.

    Returns:
        The sum of the n edge weights around the cycle.
    """
    if sorted(t) != list(range(1, inst.n + 1)):
        raise ValueError("tour must be a permutation of 1..n")
    order = np.asarray(t, dtype=np.int64)
    return int(inst.weights[order, np.roll(order, -1)].sum())


class Rng:
    """Seeded deterministic random generator.

    Backed by numpy's PCG64, whose output stream is fully specified by
    the seed and identical on every platform, so benchmark runs are
    reproducible across machines.
    """

    def __init__(self, seed: int) -> None:
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def shuffle(self, items: list) -> None:
        """Unbiased in-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = int(self._gen.integers(0, i + 1))
            items[i], items[j] = items[j], items[i]

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        return int(self._gen.integers(0, n))


def random_start_tour(inst: TspInstance, rng: Rng) -> Tour:
    """Uniform random tour via an unbiased shuffle of the identity order."""
    order = list(range(1, inst.n + 1))
    rng.shuffle(order)
    return tuple(order)


def held_karp_optimal(inst: TspInstance) -> tuple[Tour, int]:
    """Exact optimum by bitmask dynamic programming.

    Args:
        inst: instance with n <= 12 (the DP table has n * 2^(n-1) states).

    Returns:
        (tour, length) where the tour starts at node 1 and is exactly
        optimal.

    Raises:
        ValueError: if n exceeds 12.
    """
    n = inst.n
    if n > 12:
        raise ValueError(f"exact oracle is limited to n <= 12, got n={n}")
    w = inst.weights
    # States are (visited-subset of nodes 2..n, last node); node k maps
    # to bit k-2. dp[mask][last] = shortest 1 -> ... -> last path
    # covering exactly the nodes in mask.
    full = (1 << (n - 1)) - 1
    dp = [[math.inf] * (n - 1) for _ in range(full + 1)]
    parent: list[list[int]] = [[-1] * (n - 1) for _ in range(full + 1)]
    for k in range(n - 1):
        dp[1 << k][k] = int(w[1, k + 2])
    for mask in range(1, full + 1):
        row = dp[mask]
        for last in range(n - 1):
            cost = row[last]
            if cost == math.inf or not (mask >> last) & 1:
                continue
            for nxt in range(n - 1):
                if (mask >> nxt) & 1:
                    continue
                cand = cost + int(w[last + 2, nxt + 2])
                nmask = mask | (1 << nxt)
                if cand < dp[nmask][nxt]:
                    dp[nmask][nxt] = cand
                    parent[nmask][nxt] = last
    best_len = math.inf
    best_last = -1
    for last in range(n - 1):
        cand = dp[full][last] + int(w[last + 2, 1])
        if cand < best_len:
            best_len = cand
            best_last = last
    path = []
    mask, last = full, best_last
    while last != -1:
        path.append(last + 2)
        prev = parent[mask][last]
        mask ^= 1 << last
        last = prev
    tour = (1, *reversed(path))
    return tour, int(best_len)


def brute_force_optimal(inst: TspInstance) -> tuple[Tour, int]:
    """Exact optimum by full permutation enumeration (n <= 9).

    Independent of the dynamic program above; used to cross-check it.
    """
    n = inst.n
    if n > 9:
        raise ValueError(f"enumeration oracle is limited to n <= 9, got n={n}")
    w = inst.weights.tolist()
    best_len = math.inf
    best: Tour = tuple(range(1, n + 1))
    for perm in itertools.permutations(range(2, n + 1)):
        # Fixing node 1 first and orientation via perm[0] < perm[-1]
        # visits each cyclic tour exactly once.
        if perm[0] > perm[-1]:
            continue
        total = w[1][perm[0]] + w[perm[-1]][1]
        prev = perm[0]
        for node in perm[1:]:
            total += w[prev][node]
            prev = node
        if total < best_len:
            best_len = total
            best = (1, *perm)
    return best, int(best_len)


# ---------------------------------------------------------------------------
# TSPLIB parsing and serialization


def _nint(x: float) -> int:
    # TSPLIB nearest-integer rule: nint(x) = floor(x + 0.5).
    return int(math.floor(x + 0.5))


def _coord_weights(
    coords: list[tuple[float, float]], weight_type: str
) -> np.ndarray:
    n = len(coords)
    w = np.zeros((n + 1, n + 1), dtype=np.int64)
    for i in range(1, n + 1):
        xi, yi = coords[i - 1]
        for j in range(i + 1, n + 1):
            xj, yj = coords[j - 1]
            d = math.hypot(xi - xj, yi - yj)
            val = _nint(d) if weight_type == "EUC_2D" else int(math.ceil(d))
            w[i, j] = val
            w[j, i] = val
    return w


def _read_matrix(values: list[int], n: int, layout: str) -> np.ndarray:
    w = np.zeros((n + 1, n + 1), dtype=np.int64)
    if layout == "FULL_MATRIX":
        expected = n * n
    elif layout == "UPPER_ROW":
        expected = n * (n - 1) // 2
    elif layout == "LOWER_DIAG_ROW":
        expected = n * (n + 1) // 2
    else:
        raise TsplibError(f"unsupported edge weight format: {layout}")
    if len(values) != expected:
        raise TsplibError(
            f"{layout} needs {expected} entries for n={n}, got {len(values)}"
        )
    it = iter(values)
    if layout == "FULL_MATRIX":
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                w[i, j] = next(it)
        if not np.array_equal(w, w.T):
            raise TsplibError("FULL_MATRIX entries are not symmetric")
    elif layout == "UPPER_ROW":
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                w[i, j] = next(it)
                w[j, i] = w[i, j]
    else:  # LOWER_DIAG_ROW
        for i in range(1, n + 1):
            for j in range(1, i + 1):
                w[i, j] = next(it)
                w[j, i] = w[i, j]
    if np.any(np.diagonal(w) != 0):
        raise TsplibError("weight matrix diagonal must be zero")
    return w


def parse_tsplib(text: str) -> TspInstance:
    """Parse TSPLIB-format file contents into an instance.

    Supports EDGE_WEIGHT_TYPE EUC_2D, CEIL_2D, and EXPLICIT (with
    FULL_MATRIX, UPPER_ROW, or LOWER_DIAG_ROW layouts). Anything else,
    GEO and ATT included, is rejected with an explicit error rather
    than silently approximated.

    Args:
        text: full contents of a .tsp file.

    Returns:
        A populated TspInstance.

    Raises:
        TsplibError: malformed header, unsupported weight type, or a
            dimension/data mismatch.
    """
    header: dict[str, str] = {}
    lines = text.splitlines()
    pos = 0
    section = None
    data_tokens: dict[str, list[str]] = {}
    while pos < len(lines):
        line = lines[pos].strip()
        pos += 1
        if not line or line == "EOF":
            continue
        upper = line.upper()
        if upper in ("NODE_COORD_SECTION", "EDGE_WEIGHT_SECTION"):
            section = upper
            data_tokens[section] = []
            continue
        if upper.endswith("_SECTION"):
            raise TsplibError(f"unsupported section: {line}")
        if ":" in line and section is None:
            key, _, value = line.partition(":")
            header[key.strip().upper()] = value.strip()
            continue
        if section is None:
            raise TsplibError(f"unexpected line outside any section: {line!r}")
        data_tokens[section].extend(line.split())

    name = header.get("NAME", "unnamed")
    try:
        n = int(header["DIMENSION"])
    except KeyError:
        raise TsplibError("missing DIMENSION") from None
    except ValueError:
        raise TsplibError(
            f"malformed DIMENSION: {header['DIMENSION']!r}"
        ) from None
    weight_type = header.get("EDGE_WEIGHT_TYPE", "").upper()
    if weight_type in ("EUC_2D", "CEIL_2D"):
        tokens = data_tokens.get("NODE_COORD_SECTION")
        if tokens is None:
            raise TsplibError("missing NODE_COORD_SECTION")
        if len(tokens) != 3 * n:
            raise TsplibError(
                f"expected {3 * n} coordinate fields for n={n}, "
                f"got {len(tokens)}"
            )
        coords: list[tuple[float, float]] = [(0.0, 0.0)] * n
        seen = set()
        for k in range(n):
            try:
                node = int(tokens[3 * k])
                x = float(tokens[3 * k + 1])
                y = float(tokens[3 * k + 2])
            except ValueError:
                raise TsplibError(
                    f"malformed coordinate line for entry {k + 1}"
                ) from None
            if not 1 <= node <= n or node in seen:
                raise TsplibError(f"bad or duplicate node id {node}")
            seen.add(node)
            coords[node - 1] = (x, y)
        weights = _coord_weights(coords, weight_type)
        return TspInstance(
            name=name,
            n=n,
            weights=weights,
            weight_type=weight_type,
            coords=tuple(coords),
        )
    if weight_type == "EXPLICIT":
        layout = header.get("EDGE_WEIGHT_FORMAT", "").upper()
        tokens = data_tokens.get("EDGE_WEIGHT_SECTION")
        if tokens is None:
            raise TsplibError("missing EDGE_WEIGHT_SECTION")
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise TsplibError("non-integer entry in EDGE_WEIGHT_SECTION") from None
        weights = _read_matrix(values, n, layout)
        return TspInstance(name=name, n=n, weights=weights, weight_type="EXPLICIT")
    if not weight_type:
        raise TsplibError("missing EDGE_WEIGHT_TYPE")
    raise TsplibError(f"unsupported weight type: {weight_type}")


def load_instance(path: str | Path) -> TspInstance:
    """Read and parse a TSPLIB file from disk."""
    return parse_tsplib(Path(path).read_text())


def format_explicit(inst: TspInstance) -> str:
    """Serialize any instance as EXPLICIT FULL_MATRIX TSPLIB text.

    Round-trip guarantee: parsing the output reproduces every pairwise
    weight of the original instance exactly.
    """
    lines = [
        f"NAME : {inst.name}",
        "TYPE : TSP",
        f"DIMENSION : {inst.n}",
        "EDGE_WEIGHT_TYPE : EXPLICIT",
        "EDGE_WEIGHT_FORMAT : FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
    ]
    for i in range(1, inst.n + 1):
        row = inst.weights[i, 1:]
        lines.append(" " + " ".join(str(int(v)) for v in row))
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def read_optima_registry(path: str | Path) -> dict[str, int]:
    """Read a `name,optimum` CSV registry of known optimal lengths."""
    registry: dict[str, int] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [
            f.strip() for f in reader.fieldnames
        ] != ["name", "optimum"]:
            raise ValueError(
                f"optima registry must have header 'name,optimum', "
                f"got {reader.fieldnames}"
            )
        for row in reader:
            registry[row["name"].strip()] = int(row["optimum"])
    return registry
