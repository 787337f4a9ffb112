"""Shared instance factories and naive reference implementations.

The reference functions here are deliberately written in the most
obvious way possible (plain loops, no shared code with the package) so
they can serve as independent oracles.
"""

from __future__ import annotations

import math

import numpy as np

from sctsp.instance import Rng, TspInstance

# Hand-picked 4-node weights; tour (1,2,3,4) costs 6, which is optimal.
T4_WEIGHTS = {
    (1, 2): 1, (1, 3): 2, (1, 4): 3,
    (2, 3): 1, (2, 4): 2, (3, 4): 1,
}

# Hand-picked 5-node weights; tour (1,2,3,4,5) costs 20.
T5_WEIGHTS = {
    (1, 2): 2, (1, 3): 9, (1, 4): 8, (1, 5): 3,
    (2, 3): 4, (2, 4): 8, (2, 5): 7,
    (3, 4): 5, (3, 5): 8, (4, 5): 6,
}


def explicit_instance(
    n: int, pair_weights: dict[tuple[int, int], int], name: str = "test"
) -> TspInstance:
    w = np.zeros((n + 1, n + 1), dtype=np.int64)
    for (i, j), val in pair_weights.items():
        w[i, j] = val
        w[j, i] = val
    return TspInstance(name=name, n=n, weights=w)


def t4_instance() -> TspInstance:
    return explicit_instance(4, T4_WEIGHTS, name="t4")


def t5_instance() -> TspInstance:
    return explicit_instance(5, T5_WEIGHTS, name="t5")


def random_explicit(seed: int, n: int, max_w: int = 50) -> TspInstance:
    """Random symmetric integer weights in [1, max_w]."""
    gen = np.random.Generator(np.random.PCG64(seed))
    w = np.zeros((n + 1, n + 1), dtype=np.int64)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            v = int(gen.integers(1, max_w + 1))
            w[i, j] = v
            w[j, i] = v
    return TspInstance(name=f"rand{n}s{seed}", n=n, weights=w)


def random_euclidean(seed: int, n: int, box: int = 1000) -> TspInstance:
    """Random integer points in a box, nearest-integer distances."""
    gen = np.random.Generator(np.random.PCG64(seed))
    pts = [(float(x), float(y)) for x, y in gen.integers(0, box, size=(n, 2))]
    w = np.zeros((n + 1, n + 1), dtype=np.int64)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            d = math.hypot(pts[i - 1][0] - pts[j - 1][0],
                           pts[i - 1][1] - pts[j - 1][1])
            w[i, j] = w[j, i] = int(math.floor(d + 0.5))
    return TspInstance(
        name=f"euc{n}s{seed}", n=n, weights=w,
        weight_type="EUC_2D", coords=tuple(pts),
    )


def random_tour(seed: int, n: int) -> tuple[int, ...]:
    order = list(range(1, n + 1))
    Rng(seed).shuffle(order)
    return tuple(order)


def naive_tour_length(inst: TspInstance, tour: tuple[int, ...]) -> int:
    """Reference tour cost: explicit loop, no vectorization."""
    total = 0
    for k in range(len(tour)):
        a = tour[k]
        b = tour[(k + 1) % len(tour)]
        total += int(inst.weights[a, b])
    return total


def canonical_tour(tour: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical representative of a tour under rotation and reversal."""
    k = tour.index(1)
    fwd = tour[k:] + tour[:k]
    rev = (fwd[0],) + tuple(reversed(fwd[1:]))
    return min(fwd, rev)


# -- brute-force tree oracles ------------------------------------------------


def _is_spanning_tree(edges, nodes) -> bool:
    if len(edges) != len(nodes) - 1:
        return False
    parent = {v: v for v in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        if a not in parent or b not in parent:
            return False
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return len({find(v) for v in nodes}) == 1


def enum_min_spanning_tree(inst, nodes, include, exclude):
    """Reference constrained MST weight by subset enumeration.

    Returns the minimum weight over all spanning trees of `nodes` that
    contain every include edge and no exclude edge, or None when no
    such tree exists.
    """
    import itertools

    include = {tuple(sorted(e)) for e in include}
    exclude = {tuple(sorted(e)) for e in exclude}
    nodes = sorted(nodes)
    cand = [
        (a, b)
        for i, a in enumerate(nodes)
        for b in nodes[i + 1 :]
        if (a, b) not in exclude
    ]
    best = None
    for combo in itertools.combinations(cand, len(nodes) - 1):
        s = set(combo)
        if not include <= s:
            continue
        if not _is_spanning_tree(s, nodes):
            continue
        weight = sum(int(inst.weights[a, b]) for a, b in s)
        if best is None or weight < best:
            best = weight
    return best


def enum_min_one_tree(inst, include, exclude):
    """Reference constrained 1-tree weight.

    A 1-tree is a spanning tree on {2..n} plus two distinct edges at
    node 1; the minimum splits into the two independent parts.
    """
    import itertools

    include = {tuple(sorted(e)) for e in include}
    exclude = {tuple(sorted(e)) for e in exclude}
    inc1 = {e for e in include if 1 in e}
    exc1 = {e for e in exclude if 1 in e}
    if len(inc1) > 2:
        return None
    mst = enum_min_spanning_tree(
        inst, range(2, inst.n + 1), include - inc1, exclude - exc1
    )
    if mst is None:
        return None
    v1_edges = [
        (1, j) for j in range(2, inst.n + 1) if (1, j) not in exc1
    ]
    best_pair = None
    for pair in itertools.combinations(v1_edges, 2):
        if not inc1 <= set(pair):
            continue
        weight = sum(int(inst.weights[a, b]) for a, b in pair)
        if best_pair is None or weight < best_pair:
            best_pair = weight
    if best_pair is None:
        return None
    return mst + best_pair


# -- stem-and-cycle reference checks ----------------------------------------


def check_sc(sc, n: int) -> None:
    """Assert every structural invariant of a stem-and-cycle structure."""
    from sctsp.stemcycle import is_degenerate

    nodes = set(sc.cycle) | set(sc.stem)
    assert nodes == set(range(1, n + 1)), "structure must span all nodes"
    assert len(sc.cycle) + len(sc.stem) == n + 1, "cycle/stem overlap"
    assert set(sc.cycle) & set(sc.stem) == {sc.root}
    assert sc.cycle[0] == sc.root and sc.stem[0] == sc.root
    assert len(sc.cycle) >= 3
    assert sc.tip == sc.stem[-1]
    assert len(sc.edges) == n, "structure must have exactly n edges"

    deg: dict[int, int] = {v: 0 for v in nodes}
    parent = {v: v for v in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in sc.edges:
        deg[a] += 1
        deg[b] += 1
        parent[find(a)] = find(b)
    assert len({find(v) for v in nodes}) == 1, "structure must be connected"
    if is_degenerate(sc):
        assert all(d == 2 for d in deg.values())
    else:
        assert deg[sc.root] == 3
        assert deg[sc.tip] == 1
        others = [deg[v] for v in nodes if v not in (sc.root, sc.tip)]
        assert all(d == 2 for d in others)


def check_state(sc, cs) -> None:
    """Constraint-state consistency against its structure."""
    assert cs.white <= sc.edges, "white edges must stay in the structure"
    assert not (cs.deleted & sc.edges), "deleted edges must stay out"
    assert not (cs.white & cs.deleted)


def random_walk_state(inst, seed: int, steps: int):
    """A reachable (structure, constraints) pair via random legal moves."""
    from sctsp.stemcycle import ConstraintState, apply_move, from_tour, generate_moves

    rng = Rng(seed)
    tour = random_tour(seed + 7919, inst.n)
    root = 1 + rng.randrange(inst.n)
    sc = from_tour(tour, root)
    cs = ConstraintState.initial()
    for _ in range(steps):
        moves = generate_moves(sc, cs, inst)
        if not moves:
            break
        sc, cs = apply_move(sc, cs, moves[rng.randrange(len(moves))])
    return sc, cs
