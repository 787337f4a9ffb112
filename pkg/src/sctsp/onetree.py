"""Constrained minimum spanning trees and constrained 1-trees.

A 1-tree relaxation of the TSP: a minimum spanning tree over nodes
{v_2..v_n} plus the two cheapest edges at the excluded node v_1. Its
total weight never exceeds the optimal tour length, and the bound
stays valid under the constraints an ejection chain accumulates:
include (white) edges are forced into the tree, exclude (tabu) edges
are kept out. The weight of such a constrained 1-tree is the f = g + h
evaluation used to rank chain moves, where g sums the white edges and
h the rest.

The tree grower is a dense Prim variant. Priorities are encoded in a
single integer key per edge: white edges are shifted far below every
real weight (highest priority, still ordered by weight among
themselves) and excluded edges far above (selecting one means the
remaining graph is disconnected). Ties are broken by lexicographic
edge id, so results are fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from sctsp.instance import MAX_WEIGHT, Edge, TspInstance, edge

FRESH = "fresh"
REUSED = "reused-from-parent"

# Key encoding offsets. Weights are validated < MAX_WEIGHT, so the three
# bands (white, normal, excluded) can never overlap, and n partial sums
# stay far from int64 overflow.
_WHITE_SHIFT = np.int64(MAX_WEIGHT)
_EXCLUDE_SHIFT = np.int64(1) << 50
_EXCLUDED_CUT = np.int64(1) << 49


@dataclass(frozen=True)
class ConstrainedOneTree:
    """A constrained 1-tree with its cost split.

    Exactly n edges: v_1 has degree 2 and the remaining edges form a
    spanning tree on {v_2..v_n}. Every include edge is present, no
    exclude edge is. white_weight sums the include edges, so
    total_weight = white_weight + nonwhite_weight always holds.
    """

    edges: frozenset[Edge]
    total_weight: int
    white_weight: int
    nonwhite_weight: int
    provenance: str = FRESH
    include: frozenset[Edge] = frozenset()


@njit(cache=True)
def _prim_parent(keys: np.ndarray, n: int) -> np.ndarray:
    """Dense Prim over nodes 2..n on encoded keys.

    Returns a parent array indexed by node id; entry 0 carries the
    status flag (1 when an excluded-band key had to be selected, which
    means the constraints disconnect the node set).
    """
    key = np.empty(n + 1, np.int64)
    parent = np.zeros(n + 1, np.int64)
    done = np.zeros(n + 1, np.uint8)
    for v in range(3, n + 1):
        key[v] = keys[2, v]
        parent[v] = 2
        done[v] = 0
    done[2] = 1
    status = 0
    for _ in range(n - 2):
        best = -1
        for v in range(3, n + 1):
            if done[v]:
                continue
            if best == -1 or key[v] < key[best]:
                best = v
            elif key[v] == key[best]:
                a1, b1 = (parent[v], v) if parent[v] < v else (v, parent[v])
                a2, b2 = (
                    (parent[best], best)
                    if parent[best] < best
                    else (best, parent[best])
                )
                if a1 < a2 or (a1 == a2 and b1 < b2):
                    best = v
        if key[best] >= _EXCLUDED_CUT:
            status = 1
            break
        done[best] = 1
        for v in range(3, n + 1):
            if done[v]:
                continue
            k = keys[best, v]
            if k < key[v]:
                key[v] = k
                parent[v] = best
            elif k == key[v]:
                a1, b1 = (best, v) if best < v else (v, best)
                a2, b2 = (parent[v], v) if parent[v] < v else (v, parent[v])
                if a1 < a2 or (a1 == a2 and b1 < b2):
                    parent[v] = best
    parent[0] = status
    return parent


def base_keys(inst: TspInstance) -> np.ndarray:
    """Unconstrained key matrix: a plain copy of the weights."""
    return inst.weights.copy()


def shift_key(keys: np.ndarray, e: Edge, delta: int) -> None:
    """Apply a symmetric key adjustment in place."""
    a, b = e
    keys[a, b] += delta
    keys[b, a] += delta


def mark_excluded(keys: np.ndarray, e: Edge) -> None:
    shift_key(keys, e, int(_EXCLUDE_SHIFT))


def mark_white(keys: np.ndarray, e: Edge) -> None:
    shift_key(keys, e, -int(_WHITE_SHIFT))


def _mst_from_keys(
    inst: TspInstance, keys: np.ndarray
) -> tuple[frozenset[Edge], int] | None:
    parent = _prim_parent(keys, inst.n)
    if parent[0]:
        return None
    children = np.arange(3, inst.n + 1)
    parents = parent[3:]
    weight = int(inst.weights[children, parents].sum())
    edges = frozenset(edge(int(v), int(p)) for v, p in zip(children, parents))
    return edges, weight


def _v1_edges_from_keys(
    inst: TspInstance, keys: np.ndarray
) -> list[Edge] | None:
    """Pick v_1's two edges: whites first regardless of cost, excluded
    never, remaining slots by minimum weight with lexicographic ties."""
    row = keys[1]
    forced: list[Edge] = []
    open_slots: list[tuple[int, int]] = []
    for j in range(2, inst.n + 1):
        k = int(row[j])
        if k < 0:
            forced.append((1, j))
        elif k < _EXCLUDED_CUT:
            open_slots.append((k, j))
    if len(forced) > 2:
        return None
    need = 2 - len(forced)
    if len(open_slots) < need:
        return None
    open_slots.sort()
    return forced + [(1, j) for _, j in open_slots[:need]]


def tree_from_keys(
    inst: TspInstance, keys: np.ndarray, include: frozenset[Edge]
) -> ConstrainedOneTree | None:
    """Assemble a constrained 1-tree from an encoded key matrix.

    The include set must match the white markers in the keys; it is
    needed to compute the white/nonwhite cost split.
    """
    mst = _mst_from_keys(inst, keys)
    if mst is None:
        return None
    mst_edges, mst_weight = mst
    v1 = _v1_edges_from_keys(inst, keys)
    if v1 is None:
        return None
    total = mst_weight + sum(inst.weight(a, b) for a, b in v1)
    edges = mst_edges | frozenset(v1)
    assert include <= edges, "include edges missing from the tree"
    white_weight = sum(inst.weight(a, b) for a, b in include)
    return ConstrainedOneTree(
        edges=edges,
        total_weight=total,
        white_weight=white_weight,
        nonwhite_weight=total - white_weight,
        provenance=FRESH,
        include=include,
    )


def _normalize_constraints(
    include, exclude
) -> tuple[frozenset[Edge], frozenset[Edge]]:
    inc = frozenset(edge(a, b) for a, b in include)
    exc = frozenset(edge(a, b) for a, b in exclude)
    if inc & exc:
        raise ValueError("contradictory constraints: include and exclude overlap")
    return inc, exc


def _includes_acyclic(include: frozenset[Edge], skip_v1: bool = True) -> bool:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in include:
        if skip_v1 and 1 in (a, b):
            continue
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def constrained_mst(
    inst: TspInstance, include, exclude
) -> tuple[frozenset[Edge], int] | None:
    """Minimum spanning tree on {v_2..v_n} under edge constraints.

    Args:
        inst: the instance.
        include: edges that must appear (forced, highest priority).
        exclude: edges that must not appear.

    Returns:
        (tree edges, total weight), or None when the constraints make
        a spanning tree impossible (exclusions disconnect the node set
        or inclusions force a cycle).

    Raises:
        ValueError: overlapping constraint sets, or constraints
            touching v_1, which belongs to the 1-tree step instead.
    """
    inc, exc = _normalize_constraints(include, exclude)
    for a, b in inc | exc:
        if 1 in (a, b):
            raise ValueError(
                "constraints incident with node 1 belong to the 1-tree step"
            )
    if not _includes_acyclic(inc, skip_v1=False):
        return None
    keys = base_keys(inst)
    for e in inc:
        mark_white(keys, e)
    for e in exc:
        mark_excluded(keys, e)
    result = _mst_from_keys(inst, keys)
    if result is None:
        return None
    tree_edges, weight = result
    assert inc <= tree_edges, "include edges missing from the spanning tree"
    return tree_edges, weight


def constrained_one_tree(
    inst: TspInstance, include, exclude
) -> ConstrainedOneTree | None:
    """Build the minimum constrained 1-tree for a constraint state.

    The spanning-tree part handles constraints among {v_2..v_n}; edges
    at v_1 follow the selection rules of _v1_edges_from_keys. The
    result's total weight is a lower bound on every tour that contains
    all include edges and avoids all exclude edges.

    Returns:
        The tree, or None when the constraints are infeasible (v_1
        over-constrained, disconnection, forced cycle, or fewer than
        two usable edges at v_1).

    Raises:
        ValueError: include and exclude overlap.
    """
    inc, exc = _normalize_constraints(include, exclude)
    if not _includes_acyclic(inc):
        return None
    if sum(1 for a, b in inc if 1 in (a, b)) > 2:
        return None
    keys = base_keys(inst)
    for e in inc:
        mark_white(keys, e)
    for e in exc:
        mark_excluded(keys, e)
    return tree_from_keys(inst, keys, inc)


def cost_split(tree: ConstrainedOneTree, white) -> tuple[int, int]:
    """Split the tree weight into (g, h) = (white sum, the rest).

    The white set must be the include set the tree was built with;
    since include edges are always forced into the tree, g + h equals
    the tree's total weight exactly.
    """
    if frozenset(edge(a, b) for a, b in white) != tree.include:
        raise ValueError("white set differs from the tree's include set")
    return tree.white_weight, tree.nonwhite_weight
