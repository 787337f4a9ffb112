"""Stem-and-cycle reference structure and its ejection moves.

A stem-and-cycle structure is a spanning subgraph with exactly n edges:
a cycle through a designated root node plus a path (the stem) from the
root to a tip node. When the tip coincides with the root the structure
is degenerate and is itself a tour. Ejection moves add an edge from the
tip to a pivot node and delete an edge adjacent to the pivot, which
keeps the node set spanned while relocating the tip; trial solutions
close the structure into a full tour by connecting the tip to one of
the root's two cycle neighbours.

Moves are generated under a constraint state that accumulates forced
(white) and forbidden (deleted) edges along a chain of moves, which is
what turns a sequence of moves into a proper ejection chain rather than
a random walk.
"""

from __future__ import annotations

from dataclasses import dataclass

from sctsp.instance import Edge, Tour, TspInstance, edge

BLACK = "black"
WHITE = "white"

CYCLE_EJECTION = "cycle-ejection"
STEM_EJECTION = "stem-ejection"
ROOT_EJECTION = "root-ejection"


class ScStructure:
    """Immutable stem-and-cycle structure.

    The cycle is stored rotated so it begins at the root; the stem is
    stored as the full node path from the root to the tip, so a
    one-element stem (just the root) marks the degenerate case. Cycle
    and stem share exactly the root node.
    """

    __slots__ = ("root", "cycle", "stem", "tip", "edges")

    root: int
    cycle: tuple[int, ...]
    stem: tuple[int, ...]
    tip: int
    edges: frozenset[Edge]

    def __init__(self, root: int, cycle: tuple[int, ...], stem: tuple[int, ...]):
        if cycle[0] != root or stem[0] != root:
            raise ValueError("cycle and stem must both start at the root")
        if len(cycle) < 3:
            raise ValueError("cycle must contain at least 3 nodes")
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "cycle", cycle)
        object.__setattr__(self, "stem", stem)
        object.__setattr__(self, "tip", stem[-1])
        es = [edge(cycle[k - 1], cycle[k]) for k in range(1, len(cycle))]
        es.append(edge(cycle[-1], cycle[0]))
        es.extend(edge(stem[k - 1], stem[k]) for k in range(1, len(stem)))
        object.__setattr__(self, "edges", frozenset(es))

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("ScStructure is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScStructure):
            return NotImplemented
        return self.cycle == other.cycle and self.stem == other.stem

    def __hash__(self) -> int:
        return hash((self.cycle, self.stem))

    def __repr__(self) -> str:
        return f"ScStructure(cycle={self.cycle}, stem={self.stem})"

    @property
    def subroots(self) -> tuple[int, int]:
        """The two cycle neighbours of the root."""
        return self.cycle[1], self.cycle[-1]


@dataclass(frozen=True)
class ConstraintState:
    """Edge constraints accumulated along an ejection chain.

    White edges are forced: once added they may not be deleted by a
    later move. Deleted edges are tabu: they may not be re-added.
    The level counts chain depth starting at 1 for the root state.
    """

    white: frozenset[Edge] = frozenset()
    deleted: frozenset[Edge] = frozenset()
    level: int = 1

    def __post_init__(self) -> None:
        if self.white & self.deleted:
            raise ValueError("white and deleted edge sets must be disjoint")
        if self.level < 1:
            raise ValueError("level is 1-based")

    @classmethod
    def initial(cls) -> "ConstraintState":
        return cls(frozenset(), frozenset(), 1)


def move_color(level: int) -> str:
    """Color of the edge added by a move taken from a state at `level`.

    Colors alternate along the chain; the first move (level 1) adds
    black so the opening step is unconstrained, every second move adds
    white.
    """
    return WHITE if level % 2 == 0 else BLACK


@dataclass(frozen=True)
class ScMove:
    """One ejection move: add `added` at the tip, delete `deleted`.

    The two edges share the pivot node; `new_tip` is the far endpoint
    of the deleted edge, which becomes the tip of the successor
    structure. ejection_value = w(added) - w(deleted) is the exact
    change in total structure weight.
    """

    kind: str
    added: Edge
    deleted: Edge
    added_color: str
    new_tip: int
    ejection_value: int

    @property
    def pivot(self) -> int:
        a, b = self.deleted
        return a if a in self.added else b


def from_tour(t: Tour, root: int) -> ScStructure:
    """Embed a tour as a degenerate structure rooted at `root`.

    Args:
        t: a valid tour containing `root`.
        root: the node to rotate the cycle onto.

    Returns:
        A degenerate structure whose cycle is the tour order.
    """
    if root not in t:
        raise ValueError(f"root {root} is not on the tour")
    k = t.index(root)
    return ScStructure(root, t[k:] + t[:k], (root,))


def is_degenerate(sc: ScStructure) -> bool:
    """True iff tip = root, i.e. the structure is itself a tour."""
    return sc.tip == sc.root


def structure_weight(sc: ScStructure, inst: TspInstance) -> int:
    """Total weight of the structure's n edges."""
    return sum(inst.weight(a, b) for a, b in sc.edges)


class _WhiteIndex:
    """Union-find over white edges for the consistency filter.

    White edges always form vertex-disjoint paths (degree <= 2,
    acyclic), so a candidate white edge is admissible only if both
    endpoints have spare white degree and it does not close a cycle
    shorter than n.
    """

    __slots__ = ("parent", "size", "wdeg", "n")

    def __init__(self, white: frozenset[Edge], n: int):
        self.n = n
        self.parent = list(range(n + 1))
        self.size = [1] * (n + 1)
        self.wdeg = [0] * (n + 1)
        for a, b in white:
            self.wdeg[a] += 1
            self.wdeg[b] += 1
            self._union(a, b)

    def _find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def _union(self, a: int, b: int) -> None:
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            if self.size[ra] < self.size[rb]:
                ra, rb = rb, ra
            self.parent[rb] = ra
            self.size[ra] += self.size[rb]

    def admits(self, e: Edge) -> bool:
        a, b = e
        if self.wdeg[a] >= 2 or self.wdeg[b] >= 2:
            return False
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            return True
        # Same white path: closing it is only allowed if the resulting
        # cycle covers all n nodes (a complete tour of white edges).
        return self.size[ra] == self.n


def generate_moves(
    sc: ScStructure, cs: ConstraintState, inst: TspInstance
) -> list[ScMove]:
    """Enumerate the legitimate moves Gamma from a structure.

    A move adds e_a = (tip, pivot) and deletes e_d = (pivot, v_j) for a
    neighbour v_j of the pivot within the structure. Legitimacy filters:
    e_a must not be a structure edge, must not be tabu, and (when the
    level parity makes this a white move) must keep the white edge set
    consistent; e_d must not be white; v_j = root is reserved for trial
    solutions.

    Returns:
        At most 2n moves; an empty list means the chain is stuck.
    """
    color = move_color(cs.level)
    white_index = _WhiteIndex(cs.white, inst.n) if color == WHITE else None
    w = inst.weights
    tip = sc.tip
    root = sc.root
    edges = sc.edges
    deleted = cs.deleted
    white = cs.white
    moves: list[ScMove] = []

    def emit(kind: str, e_a: Edge, e_d: Edge, new_tip: int) -> None:
        if e_a in edges or e_a in deleted or e_d in white:
            return
        if white_index is not None and not white_index.admits(e_a):
            return
        value = int(w[e_a[0], e_a[1]]) - int(w[e_d[0], e_d[1]])
        moves.append(ScMove(kind, e_a, e_d, color, new_tip, value))

    cyc = sc.cycle
    m = len(cyc)
    for k in range(1, m):
        v_i = cyc[k]
        e_a = edge(tip, v_i)
        for v_j in (cyc[k - 1], cyc[(k + 1) % m]):
            if v_j == root:
                continue
            emit(CYCLE_EJECTION, e_a, edge(v_i, v_j), v_j)

    stem = sc.stem
    for k in range(len(stem) - 1):
        # k stops short of the tip; the tip-adjacent pivot self-excludes
        # in emit because there e_a equals the existing stem edge.
        v_i, v_j = stem[k], stem[k + 1]
        emit(STEM_EJECTION, edge(tip, v_i), edge(v_i, v_j), v_j)

    if not is_degenerate(sc):
        e_a = edge(tip, root)
        for s in (cyc[1], cyc[-1]):
            emit(ROOT_EJECTION, e_a, edge(root, s), s)

    assert len(moves) <= 2 * inst.n, "move set exceeded the 2n bound"
    return moves


def apply_move(
    sc: ScStructure, cs: ConstraintState, mv: ScMove
) -> tuple[ScStructure, ConstraintState]:
    """Apply a generated move, returning the successor state pair.

    The caller must pass a move produced by generate_moves for this
    exact (sc, cs); anything else is a contract violation.
    """
    if mv.deleted not in sc.edges or mv.added in sc.edges:
        raise ValueError("move does not match the structure")
    v_i = mv.pivot
    v_j = mv.new_tip
    root = sc.root
    cyc, stem = sc.cycle, sc.stem

    if mv.kind == CYCLE_EJECTION:
        k = cyc.index(v_i)
        if cyc[(k + 1) % len(cyc)] == v_j:
            # Keep the arc root..v_i, eject the rest through the stem.
            new_cycle = cyc[: k + 1] + tuple(reversed(stem[1:]))
            new_stem = (root,) + tuple(reversed(cyc[k + 1 :]))
        else:
            new_cycle = (root,) + tuple(reversed(cyc[k:])) + tuple(
                reversed(stem[1:])
            )
            new_stem = cyc[:k]
    elif mv.kind == STEM_EJECTION:
        k = stem.index(v_i)
        new_cycle = cyc
        new_stem = stem[: k + 1] + tuple(reversed(stem[k + 1 :]))
    elif mv.kind == ROOT_EJECTION:
        new_cycle = stem
        if v_j == cyc[1]:
            new_stem = (root,) + tuple(reversed(cyc[1:]))
        else:
            new_stem = cyc
    else:
        raise ValueError(f"unknown move kind: {mv.kind}")

    new_white = cs.white | {mv.added} if mv.added_color == WHITE else cs.white
    succ = ScStructure(root, new_cycle, new_stem)
    return succ, ConstraintState(new_white, cs.deleted | {mv.deleted}, cs.level + 1)


def trial_solutions(
    sc: ScStructure, inst: TspInstance
) -> list[tuple[Tour, int]]:
    """Close the structure into full tours via the root's subroots.

    Each trial adds (tip, s) and deletes (s, root) for a subroot s, so
    trial_value = w(tip, s) - w(s, root) and the trial tour length is
    the structure weight plus trial_value. A degenerate structure is
    already a tour and yields a single zero-value entry; a trial whose
    added edge already lies in the structure cannot produce a
    Hamiltonian cycle and is omitted.
    """
    if is_degenerate(sc):
        return [(tuple(sc.cycle), 0)]
    w = inst.weights
    root, tip = sc.root, sc.tip
    cyc, stem = sc.cycle, sc.stem
    out: list[tuple[Tour, int]] = []
    stem_back = tuple(reversed(stem[1:]))
    for s, tour in (
        (cyc[1], (root,) + tuple(reversed(cyc[1:])) + stem_back),
        (cyc[-1], cyc + stem_back),
    ):
        if edge(tip, s) in sc.edges:
            continue
        out.append((tour, int(w[tip, s]) - int(w[s, root])))
    return out


def successor_trial_values(
    sc: ScStructure, mv: ScMove, inst: TspInstance
) -> list[int]:
    """Trial values of the successor of `mv` without building it.

    Equivalent to trial_solutions(apply_move(sc, cs, mv)[0]) projected
    onto the values; used on the hot path where the successor tour
    itself is not needed.
    """
    root = sc.root
    stem = sc.stem
    cyc = sc.cycle
    new_tip = mv.new_tip
    v_i = mv.pivot

    if mv.kind == CYCLE_EJECTION:
        k = cyc.index(v_i)
        inner = stem[1] if len(stem) > 1 else v_i
        if cyc[(k + 1) % len(cyc)] == new_tip:
            subroots = (cyc[1], inner)
        else:
            subroots = (cyc[-1], inner)
    elif mv.kind == STEM_EJECTION:
        subroots = (cyc[1], cyc[-1])
    else:
        subroots = (stem[1], sc.tip)

    w = inst.weights
    out: list[int] = []
    for s in subroots:
        e = edge(new_tip, s)
        # Successor edge set = (edges - deleted) + added.
        if e == mv.added or (e in sc.edges and e != mv.deleted):
            continue
        out.append(int(w[new_tip, s]) - int(w[s, root]))
    return out
