"""Ejection-chain search engines over the stem-and-cycle structure.

Three engines share one chassis:

- sec_search: classic local search. Each chain greedily follows the
  nearest-neighbour score NN(x) = ejection_value + min(trial_value),
  chains restart from every improved tour, and the search stops at a
  local minimum.
- isec_chain: one maximal chain guided by the constrained 1-tree bound
  f = g + h. Every candidate move is scored by building the 1-tree for
  its updated constraint sets; infeasible candidates are skipped.
- fisec_chain: ISEC plus bound reuse. Each candidate is first
  classified against the parent's 1-tree; when the classification
  proves the parent tree still optimal for the child constraints, its
  bound is reused without rebuilding.

All engines are deterministic given (instance, start, params): the
only randomness is the root choice, drawn from the seeded generator.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from sctsp.instance import Edge, Rng, Tour, TspInstance, tour_length
from sctsp.onetree import (
    REUSED,
    ConstrainedOneTree,
    base_keys,
    mark_excluded,
    mark_white,
    tree_from_keys,
)
from sctsp.stemcycle import (
    WHITE,
    ConstraintState,
    ScMove,
    ScStructure,
    apply_move,
    from_tour,
    generate_moves,
    successor_trial_values,
    trial_solutions,
)

ALGOS = ("sec", "isec", "fisec")


@dataclass(frozen=True)
class SearchParams:
    """Engine selection and reproducibility knobs.

    chain_cap limits the number of levels per chain: "full" allows 2n
    moves, "half" allows n. reuse and verify_reuse only affect fisec:
    reuse=False forces a fresh 1-tree for every candidate (the outcome
    is then bit-identical to isec), verify_reuse=True shadow-recomputes
    every reused bound and asserts it against the fresh one.
    """

    algo: str
    seed: int
    chain_cap: str = "full"
    root_policy: str = "random-per-chain"
    reuse: bool = True
    verify_reuse: bool = False

    def __post_init__(self) -> None:
        if self.algo not in ALGOS:
            raise ValueError(f"unknown algo {self.algo!r}, expected one of {ALGOS}")
        if self.chain_cap not in ("full", "half"):
            raise ValueError(f"chain_cap must be 'full' or 'half', got {self.chain_cap!r}")
        if self.root_policy != "random-per-chain":
            raise ValueError(f"unknown root policy {self.root_policy!r}")

    def cap_levels(self, n: int) -> int:
        return 2 * n if self.chain_cap == "full" else n


@dataclass(frozen=True)
class ChangeCase:
    """How one chain move relates to the parent's 1-tree."""

    tag: str
    action: str


@dataclass(frozen=True)
class ChainLevel:
    """One committed level of an ejection chain."""

    structure: ScStructure
    constraints: ConstraintState
    move_taken: ScMove
    best_trial_here: tuple[Tour, int] | None
    f_value: int | None = None
    nn_value: int | None = None


@dataclass(frozen=True)
class SearchOutcome:
    """Result and effort statistics of one engine run.

    levels holds the last chain built (the only chain, for isec and
    fisec). wall_ms is the only field exempt from the determinism
    guarantee.
    """

    best_tour: Tour
    best_length: int
    nodes_expanded: int
    nodes_generated: int
    onetrees_computed: int
    onetrees_reused: int
    wall_ms: float
    chains_built: int
    levels: tuple[ChainLevel, ...] = ()


@dataclass
class _Stats:
    expanded: int = 0
    generated: int = 0
    computed: int = 0
    reused: int = 0
    chains: int = 0


def trial_sentinel(inst: TspInstance) -> int:
    """Score for trial-less candidates: loses to every real NN score."""
    return inst.max_weight * inst.n + 1


def nn_score(inst: TspInstance, sc_after_move: ScStructure, move: ScMove) -> int:
    """Nearest-neighbour score of a move: ejection_value + min trial value.

    The structure passed must be the successor the move produces. A
    successor without trial solutions scores the large sentinel so it
    ranks behind every candidate with a real trial.
    """
    trials = trial_solutions(sc_after_move, inst)
    if not trials:
        return move.ejection_value + trial_sentinel(inst)
    return move.ejection_value + min(v for _, v in trials)


def classify_change(
    added: Edge, added_white: bool, deleted: Edge, tau_p: ConstrainedOneTree
) -> ChangeCase:
    """Relate a move's edge pair to the parent 1-tree tau_p.

    The tag encodes membership of the added/deleted edge in tau_p and
    the added edge's color; the action says whether tau_p is provably
    still an optimal 1-tree for the child constraints (reuse) or must
    be rebuilt (recompute). Deleting a tree edge or forcing a non-tree
    edge white changes the tree problem materially; everything else
    leaves tau_p both feasible and optimal for the child.
    """
    a_in = added in tau_p.edges
    d_in = deleted in tau_p.edges
    if d_in:
        tag = "C4" if a_in else "C2"
    elif a_in:
        tag = "C3i" if added_white else "C3ii"
    else:
        tag = "C1ii" if added_white else "C1i"
    action = "reuse" if tag in ("C1i", "C3i", "C3ii") else "recompute"
    return ChangeCase(tag, action)


def reuse_from_parent(
    parent: ConstrainedOneTree, added: Edge, added_white: bool, w_added: int
) -> ConstrainedOneTree:
    """Relabel a parent tree as the child's tree after a reuse step.

    The edge set and total weight carry over unchanged; when the added
    edge turns white its weight migrates from h to g (it already sat
    in the tree, so nothing is double counted).
    """
    if added_white:
        assert added in parent.edges, "white reuse requires the edge in the tree"
        include = parent.include | {added}
        white_weight = parent.white_weight + w_added
    else:
        include = parent.include
        white_weight = parent.white_weight
    return ConstrainedOneTree(
        edges=parent.edges,
        total_weight=parent.total_weight,
        white_weight=white_weight,
        nonwhite_weight=parent.total_weight - white_weight,
        provenance=REUSED,
        include=include,
    )


def _child_keys(keys: np.ndarray, mv: ScMove, white: bool) -> np.ndarray:
    child = keys.copy()
    mark_excluded(child, mv.deleted)
    if white:
        mark_white(child, mv.added)
    return child


def _level_best_trial(
    inst: TspInstance, sc: ScStructure, weight: int
) -> tuple[Tour, int] | None:
    best: tuple[Tour, int] | None = None
    for tour, value in trial_solutions(sc, inst):
        length = weight + value
        if best is None or length < best[1]:
            best = (tour, length)
    return best


def _run_sec_chain(
    inst: TspInstance,
    tour: Tour,
    root: int,
    cap: int,
    stats: _Stats,
) -> tuple[Tour, int, tuple[ChainLevel, ...]]:
    """One greedy NN-guided chain; returns its best trial and levels."""
    n = inst.n
    sentinel = trial_sentinel(inst)
    sc = from_tour(tour, root)
    cs = ConstraintState.initial()
    weight = tour_length(inst, tour)
    best_tour, best_len = tour, weight
    levels: list[ChainLevel] = []
    evaluations = 0
    for _ in range(cap):
        moves = generate_moves(sc, cs, inst)
        stats.generated += len(moves)
        if not moves:
            break
        best_key: tuple[int, Edge, Edge] | None = None
        best_mv: ScMove | None = None
        for mv in moves:
            values = successor_trial_values(sc, mv, inst)
            score = mv.ejection_value + (min(values) if values else sentinel)
            evaluations += 1
            key = (score, mv.added, mv.deleted)
            if best_key is None or key < best_key:
                best_key, best_mv = key, mv
        assert evaluations <= 4 * n * n, "candidate evaluations exceeded 4n^2"
        sc, cs = apply_move(sc, cs, best_mv)
        stats.expanded += 1
        weight += best_mv.ejection_value
        level_best = _level_best_trial(inst, sc, weight)
        if level_best is not None and level_best[1] < best_len:
            best_tour, best_len = level_best
        levels.append(
            ChainLevel(sc, cs, best_mv, level_best, nn_value=best_key[0])
        )
    assert len(levels) <= cap, "chain exceeded its level cap"
    return best_tour, best_len, tuple(levels)


def sec_search(inst: TspInstance, start: Tour, params: SearchParams) -> SearchOutcome:
    """Run chains until one fails to improve the incumbent tour.

    Every chain starts from the current incumbent embedded at a fresh
    random root; the incumbent is replaced only by a strictly better
    trial, so best_length never exceeds the start length.
    """
    t0 = time.perf_counter()
    rng = Rng(params.seed)
    cap = params.cap_levels(inst.n)
    stats = _Stats()
    incumbent, incumbent_len = start, tour_length(inst, start)
    levels: tuple[ChainLevel, ...] = ()
    while True:
        root = 1 + rng.randrange(inst.n)
        chain_tour, chain_len, levels = _run_sec_chain(
            inst, incumbent, root, cap, stats
        )
        stats.chains += 1
        if chain_len < incumbent_len:
            incumbent, incumbent_len = chain_tour, chain_len
        else:
            break
    assert stats.expanded <= stats.chains * cap
    return SearchOutcome(
        best_tour=incumbent,
        best_length=incumbent_len,
        nodes_expanded=stats.expanded,
        nodes_generated=stats.generated,
        onetrees_computed=0,
        onetrees_reused=0,
        wall_ms=(time.perf_counter() - t0) * 1000.0,
        chains_built=stats.chains,
        levels=levels,
    )


def _verify_reused_bound(
    inst: TspInstance,
    keys: np.ndarray,
    mv: ScMove,
    white: bool,
    include: frozenset[Edge],
    case: ChangeCase,
    reused: ConstrainedOneTree,
) -> None:
    """Shadow recomputation: every reused bound must be admissible.

    C1i leaves the constraint sets' effect on the tree unchanged, so
    the fresh tree must match exactly, split included. The C3 cases
    must never allow the reused bound to exceed the fresh one.
    """
    fresh = tree_from_keys(inst, _child_keys(keys, mv, white), include)
    assert fresh is not None, "reused a bound for infeasible constraints"
    if case.tag == "C1i":
        assert reused.total_weight == fresh.total_weight
        assert reused.white_weight == fresh.white_weight
        assert reused.nonwhite_weight == fresh.nonwhite_weight
    else:
        assert reused.total_weight <= fresh.total_weight


def _informed_chain(
    inst: TspInstance, start: Tour, params: SearchParams, use_reuse: bool
) -> SearchOutcome:
    """One maximal chain guided by the constrained 1-tree bound."""
    t0 = time.perf_counter()
    rng = Rng(params.seed)
    n = inst.n
    cap = params.cap_levels(n)
    stats = _Stats(chains=1)
    root = 1 + rng.randrange(n)
    sc = from_tour(start, root)
    cs = ConstraintState.initial()
    weight = tour_length(inst, start)
    best_tour, best_len = start, weight
    keys = base_keys(inst)
    # The root state's tree seeds reuse classification; it is chain
    # bookkeeping, not a candidate evaluation, so it stays uncounted.
    parent_tree = tree_from_keys(inst, keys, frozenset()) if use_reuse else None
    levels: list[ChainLevel] = []
    evaluations = 0
    for _ in range(cap):
        moves = generate_moves(sc, cs, inst)
        stats.generated += len(moves)
        if not moves:
            break
        chosen_key: tuple[int, int, Edge, Edge] | None = None
        chosen_mv: ScMove | None = None
        chosen_tree: ConstrainedOneTree | None = None
        for mv in moves:
            white = mv.added_color == WHITE
            include = cs.white | {mv.added} if white else cs.white
            evaluations += 1
            tree: ConstrainedOneTree | None = None
            if parent_tree is not None:
                case = classify_change(mv.added, white, mv.deleted, parent_tree)
                if case.action == "reuse":
                    tree = reuse_from_parent(
                        parent_tree, mv.added, white, inst.weight(*mv.added)
                    )
                    stats.reused += 1
                    if params.verify_reuse:
                        _verify_reused_bound(
                            inst, keys, mv, white, include, case, tree
                        )
            if tree is None:
                stats.computed += 1
                tree = tree_from_keys(inst, _child_keys(keys, mv, white), include)
                if tree is None:
                    continue  # infeasible candidate, skipped
            # Excluding a non-tree edge leaves the bound untouched, so
            # whole levels can tie on f; the ejection value breaks those
            # ties by structure-weight descent, with the edge pair last
            # to keep the order total and runs reproducible.
            key = (tree.total_weight, mv.ejection_value, mv.added, mv.deleted)
            if chosen_key is None or key < chosen_key:
                chosen_key, chosen_mv, chosen_tree = key, mv, tree
        assert evaluations <= 4 * n * n, "candidate evaluations exceeded 4n^2"
        if chosen_mv is None:
            break  # every candidate infeasible
        white = chosen_mv.added_color == WHITE
        keys = _child_keys(keys, chosen_mv, white)
        sc, cs = apply_move(sc, cs, chosen_mv)
        stats.expanded += 1
        weight += chosen_mv.ejection_value
        if use_reuse:
            parent_tree = chosen_tree
            assert parent_tree.include == cs.white
        level_best = _level_best_trial(inst, sc, weight)
        if level_best is not None and level_best[1] < best_len:
            best_tour, best_len = level_best
        levels.append(
            ChainLevel(
                sc, cs, chosen_mv, level_best, f_value=chosen_tree.total_weight
            )
        )
    assert len(levels) <= cap, "chain exceeded its level cap"
    assert stats.reused + stats.computed == evaluations
    return SearchOutcome(
        best_tour=best_tour,
        best_length=best_len,
        nodes_expanded=stats.expanded,
        nodes_generated=stats.generated,
        onetrees_computed=stats.computed,
        onetrees_reused=stats.reused,
        wall_ms=(time.perf_counter() - t0) * 1000.0,
        chains_built=1,
        levels=tuple(levels),
    )


def isec_chain(inst: TspInstance, start: Tour, params: SearchParams) -> SearchOutcome:
    """One maximal bound-guided chain; every candidate built fresh."""
    outcome = _informed_chain(inst, start, params, use_reuse=False)
    assert outcome.onetrees_reused == 0
    return outcome


def fisec_chain(inst: TspInstance, start: Tour, params: SearchParams) -> SearchOutcome:
    """ISEC with parent-tree bound reuse for provably unchanged cases."""
    return _informed_chain(inst, start, params, use_reuse=params.reuse)


def run_search(inst: TspInstance, start: Tour, params: SearchParams) -> SearchOutcome:
    """Dispatch to the engine selected by params.algo."""
    if params.algo == "sec":
        return sec_search(inst, start, params)
    if params.algo == "isec":
        return isec_chain(inst, start, params)
    if params.algo == "fisec":
        return fisec_chain(inst, start, params)
    raise ValueError(f"unknown algo {params.algo!r}")
