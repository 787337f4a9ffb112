"""
The stem-and-cycle structure and its ejection moves
===================================================
"""

from sctsp import (
    ConstraintState,
    Rng,
    apply_move,
    from_tour,
    generate_moves,
    is_degenerate,
    load_instance,
    random_start_tour,
    tour_length,
    trial_solutions,
)
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "data"

inst = load_instance(DATA / "instances" / "ring29.tsp")
tour = random_start_tour(inst, Rng(3))

# Embedding a tour at a root gives a degenerate structure: the cycle is
# the tour and the stem is empty.
sc = from_tour(tour, root=5)
print("degenerate:", is_degenerate(sc), "root:", sc.root, "tip:", sc.tip)

# Each move adds an edge at the tip and deletes an adjacent edge. The
# constraint state records white (kept) and deleted (tabu) edges, which
# shrink the legal move set as a chain grows.
cs = ConstraintState.initial()
moves = generate_moves(sc, cs, inst)
print("legal first moves:", len(moves))

best = moves[0]
for mv in moves:
    if mv.ejection_value < best.ejection_value:
        best = mv
print("cheapest move adds", best.added, "deletes", best.deleted,
      "changing the structure weight by", best.ejection_value)

sc, cs = apply_move(sc, cs, best)
print("after one move: degenerate:", is_degenerate(sc), "tip:", sc.tip)
print("whites:", sorted(cs.white), "tabu:", sorted(cs.deleted))

# A non-degenerate structure yields trial tours: connect the tip to a
# subroot and drop that subroot's root edge.
weight = tour_length(inst, tour) + best.ejection_value
for trial_tour, value in trial_solutions(sc, inst):
    print("trial tour length:", weight + value)
