"""
Constrained 1-tree lower bounds: f = g + h under edge constraints
=================================================================
"""

from pathlib import Path

from sctsp import (
    constrained_one_tree,
    held_karp_optimal,
    load_instance,
    parse_tsplib,
)

DATA = Path(__file__).resolve().parent.parent / "data"

# A 1-tree spans nodes 2..n with a tree plus the two cheapest edges at
# node 1; its weight never exceeds the optimal tour length.
grid = load_instance(DATA / "instances" / "grid48.tsp")
tree = constrained_one_tree(grid, frozenset(), frozenset())
print(f"{grid.name}: unconstrained bound f={tree.total_weight} "
      f"(optimum is 480)")

# Constraints mirror what an ejection chain accumulates: white edges
# must appear in the tree (their weight moves into g), deleted edges
# may not (the bound can only rise).
white = frozenset({(1, 2)})
tabu = frozenset({(2, 3)})
constrained = constrained_one_tree(grid, white, tabu)
print(f"with one white and one tabu edge: f={constrained.total_weight} "
      f"g={constrained.white_weight} h={constrained.nonwhite_weight}")
assert constrained.total_weight >= tree.total_weight

# Contradictory or unsatisfiable sets are reported, not guessed at.
try:
    constrained_one_tree(grid, white, white)
except ValueError as exc:
    print("overlapping sets:", exc)

three_at_v1 = frozenset({(1, 2), (1, 3), (1, 4)})
print("three whites at node 1 ->", constrained_one_tree(grid, three_at_v1,
                                                        frozenset()))

# On exactly solvable sizes the bound really is a lower bound.
text = "\n".join(
    ["NAME : nine", "TYPE : TSP", "DIMENSION : 9",
     "EDGE_WEIGHT_TYPE : EUC_2D", "NODE_COORD_SECTION"]
    + [f"{i + 1} {x} {y}" for i, (x, y) in enumerate(
        [(0, 0), (10, 2), (17, 9), (14, 20), (5, 24),
         (-4, 19), (-8, 9), (-2, 2), (6, 11)])]
    + ["EOF"]
)
nine = parse_tsplib(text)
_, exact = held_karp_optimal(nine)
bound = constrained_one_tree(nine, frozenset(), frozenset()).total_weight
print(f"n=9 scatter: bound {bound} <= optimum {exact}")
assert bound <= exact
