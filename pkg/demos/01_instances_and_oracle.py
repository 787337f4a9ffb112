"""
Loading TSPLIB instances and checking tours against the exact oracle
====================================================================
"""

from pathlib import Path

from sctsp import (
    Rng,
    held_karp_optimal,
    load_instance,
    parse_tsplib,
    random_start_tour,
    tour_length,
)

DATA = Path(__file__).resolve().parent.parent / "data"

# A tiny instance written inline: three points on a 3-4-5 triangle.
text = """\
NAME : tri
TYPE : TSP
DIMENSION : 3
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 4
3 0 8
EOF
"""
tri = parse_tsplib(text)
print(f"{tri.name}: n={tri.n}, tour (1,2,3) has length",
      tour_length(tri, (1, 2, 3)))

# The same parser reads files; the shipped corpus lives in data/instances.
ring = load_instance(DATA / "instances" / "ring29.tsp")
print(f"{ring.name}: n={ring.n}")

# Random start tours come from a seeded generator, so runs reproduce.
start = random_start_tour(ring, Rng(7))
again = random_start_tour(ring, Rng(7))
assert start == again
print("seeded start length:", tour_length(ring, start))

# For small n the bitmask dynamic program gives the exact optimum.
small = parse_tsplib(text)
tour, length = held_karp_optimal(small)
print("exact optimum of the triangle:", tour, length)
