"""Stem-and-cycle ejection chain local search for the symmetric TSP.

The package provides TSPLIB instance handling, the stem-and-cycle
reference structure with its ejection moves, constrained 1-tree lower
bounds, three chain-search engines (nearest-neighbour guided and two
bound-guided variants), and a benchmark harness with a CSV pipeline.
"""

from sctsp.bench import (
    BenchConfig,
    BenchRow,
    BenchSummary,
    expansion_slope,
    format_summary,
    head_to_head,
    read_csv,
    run_bench,
    summarize,
    write_csv,
    write_summary_csv,
)
from sctsp.instance import (
    Edge,
    Rng,
    Tour,
    TspInstance,
    TsplibError,
    edge,
    edge_weight,
    format_explicit,
    held_karp_optimal,
    load_instance,
    parse_tsplib,
    random_start_tour,
    read_optima_registry,
    tour_length,
)
from sctsp.onetree import (
    ConstrainedOneTree,
    constrained_mst,
    constrained_one_tree,
    cost_split,
)
from sctsp.search import (
    ChangeCase,
    SearchOutcome,
    SearchParams,
    classify_change,
    fisec_chain,
    isec_chain,
    nn_score,
    run_search,
    sec_search,
)
from sctsp.stemcycle import (
    ConstraintState,
    ScMove,
    ScStructure,
    apply_move,
    from_tour,
    generate_moves,
    is_degenerate,
    trial_solutions,
)

__all__ = [
    "BenchConfig",
    "BenchRow",
    "BenchSummary",
    "ChangeCase",
    "ConstrainedOneTree",
    "ConstraintState",
    "Edge",
    "Rng",
    "ScMove",
    "ScStructure",
    "SearchOutcome",
    "SearchParams",
    "Tour",
    "TspInstance",
    "TsplibError",
    "apply_move",
    "classify_change",
    "constrained_mst",
    "constrained_one_tree",
    "cost_split",
    "edge",
    "edge_weight",
    "expansion_slope",
    "fisec_chain",
    "format_explicit",
    "format_summary",
    "from_tour",
    "generate_moves",
    "head_to_head",
    "held_karp_optimal",
    "is_degenerate",
    "isec_chain",
    "load_instance",
    "nn_score",
    "parse_tsplib",
    "random_start_tour",
    "read_csv",
    "read_optima_registry",
    "run_bench",
    "run_search",
    "sec_search",
    "summarize",
    "tour_length",
    "trial_solutions",
    "write_csv",
    "write_summary_csv",
]
