"""Exact MAP inference for pairwise graphical models.

The solvers reduce discrete energy minimization to a small combinatorial
core: an LP dual ascent makes most nodes strictly arc-consistent, the rest
is handed to an exact branch-and-bound, and a separator optimality test
certifies the stitched-together labeling.
"""

from .consistency import initial_partition, sac_nodes
from .driver import (
    SOLVERS,
    IterationStats,
    SolveConfig,
    SolveReport,
    graph_density,
    labelwise_ilp_fraction,
    solve_branch_and_bound,
    solve_brute_force,
    solve_combilp,
    solve_dense_combilp,
)
from .dual import (
    AscentConfig,
    AscentResult,
    effective_costs,
    postprocess_messages,
    redistribute_unary,
    run_block_ascent,
)
from .energy import (
    DEFAULT_TOLERANCE,
    CostView,
    Reparametrization,
    apply_reparametrization,
    check_sufficient_optimality,
    concatenate,
    dual_bound,
    locally_optimal_labeling,
    partition_lower_bound,
    subgraph_energy,
    total_energy,
)
from .exact import (
    branch_and_bound_solve,
    brute_force_solve,
    edge_minimizers,
)
from .formats import (
    ModelFormatError,
    UnsupportedArityError,
    emit_report,
    parse_native,
    parse_uai_lg,
    write_native,
)
from .model import (
    GraphicalModel,
    InfeasibleModelError,
    Labeling,
    Partition,
    Subgraph,
    boundary_complement,
    boundary_nodes,
    induced_subgraph,
    partition_from_A,
    validate_model,
)

__version__ = "0.1.0"
