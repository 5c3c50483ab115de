"""End-to-end solvers and run statistics.

``solve_dense_combilp`` grows a non-overlapping hard subproblem B from the
complement of the strictly arc-consistent node set until the separator
optimality test certifies the concatenated labeling. ``solve_combilp`` is
the overlapping-subgraph baseline: its hard part is the boundary complement
of A and its test is label agreement on A's boundary. Both reuse one dual
ascent run; the easy side is never re-solved, only restricted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .consistency import sac_nodes
from .dual import AscentConfig, effective_costs, postprocess_messages, \
    redistribute_unary, run_block_ascent
from .energy import CostView, check_sufficient_optimality, concatenate, \
    dual_bound, total_energy
from .exact import BRUTE_FORCE_CAP, branch_and_bound_solve, brute_force_solve
from .model import GraphicalModel, InfeasibleModelError, Labeling, \
    boundary_complement, boundary_nodes, induced_subgraph, partition_from_A

INF = math.inf


@dataclass
class SolveConfig:
    ascent: AscentConfig = field(default_factory=AscentConfig)
    tie_tolerance: float = 1e-8
    strictness_tolerance: float = 1e-8
    brute_force_cap: int = BRUTE_FORCE_CAP


@dataclass
class IterationStats:
    k: int
    vb_size: int
    ilp_fraction: float
    bnb_nodes: int
    criterion_holds: bool


@dataclass
class SolveReport:
    method: str
    optimal: bool
    infeasible: bool
    energy: float  # +inf when infeasible
    dual_bound: float
    density: float
    labelwise_ilp_fraction_final: float
    iterations: list
    labeling: Optional[Labeling]
    bound_trace: Optional[list] = None


def graph_density(model: GraphicalModel) -> float:
    """2|E| / (|V| (|V|-1)); zero for models with fewer than two nodes."""
    n = model.node_count
    if n < 2:
        return 0.0
    return 2.0 * len(model.edges) / (n * (n - 1))


def labelwise_ilp_fraction(model: GraphicalModel, a_nodes) -> float:
    """Share of labels handed to the combinatorial solver.

    Counts (label count - 1) per node outside A against the same sum over
    all nodes, so single-label nodes never contribute. An all-single-label
    model has nothing to decide and reports 0.
    """
    total = int((model.label_counts - 1).sum())
    if total == 0:
        return 0.0
    inside = sum(model.labels(u) - 1 for u in set(a_nodes))
    return 1.0 - inside / total


def _dual_phase(model: GraphicalModel, config: SolveConfig):
    """Shared preamble: ascent, λ-sweeps, unary redistribution."""
    ascent = run_block_ascent(model, config.ascent)
    trace = list(ascent.bound_trace)
    phi = ascent.phi
    if config.ascent.postprocess_sweeps > 0:
        post = postprocess_messages(model, phi, config.ascent)
        phi = post.phi
        trace.extend(post.bound_trace[1:])
    phi = redistribute_unary(model, phi)
    view = effective_costs(model, phi)
    return view, trace


def _infeasible_report(method: str, model: GraphicalModel,
                       iterations=None, trace=None) -> SolveReport:
    return SolveReport(method=method, optimal=False, infeasible=True,
                       energy=INF, dual_bound=INF,
                       density=graph_density(model),
                       labelwise_ilp_fraction_final=1.0,
                       iterations=list(iterations or []), labeling=None,
                       bound_trace=trace)


def solve_dense_combilp(model: GraphicalModel,
                        config: SolveConfig | None = None) -> SolveReport:
    """Exact MAP inference with a non-overlapping partition (method ``dclp``)."""
    config = config or SolveConfig()
    try:
        view, trace = _dual_phase(model, config)
    except InfeasibleModelError:
        return _infeasible_report("dclp", model)
    bound = dual_bound(view)

    sac = sac_nodes(view, config.strictness_tolerance)
    a_nodes = set(sac.nodes)
    iterations = []
    while True:
        partition = partition_from_A(model, a_nodes)
        if not partition.b.nodes:
            labeling = sac.witness.restrict(a_nodes)
            return _final_report("dclp", model, view, labeling, bound,
                                 iterations, 0.0, trace)
        x_a = sac.witness.restrict(a_nodes)
        result = branch_and_bound_solve(view, partition.b)
        if result.labeling is None:
            return _infeasible_report("dclp", model, iterations, trace)
        check = check_sufficient_optimality(view, partition, x_a,
                                            result.labeling,
                                            config.tie_tolerance)
        fraction = labelwise_ilp_fraction(model, a_nodes)
        iterations.append(IterationStats(len(iterations) + 1,
                                         len(partition.b.nodes), fraction,
                                         result.nodes_expanded, check.holds))
        if check.holds:
            labeling = concatenate(x_a, result.labeling, partition)
            return _final_report("dclp", model, view, labeling, bound,
                                 iterations, fraction, trace)
        a_nodes -= check.violating_a_nodes


def solve_combilp(model: GraphicalModel,
                  config: SolveConfig | None = None) -> SolveReport:
    """Exact MAP inference with overlapping subgraphs (method ``clp``).

    The hard part is the boundary complement of A; the certificate is label
    agreement between the easy-side witnesses and the hard-side optimum on
    A's boundary. Disagreeing boundary nodes leave A until agreement (or
    until the hard part is the whole graph).
    """
    config = config or SolveConfig()
    try:
        view, trace = _dual_phase(model, config)
    except InfeasibleModelError:
        return _infeasible_report("clp", model)
    bound = dual_bound(view)

    sac = sac_nodes(view, config.strictness_tolerance)
    a_nodes = set(sac.nodes)
    iterations = []
    while True:
        boundary = boundary_nodes(model, a_nodes)
        sub_b = boundary_complement(model, a_nodes)
        if not sub_b.nodes:
            labeling = sac.witness.restrict(a_nodes)
            return _final_report("clp", model, view, labeling, bound,
                                 iterations, 0.0, trace)
        result = branch_and_bound_solve(view, sub_b)
        if result.labeling is None:
            return _infeasible_report("clp", model, iterations, trace)
        x_b = result.labeling.as_dict()
        witness = sac.witness.as_dict()
        disagreeing = {v for v in boundary if witness[v] != x_b[v]}
        fraction = labelwise_ilp_fraction(model, a_nodes - boundary)
        iterations.append(IterationStats(len(iterations) + 1,
                                         len(sub_b.nodes), fraction,
                                         result.nodes_expanded,
                                         not disagreeing))
        if not disagreeing:
            merged = {u: witness[u] for u in a_nodes}
            for v in sub_b.nodes:
                merged.setdefault(v, x_b[v])
            labeling = Labeling.over(merged.keys(), merged.values())
            return _final_report("clp", model, view, labeling, bound,
                                 iterations, fraction, trace)
        a_nodes -= disagreeing


def _final_report(method: str, model: GraphicalModel, view: CostView,
                  labeling: Labeling, bound: float, iterations, fraction: float,
                  trace) -> SolveReport:
    energy = total_energy(model, labeling)
    if not np.isfinite(energy):
        return _infeasible_report(method, model, iterations, trace)
    return SolveReport(method=method, optimal=True, infeasible=False,
                       energy=energy, dual_bound=bound,
                       density=graph_density(model),
                       labelwise_ilp_fraction_final=fraction,
                       iterations=list(iterations), labeling=labeling,
                       bound_trace=list(trace))


def solve_branch_and_bound(model: GraphicalModel,
                           config: SolveConfig | None = None) -> SolveReport:
    """Single branch-and-bound run over the whole model (method ``bb``)."""
    sub = induced_subgraph(model, range(model.node_count))
    result = branch_and_bound_solve(model, sub)
    if result.labeling is None:
        return _infeasible_report("bb", model)
    stats = IterationStats(1, model.node_count, 1.0, result.nodes_expanded, True)
    return SolveReport(method="bb", optimal=True, infeasible=False,
                       energy=result.energy, dual_bound=dual_bound(model),
                       density=graph_density(model),
                       labelwise_ilp_fraction_final=1.0,
                       iterations=[stats], labeling=result.labeling)


def solve_brute_force(model: GraphicalModel,
                      config: SolveConfig | None = None) -> SolveReport:
    """Exhaustive enumeration of the whole model (method ``brute``)."""
    config = config or SolveConfig()
    sub = induced_subgraph(model, range(model.node_count))
    result = brute_force_solve(model, sub, config.brute_force_cap)
    if result.labeling is None:
        return _infeasible_report("brute", model)
    return SolveReport(method="brute", optimal=True, infeasible=False,
                       energy=result.energy, dual_bound=dual_bound(model),
                       density=graph_density(model),
                       labelwise_ilp_fraction_final=1.0,
                       iterations=[], labeling=result.labeling)


SOLVERS = {
    "dclp": solve_dense_combilp,
    "clp": solve_combilp,
    "bb": solve_branch_and_bound,
    "brute": solve_brute_force,
}
