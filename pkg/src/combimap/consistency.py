"""Strict per-node consistency of reparametrized costs and the seed partition.

A node is strictly arc-consistent when its unary minimizer is unique and
every incident pairwise table has a unique minimizer agreeing with it. On
such nodes the per-node argmin is provably optimal for the induced easy
subproblem, which is what lets the solver skip re-solving that part.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .energy import DEFAULT_TOLERANCE, as_view, subgraph_energy
from .model import Labeling, Partition, partition_from_A


class SacResult(NamedTuple):
    nodes: frozenset
    witness: Labeling  # the defining label of every strictly consistent node


class InitialPartition(NamedTuple):
    partition: Partition
    labeling: Labeling  # optimal on side A, one entry per A node
    energy_a: float


def _unique_min(flat: np.ndarray, tolerance: float):
    """(argmin, is_strict) where strict means the runner-up is > tolerance away."""
    best = flat.min()
    if not np.isfinite(best):
        return None, False
    if flat.shape[0] == 1:
        return 0, True
    runner_up = np.partition(flat, 1)[1]
    return int(flat.argmin()), bool(runner_up - best > tolerance)


def sac_nodes(costs, strictness_tolerance: float = DEFAULT_TOLERANCE) -> SacResult:
    """All strictly arc-consistent nodes with their defining labels.

    Condition (i): the unary minimizer is unique with gap > tolerance.
    Condition (ii): for every incident edge, the whole pairwise table has a
    unique minimizer whose label on this node's side equals the unary one.
    Nodes without a finite unary entry never qualify.
    """
    view = as_view(costs)
    model = view.model
    picked = {}
    for u in range(model.node_count):
        label, strict = _unique_min(view.unary[u], strictness_tolerance)
        if label is None or not strict:
            continue
        consistent = True
        for _, eid, axis in model.incident(u):
            table = view.pairwise[eid]
            flat_idx, strict = _unique_min(table.ravel(), strictness_tolerance)
            if flat_idx is None or not strict:
                consistent = False
                break
            s, t = divmod(flat_idx, table.shape[1])
            if (s if axis == 0 else t) != label:
                consistent = False
                break
        if consistent:
            picked[u] = label
    return SacResult(frozenset(picked),
                     Labeling.over(picked.keys(), picked.values()))


def initial_partition(costs,
                      strictness_tolerance: float = DEFAULT_TOLERANCE
                      ) -> InitialPartition:
    """Seed partition: A = strictly arc-consistent nodes, solved by witnesses."""
    view = as_view(costs)
    sac = sac_nodes(view, strictness_tolerance)
    partition = partition_from_A(view.model, sac.nodes)
    energy_a = subgraph_energy(view, partition.a, sac.witness)
    return InitialPartition(partition, sac.witness, energy_a)
