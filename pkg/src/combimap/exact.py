"""Exact combinatorial subsolvers: exhaustive enumeration and branch-and-bound."""

from __future__ import annotations

import math
from typing import NamedTuple, Optional

import numpy as np

from .energy import DEFAULT_TOLERANCE, as_view, locally_optimal_labeling, subgraph_energy
from .model import InfeasibleModelError, Labeling, Subgraph

INF = math.inf

BRUTE_FORCE_CAP = 10_000_000
_ENUM_CHUNK = 1 << 16

# Pruning keeps branches whose admissible bound is within this slack of the
# incumbent, so float noise cannot cut off a true minimizer.
PRUNE_SLACK = 1e-12


class ExactResult(NamedTuple):
    labeling: Optional[Labeling]  # None iff every labeling has +inf energy
    energy: float
    nodes_expanded: int


def brute_force_solve(costs, sub: Subgraph, cap: int = BRUTE_FORCE_CAP) -> ExactResult:
    """Enumerate every labeling of the subgraph; first (lexicographic) minimizer wins.

    The label space size must not exceed ``cap``. Enumeration is vectorized
    in chunks, in lexicographic order over the subgraph's ascending node ids.
    """
    view = as_view(costs)
    model = view.model
    nodes = sub.nodes
    if not nodes:
        return ExactResult(Labeling((), ()), 0.0, 0)

    dims = tuple(model.labels(u) for u in nodes)
    total = math.prod(dims)
    if total > cap:
        raise ValueError(f"label space of size {total} exceeds the "
                         f"enumeration cap {cap}")

    pos = {u: i for i, u in enumerate(nodes)}
    best_value = INF
    best_flat = None
    for start in range(0, total, _ENUM_CHUNK):
        flat = np.arange(start, min(start + _ENUM_CHUNK, total))
        coords = np.unravel_index(flat, dims)
        energy = np.zeros(flat.shape[0])
        for i, u in enumerate(nodes):
            energy += view.unary[u][coords[i]]
        for eid in sub.edge_ids:
            u, v = model.edges[eid]
            energy += view.pairwise[eid][coords[pos[u]], coords[pos[v]]]
        j = int(energy.argmin())
        if energy[j] < best_value:
            best_value = float(energy[j])
            best_flat = start + j

    if not np.isfinite(best_value):
        return ExactResult(None, INF, total)
    labels = np.unravel_index(best_flat, dims)
    return ExactResult(Labeling(nodes, tuple(int(s) for s in labels)),
                       best_value, total)


class EdgeMinimizers(NamedTuple):
    min_value: float
    argmin_set: frozenset  # label pairs within tie tolerance of the minimum


def edge_minimizers(costs, edge, tie_tolerance: float = DEFAULT_TOLERANCE) -> EdgeMinimizers:
    """Table minimum of one edge plus all pairs within tolerance of it.

    Pairs are reported in canonical (lower node, higher node) orientation.
    For an all-infinite table every pair counts as a minimizer, so a
    structurally infeasible separator edge never blocks the optimality check.
    """
    view = as_view(costs)
    u, v = edge
    table = view.pairwise[view.model.edge_id(u, v)]
    min_value = float(table.min())
    if math.isinf(min_value):
        pairs = frozenset((s, t) for s in range(table.shape[0])
                          for t in range(table.shape[1]))
    else:
        close = np.argwhere(table <= min_value + tie_tolerance)
        pairs = frozenset((int(s), int(t)) for s, t in close)
    return EdgeMinimizers(min_value, pairs)


def branch_and_bound_solve(costs, sub: Subgraph, prune: bool = True,
                           warm_start: bool = True) -> ExactResult:
    """Depth-first branch-and-bound over the subgraph's label space.

    Branching order is static (descending degree inside the subgraph, then
    node id); label order is ascending conditioned unary cost at expansion
    time, so search trees are reproducible. The admissible bound sums the
    assigned part, per-unassigned-node conditioned unary minima, and table
    minima of edges between unassigned nodes. ``prune=False`` explores the
    full tree (same result, more nodes).
    """
    view = as_view(costs)
    model = view.model
    nodes = sub.nodes
    if not nodes:
        return ExactResult(Labeling((), ()), 0.0, 0)

    adj = {u: [] for u in nodes}
    for eid in sub.edge_ids:
        u, v = model.edges[eid]
        adj[u].append((v, eid, 0))
        adj[v].append((u, eid, 1))
    order = sorted(nodes, key=lambda u: (-len(adj[u]), u))

    cond = {u: view.unary[u].astype(np.float64) for u in nodes}
    edge_min = {eid: float(view.pairwise[eid].min()) for eid in sub.edge_ids}
    pending = sum(edge_min.values())

    incumbent_value = INF
    incumbent = None
    if warm_start:
        try:
            guess = locally_optimal_labeling(view, nodes).labeling
        except InfeasibleModelError:
            guess = None
        if guess is not None:
            value = subgraph_energy(view, sub, guess)
            if np.isfinite(value):
                incumbent_value, incumbent = value, guess

    assigned = {}
    assigned_cost = 0.0
    unassigned = set(nodes)
    nodes_expanded = 0

    def bound() -> float:
        total = assigned_cost + pending
        for u in unassigned:
            total += cond[u].min()
        return total

    def candidates(u):
        return np.argsort(cond[u], kind="stable")

    def retract(frame):
        u = frame[0]
        saved_cost, saved_pending, saved_cond = frame[3]
        nonlocal assigned_cost, pending
        assigned_cost = saved_cost
        pending = saved_pending
        for v, arr in saved_cond:
            cond[v] = arr
        del assigned[u]
        unassigned.add(u)
        frame[3] = None

    # stack frames: [node, candidate labels, next index, undo state]
    stack = [[order[0], candidates(order[0]), 0, None]]
    while stack:
        frame = stack[-1]
        if frame[3] is not None:  # previous candidate of this frame is active
            retract(frame)
        u, cands, idx, _ = frame
        if idx >= len(cands):
            stack.pop()
            continue
        s = int(cands[idx])
        frame[2] = idx + 1

        # assign u := s
        nodes_expanded += 1
        undo_cond = []
        frame[3] = (assigned_cost, pending, undo_cond)
        assigned_cost += float(cond[u][s])
        assigned[u] = s
        unassigned.discard(u)
        for v, eid, axis in adj[u]:
            if v in unassigned:
                undo_cond.append((v, cond[v]))
                row = view.pairwise[eid][s, :] if axis == 0 else view.pairwise[eid][:, s]
                cond[v] = cond[v] + row
                pending -= edge_min[eid]

        if not unassigned:
            labeling = Labeling.over(assigned.keys(), assigned.values())
            value = subgraph_energy(view, sub, labeling)
            if value < incumbent_value:
                incumbent_value, incumbent = value, labeling
            continue  # retracted on the next visit of this frame
        if prune and bound() >= incumbent_value - PRUNE_SLACK:
            continue
        nxt = order[len(assigned)]
        stack.append([nxt, candidates(nxt), 0, None])

    if incumbent is None:
        return ExactResult(None, INF, nodes_expanded)
    return ExactResult(incumbent, float(incumbent_value), nodes_expanded)
