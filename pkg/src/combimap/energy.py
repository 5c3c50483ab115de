"""Energy evaluation, dual bounds and reparametrization arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .model import GraphicalModel, InfeasibleModelError, Labeling, Partition, Subgraph

INF = math.inf

# One knob for all argmin/uniqueness decisions, in absolute cost units.
# Float message passing produces near-ties; optimality checks must not fail
# on 1-ulp noise.
DEFAULT_TOLERANCE = 1e-8


class CostView:
    """Unary/pairwise cost tables of a model, possibly reparametrized.

    A view owns nothing semantically: it is just the (θ or θ^φ) tables a
    solver currently works with. ``CostView.of(model)`` shares the model's
    arrays; :func:`apply_reparametrization` materializes shifted copies.
    """

    __slots__ = ("model", "unary", "pairwise")

    def __init__(self, model: GraphicalModel, unary, pairwise):
        self.model = model
        self.unary = list(unary)
        self.pairwise = list(pairwise)

    @classmethod
    def of(cls, model: GraphicalModel) -> "CostView":
        return cls(model, model.unary, model.pairwise)

    def copy(self) -> "CostView":
        return CostView(self.model,
                        [a.copy() for a in self.unary],
                        [t.copy() for t in self.pairwise])


def as_view(costs) -> CostView:
    if isinstance(costs, CostView):
        return costs
    return CostView.of(costs)


@dataclass
class Reparametrization:
    """Per-directed-edge message vectors shifting cost between tables.

    ``forward[e]`` is the message sent by the lower endpoint of edge ``e``
    (indexed by its labels), ``backward[e]`` the one sent by the higher
    endpoint. All entries are finite; the zero vector is the identity.
    """

    model: GraphicalModel
    forward: list
    backward: list

    @classmethod
    def zeros(cls, model: GraphicalModel) -> "Reparametrization":
        fwd = [np.zeros(model.labels(u)) for u, _ in model.edges]
        bwd = [np.zeros(model.labels(v)) for _, v in model.edges]
        return cls(model, fwd, bwd)

    def copy(self) -> "Reparametrization":
        return Reparametrization(self.model,
                                 [a.copy() for a in self.forward],
                                 [a.copy() for a in self.backward])

    def message(self, u: int, v: int) -> np.ndarray:
        """The vector φ_{u,v}, i.e. the message sent by ``u`` along edge uv."""
        eid = self.model.edge_id(u, v)
        return self.forward[eid] if u < v else self.backward[eid]

    def compose(self, other: "Reparametrization") -> "Reparametrization":
        """Entrywise sum; applying the result equals applying both in turn."""
        return Reparametrization(
            self.model,
            [a + b for a, b in zip(self.forward, other.forward)],
            [a + b for a, b in zip(self.backward, other.backward)])


def apply_reparametrization(model: GraphicalModel,
                            phi: Reparametrization) -> CostView:
    """Materialize the equivalent costs θ^φ.

    Unaries lose each outgoing message, pairwise tables gain both endpoint
    messages. ``+inf`` entries stay ``+inf``; every labeling keeps its energy.
    """
    unary = [a.astype(np.float64) for a in model.unary]
    pairwise = []
    for eid, (u, v) in enumerate(model.edges):
        f, b = phi.forward[eid], phi.backward[eid]
        if f.shape[0] != model.labels(u) or b.shape[0] != model.labels(v):
            raise ValueError(f"message dimensions for edge ({u}, {v}) do not "
                             f"match the label counts")
        unary[u] -= f
        unary[v] -= b
        pairwise.append(model.pairwise[eid] + f[:, None] + b[None, :])
    return CostView(model, unary, pairwise)


def _require_cover(labeling: Labeling, nodes, what: str) -> None:
    if labeling.covers != frozenset(nodes):
        raise ValueError(f"labeling does not cover {what}")


def total_energy(costs, labeling: Labeling) -> float:
    """Sum of unary and pairwise costs of a full labeling (extended reals)."""
    view = as_view(costs)
    model = view.model
    _require_cover(labeling, range(model.node_count), "all nodes")
    x = labeling.labels
    total = 0.0
    for u in range(model.node_count):
        total += view.unary[u][x[u]]
    for eid, (u, v) in enumerate(model.edges):
        total += view.pairwise[eid][x[u], x[v]]
    return float(total)


def subgraph_energy(costs, sub: Subgraph, labeling: Labeling) -> float:
    """Energy restricted to a subgraph's nodes and induced edges."""
    view = as_view(costs)
    _require_cover(labeling, sub.nodes, "the subgraph nodes")
    assign = labeling.as_dict()
    total = 0.0
    for u in sub.nodes:
        total += view.unary[u][assign[u]]
    for eid in sub.edge_ids:
        u, v = view.model.edges[eid]
        total += view.pairwise[eid][assign[u], assign[v]]
    return float(total)


def concatenate(xa: Labeling, xb: Labeling, partition: Partition) -> Labeling:
    """Merge per-side labelings into one over the whole node set."""
    _require_cover(xa, partition.a.nodes, "side A")
    _require_cover(xb, partition.b.nodes, "side B")
    merged = xa.as_dict()
    merged.update(xb.as_dict())
    return Labeling.over(merged.keys(), merged.values())


def partition_lower_bound(costs, partition: Partition,
                          ea_opt: float, eb_opt: float) -> float:
    """Lower bound on the optimum induced by a partition.

    ``ea_opt``/``eb_opt`` must be the exact minima of the two side
    subproblems (caller-supplied; not recomputed here). Separator edges
    contribute their table minima.
    """
    view = as_view(costs)
    total = ea_opt + eb_opt
    for eid in partition.separator:
        total += view.pairwise[eid].min()
    return float(total)


class OptimalityCheck(NamedTuple):
    holds: bool
    violating_a_nodes: frozenset


def check_sufficient_optimality(costs, partition: Partition,
                                xa: Labeling, xb: Labeling,
                                tie_tolerance: float = DEFAULT_TOLERANCE
                                ) -> OptimalityCheck:
    """Test whether every separator edge attains its table minimum.

    When it does (and the side labelings are exact optima), the concatenated
    labeling is globally optimal. Returns the A-side endpoints of violating
    separator edges: exactly the nodes the partition-growing loop removes.
    """
    view = as_view(costs)
    _require_cover(xa, partition.a.nodes, "side A")
    _require_cover(xb, partition.b.nodes, "side B")
    a_assign = xa.as_dict()
    b_assign = xb.as_dict()
    violating = set()
    for eid in partition.separator:
        u, v = view.model.edges[eid]
        table = view.pairwise[eid]
        if u in a_assign:
            value = table[a_assign[u], b_assign[v]]
            a_end = u
        else:
            value = table[b_assign[u], a_assign[v]]
            a_end = v
        if value > table.min() + tie_tolerance:
            violating.add(a_end)
    return OptimalityCheck(not violating, frozenset(violating))


def dual_bound(costs) -> float:
    """Sum of per-node and per-edge cost minima: a lower bound on any energy."""
    view = as_view(costs)
    total = 0.0
    for arr in view.unary:
        total += arr.min()
    for table in view.pairwise:
        total += table.min()
    return float(total)


class LocalArgmin(NamedTuple):
    labeling: Labeling
    unique: dict


def locally_optimal_labeling(costs, nodes,
                             strictness_tolerance: float = DEFAULT_TOLERANCE
                             ) -> LocalArgmin:
    """Per-node unary argmin with lowest-index tie-break.

    ``unique[u]`` tells whether the minimum is strict, i.e. the runner-up is
    more than ``strictness_tolerance`` away. A node whose unary is entirely
    infinite has no usable label and raises.
    """
    view = as_view(costs)
    view.model.check_nodes(nodes)
    node_list = sorted(int(u) for u in set(nodes))
    labels = []
    unique = {}
    for u in node_list:
        arr = view.unary[u]
        best = arr.min()
        if not np.isfinite(best):
            raise InfeasibleModelError(f"node {u} has no finite unary cost")
        labels.append(int(arr.argmin()))
        if arr.shape[0] > 1:
            runner_up = np.partition(arr, 1)[1]
            unique[u] = bool(runner_up - best > strictness_tolerance)
        else:
            unique[u] = True
    return LocalArgmin(Labeling(tuple(node_list), tuple(labels)), unique)
