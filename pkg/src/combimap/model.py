"""Core graph and cost-table types for pairwise discrete energy minimization.

Nodes are dense integers ``0..n-1`` and labels are dense integers per node,
so cost tables are plain numpy arrays and the hot message-passing loops can
index them directly. Costs live in the extended reals: finite float64 or
``+inf`` (hard constraints). ``-inf`` and NaN are never legal values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INF = math.inf


class InfeasibleModelError(Exception):
    """No labeling with finite energy exists (or a node/edge admits none)."""


class GraphicalModel:
    """Immutable undirected pairwise model.

    Parameters
    ----------
    label_counts : sequence of int
        Number of labels per node; node count is ``len(label_counts)``.
    unary : sequence of 1-d cost vectors
        Per-node unary costs, ``unary[u][s]``.
    edges : sequence of ``(u, v, table)``
        Pairwise terms; ``table[s, t]`` is the cost of ``(u=s, v=t)``.
        Edges are stored once in canonical ``u < v`` orientation; a table
        given in the opposite orientation is transposed on construction.

    The constructor does not reject malformed input (self-loops, duplicate
    edges, bad table shapes); run :func:`validate_model` to obtain
    diagnostics. All other operations assume a valid model.
    """

    __slots__ = ("node_count", "label_counts", "unary", "edges", "pairwise",
                 "_incident", "_edge_ids")

    def __init__(self, label_counts, unary, edges=()):
        counts = np.asarray(label_counts, dtype=np.int64)
        counts.setflags(write=False)
        self.label_counts = counts
        self.node_count = int(counts.shape[0])

        if len(unary) != self.node_count:
            raise ValueError(f"{len(unary)} unary vectors for "
                             f"{self.node_count} nodes")
        tables = []
        for th in unary:
            arr = np.array(th, dtype=np.float64)
            arr.setflags(write=False)
            tables.append(arr)
        self.unary = tuple(tables)

        edge_list = []
        pair_tables = []
        for u, v, table in edges:
            u, v = int(u), int(v)
            arr = np.array(table, dtype=np.float64)
            if u > v:
                u, v = v, u
                arr = arr.T.copy()
            arr.setflags(write=False)
            edge_list.append((u, v))
            pair_tables.append(arr)
        self.edges = tuple(edge_list)
        self.pairwise = tuple(pair_tables)

        incident = [[] for _ in range(self.node_count)]
        edge_ids = {}
        for eid, (u, v) in enumerate(self.edges):
            edge_ids.setdefault((u, v), eid)
            if 0 <= u < self.node_count:
                incident[u].append((v, eid, 0))
            if u != v and 0 <= v < self.node_count:
                incident[v].append((u, eid, 1))
        self._incident = tuple(tuple(entries) for entries in incident)
        self._edge_ids = edge_ids

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def labels(self, u: int) -> int:
        return int(self.label_counts[u])

    def neighbors(self, u: int):
        """Neighbor node ids of ``u`` in edge-list order."""
        return tuple(v for v, _, _ in self._incident[u])

    def incident(self, u: int):
        """Tuples ``(v, edge_id, axis)``; axis 0 iff ``u`` is the row index."""
        return self._incident[u]

    def degree(self, u: int) -> int:
        return len(self._incident[u])

    def edge_id(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self._edge_ids[key]
        except KeyError:
            raise ValueError(f"unknown edge ({u}, {v})") from None

    def check_nodes(self, nodes) -> None:
        for u in nodes:
            if not 0 <= int(u) < self.node_count:
                raise ValueError(f"unknown node id {u}")

    def __repr__(self):
        return (f"GraphicalModel(nodes={self.node_count}, "
                f"edges={len(self.edges)})")


@dataclass(frozen=True)
class Labeling:
    """Label assignment over an explicit node set (full or partial)."""

    nodes: tuple
    labels: tuple

    def __post_init__(self):
        if len(self.nodes) != len(self.labels):
            raise ValueError("nodes and labels differ in length")
        if any(a >= b for a, b in zip(self.nodes, self.nodes[1:])):
            raise ValueError("nodes must be strictly increasing")

    @classmethod
    def over(cls, nodes, labels) -> "Labeling":
        """Build from parallel node/label sequences in any order."""
        pairs = sorted(zip((int(u) for u in nodes), (int(s) for s in labels)))
        return cls(tuple(u for u, _ in pairs), tuple(s for _, s in pairs))

    @classmethod
    def full(cls, labels) -> "Labeling":
        return cls(tuple(range(len(labels))), tuple(int(s) for s in labels))

    @property
    def covers(self) -> frozenset:
        return frozenset(self.nodes)

    def get(self, u: int) -> int:
        return self.labels[self.nodes.index(u)]

    def as_dict(self) -> dict:
        return dict(zip(self.nodes, self.labels))

    def restrict(self, nodes) -> "Labeling":
        keep = set(nodes)
        pairs = [(u, s) for u, s in zip(self.nodes, self.labels) if u in keep]
        return Labeling(tuple(u for u, _ in pairs), tuple(s for _, s in pairs))

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class Subgraph:
    """Induced subgraph handle. Costs are always read from the master model."""

    nodes: tuple
    edge_ids: tuple


@dataclass(frozen=True)
class Partition:
    """Disjoint split of the node set into induced subgraphs A and B."""

    a_nodes: frozenset
    a: Subgraph
    b: Subgraph
    separator: tuple  # edge ids crossing between A and B

    def side_of(self, u: int) -> str:
        return "A" if u in self.a_nodes else "B"


def validate_model(model: GraphicalModel):
    """Collect all structural invariant violations; empty list iff valid."""
    problems = []
    n = model.node_count
    for u in range(n):
        if model.labels(u) < 1:
            problems.append(f"node {u} has label count {model.labels(u)}")
        th = model.unary[u]
        if th.ndim != 1 or th.shape[0] != model.labels(u):
            problems.append(f"unary for node {u} has shape {th.shape}, "
                            f"expected ({model.labels(u)},)")
        if np.isnan(th).any() or np.isneginf(th).any():
            problems.append(f"unary for node {u} contains NaN or -inf")

    seen = {}
    for eid, (u, v) in enumerate(model.edges):
        if not (0 <= u < n and 0 <= v < n):
            problems.append(f"edge {eid} ({u}, {v}) references an unknown node")
            continue
        if u == v:
            problems.append(f"edge {eid} ({u}, {v}) is a self-loop")
            continue
        if (u, v) in seen:
            problems.append(f"edge {eid} ({u}, {v}) duplicates edge {seen[(u, v)]}")
        else:
            seen[(u, v)] = eid
        table = model.pairwise[eid]
        want = (model.labels(u), model.labels(v))
        if table.shape != want:
            problems.append(f"pairwise table for edge ({u}, {v}) has shape "
                            f"{table.shape}, expected {want}")
        elif np.isnan(table).any() or np.isneginf(table).any():
            problems.append(f"pairwise table for edge ({u}, {v}) contains "
                            f"NaN or -inf")

    # adjacency must be reconstructible from the edge list
    rebuilt = [set() for _ in range(n)]
    for u, v in model.edges:
        if 0 <= u < n and 0 <= v < n and u != v:
            rebuilt[u].add(v)
            rebuilt[v].add(u)
    for u in range(n):
        stored = {v for v in model.neighbors(u) if v != u}
        if stored != rebuilt[u]:
            problems.append(f"adjacency of node {u} is inconsistent with the "
                            f"edge list")
    return problems


def induced_subgraph(model: GraphicalModel, nodes) -> Subgraph:
    """Subgraph induced by ``nodes``: keeps exactly the edges inside the set."""
    model.check_nodes(nodes)
    node_set = frozenset(int(u) for u in nodes)
    eids = tuple(eid for eid, (u, v) in enumerate(model.edges)
                 if u in node_set and v in node_set)
    return Subgraph(tuple(sorted(node_set)), eids)


def boundary_nodes(model: GraphicalModel, a_nodes) -> frozenset:
    """Nodes of A incident to at least one node outside A."""
    model.check_nodes(a_nodes)
    inside = frozenset(int(u) for u in a_nodes)
    return frozenset(u for u in inside
                     if any(v not in inside for v in model.neighbors(u)))


def boundary_complement(model: GraphicalModel, a_nodes) -> Subgraph:
    """Subgraph induced by the outside of A plus A's boundary nodes."""
    inside = frozenset(int(u) for u in a_nodes)
    outside = frozenset(range(model.node_count)) - inside
    return induced_subgraph(model, outside | boundary_nodes(model, inside))


def partition_from_A(model: GraphicalModel, a_nodes) -> Partition:
    """Partition (A, B) with A induced by ``a_nodes`` and B by its complement."""
    model.check_nodes(a_nodes)
    inside = frozenset(int(u) for u in a_nodes)
    outside = frozenset(range(model.node_count)) - inside
    a = induced_subgraph(model, inside)
    b = induced_subgraph(model, outside)
    inner = set(a.edge_ids) | set(b.edge_ids)
    separator = tuple(eid for eid in range(len(model.edges))
                      if eid not in inner)
    return Partition(inside, a, b, separator)
