"""Shared test utilities: random model ensembles and a naive energy oracle.

The oracle functions here are deliberately independent of the package's
vectorized solvers: pure-Python loops over itertools.product, so they can
serve as ground truth for everything else.
"""

import itertools
import math

import numpy as np

from combimap import GraphicalModel, Labeling


def naive_energy(model, labels):
    """Pure-Python energy of a full labeling (the test-side oracle)."""
    total = 0.0
    for u in range(model.node_count):
        total += float(model.unary[u][labels[u]])
    for eid, (u, v) in enumerate(model.edges):
        total += float(model.pairwise[eid][labels[u], labels[v]])
    return total


def naive_minimum(model):
    """Exhaustive minimum by plain enumeration: (labels or None, energy)."""
    best, best_x = math.inf, None
    for x in itertools.product(*[range(model.labels(u))
                                 for u in range(model.node_count)]):
        e = naive_energy(model, x)
        if e < best:
            best, best_x = e, x
    return best_x, best


def count_minima(model, optimum, slack=1e-9):
    """Number of labelings within ``slack`` of the given optimum."""
    hits = 0
    for x in itertools.product(*[range(model.labels(u))
                                 for u in range(model.node_count)]):
        if naive_energy(model, x) <= optimum + slack:
            hits += 1
    return hits


def all_labelings(model):
    for x in itertools.product(*[range(model.labels(u))
                                 for u in range(model.node_count)]):
        yield Labeling.full(x)


def random_model(rng, n_range=(3, 8), label_range=(2, 4), edge_prob=None,
                 inf_entries=0, cost=None):
    """Random pairwise model matching the acceptance ensemble recipe."""
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    counts = rng.integers(label_range[0], label_range[1] + 1, size=n)
    p = edge_prob if edge_prob is not None else float(rng.choice([0.3, 0.6, 1.0]))
    draw = cost or (lambda shape: rng.uniform(0.0, 1.0, shape))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.uniform() < p:
                edges.append([u, v, draw((int(counts[u]), int(counts[v])))])
    for _ in range(inf_entries if edges else 0):
        eid = int(rng.integers(len(edges)))
        table = edges[eid][2]
        s = int(rng.integers(table.shape[0]))
        t = int(rng.integers(table.shape[1]))
        table[s, t] = math.inf
    unary = [draw((int(c),)) for c in counts]
    return GraphicalModel(counts, unary, edges)


def random_tree_model(rng, n_range=(3, 10), label_range=(2, 4)):
    """Random tree with node ids permuted, so tree paths run against the
    solver's fixed node order as often as along it."""
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    counts = rng.integers(label_range[0], label_range[1] + 1, size=n)
    perm = rng.permutation(n)
    edges = []
    for child in range(1, n):
        parent = int(rng.integers(0, child))
        u, v = int(perm[parent]), int(perm[child])
        edges.append((u, v, rng.normal(0.0, 1.0, (int(counts[u]), int(counts[v])))))
    unary = [rng.normal(0.0, 1.0, int(c)) for c in counts]
    return GraphicalModel(counts, unary, edges)


def full_dual_view(model):
    """Working costs after the complete dual phase (ascent + post-processing)."""
    from combimap import (effective_costs, postprocess_messages,
                          redistribute_unary, run_block_ascent)
    phi = run_block_ascent(model).phi
    phi = postprocess_messages(model, phi).phi
    return effective_costs(model, redistribute_unary(model, phi))


def random_reparametrization(rng, model):
    from combimap import Reparametrization
    phi = Reparametrization.zeros(model)
    for eid, (u, v) in enumerate(model.edges):
        phi.forward[eid] = rng.uniform(-2.0, 2.0, model.labels(u))
        phi.backward[eid] = rng.uniform(-2.0, 2.0, model.labels(v))
    return phi


def random_labeling(rng, model):
    return Labeling.full([int(rng.integers(model.labels(u)))
                          for u in range(model.node_count)])
