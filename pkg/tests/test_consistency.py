import itertools

import numpy as np
import pytest

from combimap import (
    GraphicalModel,
    brute_force_solve,
    initial_partition,
    run_block_ascent,
    sac_nodes,
    subgraph_energy,
)

from helpers import full_dual_view, naive_minimum, random_model, random_tree_model


def test_sac_micro(m1, m2):
    res = sac_nodes(m1)
    assert res.nodes == {0, 1}
    assert res.witness.as_dict() == {0: 0, 1: 0}

    assert sac_nodes(m2).nodes == frozenset()  # unary ties everywhere

    tied = GraphicalModel([2, 2], [[0, 1], [0, 1]],
                          [(0, 1, [[0, 2], [2, 0]])])
    assert sac_nodes(tied).nodes == frozenset()  # pairwise minimum tied


def test_sac_witnesses_agree_on_shared_edges():
    rng = np.random.default_rng(40)
    for _ in range(30):
        m = random_model(rng)
        view = run_block_ascent(m).costs
        res = sac_nodes(view)
        witness = res.witness.as_dict()
        for eid, (u, v) in enumerate(m.edges):
            if u in res.nodes and v in res.nodes:
                table = view.pairwise[eid]
                s, t = np.unravel_index(int(table.argmin()), table.shape)
                assert witness[u] == s and witness[v] == t


def test_sac_monotone_in_tolerance():
    rng = np.random.default_rng(41)
    for _ in range(20):
        m = random_model(rng)
        view = run_block_ascent(m).costs
        loose = sac_nodes(view, strictness_tolerance=1e-3).nodes
        tight = sac_nodes(view, strictness_tolerance=1e-10).nodes
        assert loose <= tight


def test_initial_partition_micro(m1, m2):
    res = initial_partition(m1)
    assert res.partition.a.nodes == (0, 1)
    assert res.partition.b.nodes == ()
    assert res.labeling.labels == (0, 0)
    assert res.energy_a == 0.0

    res = initial_partition(m2)
    assert res.partition.a.nodes == ()
    assert res.partition.b.nodes == (0, 1, 2)


def test_initial_partition_after_dual_phase_on_tree(m3):
    # the exact tree dual plus both post-processing steps makes every node
    # strictly consistent, so A covers the whole graph
    view = full_dual_view(m3)
    res = initial_partition(view)
    assert set(res.partition.a.nodes) == {0, 1, 2}
    x, optimum = naive_minimum(m3)
    assert res.labeling.labels == x == (0, 0, 0)


def test_witness_energy_is_optimal_on_a():
    rng = np.random.default_rng(42)
    for _ in range(30):
        m = random_tree_model(rng, n_range=(3, 7))
        view = full_dual_view(m)
        res = initial_partition(view)
        if not res.partition.a.nodes:
            continue
        best = brute_force_solve(view, res.partition.a)
        assert res.energy_a == pytest.approx(best.energy, abs=1e-9)
        # the witness is itself a minimizer on A
        assert subgraph_energy(view, res.partition.a, res.labeling) == \
            pytest.approx(best.energy, abs=1e-9)
