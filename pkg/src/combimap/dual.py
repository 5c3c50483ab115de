"""Monotone dual block-coordinate ascent and reparametrization post-processing.

The ascent is a sequential min-sum scheme over a fixed node order: each node
pulls the row minima of its incident tables into its unary, then pushes a
weighted share of the pulled unary onto the edges pointing forward in the
sweep. The push weight 1/max(d+, d-) makes the lower bound nondecreasing at
every step; the post-processing variant shrinks the weight so cost mass
accumulates in the unaries, and a final step spreads unary mass back into
the tables. Both keep every labeling's energy unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energy import CostView, Reparametrization, apply_reparametrization, dual_bound
from .model import GraphicalModel, InfeasibleModelError

INF = math.inf


@dataclass
class AscentConfig:
    max_iterations: int = 2000       # sweep cap (one sweep = one direction)
    convergence_epsilon: float = 1e-9
    lambda_: float = 0.1             # post-processing push-weight shift
    postprocess_sweeps: int = 10

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.lambda_ < 0:
            raise ValueError("lambda_ must be >= 0")


@dataclass
class AscentResult:
    phi: Reparametrization
    bound_trace: list
    costs: CostView  # working view: θ^φ with unreachable labels closed out


def _close_out_hard_constraints(view: CostView) -> None:
    """Mark labels that cannot occur in any finite-energy labeling as +inf.

    A label survives only if its unary is finite and every incident table row
    has a finite entry against a surviving label of the neighbor; this runs
    to fixpoint. Marking changes no labeling's energy (any labeling using a
    closed-out label already costs +inf) but keeps the sweeps free of
    inf-minus-inf arithmetic. Raises when some node loses all labels.
    """
    model = view.model
    feasible = [np.isfinite(arr) for arr in view.unary]
    for u in range(model.node_count):
        if not feasible[u].any():
            raise InfeasibleModelError(f"node {u} has no finite unary cost")

    changed = True
    while changed:
        changed = False
        for eid, (u, v) in enumerate(model.edges):
            table = view.pairwise[eid]
            ok_u = np.isfinite(table[:, feasible[v]]).any(axis=1)
            new_u = feasible[u] & ok_u
            if not np.array_equal(new_u, feasible[u]):
                feasible[u] = new_u
                changed = True
            ok_v = np.isfinite(table[feasible[u], :]).any(axis=0)
            new_v = feasible[v] & ok_v
            if not np.array_equal(new_v, feasible[v]):
                feasible[v] = new_v
                changed = True
            if not feasible[u].any() or not feasible[v].any():
                raise InfeasibleModelError(
                    f"edge ({u}, {v}) admits no finite label pair")

    for u in range(model.node_count):
        view.unary[u][~feasible[u]] = INF
    for eid, (u, v) in enumerate(model.edges):
        view.pairwise[eid][~feasible[u], :] = INF
        view.pairwise[eid][:, ~feasible[v]] = INF


class _Workspace:
    """Mutable sweep state: working cost view plus the messages producing it."""

    def __init__(self, model: GraphicalModel, phi: Reparametrization):
        self.model = model
        self.view = apply_reparametrization(model, phi)
        _close_out_hard_constraints(self.view)
        self.phi = phi.copy()
        # neighbors split by node order; axis 0 iff the node indexes the rows
        self.succ = [[] for _ in range(model.node_count)]
        self.pred = [[] for _ in range(model.node_count)]
        for u in range(model.node_count):
            for v, eid, axis in model.incident(u):
                (self.succ if v > u else self.pred)[u].append((eid, axis))

    def bound(self) -> float:
        return dual_bound(self.view)

    def _pull(self, u: int) -> None:
        un = self.view.unary[u]
        for eid, axis in self.succ[u] + self.pred[u]:
            table = self.view.pairwise[eid]
            delta = table.min(axis=1 - axis)
            delta = np.where(np.isfinite(delta), delta, 0.0)
            phi_arr = self.phi.forward[eid] if axis == 0 else self.phi.backward[eid]
            phi_arr -= delta
            un += delta
            if axis == 0:
                table -= delta[:, None]
            else:
                table -= delta[None, :]

    def _push(self, u: int, targets, weight: float) -> None:
        un = self.view.unary[u]
        shift = np.where(np.isfinite(un), weight * un, 0.0)
        for eid, axis in targets:
            phi_arr = self.phi.forward[eid] if axis == 0 else self.phi.backward[eid]
            phi_arr += shift
            table = self.view.pairwise[eid]
            if axis == 0:
                table += shift[:, None]
            else:
                table += shift[None, :]
        un -= len(targets) * shift

    def sweep(self, forward: bool, lam: float = 0.0) -> None:
        n = self.model.node_count
        order = range(n) if forward else range(n - 1, -1, -1)
        for u in order:
            self._pull(u)
            targets = self.succ[u] if forward else self.pred[u]
            others = self.pred[u] if forward else self.succ[u]
            if targets:
                denom = max(len(targets), len(others)) + lam
                self._push(u, targets, 1.0 / denom)


def run_block_ascent(model: GraphicalModel, config: AscentConfig | None = None,
                     on_sweep=None) -> AscentResult:
    """Maximize the dual lower bound by sequential message passing.

    Sweeps alternate forward/backward over the node order 0..n-1 and stop at
    the sweep cap or once a forward+backward cycle improves the bound by less
    than ``convergence_epsilon``. The returned trace holds the bound after
    each sweep (prepended with the starting bound) and is nondecreasing.
    ``on_sweep``, if given, is called with the working view after every sweep.
    """
    config = config or AscentConfig()
    ws = _Workspace(model, Reparametrization.zeros(model))
    trace = [ws.bound()]
    sweeps_done = 0
    cycle_start = trace[0]
    while sweeps_done < config.max_iterations:
        forward = sweeps_done % 2 == 0
        ws.sweep(forward)
        sweeps_done += 1
        trace.append(ws.bound())
        if on_sweep is not None:
            on_sweep(ws.view)
        if not forward:  # a full cycle just completed
            if trace[-1] - cycle_start < config.convergence_epsilon:
                break
            cycle_start = trace[-1]
    return AscentResult(ws.phi, trace, ws.view)


def postprocess_messages(model: GraphicalModel, phi: Reparametrization,
                         config: AscentConfig | None = None) -> AscentResult:
    """Extra sweeps with a λ-shifted push weight.

    The weight 1/(max(d+, d-) + λ) redistributes strictly less than the full
    pulled unary, so label-cost differences accumulate in the unaries. The
    bound stays nondecreasing and all labeling energies are preserved.
    """
    config = config or AscentConfig()
    ws = _Workspace(model, phi)
    trace = [ws.bound()]
    for k in range(config.postprocess_sweeps):
        ws.sweep(forward=k % 2 == 0, lam=config.lambda_)
        trace.append(ws.bound())
    return AscentResult(ws.phi, trace, ws.view)


def redistribute_unary(model: GraphicalModel,
                       phi: Reparametrization) -> Reparametrization:
    """Spread unary cost onto incident tables, keeping a 1/(deg+1) share.

    For every node u with degree d, each finite reparametrized unary entry
    θ^φ_u(s) contributes θ^φ_u(s)/(d+1) to row s of every incident table
    and keeps one such share in place. Infinite entries are not touched
    (they carry hard constraints and cannot move through finite messages).
    """
    ws = _Workspace(model, phi)
    for u in range(model.node_count):
        incident = ws.succ[u] + ws.pred[u]
        if not incident:
            continue
        ws._push(u, incident, 1.0 / (len(incident) + 1))
    return ws.phi


def effective_costs(model: GraphicalModel, phi: Reparametrization) -> CostView:
    """Working view for a reparametrization: θ^φ with hard constraints closed out."""
    view = apply_reparametrization(model, phi)
    _close_out_hard_constraints(view)
    return view
