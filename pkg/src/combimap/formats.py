"""Model ingestion (native text format and UAI-LG) and stats emission.

The native format is line-oriented text chosen over a binary container so
golden files diff cleanly; ``inf`` is the infinity token and ``#`` starts a
comment. UAI MARKOV files are read in the log-space convention: every table
entry w becomes the cost -w, which turns MAP over products into the additive
minimization this package solves. UAI files also circulate with linear-space
tables; those must be converted before feeding them in.
"""

from __future__ import annotations

import json
import math
import re

import numpy as np

from .driver import SolveReport
from .model import GraphicalModel, validate_model

INF = math.inf

_TOKEN = re.compile(r"\S+")


class ModelFormatError(ValueError):
    """Malformed model document; carries the offending location when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + ("" if column is None else f", column {column}")
            message = f"{message} ({where})"
        super().__init__(message)


class UnsupportedArityError(ModelFormatError):
    """Factor arity outside the pairwise scope of this package."""


def format_cost(value: float) -> str:
    """Canonical cost token: shortest round-trip decimal, ``inf`` for infinity."""
    value = float(value)
    if math.isinf(value):
        return "inf"
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


class _Tokens:
    """Whitespace token stream with 1-based line/column positions."""

    def __init__(self, text: str, comments: bool = True):
        self.items = []
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0] if comments else raw
            for match in _TOKEN.finditer(line):
                self.items.append((match.group(), line_no, match.start() + 1))
        self.pos = 0

    def next(self, what: str):
        if self.pos >= len(self.items):
            raise ModelFormatError(f"expected {what}, found end of input")
        item = self.items[self.pos]
        self.pos += 1
        return item

    def take_int(self, what: str) -> int:
        token, line, col = self.next(what)
        try:
            return int(token)
        except ValueError:
            raise ModelFormatError(f"expected {what}, found {token!r}",
                                   line, col) from None

    def take_cost(self, what: str) -> float:
        token, line, col = self.next(what)
        try:
            value = float(token)
        except ValueError:
            raise ModelFormatError(f"expected {what}, found {token!r}",
                                   line, col) from None
        if math.isnan(value) or value == -INF:
            raise ModelFormatError(f"cost token {token!r} is not a finite "
                                   f"value or inf", line, col)
        return value

    def exhausted(self) -> bool:
        return self.pos >= len(self.items)

    def peek_location(self):
        _, line, col = self.items[self.pos]
        return line, col


def parse_native(text: str) -> GraphicalModel:
    """Parse the native model format; rejects structurally invalid models."""
    tokens = _Tokens(text)
    magic, line, col = tokens.next("format magic 'MAPMODEL'")
    if magic != "MAPMODEL":
        raise ModelFormatError(f"expected 'MAPMODEL', found {magic!r}", line, col)
    version, line, col = tokens.next("format version")
    if version != "1":
        raise ModelFormatError(f"unsupported format version {version!r}", line, col)

    node_count = tokens.take_int("node count")
    edge_count = tokens.take_int("edge count")
    if node_count < 0 or edge_count < 0:
        raise ModelFormatError("node and edge counts must be nonnegative")
    counts = [tokens.take_int(f"label count of node {u}")
              for u in range(node_count)]
    for u, c in enumerate(counts):
        if c < 1:
            raise ModelFormatError(f"node {u} has label count {c}")

    unary = [[tokens.take_cost(f"unary cost of node {u}")
              for _ in range(counts[u])] for u in range(node_count)]

    edges = []
    seen = set()
    for k in range(edge_count):
        u = tokens.take_int(f"endpoint of edge {k}")
        v = tokens.take_int(f"endpoint of edge {k}")
        if not (0 <= u < node_count and 0 <= v < node_count):
            raise ModelFormatError(f"edge {k} ({u}, {v}) references an "
                                   f"unknown node")
        if u == v:
            raise ModelFormatError(f"edge {k} ({u}, {v}) is a self-loop")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ModelFormatError(f"edge {k} ({u}, {v}) duplicates an "
                                   f"earlier edge")
        seen.add(key)
        table = [[tokens.take_cost(f"cost of edge {k}")
                  for _ in range(counts[v])] for _ in range(counts[u])]
        edges.append((u, v, table))

    if not tokens.exhausted():
        line, col = tokens.peek_location()
        raise ModelFormatError("unexpected trailing content", line, col)

    model = GraphicalModel(counts, unary, edges)
    problems = validate_model(model)
    if problems:
        raise ModelFormatError("; ".join(problems))
    return model


def write_native(model: GraphicalModel) -> str:
    """Serialize to the canonical native form (stable byte-for-byte)."""
    problems = validate_model(model)
    if problems:
        raise ValueError("refusing to write invalid model: " + "; ".join(problems))
    lines = ["MAPMODEL 1",
             f"{model.node_count} {len(model.edges)}",
             " ".join(str(model.labels(u)) for u in range(model.node_count))]
    for u in range(model.node_count):
        lines.append(" ".join(format_cost(c) for c in model.unary[u]))
    for eid, (u, v) in enumerate(model.edges):
        lines.append(f"{u} {v}")
        for row in model.pairwise[eid]:
            lines.append(" ".join(format_cost(c) for c in row))
    return "\n".join(lines) + "\n"


def parse_uai_lg(text: str) -> GraphicalModel:
    """Parse a UAI MARKOV file, reading tables as log-potentials.

    Every entry w becomes the cost -w. Unary factors add into the node
    costs, pairwise factors into the edge tables (transposed into canonical
    low-high orientation when the scope lists the higher variable first);
    duplicate factors over the same scope are summed.
    """
    tokens = _Tokens(text, comments=False)
    magic, line, col = tokens.next("network type")
    if magic.upper() != "MARKOV":
        raise ModelFormatError(f"malformed header: expected MARKOV, found "
                               f"{magic!r}", line, col)
    node_count = tokens.take_int("variable count")
    if node_count < 0:
        raise ModelFormatError("variable count must be nonnegative")
    counts = [tokens.take_int(f"cardinality of variable {u}")
              for u in range(node_count)]
    for u, c in enumerate(counts):
        if c < 1:
            raise ModelFormatError(f"variable {u} has cardinality {c}")

    factor_count = tokens.take_int("factor count")
    scopes = []
    for k in range(factor_count):
        arity = tokens.take_int(f"arity of factor {k}")
        if arity not in (1, 2):
            raise UnsupportedArityError(f"factor {k} has unsupported arity "
                                        f"{arity}; only unary and pairwise "
                                        f"factors are supported")
        scope = tuple(tokens.take_int(f"variable of factor {k}")
                      for _ in range(arity))
        for u in scope:
            if not 0 <= u < node_count:
                raise ModelFormatError(f"factor {k} references unknown "
                                       f"variable {u}")
        if arity == 2 and scope[0] == scope[1]:
            raise ModelFormatError(f"factor {k} repeats variable {scope[0]} "
                                   f"(self-loop)")
        scopes.append(scope)

    unary = [np.zeros(c) for c in counts]
    pairwise = {}
    for k, scope in enumerate(scopes):
        expected = math.prod(counts[u] for u in scope)
        size = tokens.take_int(f"table size of factor {k}")
        if size != expected:
            raise ModelFormatError(f"factor {k} declares {size} entries, "
                                   f"scope implies {expected}")
        values = np.array([tokens.take_cost(f"entry of factor {k}")
                           for _ in range(size)])
        costs = -values
        if np.isneginf(costs).any():
            raise ModelFormatError(f"factor {k} contains +inf log-potential "
                                   f"(cost would be -inf)")
        if len(scope) == 1:
            unary[scope[0]] += costs
        else:
            u, v = scope
            table = costs.reshape(counts[u], counts[v])
            if u > v:
                u, v = v, u
                table = table.T
            if (u, v) in pairwise:
                pairwise[(u, v)] = pairwise[(u, v)] + table
            else:
                pairwise[(u, v)] = table

    if not tokens.exhausted():
        line, col = tokens.peek_location()
        raise ModelFormatError("unexpected trailing content", line, col)

    edges = [(u, v, table) for (u, v), table in sorted(pairwise.items())]
    model = GraphicalModel(counts, unary, edges)
    problems = validate_model(model)
    if problems:
        raise ModelFormatError("; ".join(problems))
    return model


def _json_number(value):
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def emit_report(report: SolveReport) -> str:
    """Serialize a solve report to the stats document (deterministic JSON).

    Field order is fixed; non-finite numbers (energy of an infeasible run)
    become null. The optional ``bound_trace`` is included when present.
    """
    doc = {
        "method": report.method,
        "optimal": bool(report.optimal),
        "infeasible": bool(report.infeasible),
        "energy": _json_number(report.energy),
        "dual_bound": _json_number(report.dual_bound),
        "density": _json_number(report.density),
        "labelwise_ilp_fraction_final": _json_number(
            report.labelwise_ilp_fraction_final),
        "iterations": [
            {
                "k": it.k,
                "vb_size": it.vb_size,
                "ilp_fraction": _json_number(it.ilp_fraction),
                "bnb_nodes": it.bnb_nodes,
                "criterion_holds": bool(it.criterion_holds),
            }
            for it in report.iterations
        ],
    }
    if report.bound_trace is not None:
        doc["bound_trace"] = [_json_number(b) for b in report.bound_trace]
    return json.dumps(doc, indent=2) + "\n"
