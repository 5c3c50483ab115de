"""Command line entry point: solve, bound, stats and validate subcommands."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .driver import SOLVERS, SolveConfig, SolveReport, graph_density
from .dual import AscentConfig, run_block_ascent
from .formats import ModelFormatError, emit_report, format_cost, \
    parse_native, parse_uai_lg
from .model import GraphicalModel, InfeasibleModelError

PARSERS = {"native": parse_native, "uai-lg": parse_uai_lg}


def _add_input_flags(sub):
    sub.add_argument("--input", required=True, help="model file to read")
    sub.add_argument("--format", choices=sorted(PARSERS), default="native",
                     help="input format (default: native)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="combimap",
        description="Exact MAP inference on pairwise graphical models.")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="solve a model to optimality")
    _add_input_flags(solve)
    solve.add_argument("--method", choices=sorted(SOLVERS), default="dclp",
                       help="solver (default: dclp)")
    solve.add_argument("--max-iters", type=int, default=2000,
                       help="dual ascent sweep cap (default: 2000)")
    solve.add_argument("--lambda", dest="lam", type=float, default=0.1,
                       help="post-processing weight shift (default: 0.1)")
    solve.add_argument("--tol", type=float, default=1e-8,
                       help="tie/strictness tolerance (default: 1e-8)")
    solve.add_argument("--post-sweeps", type=int, default=10,
                       help="post-processing sweeps (default: 10)")
    solve.add_argument("--seed", type=int, default=None,
                       help="random seed (reserved; all methods are "
                            "deterministic)")
    solve.add_argument("--stats", help="write the stats document here")
    solve.add_argument("--solution", help="write the labeling here")

    bound = commands.add_parser("bound", help="run the dual phase only and "
                                              "print the bound trace")
    _add_input_flags(bound)
    bound.add_argument("--max-iters", type=int, default=2000,
                       help="dual ascent sweep cap (default: 2000)")
    bound.add_argument("--stats", help="write the stats document here")

    stats = commands.add_parser("stats", help="print model dimensions and "
                                              "graph density")
    _add_input_flags(stats)

    validate = commands.add_parser("validate", help="check a model file")
    _add_input_flags(validate)
    return parser


def _load_model(ns) -> GraphicalModel:
    text = Path(ns.input).read_text()
    return PARSERS[ns.format](text)


def _cmd_solve(ns) -> int:
    model = _load_model(ns)
    config = SolveConfig(
        ascent=AscentConfig(max_iterations=ns.max_iters, lambda_=ns.lam,
                            postprocess_sweeps=ns.post_sweeps),
        tie_tolerance=ns.tol, strictness_tolerance=ns.tol)
    report = SOLVERS[ns.method](model, config)
    print(f"method {report.method}")
    print(f"optimal {str(report.optimal).lower()}")
    print(f"infeasible {str(report.infeasible).lower()}")
    if not report.infeasible:
        print(f"energy {format_cost(report.energy)}")
        print(f"dual_bound {format_cost(report.dual_bound)}")
    print(f"iterations {len(report.iterations)}")
    if ns.stats:
        Path(ns.stats).write_text(emit_report(report))
    if ns.solution and report.labeling is not None:
        labels = " ".join(str(s) for s in report.labeling.labels)
        Path(ns.solution).write_text(labels + "\n")
    return 1 if report.infeasible else 0


def _cmd_bound(ns) -> int:
    model = _load_model(ns)
    try:
        result = run_block_ascent(model, AscentConfig(max_iterations=ns.max_iters))
    except InfeasibleModelError as exc:
        print(f"infeasible: {exc}")
        return 1
    for value in result.bound_trace:
        print(format_cost(value))
    if ns.stats:
        report = SolveReport(
            method="bound", optimal=False, infeasible=False,
            energy=math.inf, dual_bound=result.bound_trace[-1],
            density=graph_density(model), labelwise_ilp_fraction_final=1.0,
            iterations=[], labeling=None, bound_trace=result.bound_trace)
        Path(ns.stats).write_text(emit_report(report))
    return 0


def _cmd_stats(ns) -> int:
    model = _load_model(ns)
    label_counts = [model.labels(u) for u in range(model.node_count)]
    print(f"nodes {model.node_count}")
    print(f"edges {len(model.edges)}")
    print(f"labels_min {min(label_counts, default=0)}")
    print(f"labels_max {max(label_counts, default=0)}")
    print(f"labels_total {sum(label_counts)}")
    print(f"density {format_cost(graph_density(model))}")
    return 0


def _cmd_validate(ns) -> int:
    _load_model(ns)  # parsers reject invalid models
    print("valid")
    return 0


COMMANDS = {
    "solve": _cmd_solve,
    "bound": _cmd_bound,
    "stats": _cmd_stats,
    "validate": _cmd_validate,
}


def cli_main(args) -> int:
    """Run the CLI on an argument list; returns the process exit code.

    0 on success, 1 when the model is infeasible, 2 on any input problem
    (unknown flags, unreadable files, malformed documents).
    """
    parser = build_parser()
    try:
        ns = parser.parse_args(list(args))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[ns.command](ns)
    except (ModelFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    console_main()
