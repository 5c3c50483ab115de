"""Render figures from solver stats documents.

Kept separate from the solver CLI on purpose: the stats document is the
interface, and this script is one consumer of it. Reads one or more JSON
stats files and writes a bound-trace figure and a per-iteration
subproblem-size figure next to each (or into --out-dir).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_bound_trace(stats: dict, path: Path) -> bool:
    trace = stats.get("bound_trace")
    if not trace:
        return False
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(range(len(trace)), trace, lw=1.2)
    ax.set_xlabel("sweep")
    ax.set_ylabel("dual lower bound")
    ax.set_title(f"{stats.get('method', '?')}: dual bound progress")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return True


def render_iterations(stats: dict, path: Path) -> bool:
    iterations = stats.get("iterations")
    if not iterations:
        return False
    ks = [it["k"] for it in iterations]
    fractions = [it["ilp_fraction"] for it in iterations]
    sizes = [it["vb_size"] for it in iterations]
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6, 5), sharex=True)
    top.plot(ks, fractions, "o-")
    top.set_ylabel("labelwise ILP fraction")
    top.set_ylim(-0.05, 1.05)
    bottom.bar(ks, sizes, width=0.6)
    bottom.set_ylabel("|V_B|")
    bottom.set_xlabel("iteration")
    bottom.set_xticks(ks)
    top.set_title(f"{stats.get('method', '?')}: hard subproblem growth")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return True


def render_stats_figures(stats_path: Path, out_dir: Path | None = None,
                         fmt: str = "png") -> list:
    """Render all applicable figures for one stats document."""
    stats = json.loads(stats_path.read_text())
    out_dir = out_dir or stats_path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = stats_path.stem
    written = []
    target = out_dir / f"{stem}_bound_trace.{fmt}"
    if render_bound_trace(stats, target):
        written.append(target)
    target = out_dir / f"{stem}_iterations.{fmt}"
    if render_iterations(stats, target):
        written.append(target)
    return written


def main(args) -> int:
    parser = argparse.ArgumentParser(
        prog="combimap-report",
        description="Render figures from combimap stats documents.")
    parser.add_argument("stats", nargs="+", help="stats JSON files")
    parser.add_argument("--out-dir", default=None,
                        help="target directory (default: beside each input)")
    parser.add_argument("--fmt", choices=["png", "pdf", "svg"], default="png")
    try:
        ns = parser.parse_args(list(args))
    except SystemExit as exc:
        return int(exc.code or 0)
    out_dir = Path(ns.out_dir) if ns.out_dir else None
    for item in ns.stats:
        path = Path(item)
        try:
            written = render_stats_figures(path, out_dir, ns.fmt)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        if written:
            for target in written:
                print(target)
        else:
            print(f"{path}: nothing to plot")
    return 0


def console_main() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    console_main()
