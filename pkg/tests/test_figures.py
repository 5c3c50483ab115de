import json

from combimap import write_native
from combimap.cli import cli_main
from combimap.figures import main as report_main


def test_report_renders_figures(tmp_path, m2):
    model_path = tmp_path / "m2.model"
    model_path.write_text(write_native(m2))
    stats_path = tmp_path / "m2.json"
    assert cli_main(["solve", "--input", str(model_path),
                     "--stats", str(stats_path)]) == 0

    # augment with a bound trace the way the `bound` subcommand would
    bound_path = tmp_path / "m2_bound.json"
    assert cli_main(["bound", "--input", str(model_path),
                     "--stats", str(bound_path)]) == 0

    assert report_main([str(stats_path), str(bound_path)]) == 0
    iterations_fig = tmp_path / "m2_iterations.png"
    trace_fig = tmp_path / "m2_bound_bound_trace.png"
    assert iterations_fig.exists() and iterations_fig.stat().st_size > 0
    assert trace_fig.exists() and trace_fig.stat().st_size > 0


def test_report_out_dir_and_nothing_to_plot(tmp_path, capsys):
    stats = tmp_path / "empty.json"
    stats.write_text(json.dumps({"method": "brute", "iterations": []}) + "\n")
    out = tmp_path / "figs"
    assert report_main([str(stats), "--out-dir", str(out)]) == 0
    assert "nothing to plot" in capsys.readouterr().out

    assert report_main([str(tmp_path / "missing.json")]) == 2
