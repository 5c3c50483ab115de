import json

import pytest

from combimap import write_native
from combimap.cli import cli_main


@pytest.fixture
def m1_file(tmp_path, m1):
    path = tmp_path / "m1.model"
    path.write_text(write_native(m1))
    return path


@pytest.fixture
def m2_file(tmp_path, m2):
    path = tmp_path / "m2.model"
    path.write_text(write_native(m2))
    return path


def test_solve_dclp_prints_energy(m1_file, capsys):
    code = cli_main(["solve", "--input", str(m1_file), "--method", "dclp"])
    out = capsys.readouterr().out
    assert code == 0
    assert "energy 0" in out
    assert "optimal true" in out


def test_solve_brute_on_m2(m2_file, capsys):
    code = cli_main(["solve", "--input", str(m2_file), "--method", "brute"])
    assert code == 0
    assert "energy 1" in capsys.readouterr().out


def test_solve_writes_stats_and_solution(tmp_path, m2_file):
    stats = tmp_path / "run.json"
    solution = tmp_path / "run.sol"
    code = cli_main(["solve", "--input", str(m2_file), "--stats", str(stats),
                     "--solution", str(solution)])
    assert code == 0
    doc = json.loads(stats.read_text())
    assert doc["method"] == "dclp" and doc["energy"] == 1
    labels = [int(tok) for tok in solution.read_text().split()]
    assert len(labels) == 3


def test_solve_deterministic_stats(tmp_path, m2_file):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli_main(["solve", "--input", str(m2_file), "--stats", str(a)])
    cli_main(["solve", "--input", str(m2_file), "--stats", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_solve_infeasible_exit_code(tmp_path, capsys):
    doc = "MAPMODEL 1\n2 1\n2 2\n0 1\n0 1\n0 1\ninf inf\ninf inf\n"
    path = tmp_path / "bad.model"
    path.write_text(doc)
    code = cli_main(["solve", "--input", str(path)])
    assert code == 1
    assert "infeasible true" in capsys.readouterr().out


def test_unknown_method_and_format_exit_2(m1_file, capsys):
    assert cli_main(["solve", "--input", str(m1_file), "--method", "ilp"]) == 2
    assert cli_main(["solve", "--input", str(m1_file), "--format", "hdf5"]) == 2
    capsys.readouterr()


def test_missing_file_exit_2(tmp_path, capsys):
    assert cli_main(["solve", "--input", str(tmp_path / "nope.model")]) == 2
    assert "error" in capsys.readouterr().err


def test_validate(m1_file, tmp_path, capsys):
    assert cli_main(["validate", "--input", str(m1_file)]) == 0
    assert "valid" in capsys.readouterr().out
    bad = tmp_path / "loop.model"
    bad.write_text("MAPMODEL 1\n1 1\n2\n0 0\n0 0\n0 1\n1 0\n")
    assert cli_main(["validate", "--input", str(bad)]) == 2
    assert "self-loop" in capsys.readouterr().err


def test_bound_prints_trace(m2_file, tmp_path, capsys):
    stats = tmp_path / "bound.json"
    code = cli_main(["bound", "--input", str(m2_file), "--stats", str(stats)])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0] == "0"
    doc = json.loads(stats.read_text())
    assert doc["method"] == "bound"
    assert doc["bound_trace"][0] == 0
    assert doc["energy"] is None


def test_stats_subcommand(m2_file, capsys):
    assert cli_main(["stats", "--input", str(m2_file)]) == 0
    out = capsys.readouterr().out
    assert "nodes 3" in out and "edges 3" in out and "density 1" in out


def test_solve_accepts_seed_and_tuning_flags(m2_file, capsys):
    code = cli_main(["solve", "--input", str(m2_file), "--method", "clp",
                     "--max-iters", "50", "--lambda", "0.2", "--tol", "1e-7",
                     "--post-sweeps", "4", "--seed", "13"])
    assert code == 0
    assert "energy 1" in capsys.readouterr().out


def test_uai_input(tmp_path, capsys):
    text = "MARKOV\n2\n2 2\n1\n2 0 1\n4\n0 -1 -1 0\n"
    path = tmp_path / "pair.uai"
    path.write_text(text)
    code = cli_main(["solve", "--input", str(path), "--format", "uai-lg",
                     "--method", "brute"])
    assert code == 0
    assert "energy 0" in capsys.readouterr().out
