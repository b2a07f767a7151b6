import csv
import json
from pathlib import Path

import pytest

from nlvc import cli

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def test_check_passes(capsys):
    assert cli.main(["check"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 7 and "FAIL" not in out


def test_missing_config(capsys):
    assert cli.main(["solve", "--config", "missing.file"]) == 2
    assert "missing.file" in capsys.readouterr().err


def test_schema_violation(tmp_path, capsys):
    path = tmp_path / "c.yaml"
    path.write_text("kernel: {epsilon: 0.25, extra: 1}\ngrid: {mode: linear}\nproblem: {source: [0], g_l: 0, v_n: [0]}\n")
    assert cli.main(["solve", "--config", str(path)]) == 2
    assert "schema" in capsys.readouterr().err


def test_misaligned_horizon_reported(tmp_path, capsys):
    path = tmp_path / "c.yaml"
    path.write_text("kernel: {epsilon: 0.25}\ngrid: {mode: fixed_h, h: 0.3}\nproblem: {source: [0], g_l: 0, v_n: [0]}\n")
    assert cli.main(["solve", "--config", str(path)]) == 2
    assert "epsilon/h" in capsys.readouterr().err


def test_solve_sample_config(tmp_path, capsys):
    assert cli.main(["solve", "--config", str(CONFIGS / "benchmark_quadratic.yaml"), "--out", str(tmp_path)]) == 0
    rows = list(csv.DictReader((tmp_path / "custom.csv").open()))
    assert len(rows) == 8
    assert float(rows[3]["eE"]) == pytest.approx(1.34e-3, rel=0.05)
    assert json.loads((tmp_path / "custom.json").read_text())["metadata"]["local_solver"] == "analytic"


def test_solve_numeric_local(capsys):
    assert cli.main(["solve", "--config", str(CONFIGS / "cubic_numeric_local.yaml")]) == 0
    assert "neumann" in capsys.readouterr().out


def test_compare_writes_curves(tmp_path, capsys):
    assert cli.main(["compare", "--case", "A", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "comparison-A.json").read_text())
    assert set(doc["curves"]) == {"x", "u_neumann", "u_dirichlet", "u_local"}


def test_consistency_exit_code(capsys):
    assert cli.main(["consistency"]) == 0
    assert "strategy_nodal_gap" in capsys.readouterr().out


def test_convergence_output_is_stable(tmp_path, capsys):
    outs = []
    for run in ("a", "b"):
        assert cli.main(["convergence", "--mode", "linear", "--strategy", "neumann", "--out", str(tmp_path / run)]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    assert (tmp_path / "a" / "convergence-linear.csv").read_bytes() == (tmp_path / "b" / "convergence-linear.csv").read_bytes()
    assert (tmp_path / "a" / "convergence-linear.json").read_bytes() == (tmp_path / "b" / "convergence-linear.json").read_bytes()


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("NLVC_THREADS", "3")
    assert cli._threads(None) == 3
    assert cli._threads(2) == 2
    monkeypatch.setenv("NLVC_THREADS", "many")
    with pytest.raises(Exception):
        cli._threads(None)


def test_bad_thread_env_exit_code(monkeypatch, capsys):
    monkeypatch.setenv("NLVC_THREADS", "many")
    assert cli.main(["consistency"]) == 2


def test_bad_quad_points(capsys):
    assert cli.main(["compare", "--case", "A", "--quad-points", "40"]) == 2


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_fixed_h_first_row(tmp_path, capsys, monkeypatch, fixed_h_tables):
    # reuse the shared fine-grid run; the CLI only formats and writes it
    from nlvc import harness
    neumann = [r for r in fixed_h_tables.rows if r.strategy == "neumann"]
    canned = harness.ResultSet(fixed_h_tables.name, neumann, fixed_h_tables.metadata)
    calls = []
    monkeypatch.setattr(harness, "run_convergence", lambda *a, **k: calls.append(a) or canned)
    assert cli.main(["convergence", "--mode", "fixed-h", "--strategy", "neumann", "--out", str(tmp_path)]) == 0
    assert calls[0][:2] == ("fixed_h", "neumann")
    row = list(csv.reader((tmp_path / "convergence-fixed_h.csv").open()))[1]
    assert row[0:4] == ["benchmark", "neumann", repr(2.0**-12), "0.25"]
    assert float(row[4]) == pytest.approx(9.99e-2, rel=0.05) and row[5] == "-"
    assert float(row[6]) == pytest.approx(7.50e-2, rel=0.05) and row[7] == "-"
