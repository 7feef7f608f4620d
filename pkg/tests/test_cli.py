import json

from swaf.bench import parse_report_csv
from swaf.cli import main


def run_cli(*args):
    return main(list(args))


def test_run_writes_results_csv(tmp_path, capsys):
    out = tmp_path / "results.csv"
    code = run_cli(
        "run", "--problem", "GP", "--rule", "deps:CR=0.1", "--agents", "10",
        "--cycles", "40", "--runs", "2", "--seed", "3", "--out", str(out),
    )
    assert code == 0
    rows = parse_report_csv(out.read_text())
    assert rows[0]["problem"] == "GP"
    assert rows[0]["runs"] == 2
    assert "GP" in capsys.readouterr().out  # summary table printed


def test_quiet_suppresses_table(tmp_path, capsys):
    code = run_cli(
        "run", "--problem", "GP", "--agents", "10", "--cycles", "10",
        "--runs", "1", "--quiet",
    )
    assert code == 0
    assert capsys.readouterr().out == ""


def test_trace_file_written(tmp_path):
    trace = tmp_path / "trace.csv"
    code = run_cli(
        "run", "--problem", "GP", "--rule", "ps", "--agents", "10",
        "--cycles", "20", "--runs", "2", "--trace", str(trace), "--quiet",
    )
    assert code == 0
    lines = trace.read_text().strip().splitlines()
    assert lines[0].startswith("cycle")
    assert len(lines) == 22


def test_config_file_supplies_defaults(tmp_path):
    out = tmp_path / "from_config.csv"
    config = {
        "problem": "GP", "rule": "ps", "agents": 10, "cycles": 15,
        "runs": 2, "seed": 9, "out": str(out),
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(config))
    assert run_cli("run", "--config", str(path), "--quiet") == 0
    assert parse_report_csv(out.read_text())[0]["cycles"] == 15


def test_cli_flags_override_config_file(tmp_path):
    out = tmp_path / "override.csv"
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"problem": "GP", "agents": 10, "cycles": 15, "runs": 3}))
    code = run_cli(
        "run", "--config", str(path), "--runs", "1", "--out", str(out), "--quiet"
    )
    assert code == 0
    assert parse_report_csv(out.read_text())[0]["runs"] == 1


def test_unknown_config_key_rejected(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"problem": "GP", "wibble": 1}))
    assert run_cli("run", "--config", str(path)) == 2
    assert "configuration error" in capsys.readouterr().err


def test_unknown_problem_exits_nonzero(capsys):
    code = run_cli("run", "--problem", "G99", "--runs", "1", "--cycles", "5")
    assert code == 2
    assert "configuration error" in capsys.readouterr().err


def test_missing_problem_exits_nonzero(capsys):
    assert run_cli("run", "--runs", "1") == 2


def test_out_dir_environment_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("SWAF_OUT_DIR", str(tmp_path))
    code = run_cli(
        "run", "--problem", "GP", "--agents", "10", "--cycles", "10",
        "--runs", "1", "--out", "rel.csv", "--quiet",
    )
    assert code == 0
    assert (tmp_path / "rel.csv").exists()


def test_absolute_path_ignores_out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("SWAF_OUT_DIR", str(tmp_path / "elsewhere"))
    out = tmp_path / "abs.csv"
    code = run_cli(
        "run", "--problem", "GP", "--agents", "10", "--cycles", "10",
        "--runs", "1", "--out", str(out), "--quiet",
    )
    assert code == 0
    assert out.exists()


def test_problem_file_via_cli(tmp_path):
    spec = {
        "name": "slope", "dimension": 1, "bounds": [[0, 1]],
        "objective": "x[0]", "known_best": 0.0,
    }
    problem_path = tmp_path / "slope.json"
    problem_path.write_text(json.dumps(spec))
    out = tmp_path / "slope_results.csv"
    code = run_cli(
        "run", "--problem", str(problem_path), "--rule", "ps", "--agents", "5",
        "--cycles", "20", "--runs", "1", "--out", str(out), "--quiet",
    )
    assert code == 0
    assert parse_report_csv(out.read_text())[0]["problem"] == "slope"
