import io
import json
from pathlib import Path

import pytest

from hyperfun.cli import (ConfigError, format_csv, format_json, main, parse_job, run_job,
                          worker_count)

CONFIGS = sorted((Path(__file__).resolve().parents[1] / "configs").glob("*.json"))

FA_JOB = {"command": "eval-fa",
          "config": {"a": 0.7, "b": [0.4, 1.1], "c": [1.3, 0.9]},
          "grid": {"points": [[0.1, -0.15], [0.05, 0.1]]}}


def run(capsys, monkeypatch, doc, *args, text=None):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(doc) if text is None else text))
    code = main([doc.get("command", "eval-fa") if isinstance(doc, dict) else "eval-fa", "-", *args])
    out, err = capsys.readouterr()
    return code, out, err


def error_record(err):
    rec = json.loads(err.strip().splitlines()[-1])
    assert set(rec) == {"error", "message", "exit_code"}
    return rec


@pytest.mark.parametrize("path", CONFIGS, ids=[p.stem for p in CONFIGS])
def test_sample_configs_parse(path):
    job = parse_job(json.loads(path.read_text()))
    assert job.grid and job.output_format in ("csv", "json")


def test_eval_q_row_count_contract(capsys, monkeypatch):
    doc = json.loads(next(p for p in CONFIGS if p.stem == "eval_q").read_text())
    code, out, _ = run(capsys, monkeypatch, doc)
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "x1,x2,x3,k,value"
    assert lines[-1] == ""  # LF-terminated
    assert len(lines) - 2 == 10 * 10 * 2


def test_csv_floats_roundtrip(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, FA_JOB)
    assert code == 0
    job = parse_job(FA_JOB)
    table = run_job(job, 1)
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert [float(r[-1]) for r in rows] == [r[-1] for r in table.rows]
    assert "\r" not in out


def test_json_format(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, FA_JOB, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "eval-fa"
    assert doc["columns"] == ["x1", "x2", "value"]
    assert len(doc["rows"]) == 2


def test_output_file(tmp_path, capsys, monkeypatch):
    target = tmp_path / "out.csv"
    code, out, _ = run(capsys, monkeypatch, FA_JOB, "-o", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("x1,x2,value\n")


def test_certification_report(capsys, monkeypatch):
    doc = json.loads(next(p for p in CONFIGS if p.stem == "verify_pde").read_text())
    code, out, _ = run(capsys, monkeypatch, doc)
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] is True
    assert all(row[-1] is True for row in rep["rows"])


@pytest.mark.parametrize("text", ["{not json", "[1, 2]"])
def test_malformed_document_exits_2(text, capsys, monkeypatch):
    code, _, err = run(capsys, monkeypatch, FA_JOB, text=text)
    assert code == 2
    assert error_record(err)["exit_code"] == 2


@pytest.mark.parametrize("change", [
    {"config": {"a": 0.7, "b": [0.4]}},
    {"grid": {"points": []}},
    {"grid": {"points": [[0.1, 0.2, 0.3]]}},
    {"grid": {"axes": [{"start": 0, "stop": 1}]}},
    {"output": {"format": "xml"}},
    {"truncation": {"max_order": 10, "speed": 3}},
    {"grid": {"points": [[0.7, 0.6]]}},  # outside the series domain
    {"method": "magic"},
])
def test_invalid_jobs_exit_2(change, capsys, monkeypatch):
    code, _, err = run(capsys, monkeypatch, {**FA_JOB, **change})
    assert code == 2
    assert error_record(err)["error"] == "config"


def test_command_mismatch_exits_2(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(FA_JOB)))
    assert main(["eval-ha", "-"]) == 2
    assert error_record(capsys.readouterr().err)["exit_code"] == 2


def test_missing_file_exits_2(tmp_path, capsys):
    assert main(["eval-fa", str(tmp_path / "absent.json")]) == 2
    assert error_record(capsys.readouterr().err)["error"] == "io"


def test_non_convergence_exits_3(capsys, monkeypatch):
    doc = {**FA_JOB, "grid": {"points": [[0.45, 0.45]]}, "truncation": {"max_order": 8}}
    code, _, err = run(capsys, monkeypatch, doc)
    assert code == 3
    assert error_record(err)["error"] == "ConvergenceError"


def test_failed_certification_exits_3(capsys, monkeypatch):
    doc = json.loads(next(p for p in CONFIGS if p.stem == "verify_system").read_text())
    doc["threshold"] = 1e-30
    code, out, err = run(capsys, monkeypatch, doc)
    assert code == 3
    assert "relative_residual" in out  # the report is still written
    assert error_record(err)["error"] == "certification-failed"


@pytest.mark.parametrize("value,expected", [("", None), ("1", 1), ("6", 6)])
def test_worker_count(value, expected, monkeypatch):
    monkeypatch.setenv("HYPERFUN_THREADS", value)
    n = worker_count()
    assert n >= 1 if expected is None else n == expected


@pytest.mark.parametrize("value", ["0", "-2", "many"])
def test_bad_thread_count_exits_2(value, capsys, monkeypatch):
    monkeypatch.setenv("HYPERFUN_THREADS", value)
    with pytest.raises(ConfigError):
        worker_count()
    code, _, err = run(capsys, monkeypatch, FA_JOB)
    assert code == 2
    assert "HYPERFUN_THREADS" in error_record(err)["message"]


def test_thread_count_does_not_change_output():
    doc = json.loads(next(p for p in CONFIGS if p.stem == "eval_q").read_text())
    job = parse_job(doc)
    one, many = run_job(job, 1), run_job(job, 4)
    assert format_csv(one) == format_csv(many)
    assert format_json(one, job.command) == format_json(many, job.command)
