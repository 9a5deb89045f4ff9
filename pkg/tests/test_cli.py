import json
import subprocess
import sys
from argparse import Namespace
from pathlib import Path

import pytest

from octagrid.cli import BUDGET_ENV, EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, UsageError, main, time_budget
from octagrid.solver import DEFAULT_TIME_BUDGET

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_verify_fixtures(capsys):
    assert run(capsys, "verify", FIXTURES / "gs_span25.json")[0] == EXIT_OK
    code, doc = run_json(capsys, "verify", FIXTURES / "periodic_span33.json")
    assert code == EXIT_OK and doc["violations"] == []


def test_verify_reports_violation(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"h": 1, "k": 2, "edges": [
        {"a": [0, 0], "b": [1, 0], "color": 3}, {"a": [1, 0], "b": [2, 0], "color": 3}]}))
    code, doc = run_json(capsys, "verify", path)
    assert code == EXIT_FAIL and len(doc["violations"]) == 1


def test_verify_truncated_file(tmp_path, capsys):
    path = tmp_path / "cut.json"
    path.write_text((FIXTURES / "gs_span25.json").read_text()[:90])
    code, out = run(capsys, "verify", path)
    assert code == EXIT_USAGE and "line" in out and "column" in out


def test_verify_missing_file(tmp_path, capsys):
    assert run(capsys, "verify", tmp_path / "nope.json")[0] == EXIT_USAGE


def test_verify_region_needs_every_edge(capsys):
    assert run(capsys, "verify", FIXTURES / "gs_span25.json", "--region", "gs")[0] == EXIT_OK
    assert run(capsys, "verify", FIXTURES / "gs_span25.json", "--region", "g")[0] == EXIT_USAGE


def test_lemmas_obs1(capsys):
    code, out = run(capsys, "lemmas", "--claim", "obs1")
    assert code == EXIT_OK and "obs1.k3_count" in out and "found 12" in out
    assert "LB chain: 26 -> 27 -> 28" in out


def test_lemmas_pigeonhole_json(capsys):
    code, doc = run_json(capsys, "lemmas", "--claim", "pigeonhole")
    assert code == EXIT_OK and doc["pass"]
    (report,) = doc["reports"]
    assert set(report["facts"]["two_unused"]["demands_by_x"].values()) == {50}
    assert [s["lower_bound"] for s in doc["chain"]] == [26, 27, 28]


def test_lemmas_packing(capsys):
    code, doc = run_json(capsys, "lemmas", "--claim", "packing")
    assert code == EXIT_OK and doc["reports"][0]["facts"]["lower_bound"] == 31


def test_lemmas_all(capsys):
    code, doc = run_json(capsys, "lemmas")
    assert code == EXIT_OK
    names = [r["name"] for r in doc["reports"]]
    assert names == ["structure", "lemma1", "triples", "obs1", "pigeonhole", "packing"]
    for r in doc["reports"]:
        for c in r["claims"]:
            assert set(c) >= {"claim_id", "scenario_count", "min_excluded_found", "paper_min", "pass"}


def test_solve_gs_24_unsat(capsys):
    code, doc = run_json(capsys, "solve", "--gs", "--n", 24)
    assert code == EXIT_FAIL and doc["verdict"] == "UNSAT"


def test_solve_single_k4(capsys):
    code, out = run(capsys, "solve", "--patch", "2x2")
    assert code == EXIT_OK and "minimum span 5" in out


def test_solve_roundtrip(tmp_path, capsys):
    out = tmp_path / "w.json"
    code, doc = run_json(capsys, "solve", "--gs", "--out", out)
    assert code == EXIT_OK and doc["n"] == 25
    assert run(capsys, "verify", out)[0] == EXIT_OK


def test_solve_budget_exhausted(capsys):
    code, doc = run_json(capsys, "solve", "--patch", "5x5", "--n", 40, "--nodes", 5)
    assert code == EXIT_BUDGET and doc["verdict"] == "UNKNOWN"


def test_solve_render(capsys):
    code, out = run(capsys, "solve", "--patch", "2x2", "--render")
    assert code == EXIT_OK and "o--" in out and "/" in out and "\\" in out


@pytest.mark.parametrize("argv", [
    ["solve", "--patch", "axb"],
    ["solve", "--gs", "--n", "-1"],
    ["solve", "--gs", "--budget", "soon"],
    ["solve", "--gs", "--threads", "0"],
    ["periodic", "--period", "4x4"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--patch"])
    assert exc.value.code == EXIT_USAGE


def test_periodic_6x6_n10_unsat(capsys):
    code, out = run(capsys, "periodic", "--period", "6x6", "--n", 10)
    assert code == EXIT_FAIL and "UNSAT" in out


def test_periodic_linear_roundtrip(tmp_path, capsys):
    out = tmp_path / "p.json"
    code, text = run(capsys, "periodic", "--linear", "--n", 33, "--out", out)
    assert code == EXIT_OK and "certified upper bound 33" in text
    assert run(capsys, "verify", out)[0] == EXIT_OK
    code, text = run(capsys, "periodic", "--linear", "--n", 28)
    assert code == EXIT_FAIL and "area bound 31" in text


def test_periodic_budget_exhausted(capsys):
    code, doc = run_json(capsys, "periodic", "--period", "6x6", "--n", 28, "--budget", "0.5")
    assert code == EXIT_BUDGET and doc["verdict"] == "UNKNOWN"


def test_budget_precedence(monkeypatch):
    monkeypatch.delenv(BUDGET_ENV, raising=False)
    assert time_budget(Namespace(budget=None)) == DEFAULT_TIME_BUDGET
    monkeypatch.setenv(BUDGET_ENV, "7")
    assert time_budget(Namespace(budget=None)) == 7.0
    assert time_budget(Namespace(budget="3")) == 3.0
    monkeypatch.setenv(BUDGET_ENV, "-1")
    with pytest.raises(UsageError):
        time_budget(Namespace(budget=None))


def test_env_budget_reaches_search(monkeypatch, capsys):
    monkeypatch.setenv(BUDGET_ENV, "0.5")
    code, doc = run_json(capsys, "periodic", "--period", "6x6", "--n", 28)
    assert code == EXIT_BUDGET and doc["elapsed_ms"] < 5000


def test_json_output_is_stable(capsys):
    first = run_json(capsys, "lemmas", "--claim", "structure")[1]
    again = run_json(capsys, "lemmas", "--claim", "structure")[1]
    assert json.dumps(first) == json.dumps(again)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "octagrid", "lemmas", "--claim", "obs1", "--format", "json"],
                         capture_output=True, text=True, timeout=60)
    assert res.returncode == EXIT_OK and json.loads(res.stdout)["pass"]
