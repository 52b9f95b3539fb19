import io
import json
import sys

import pytest

from gridlab.cli import main


def run_cli(argv):
    out = io.StringIO()
    old = sys.stdout
    sys.stdout = out
    try:
        code = main(argv)
    finally:
        sys.stdout = old
    return code, out.getvalue()


def test_solve_example():
    code, out = run_cli(["solve", "--problem", "2dom", "-n", "3", "-m", "3"])
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "ok" and doc["value"] == 4


def test_solve_infeasible():
    code, out = run_cli(["solve", "--problem", "ab:1,1", "-n", "1", "-m", "1"])
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "infeasible"


def test_count_decimal_string():
    _, out = run_cli(["count", "--problem", "dom", "-n", "3", "-m", "6"])
    doc = json.loads(out)
    assert isinstance(doc["count"], str)
    assert int(doc["count"]) > 0


def test_oracle_subcommand():
    _, out = run_cli(["oracle", "--problem", "2dom", "-n", "2", "-m", "2"])
    assert json.loads(out)["value"] == 2
    _, out = run_cli(["oracle", "--problem", "dom", "-n", "2", "-m", "2", "--count"])
    assert json.loads(out)["count"] == "11"


def test_verify_small():
    _, out = run_cli(["verify", "--problem", "2dom", "--max-n", "4", "--max-m", "12"])
    doc = json.loads(out)
    assert doc["mismatches"] == 0 and doc["checked"] > 20


def test_recurrence_and_formula():
    _, out = run_cli(["recurrence", "--problem", "2dom", "-n", "3"])
    doc = json.loads(out)
    assert (doc["period"], doc["increment"]) == (3, 4)
    _, out = run_cli(["formula", "--problem", "2dom", "-n", "3"])
    doc = json.loads(out)
    assert doc["formula"]["period"] == 3


def test_loss_bound_subcommand():
    _, out = run_cli(["loss-bound", "--problem", "2dom", "-n", "13", "-m", "13",
                      "--height", "6"])
    assert json.loads(out)["value"] == 69


def test_usage_error_exit_2():
    code, _ = run_cli(["solve", "--problem", "2dom", "-n", "3"])
    assert code == 2


def test_capacity_reported_in_payload():
    code, out = run_cli(["oracle", "--problem", "2dom", "-n", "40", "-m", "40"])
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "error" and doc["error"] == "TooLarge"


def test_unknown_problem():
    code, out = run_cli(["solve", "--problem", "frobnicate", "-n", "2", "-m", "2"])
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "error" and doc["error"] == "UnknownProblem"


def test_state_cache_identical(tmp_path):
    _, plain = run_cli(["solve", "--problem", "2dom", "-n", "4", "-m", "7"])
    _, cached1 = run_cli(["solve", "--problem", "2dom", "-n", "4", "-m", "7",
                          "--state-cache", str(tmp_path)])
    _, cached2 = run_cli(["solve", "--problem", "2dom", "-n", "4", "-m", "7",
                          "--state-cache", str(tmp_path)])
    assert plain == cached1 == cached2
