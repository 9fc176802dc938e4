"""Command line surface: output shapes, exit codes, environment hooks."""
import json
import subprocess
import sys

import pytest

from jss import example_pair, save_instance
from jss.cli import main
from jss.verify import VerificationReport


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.json"
    save_instance(example_pair("1/2"), path)
    return str(path)


def test_threshold_prints_exact_boundary(pair_file, capsys):
    assert main(["threshold", "-i", pair_file]) == 0
    out = capsys.readouterr().out
    assert "threshold: 17/29" in out
    assert "optimal above" in out


def test_threshold_needs_two_journals(tmp_path, capsys):
    from jss import Belief, Instance, Journal

    path = tmp_path / "three.json"
    save_instance(
        Instance(
            tuple(Journal(f"J{i}", 3 - i, "1/2", 0) for i in range(3)),
            Belief("1/2"),
        ),
        path,
    )
    assert main(["threshold", "-i", str(path)]) == 2
    assert "exactly 2 journals" in capsys.readouterr().err


def test_solve_text_and_json(pair_file, capsys):
    assert main(["solve", "-i", pair_file, "--prior", "0.7"]) == 0
    out = capsys.readouterr().out
    assert "best order: J1 > J2" in out
    assert "443/500" in out

    assert main(["solve", "-i", pair_file, "--prior", "0.7", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["best_order"] == ["J1", "J2"]
    assert doc["best_value"] == "443/500"
    assert doc["best_value_float"] == pytest.approx(0.886)
    assert doc["method"] == "brute_force"


def test_solve_algorithms(pair_file, capsys):
    assert main(["solve", "-i", pair_file, "--algorithm", "local"]) == 0
    assert "local_search" in capsys.readouterr().out
    # the showcase pair updates do not commute, so the DP must refuse
    assert main(["solve", "-i", pair_file, "--algorithm", "dp"]) == 2
    assert "order-independent" in capsys.readouterr().err
    assert main(["solve", "-i", pair_file, "--algorithm", "index"]) == 2
    assert "requires q = 0" in capsys.readouterr().err


def test_jss_threads_env(pair_file, capsys, monkeypatch):
    monkeypatch.setenv("JSS_THREADS", "2")
    assert main(["solve", "-i", pair_file, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["details"]["threads"] == 2

    monkeypatch.setenv("JSS_THREADS", "many")
    assert main(["solve", "-i", pair_file]) == 1
    assert "JSS_THREADS" in capsys.readouterr().err


def test_check_summaries(pair_file, capsys):
    assert main(["check", "-i", pair_file, "--prior", "9/10"]) == 0
    out = capsys.readouterr().out
    assert "regularity: fails" in out
    assert "order_independence: fails" in out
    assert "globally_bounded_weak_feedback: holds" in out

    assert main(["check", "-i", pair_file, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [c["condition"] for c in doc["checks"]] == [
        "regularity",
        "order_independence",
        "globally_bounded_weak_feedback",
    ]


def test_sweep_csv(pair_file, capsys, tmp_path):
    assert main(["sweep", "-i", pair_file, "--grid", "0.5:0.7:5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "mu,value_J1>J2,value_J2>J1,best_order"
    assert len(lines) == 6
    assert lines[1].startswith("1/2,13/20,7/10,")

    out = tmp_path / "sweep.csv"
    assert main(["sweep", "-i", pair_file, "--grid", "0:1:3", "--out", str(out)]) == 0
    assert out.read_text().startswith("mu,")

    assert main(["sweep", "-i", pair_file, "--grid", "nonsense"]) == 1


def test_simulate_output(pair_file, capsys):
    assert main(["simulate", "-i", pair_file, "--episodes", "2000", "--seed", "4"]) == 0
    out = capsys.readouterr().out
    assert "exact value: 13/20" in out
    assert "period 1: 1.000000" in out

    assert main(["simulate", "-i", pair_file, "--order", "J2,J1", "--json",
                 "--episodes", "500"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["order"] == ["J2", "J1"]
    assert doc["exact_value"] == "7/10"

    assert main(["simulate", "-i", pair_file, "--order", "J9,J1"]) == 1
    assert main(["simulate", "-i", pair_file, "--episodes", "0"]) == 1


def test_verify_subcommand(capsys):
    assert main(["verify", "--suite", "two_box_base_case", "--trials", "8"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("[two_box_base_case] VERIFIED")

    assert main(["verify", "--suite", "nope"]) == 1


def test_verify_json_and_failure_exit(capsys, monkeypatch):
    import jss.verify as verify_mod

    def rigged(trials=1, seed=0):
        rep = VerificationReport(claim="rigged", trials=trials)
        rep.failures.append({"trial": 0, "seed": seed, "message": "boom"})
        return rep

    monkeypatch.setitem(verify_mod.SUITES, "two_box_base_case", rigged)
    assert main(["verify", "--suite", "two_box_base_case", "--json"]) == 3
    doc = json.loads(capsys.readouterr().out)
    assert doc["two_box_base_case"]["status"] == "falsified"


def test_missing_instance_file(capsys):
    assert main(["solve", "-i", "/no/such/file.json"]) == 2
    assert "error" in capsys.readouterr().err


def test_malformed_instance(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"journals": [{"u": 1, "a": "3/2"}], "prior_h": "1/2"}')
    assert main(["solve", "-i", str(bad)]) == 2
    assert "acceptance rate" in capsys.readouterr().err


def test_usage_error_on_unknown_command():
    assert main(["optimize"]) == 1


def test_console_script_entry_point(pair_file):
    proc = subprocess.run(
        [sys.executable, "-m", "jss.cli", "threshold", "-i", pair_file],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "threshold: 17/29" in proc.stdout
