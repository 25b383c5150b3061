import json
import os
import subprocess
import sys

import pytest

from bethelab import cli


def run_cli(tmp_path, task, cfg, *extra):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / "report.json"
    code = cli.main([task, "--config", str(path), "--out", str(out), *extra])
    return code, json.loads(out.read_text())


def test_check_rtt_small(tmp_path):
    code, rep = run_cli(tmp_path, "check-rtt", {"N": 3, "L": 2, "points": 1})
    assert code == 0 and rep["passed"]
    assert all(c["residual"]["value"] == "0" for c in rep["checks"])
    assert all(c["residual"]["backend"] == "exact" for c in rep["checks"])


def test_compare_bv(tmp_path):
    code, rep = run_cli(tmp_path, "compare-bv", {"N": 3, "L": 3, "n": [2, 1]})
    names = {c["name"] for c in rep["checks"]}
    assert code == 0
    assert {"BV1: B|0> = Bhat|0>", "oracle B", "oracle Bhat", "gl3 right-1"} <= names


def test_onshell_closed_form(tmp_path):
    code, rep = run_cli(tmp_path, "onshell", {"N": 2, "L": 1, "q": 2, "xi": [1], "n": [1],
                                              "guesses": [[[0.3]]]}, "--backend", "float")
    assert code == 0
    (root,) = rep["inputs"]["params"][0]
    assert abs(complex(*root) + 0.5) < 1e-12


def test_onshell_exact_params(tmp_path):
    code, rep = run_cli(tmp_path, "onshell", {"N": 2, "L": 1, "q": "2", "xi": ["1"], "n": [1],
                                              "params": [["-1/2"]]})
    assert code == 0
    assert all(c["residual"]["value"] == "0" for c in rep["checks"])


def test_failing_check_sets_exit_code(tmp_path):
    # random parameters are off-shell, so eigenvector checks must fail
    code, rep = run_cli(tmp_path, "onshell", {"N": 2, "L": 2, "n": [1], "params": [["5/7"]]})
    assert code == 1 and not rep["passed"]


def test_reports_are_deterministic(tmp_path):
    _, a = run_cli(tmp_path, "check-morphisms", {"n": [2, 1]}, "--seed", "3")
    _, b = run_cli(tmp_path, "check-morphisms", {"n": [2, 1]}, "--seed", "3")
    a.pop("timings")
    b.pop("timings")
    assert a == b and a["passed"]


def test_bench_counts(tmp_path):
    code, rep = run_cli(tmp_path, "bench", {"N": 3, "L": 2, "n": [1, 1]})
    assert code == 0
    assert rep["counts"]["partition terms"] == rep["counts"]["multinomial oracle"] == 2


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["check-rtt", "--config", str(bad)]) == 2
    assert cli.main(["compare-bv", "--config", str(tmp_path / "missing.json")]) == 2
    code = cli.main(["onshell", "--backend", "exact"])  # solving needs floats
    assert code == 2


def test_unknown_task_rejected():
    with pytest.raises(SystemExit):
        cli.main(["nope"])


def test_console_script_entry_point(tmp_path):
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "bethelab.cli", "check-identities"],
                          input="", capture_output=True, text=True, env=env,
                          cwd=tmp_path, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"]
