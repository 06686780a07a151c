import json
import os
import subprocess
import sys

import pytest

from mdkp_eds.cli import main

COV1_FILE = """\
Dt = (1/2*u[x]^2 - u[y])*v[1]
Dy = -u[x]*v[1]
rhs = u[t,x] + (1/2*u[x]^2 + u[y])*u[x,x]
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_reduce_prints_the_equation(capsys):
    code, out, _ = run(capsys, "reduce", "u[y,y]", "--kappa", "0")
    assert code == 0
    assert out.strip() == "1/2*u[x]^2*u[x,x] + u[y]*u[x,x] + u[t,x]"


def test_verify_cov1_symbolic(capsys):
    code, out, _ = run(capsys, "verify-covering", "cov1", "--kappa", "symbolic")
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "pass"
    assert rep["config"]["zero_test"] == {"points": 20, "precision": 256, "seed": 0}


def test_cov6_at_wrong_kappa_is_usage_error(capsys):
    code, _, err = run(capsys, "verify-covering", "cov6", "--kappa", "0")
    assert code == 64
    assert "requires kappa = -1" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["reduce", "u[x"],
        ["verify-covering", "cov9"],
        ["verify-covering", "cov1", "--kappa", "u[x]"],
        ["verify-covering", "cov1", "--order", "2"],
        ["verify-covering", "cov1", "--lambda", "2"],
        ["verify-cie", "7"],
        ["we-check", "WE1", "--seed", "-1"],
        ["eval", "u[x]", "--at", "u[x]"],
        ["eval", "u[x]", "--at", "u[x]+1=2"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 64


def test_failing_file_exits_one(capsys, tmp_path):
    bad = tmp_path / "bad.cov"
    bad.write_text(COV1_FILE.replace("- u[y]", "+ u[y]"))
    code, out, _ = run(capsys, "verify-covering", str(bad), "--kappa", "0")
    assert code == 1
    assert json.loads(out)["status"] == "fail"


def test_user_file_and_out(capsys, tmp_path):
    f = tmp_path / "cov1.cov"
    f.write_text(COV1_FILE)
    out_path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify-covering", str(f), "--kappa", "0", "--out", str(out_path))
    assert code == 0
    assert out.strip() == "flatness-user: pass"
    assert json.loads(out_path.read_text())["config"]["covering"] == "user"


def test_we_check_and_cie(capsys):
    assert run(capsys, "we-check", "WE5", "--mutations")[0] == 0
    assert run(capsys, "verify-cie", "2", "--kappa", "-3")[0] == 0
    code, out, _ = run(capsys, "verify-cie", "all")
    assert code == 0
    assert len(json.loads(out)["checks"]) > 20


def test_verify_structure(capsys):
    code, out, _ = run(capsys, "verify-structure", "--kappa", "-1")
    assert code == 0
    names = [c["name"] for c in json.loads(out)["checks"]]
    assert any("agree modulo" in n for n in names)
    assert any(n.endswith("d(dU)") for n in names)


def test_eval_is_seeded(capsys):
    a = run(capsys, "eval", "u[x]*v[0] + ln(u[x,x])", "--at", "u[x]=2")[1]
    b = run(capsys, "eval", "u[x]*v[0] + ln(u[x,x])", "--at", "u[x]=2")[1]
    c = run(capsys, "eval", "u[x]*v[0] + ln(u[x,x])", "--at", "u[x]=2", "--seed", "5")[1]
    assert a == b != c
    assert run(capsys, "eval", "u[x]^2", "--at", "u[x]=3")[1].startswith("9")


def test_timings_are_opt_in(capsys):
    plain = json.loads(run(capsys, "verify-covering", "cov3")[1])
    timed = json.loads(run(capsys, "verify-covering", "cov3", "--timings")[1])
    assert "seconds" not in plain["config"]
    assert "seconds" in timed["config"]


def _subprocess_report(tmp_path, name, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    out = tmp_path / name
    subprocess.run(
        [sys.executable, "-m", "mdkp_eds", "verify-covering", "cov2", "--seed", "11", "--out", str(out)],
        check=True,
        env=env,
        capture_output=True,
    )
    return out.read_bytes()


def test_reports_are_byte_identical_across_processes(tmp_path):
    assert _subprocess_report(tmp_path, "a.json", 1) == _subprocess_report(tmp_path, "b.json", 2)
