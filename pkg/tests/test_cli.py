import json
import os
import subprocess
import sys

import pytest

from circdist.cli import (TableSpecError, main, parse_support, parse_table)
from circdist.distributions import divisor_closure
from circdist.groupring import eps_n


def run_cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "circdist.cli", *argv],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_parse_support():
    assert parse_support("closure(12)") == divisor_closure([12])
    assert parse_support("closure(4, 15)") == (2, 3, 4, 5, 15)
    with pytest.raises(TableSpecError):
        parse_support("divisors(12)")
    with pytest.raises(TableSpecError):
        parse_support("closure(12) junk")


def test_parse_table_specs():
    S = divisor_closure([12])
    t = parse_table("pow(phi, one_plus_tau)", S)
    assert t.value(12) == eps_n(12)
    t2 = parse_table("mul(phi, delta(3))", S)
    assert t2.value(3) == -(parse_table("phi", S).value(3))
    t3 = parse_table("pow(phi, 2+1*s(5)@12)", S)
    assert t3.value(12) == parse_table("phi", S).value(12) ** 2 * __import__(
        "circdist").act(5, parse_table("phi", S).value(12))
    t4 = parse_table("conj(phi)", S)
    from circdist import act, tau
    assert t4.value(12) == act(tau(12), parse_table("phi", S).value(12))
    with pytest.raises(TableSpecError):
        parse_table("pow(phi, 2+s(5))", S)   # sigma without a base level
    with pytest.raises(TableSpecError):
        parse_table("frob(phi)", S)


def test_exit_code_contract():
    code, out, _ = run_cli("verify", "--table", "phi", "--support", "closure(20)")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == "circdist/1" and payload["passed"]

    code, out, _ = run_cli("strictness", "--table", "delta(3)",
                           "--support", "closure(15)")
    assert code == 1
    payload = json.loads(out)
    assert not payload["passed"]
    bad = [e for e in payload["entries"] if not e["pass"]]
    assert bad[0]["n"] == 3 and bad[0]["ell"] == 5 and "witness" in bad[0]

    code, _, err = run_cli("verify", "--table", "delta(2)",
                           "--support", "closure(15)")
    assert code == 2 and "odd prime" in err

    code, _, err = run_cli("verify", "--table", "phi", "--support", "closure(997)")
    assert code == 2 and "CIRCDIST_MAX_PHI" in err


def test_max_phi_override():
    env = dict(os.environ, CIRCDIST_MAX_PHI="3")
    proc = subprocess.run([sys.executable, "-m", "circdist.cli", "verify",
                           "--table", "phi", "--support", "closure(12)"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 2 and "CIRCDIST_MAX_PHI" in proc.stderr
    env = dict(os.environ, CIRCDIST_MAX_PHI="64")
    proc = subprocess.run([sys.executable, "-m", "circdist.cli", "verify",
                           "--table", "phi", "--support", "closure(12)"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0


def test_annihilator_and_idempotent_commands():
    code, out, _ = run_cli("annihilator", "--n", "12", "--oracle")
    assert code == 0
    payload = json.loads(out)
    assert payload["equal"] and payload["formula"]["hnf"] == [[1, 1]]
    code, out, _ = run_cli("idempotent", "--n", "9")
    assert code == 0
    assert json.loads(out)["idempotent"]["coeffs"] == {"1": "1"}


def test_torsion_and_valuation_commands():
    code, out, _ = run_cli("torsion", "--table", "delta(3,5)",
                           "--support", "closure(45,12)")
    assert code == 0
    payload = json.loads(out)
    assert payload["classification"] == "delta" and payload["pi"] == [3, 5]

    code, out, _ = run_cli("valuation", "--table", "pow(phi, 3)",
                           "--support", "closure(9,8,25)")
    assert code == 0
    payload = json.loads(out)
    consts = [e for e in payload["entries"] if e["check"] == "constancy"]
    assert consts[0]["value"] == 3


def test_euler_and_ncnd_commands():
    code, out, _ = run_cli("euler", "--table", "phi", "--support",
                           "closure(21)", "--m", "3", "--r", "7")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run_cli("ncnd", "--p", "3", "--q", "5", "--a-max", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["family"]["passed"] and payload["sections"]["passed"]


def test_kappa_and_boundedness_commands():
    args = ["--table", "pow(phi, one_plus_tau)", "--support", "closure(24)",
            "--m", "3", "--p", "2", "--depth", "3", "--k", "1"]
    code, out, _ = run_cli("kappa", *args)
    assert code == 0
    payload = json.loads(out)
    assert payload["entries"][-1]["digits"]["1"] == [1, 3]
    code, out, _ = run_cli("boundedness", *args)
    assert code == 0
    assert json.loads(out)["evidence_only"] is True


def test_atomic_out_file(tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run_cli("verify", "--table", "phi", "--support",
                           "closure(12)", "--out", str(target))
    assert code == 0 and out == ""
    payload = json.loads(target.read_text())
    assert payload["passed"]
    leftovers = [p for p in os.listdir(tmp_path) if p.startswith(".circdist-")]
    assert not leftovers


def test_unwritable_output_is_a_usage_error(tmp_path):
    code, _, err = run_cli("verify", "--table", "phi", "--support",
                           "closure(12)", "--out", str(tmp_path / "nodir" / "x.json"))
    assert code == 2 and "cannot write report" in err


def test_reports_are_deterministic():
    configs = [
        ("verify", "--table", "phi", "--support", "closure(20)"),
        ("strictness", "--table", "delta(3)", "--support", "closure(15)"),
        ("annihilator", "--n", "15", "--oracle"),
        ("torsion", "--table", "delta(3)", "--support", "closure(9)"),
    ]
    for cfg in configs:
        _, out1, _ = run_cli(*cfg, "--seed", "7")
        _, out2, _ = run_cli(*cfg, "--seed", "7")
        assert out1 == out2


def test_text_format():
    code, out, _ = run_cli("idempotent", "--n", "12", "--format", "text")
    assert code == 0
    assert out.startswith("[idempotent]")
