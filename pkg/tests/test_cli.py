from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qsphere.cli import main, parse_eps_grid, parse_int_range


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_nf_and_haar(capsys):
    assert run(capsys, "nf", "a * (a*)")[:2] == (0, "1 - q^2 * g* * g\n")
    assert run(capsys, "haar", "g* * g")[:2] == (0, "1/(1 + q^2)\n")
    code, out, _ = run(capsys, "haar", "g* * g", "--format", "json")
    assert json.loads(out) == {"value": "1/(1 + q^2)"}


def test_parse_error_is_usage_error(capsys):
    code, _, err = run(capsys, "nf", "a +")
    assert code == 2 and "offset" in err


@pytest.mark.parametrize("name,n,value", [("tau", 1, "-1"), ("tau", 2, "-q^-1 - q"), ("tauPrime", 3, "-3")])
def test_pair_values(capsys, name, n, value):
    assert run(capsys, "pair", "--cocycle", name, "--n", str(n))[:2] == (0, value + "\n")


def test_pair_failures(capsys):
    code, _, err = run(capsys, "pair", "--cocycle", "tau1", "--n", "1")
    assert code == 1 and "witness" in err
    assert run(capsys, "pair", "--cocycle", "tauTilde", "--n", "1")[0] == 2
    assert run(capsys, "pair", "--cocycle", "tau", "--n", "0")[0] == 2


def test_verify_bott(capsys):
    code, out, _ = run(capsys, "verify", "bott")
    assert code == 0 and "FAIL" not in out


def test_heat_scan_and_config_errors(capsys, tmp_path):
    target = tmp_path / "scan.csv"
    assert run(capsys, "heat", "--scan", "limits", "--m", "4..6", "--output", str(target))[0] == 0
    assert len(target.read_text().splitlines()) == 4
    assert run(capsys, "heat", "--scan", "limits", "--q0", "1")[0] == 2
    assert run(capsys, "heat", "--scan", "oscillation", "--c", "1/8")[0] == 2


def test_jlo_command(capsys):
    code, out, _ = run(capsys, "jlo", "--d", "6", "--eps", "2^-2..2^-4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "q0,d,epsilon,psi2,prediction,residual" and len(lines) == 3
    assert run(capsys, "jlo", "--d", "1")[0] == 2
    assert run(capsys, "jlo", "--triple", "1;g")[0] == 2
    assert run(capsys, "jlo", "--d", "4", "--triple", "1;g;g")[0] == 2


def test_bott_dump(capsys):
    code, out, _ = run(capsys, "bott", "--n", "1")
    assert code == 0 and json.loads(out)["dim"] == 2


def test_range_parsers():
    assert parse_int_range("4..7") == [4, 5, 6, 7]
    assert parse_int_range("4..8:2") == [4, 6, 8]
    assert parse_eps_grid("2^-2..2^-6") == [0.25, 0.0625, 0.015625]
    assert parse_eps_grid("2^-2..2^-4:1") == [0.25, 0.125, 0.0625]
    assert parse_eps_grid("0.5, 2^-3") == [0.5, 0.125]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qsphere", "nf", "g * g*"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "g* * g\n"
