import json
import subprocess
import sys

import pytest

from mwcalc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_commutator(capsys):
    code, out, _ = run(
        capsys, "check", "theta(U)*theta(V)*theta(U)^-1*theta(V)^-1", "=", "h*(h-1)*[U]*[V]*theta(1)"
    )
    assert code == 0 and "verified" in out


def test_check_refutes(capsys):
    code, out, _ = run(capsys, "check", "[U]", "=", "[V]")
    assert code == 1
    assert "lhs: [U]" in out and "rhs: [V]" in out


def test_check_without_equals_and_trace(capsys):
    code, out, _ = run(capsys, "check", "eta*h", "0", "--trace")
    assert code == 0
    assert "R6" in out


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", "[U][U]", "=", "[U][-1]", "--json", "--trace")
    report = json.loads(out)
    assert code == 0
    assert set(report) >= {"command", "inputs", "normal_forms", "verdict", "trace"}
    assert report["verdict"] == "verified"
    assert report["normal_forms"] == ["[-1][U]", "[-1][U]"]


def test_parse_error_exit(capsys):
    code, _, err = run(capsys, "check", "[U", "=", "[V]")
    assert code == 2 and "position" in err


def test_usage_error_exit(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check", "[U]")[0] == 2
    assert run(capsys, "derive", "no-such-lemma")[0] == 2
    assert run(capsys, "probe", "[U]", "--field", "Q")[0] == 2


def test_term_bound_exit(capsys):
    code, _, err = run(capsys, "normalize", "[U*V*W][W*V]", "--term-bound", "3")
    assert code == 3 and "bound" in err


@pytest.mark.parametrize("name, steps", [("lemma-hk2", 5), ("lemma-explicit-h", 3)])
def test_derive_verifies(capsys, name, steps):
    code, out, _ = run(capsys, "derive", name)
    assert code == 0
    assert f"{steps}/{steps} steps verified" in out


def test_derive_reports_failing_relation(capsys):
    code, out, _ = run(capsys, "derive", "thm-fa1-ii", "--json")
    report = json.loads(out)
    assert code == 1
    assert [s["verified"] for s in report["steps"]] == [False, True]


def test_normalize(capsys):
    code, out, _ = run(capsys, "normalize", "<U>*<U^-1>")
    assert code == 0 and out.strip() == "1"


def test_commutator_and_hurewicz(capsys):
    code, out, _ = run(capsys, "commutator", "theta(U)", "theta(V)", "--json")
    report = json.loads(out)
    assert report["in_hK2"] is True and report["witness"] == "[U][V]"
    code, out, _ = run(capsys, "hurewicz", "[U][V]*theta(W)")
    assert "[W] + eta*[U][V]" in out


def test_member(capsys):
    assert run(capsys, "member-hk2", "h*[U][V]")[0] == 0
    assert run(capsys, "member-hk2", "[U][V]")[0] == 1


def test_kmw_and_exactness(capsys):
    code, out, _ = run(capsys, "kmw", "--field", "F5", "--degree", "1", "--json")
    assert json.loads(out)["invariants"] == [4]
    code, out, _ = run(capsys, "exactness", "--field", "F3")
    assert code == 0 and "exact: True" in out


def test_probe_h_vanishes_over_reals(capsys):
    code, out, _ = run(capsys, "probe", "h", "--field", "R", "--trials", "10", "--json")
    report = json.loads(out)
    assert code == 0 and len(report["samples"]) == 10
    assert all(s["witt"] == "sig 0" for s in report["samples"])


def test_probe_signature(capsys):
    code, out, _ = run(capsys, "probe", "[U][V]", "--field", "R", "--assign", "U=-,V=-")
    assert "sig 4" in out


def test_probe_compare(capsys):
    args = ["probe-compare", "theta(U)*theta(V)", "<-1>[U][V]*theta(U*V)", "--field", "F5", "--trials", "50"]
    code, out, _ = run(capsys, *args)
    assert code == 0 and "50/50" in out


def test_probe_is_seeded(capsys):
    a = run(capsys, "probe", "[U][V]", "--field", "F7", "--seed", "4", "--json")[1]
    b = run(capsys, "probe", "[U][V]", "--field", "F7", "--seed", "4", "--json")[1]
    assert a == b


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mwcalc", "check", "[U][V]", "=", "[V][U]"], capture_output=True, text=True
    )
    assert proc.returncode == 1
