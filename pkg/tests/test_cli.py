from __future__ import annotations

import subprocess
import sys

import pytest

from loophom import checks
from loophom.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv,expected", [
    (["normalize", "--space", "QS0", "Q[3] x(1)"], "x(1)^4"),
    (["normalize", "--pi0", "k=1", "Q[2][eta] * Q[2][eta]"], "0"),
    (["normalize", "[0]"], "[0]"),
    (["normalize", "--space", "BU", "c(2) * c(2) + c(2)^2"], "0"),
    (["atlas", "--nu", "1"], "4"),
    (["atlas", "--qp", "7"], "3"),
    (["atlas", "--spherical", "0"], "1,3,7"),
    (["basis", "--space", "BU", "--max-dim", "6"], "1 0 1 0 2 0 3"),
    (["steenrod", "--space", "BU", "--r", "2", "--expr", "c(4)"], "c(2)"),
    (["pi0", "--k", "3", "--expr", "Q[1][nu]", "--component"], "[2 nu]"),
    (["desusp", "--decompose", "c(2,2)"], "p(2,2)"),
    (["desusp", "--decompose", "c(2) * c(2)"], "(p(2))^2"),
])
def test_commands(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.strip() == expected


def test_atlas_verdicts_print_anchor(capsys):
    code, out, _ = run(capsys, "atlas", "--x", "15", "8")
    assert code == 0 and "trivial" in out and 'anchor="' in out


def test_parse_error_exit_code(capsys):
    code, out, err = run(capsys, "normalize", "Q[1")
    assert code == 2 and out == ""
    assert "column" in err


def test_odd_prime_is_refused_by_the_engine(capsys):
    code, _, err = run(capsys, "--prime", "3", "normalize", "[0]")
    assert code == 2 and "p=2" in err


def test_atlas_accepts_odd_primes(capsys):
    code, out, _ = run(capsys, "--prime", "3", "atlas", "--w", "2", "3")
    assert code == 0 and "p=3" in out


def test_truncation_trace(capsys):
    code, out, _ = run(capsys, "pi0", "--k", "3", "--verify-truncation", "2", "1", "nu")
    assert code == 0 and out.strip().endswith("result: 0")


def test_desusp_basis(capsys):
    code, out, _ = run(capsys, "desusp", "--basis", "5")
    assert code == 0
    assert out.splitlines()[0] == "1: series=1 generators: c^-1(2)"


def test_verify_prop4(capsys):
    code, out, _ = run(capsys, "verify", "prop4", "--d", "3", "--max-dim", "12", "--format", "report")
    assert code == 0
    report = checks.parse_report(out)
    assert [r.id for r in report.results] == ["prop4.d3", "prop4.d3.sharp"]
    assert report.ok and report.render() == out


def test_failing_check_sets_exit_code(capsys, monkeypatch):
    def broken():
        raise AssertionError("forced")
    monkeypatch.setattr(checks, "suite", lambda *a, **k: [checks.Check("forced", "a forced failure", broken)])
    code, out, _ = run(capsys, "verify", "qs0")
    assert code == 1 and "FAIL" in out and "forced" in out


def test_report_round_trip():
    r = checks.RunReport("verify x", [checks.CheckResult("a", "pass", "fact one", 3),
                                      checks.CheckResult("b", "skip", "fact two")])
    assert checks.parse_report(r.render()).render() == r.render()
    with pytest.raises(ValueError):
        checks.parse_report("command x\ncheck a pass anchor=\"\" ms=1\nsummary pass=2 fail=0 skip=0\n")


def test_verify_all_is_deterministic(capsys):
    first = run(capsys, "verify", "--all", "--seed", "0", "--format", "report")
    second = run(capsys, "verify", "--all", "--seed", "0", "--format", "report")
    assert first[0] == 0
    assert first == second
    assert "fail=0" in first[1]


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "loophom.cli", "normalize", "[0]"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "[0]"
