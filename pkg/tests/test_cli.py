import json

import pytest

from valring.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    lines = [json.loads(line) for line in out.splitlines() if line.strip()]
    return code, lines


def test_decide_outside(capsys):
    code, [out] = run(capsys, "decide", "--field", "Qp:5", "--method", "main2", "2/5")
    assert code == 1
    assert out["verdict"] == "outside"
    assert out["val"] == -1


def test_decide_inside_with_global_flags(capsys):
    code, [out] = run(capsys, "--field", "Qp:5", "decide", "--branch", "sumset_sell", "--verify", "3")
    assert code == 0
    assert out["verdict"] == "inside"
    assert out["verified"] is True


def test_subcommand_flags_override_global(capsys):
    code, [out] = run(capsys, "--field", "Qp:2", "decide", "--field", "Qp:5", "--method", "main", "1/5")
    assert code == 1
    assert out["verdict"] == "outside"


def test_method_inapplicable(capsys):
    code, [out] = run(capsys, "decide", "--field", "Qp:2", "--method", "main", "1")
    assert code == 2
    assert out["error"] == "method_inapplicable"


def test_witness_carries_certificate(capsys):
    code, [out] = run(capsys, "witness", "--field", "Qp:5", "--branch", "sumset_sell", "3")
    assert code == 0
    assert out["field"] == "Qp:5"
    assert out["method"] == "main2"
    assert out["certificate"]["ell"] == 20


def test_eval(capsys):
    code, [out] = run(capsys, "eval", "--field", "Qp:5", "P2(4+x) & !P2(x)", "--bind", "x=5")
    assert code == 0
    assert out["verdict"] == "true"
    code, [out] = run(capsys, "eval", "--field", "Qp:5", "P2(x)", "--bind", "x=2")
    assert code == 1
    assert out["verdict"] == "false"


@pytest.mark.parametrize("argv,error", [
    (["decide", "--field", "Qp:6", "1"], "malformed_descriptor"),
    (["decide", "1"], "usage"),
    (["decide", "--field", "Qp:5", "--bogus", "1"], "usage"),
    (["eval", "--field", "Qp:5", "P2(x", "--bind", "x=1"], "syntax_error"),
    (["eval", "--field", "Qp:5", "P2(x)", "--bind", "x"], "usage"),
    (["decide", "--field", "Qp:5", "--workers", "0", "1"], "usage"),
])
def test_usage_errors(capsys, argv, error):
    code, lines = run(capsys, *argv)
    assert code == 64
    assert lines[-1]["error"] == error


def test_input_errors(capsys, tmp_path):
    plan = tmp_path / "plan.json"
    plan.write_text('{"p": 2, "eis": [-4, 0, 1]}')
    code, [out] = run(capsys, "build-ext", str(plan), "--samples", "0")
    assert code == 65
    assert out["error"] == "invalid_plan"


def test_build_ext(capsys, tmp_path):
    plan = tmp_path / "plan.json"
    plan.write_text('{"p": 2, "e": 2, "eis": [-2, 0, 1]}')
    code, [out] = run(capsys, "build-ext", str(plan), "--samples", "0")
    assert code == 0
    assert out["round_trip"] is True
    assert out["plan"]["power"] == 3
    assert len(out["uniformizers"]) == 2


def test_power_scan_output_is_sorted_and_repeatable(capsys):
    code, lines = run(capsys, "scan", "power-scan", "--qmax", "16", "--mmax", "3")
    assert code == 0
    rows, summary = lines[:-1], lines[-1]
    assert [(r["q"], r["m"]) for r in rows] == sorted((r["q"], r["m"]) for r in rows)
    assert summary["pairs"] == 30
    assert summary["all_cubes_char2"] == [1, 3]
    _, again = run(capsys, "scan", "power-scan", "--qmax", "16", "--mmax", "3")
    assert again == lines


def test_text_output(capsys):
    code = main(["--output", "text", "decide", "--field", "Qp:5", "2/5"])
    out = capsys.readouterr().out.splitlines()
    assert code == 1
    assert "verdict: outside" in out
    assert "val: -1" in out
