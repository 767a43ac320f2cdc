import json

from valring import selftest
from valring.cli import main
from valring.fields import make_field


def test_power_scan_suite():
    [result] = selftest.run_suites(["power-scan"], "reduced", 0)
    assert result.ok, result.failures
    assert result.checks >= 6


def test_crashing_suite_is_reported(monkeypatch):
    def boom(scale, seed):
        raise RuntimeError("boom")

    monkeypatch.setitem(selftest.SUITES, "power-scan", boom)
    [result] = selftest.run_suites(["power-scan"])
    assert not result.ok
    assert result.to_dict()["failures"] == ["crashed: boom"]


def test_selftest_command(capsys):
    code = main(["selftest", "--suite", "power-scan"])
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert code == 0
    assert lines[-1] == {"ok": True, "scale": "reduced", "seed": 0, "suites": ["power-scan"], "failed": []}


def test_extension_suite_counts_uniformizers():
    [result] = selftest.run_suites(["extension"], "reduced", 0)
    assert result.ok, result.failures
    assert result.checks >= 3 * 5


def test_main_formulas_match_decide_ok_suite():
    [result] = selftest.run_suites(["as-substitution"], "reduced", 0)
    assert result.ok, result.failures


def test_class_roots_scan():
    K = make_field("Ext:Qp:2:unram=1:eis=[-2,0,1]")
    assert selftest._class_roots(K, [K.from_int(-2), K.zero(), K.one()], 4) == 2
    L = make_field("Ext:Qp:5:unram=1:eis=[-5,0,0,1]")
    assert selftest._class_roots(L, [L.from_int(-5), L.zero(), L.zero(), L.one()], 5) == 1
