import pytest

from valring.errors import MissingBinding, Unsupported
from valring.fields import make_field
from valring.formula import StrategyConfig, eval_qf, evaluate, parse
from valring.valdef import main_formula

T2 = parse("P2(4 + x) & !P2(x)")
NO_DECIDERS = StrategyConfig(use_deciders=False)


def test_t2_through_decider_and_atoms(q5):
    x = q5.from_int(5)
    with_decider = evaluate(T2, {"x": x}, q5)
    assert with_decider.verdict == "true"
    assert "decider:T2" in with_decider.strategy_log
    plain = evaluate(T2, {"x": x}, q5, NO_DECIDERS)
    assert plain.verdict == "true"
    assert plain.strategy_log == ["qf"]


def test_eval_qf(q5):
    assert eval_qf(parse("x = 2 + 3"), {"x": q5.from_int(5)}, q5)
    assert not eval_qf(parse("P2(x)"), {"x": q5.zero()}, q5)
    with pytest.raises(Unsupported):
        eval_qf(parse("E y (x = y)"), {"x": q5.zero()}, q5)


def test_missing_binding(q5):
    with pytest.raises(MissingBinding):
        evaluate(parse("x = 1"), {}, q5)


def test_tautology(q5):
    result = evaluate(parse("A y (y + 1 = 1 + y)"), {}, q5)
    assert result.verdict == "true"
    assert "tautology" in result.strategy_log


def test_artin_schreier_witness(q5):
    phi = parse("E y (x = y^2 + y)")
    result = evaluate(phi, {"x": q5.from_int(2)}, q5)
    assert result.verdict == "true"
    y = result.witnesses["y"]
    diff = q5.sub(q5.add(q5.mul(y, y), y), q5.from_int(2))
    assert q5.val_bound(diff)[0] >= 10
    assert evaluate(phi, {"x": q5.one()}, q5).verdict == "false"


def test_finite_field_enumeration(f5):
    phi = parse("E y (x = y^2)")
    assert evaluate(phi, {"x": f5.element(4)}, f5, NO_DECIDERS).verdict == "true"
    result = evaluate(phi, {"x": f5.element(3)}, f5, NO_DECIDERS)
    assert result.verdict == "false"
    assert "enumeration" in result.strategy_log


def test_search_finds_hensel_root():
    K = make_field("Qp:7")
    result = evaluate(parse("E y (y^2 = x)"), {"x": K.from_int(2)}, K, NO_DECIDERS)
    assert result.verdict == "true"
    assert "hensel" in result.strategy_log
    assert K.residue(result.witnesses["y"]).value in (3, 4)


def test_unknown_without_certificate(q5):
    result = evaluate(parse("E y (y^2 = x)"), {"x": q5.from_int(2)}, q5, NO_DECIDERS)
    assert result.verdict == "unknown"
    assert result.witnesses == {}
    assert result.to_dict()["verdict"] == "unknown"


def test_main2_formula_decider(q5):
    phi = main_formula(20, "Tplus")
    assert evaluate(phi, {"x": q5.parse_element("2/5")}, q5).verdict == "false"
    inside = evaluate(phi, {"x": q5.from_int(3)}, q5)
    assert inside.verdict == "true"
    assert inside.strategy_log == ["decider:main2"]


def test_pn_decider():
    K = make_field("Qp:7")
    phi = parse("E y (x = y^3)")
    result = evaluate(phi, {"x": K.from_int(8)}, K)
    assert result.verdict == "true"
    assert result.strategy_log == ["decider:Pn"]
    y = result.witnesses["y"]
    assert K.val_bound(K.sub(K.pow(y, 3), K.from_int(8)))[0] >= 10
    assert evaluate(phi, {"x": K.from_int(3)}, K).verdict == "false"


def test_main_formula_decider(q5):
    phi = main_formula(20, "T")
    assert evaluate(phi, {"x": q5.parse_element("2/5")}, q5).verdict == "false"
    inside = evaluate(phi, {"x": q5.from_int(3)}, q5)
    assert inside.verdict == "true"
    assert inside.strategy_log == ["decider:main"]
