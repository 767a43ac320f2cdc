from fractions import Fraction

import pytest

from valring.commands.build_ext import load_plan
from valring.errors import InvalidPlan
from valring.formula import evaluate, parse, print_formula
from valring.valdef import (
    build_extension_formula,
    field_for_plan,
    make_plan,
    maximal_ideal_formula,
    uniformizer_set,
    validate_plan,
    verify_extension_formula,
)


@pytest.fixture
def sqrt2_plan():
    return make_plan(2, 1, 2)


def test_plan_defaults(sqrt2_plan):
    assert sqrt2_plan.G == (-1, 1)
    assert sqrt2_plan.hstar == ((Fraction(-2),), (Fraction(0),))
    assert sqrt2_plan.which_power == 3
    assert make_plan(5).which_power == 2


def test_formulas_round_trip(sqrt2_plan):
    existential, universal = build_extension_formula(sqrt2_plan)
    assert parse(print_formula(existential)) == existential
    assert parse(print_formula(universal)) == universal
    assert print_formula(existential).startswith("E z E y E w (")
    assert print_formula(universal).startswith("A z A y A o A w (!")


def test_uniformizers(sqrt2_plan):
    K = field_for_plan(sqrt2_plan)
    ys = uniformizer_set(sqrt2_plan, K)
    assert len(ys) == 2
    assert all(K.val(y) == Fraction(1, 2) for y in ys)


def test_formulas_decide_membership(sqrt2_plan):
    K = field_for_plan(sqrt2_plan)
    existential, universal = build_extension_formula(sqrt2_plan)
    ideal = maximal_ideal_formula(sqrt2_plan)
    pi = K.uniformizer()
    cases = [(K.one(), True, False), (pi, True, True), (K.inv(pi), False, False), (K.zero(), True, True)]
    for x, in_ring, in_ideal in cases:
        env = {"x": x}
        assert evaluate(existential, env, K).verdict == ("true" if in_ring else "false")
        assert evaluate(universal, env, K).verdict == ("true" if in_ring else "false")
        assert evaluate(ideal, env, K).verdict == ("true" if in_ideal else "false")


@pytest.mark.parametrize("p,f,e", [(2, 1, 2), (3, 2, 1), (5, 1, 3)])
def test_verify_extension_formula(p, f, e):
    plan = make_plan(p, f, e)
    report = verify_extension_formula(plan, field_for_plan(plan, 32), samples=12, seed=1)
    assert report["ok"], report["failures"]
    assert report["agree_existential"] == report["agree_universal"] == 12


def test_invalid_plans():
    with pytest.raises(InvalidPlan):
        validate_plan(make_plan(2, 1, 2, hstar=[(-4,), (0,)]))
    with pytest.raises(InvalidPlan):
        validate_plan(make_plan(4))
    with pytest.raises(InvalidPlan):
        validate_plan(make_plan(3, 2, 1, G=(0, 0, 1)))


def test_load_plan():
    plan = load_plan('{"p": 2, "e": 2, "eis": [-2, 0, 1]}')
    assert plan.e == 2
    assert plan.hstar == ((Fraction(-2),), (Fraction(0),))
    with pytest.raises(InvalidPlan):
        load_plan("{not json")
    with pytest.raises(InvalidPlan):
        load_plan('{"p": 2, "eis": [-2, 0, 2]}')
    with pytest.raises(InvalidPlan):
        load_plan('{"p": 2, "e": 3, "eis": [-2, 0, 1]}')
