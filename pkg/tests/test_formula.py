import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valring.errors import FormulaSyntaxError, ScopeError
from valring.formula import (
    Add,
    And,
    Eq,
    Exists,
    IntLit,
    Mul,
    Neg,
    Not,
    Pn,
    Pow,
    Var,
    free_vars,
    match_shape,
    parse,
    parse_term,
    print_formula,
    print_term,
    substitute_as,
)
from valring.formula.ast import PAS2
from valring.selftest import random_formula
from valring.valdef import main_formula


def test_parse_t2():
    x = Var("x")
    assert parse("P2(4 + x) & !P2(x)") == And(Pn(2, Add(IntLit(4), x)), Not(Pn(2, x)))


def test_connectives_fold_left():
    phi = parse("a = 1 & b = 1 & c = 1")
    assert isinstance(phi.left, And)
    assert phi.right == Eq(Var("c"), IntLit(1))


def test_term_precedence():
    assert parse_term("-x^2") == Neg(Pow(Var("x"), 2))
    assert parse_term("-3") == IntLit(-3)
    assert parse_term("(-3)^2") == Pow(IntLit(-3), 2)


def test_quantifier_scope():
    phi = parse("E y (x = y^2 + y)")
    assert isinstance(phi, Exists)
    assert free_vars(phi) == {"x"}
    with pytest.raises(ScopeError):
        parse("x = y", closed=True, declared={"x"})


def test_syntax_error_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("P2(x")
    assert info.value.to_dict()["error"] == "syntax_error"
    assert info.value.position is not None


def test_spans_do_not_affect_equality():
    phi = parse("x = 1")
    assert phi.span == (0, 5)
    assert phi == Eq(Var("x"), IntLit(1))


def test_printer():
    assert print_formula(parse("E y (x = y^2 + y)")) == "E y (x = y^2 + y)"
    assert print_term(Neg(IntLit(3))) == "-(3)"
    assert print_term(IntLit(-3)) == "-3"
    assert print_term(Pow(IntLit(-3), 2)) == "(-3)^2"


@given(st.integers(0, 2 ** 20))
def test_print_parse_round_trip(seed):
    phi = random_formula(random.Random(seed), 3)
    assert parse(print_formula(phi)) == phi


def test_substitute_as():
    x = Var("x")
    assert substitute_as(Not(PAS2(x))) == Not(Pn(2, Add(IntLit(1), Mul(IntLit(4), x))))


def test_shapes():
    assert match_shape(parse("P2(4 + x) & !P2(x)")).shape == "T2"
    assert match_shape(parse("P2(4 + w) & !P2(w)")).var == "w"
    assert match_shape(parse("E y (x = y^5)")).params == {"n": 5}
    assert match_shape(main_formula(20, "Tplus")).shape == "main2"
    assert match_shape(parse("x = 1 & y = 2")) is None
