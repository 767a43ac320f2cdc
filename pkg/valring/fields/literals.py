"""Element literal grammar.

    3/5                         rationals
    t^-3 + 1 + 2*t              Laurent polynomials (t the uniformizer, z the residue generator)
    1 + g + 3*u^2               tower elements (g unramified generator, u Eisenstein root)
    1 + t + O(t^8)              inexact series, known modulo t^8
"""

import pyparsing as pp

from ..errors import MalformedLiteral
from .base import Element, Field

pp.ParserElement.enable_packrat()


class _BigO:
    def __init__(self, digits: int):
        self.digits = digits


# Syntax tree: ("int", n) | ("var", name) | ("O", node) | (op, left, right) | ("neg", node) | ("^", node, k)
# -----------------------------------------------------------------------------

def _fold_left(tokens):
    tokens = tokens[0]
    node = tokens[0]
    for op, rhs in zip(tokens[1::2], tokens[2::2]):
        node = (op, node, rhs)
    return [node]


def _negate(tokens):
    return [("neg", tokens[0][1])]


Expr = pp.Forward()

INTEGER = pp.Word(pp.nums).set_parse_action(lambda t: [("int", int(t[0]))])
SIGNED = pp.Combine(pp.Optional("-") + pp.Word(pp.nums)).set_parse_action(lambda t: int(t[0]))
VARIABLE = pp.Word(pp.alphas, pp.alphanums + "_").set_parse_action(lambda t: [("var", t[0])])
BIG_O = (pp.Keyword("O") + pp.Suppress("(") + Expr + pp.Suppress(")")).set_parse_action(lambda t: [("O", t[1])])

Atom = BIG_O | INTEGER | VARIABLE | (pp.Suppress("(") + Expr + pp.Suppress(")"))
Power = (Atom + pp.Optional(pp.Suppress("^") + SIGNED)).set_parse_action(
    lambda t: [("^", t[0], t[1])] if len(t) == 2 else [t[0]]
)

Expr <<= pp.infix_notation(Power, [
    (pp.Literal("-"), 1, pp.OpAssoc.RIGHT, _negate),
    (pp.one_of("* /"), 2, pp.OpAssoc.LEFT, _fold_left),
    (pp.one_of("+ -"), 2, pp.OpAssoc.LEFT, _fold_left),
])

Literal = Expr + pp.StringEnd()


def _eval(K: Field, node, symbols: dict[str, Element]):
    kind = node[0]
    if kind == "int":
        return K.from_int(node[1])
    if kind == "var":
        if node[1] not in symbols:
            raise MalformedLiteral(f"unknown symbol {node[1]!r} for {K.descriptor}")
        return symbols[node[1]]
    if kind == "O":
        bound = _eval(K, node[1], symbols)
        if isinstance(bound, _BigO):
            raise MalformedLiteral("nested O()")
        return _BigO(int(K.ord_pi(bound)))
    if kind == "neg":
        value = _eval(K, node[1], symbols)
        if isinstance(value, _BigO):
            return value
        return K.neg(value)
    if kind == "^":
        base = _eval(K, node[1], symbols)
        if isinstance(base, _BigO):
            raise MalformedLiteral("O() cannot be raised to a power")
        return K.pow(base, node[2])
    left = _eval(K, node[1], symbols)
    right = _eval(K, node[2], symbols)
    if kind in ("+", "-"):
        if isinstance(left, _BigO) and isinstance(right, _BigO):
            return _BigO(min(left.digits, right.digits))
        if isinstance(right, _BigO):
            return K.truncate(left, right.digits)
        if isinstance(left, _BigO):
            right = right if kind == "+" else K.neg(right)
            return K.truncate(right, left.digits)
        return K.add(left, right) if kind == "+" else K.sub(left, right)
    if isinstance(left, _BigO) or isinstance(right, _BigO):
        raise MalformedLiteral("O() may only be added to an element")
    if kind == "*":
        return K.mul(left, right)
    return K.div(left, right)


def parse_literal(K: Field, text: str) -> Element:
    try:
        node = Literal.parse_string(text.strip(), parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise MalformedLiteral(f"{text!r}: {exc.msg} at column {exc.col}") from exc
    value = _eval(K, node, K.symbols())
    if isinstance(value, _BigO):
        return K.truncate(K.zero(), value.digits)
    return value
