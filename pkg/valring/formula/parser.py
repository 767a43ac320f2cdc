"""Formula grammar (precedence high to low: ^, unary -, *, binary + -; !, &, |; quantifiers).

    formula := 'E' var formula | 'A' var formula | disj
    disj    := conj ('|' conj)*
    conj    := lit ('&' lit)*
    lit     := '!' lit | atom | '(' formula ')'
    atom    := term '=' term | 'P' nat '(' term ')' | 'PAS2' '(' term ')'
    term    := factor (('+' | '-') factor)*
    factor  := unary ('*' unary)*
    unary   := power | '-' unary
    power   := base ('^' nat)?
    base    := int | var | '(' term ')'

Examples:

    P2(4 + x) & !P2(x)
    E y (x = y^2 + y)
    A y (y = y)
"""

import pyparsing as pp

from ..errors import FormulaSyntaxError, ScopeError
from .ast import PAS2, Add, And, Eq, Exists, Forall, Formula, IntLit, Mul, Neg, Not, Or, Pn, Pow, Sub, Var, free_vars

pp.ParserElement.enable_packrat()


# Helpers
# -----------------------------------------------------------------------------

def located(expr: pp.ParserElement, build) -> pp.ParserElement:
    """Wrap expr so build(tokens) gets a (start, end) span attached."""
    def parse_action(s, loc, tokens):
        start, end = tokens["locn_start"], tokens["locn_end"]
        try:
            node = build(list(tokens["value"]))
        except ValueError as exc:
            raise pp.ParseFatalException(s, start, str(exc)) from exc
        if node is None:
            return None
        object.__setattr__(node, "span", (start, end))
        return [node]

    return pp.Located(expr).set_parse_action(parse_action)


def fold_binary(tokens: list):
    node = tokens[0]
    for op, rhs in zip(tokens[1::2], tokens[2::2]):
        cls = {"+": Add, "-": Sub, "*": Mul, "&": And, "|": Or}[op]
        node = cls(node, rhs)
    return node


# Grammar
# -----------------------------------------------------------------------------

Term = pp.Forward()
FormulaExpr = pp.Forward()

LPAR, RPAR = pp.Suppress("("), pp.Suppress(")")
NAT = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
INT = pp.Regex(r"-\d+(?!\d)(?!\s*\^)|\d+").set_parse_action(lambda t: int(t[0]))
NAME = pp.Regex(r"[a-z][a-z0-9_]*")

IntLiteral = located(INT, lambda t: IntLit(t[0]))
Variable = located(NAME, lambda t: Var(t[0]))
Base = IntLiteral | Variable | (LPAR + Term + RPAR)
Power = located(Base + pp.Optional(pp.Suppress("^") + NAT), lambda t: Pow(t[0], t[1]) if len(t) == 2 else t[0])
Unary = pp.Forward()
Unary <<= Power | located(pp.Suppress("-") + Unary, lambda t: Neg(t[0]))
Factor = located(Unary + pp.ZeroOrMore(pp.Literal("*") + Unary), fold_binary)
Term <<= located(Factor + pp.ZeroOrMore(pp.one_of("+ -") + Factor), fold_binary)

EXISTS = pp.Keyword("E")
FORALL = pp.Keyword("A")
NOT = pp.Suppress("!")

Equality = located(Term + pp.Suppress("=") + Term, lambda t: Eq(t[0], t[1]))
PowerAtom = located(pp.Regex(r"P(\d+)").set_parse_action(lambda t: int(t[0][1:])) + LPAR + Term + RPAR,
                    lambda t: Pn(t[0], t[1]))
ArtinSchreier = located(pp.Suppress(pp.Keyword("PAS2")) + LPAR + Term + RPAR, lambda t: PAS2(t[0]))
Atom = ArtinSchreier | PowerAtom | Equality

LiteralFormula = pp.Forward()
LiteralFormula <<= located(NOT + LiteralFormula, lambda t: Not(t[0])) | Atom | (LPAR + FormulaExpr + RPAR)
Conjunction = located(LiteralFormula + pp.ZeroOrMore(pp.Literal("&") + LiteralFormula), fold_binary)
Disjunction = located(Conjunction + pp.ZeroOrMore(pp.Literal("|") + Conjunction), fold_binary)
Quantified = located(
    (EXISTS | FORALL) + NAME + FormulaExpr,
    lambda t: (Exists if t[0] == "E" else Forall)(t[1], t[2]),
)
FormulaExpr <<= Quantified | Disjunction

FormulaText = FormulaExpr + pp.StringEnd()
TermText = Term + pp.StringEnd()


def parse(text: str, closed: bool = False, declared: set[str] | None = None) -> Formula:
    """Parse a formula; with closed=True every free variable must be in `declared`."""
    try:
        phi = FormulaText.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise FormulaSyntaxError(f"{exc.msg} at column {exc.col}", position=exc.loc) from exc
    if closed:
        unbound = free_vars(phi) - set(declared or ())
        if unbound:
            raise ScopeError(f"unbound variables: {', '.join(sorted(unbound))}")
    return phi


def parse_term(text: str):
    try:
        return TermText.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise FormulaSyntaxError(f"{exc.msg} at column {exc.col}", position=exc.loc) from exc
