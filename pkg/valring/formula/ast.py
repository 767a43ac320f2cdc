"""Terms and formulas of the ring language with P_n and P_2^AS.

Nodes are frozen dataclasses; `span` is the (start, end) of the source text and is ignored by
equality, so parse(print(phi)) == phi compares structure only.
"""

from dataclasses import dataclass, field

import sympy


@dataclass(frozen=True)
class Node:
    span: tuple[int, int] | None = field(default=None, compare=False, repr=False, kw_only=True)


# ---- terms ----

@dataclass(frozen=True)
class Term(Node):
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class IntLit(Term):
    value: int


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Sub(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Neg(Term):
    arg: Term


@dataclass(frozen=True)
class Pow(Term):
    base: Term
    exp: int

    def __post_init__(self):
        if self.exp < 0:
            raise ValueError("Pow exponent must be non-negative")


# ---- formulas ----

@dataclass(frozen=True)
class Formula(Node):
    pass


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Pn(Formula):
    n: int
    term: Term

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("P_n needs n >= 2")


@dataclass(frozen=True)
class PAS2(Formula):
    term: Term


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


ATOMS = (Eq, Pn, PAS2)
QUANTIFIERS = (Exists, Forall)


def conj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def exists(names: list[str], body: Formula) -> Formula:
    for name in reversed(names):
        body = Exists(name, body)
    return body


def forall(names: list[str], body: Formula) -> Formula:
    for name in reversed(names):
        body = Forall(name, body)
    return body


def add(*terms: Term) -> Term:
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


def mul(*terms: Term) -> Term:
    out = terms[0]
    for t in terms[1:]:
        out = Mul(out, t)
    return out


# ---- traversal ----

def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, IntLit):
        return set()
    if isinstance(t, Neg):
        return term_vars(t.arg)
    if isinstance(t, Pow):
        return term_vars(t.base)
    return term_vars(t.left) | term_vars(t.right)


def free_vars(phi: Formula) -> set[str]:
    if isinstance(phi, Eq):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, (Pn, PAS2)):
        return term_vars(phi.term)
    if isinstance(phi, Not):
        return free_vars(phi.arg)
    if isinstance(phi, (And, Or)):
        return free_vars(phi.left) | free_vars(phi.right)
    return free_vars(phi.body) - {phi.var}


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, ATOMS):
        return True
    if isinstance(phi, Not):
        return is_quantifier_free(phi.arg)
    if isinstance(phi, (And, Or)):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return False


def map_terms(phi: Formula, fn) -> Formula:
    """Apply fn to every maximal term of phi."""
    if isinstance(phi, Eq):
        return Eq(fn(phi.left), fn(phi.right))
    if isinstance(phi, Pn):
        return Pn(phi.n, fn(phi.term))
    if isinstance(phi, PAS2):
        return PAS2(fn(phi.term))
    if isinstance(phi, Not):
        return Not(map_terms(phi.arg, fn))
    if isinstance(phi, (And, Or)):
        return type(phi)(map_terms(phi.left, fn), map_terms(phi.right, fn))
    return type(phi)(phi.var, map_terms(phi.body, fn))


def rename_term(t: Term, mapping: dict[str, str]) -> Term:
    if isinstance(t, Var):
        return Var(mapping.get(t.name, t.name))
    if isinstance(t, IntLit):
        return IntLit(t.value)
    if isinstance(t, Neg):
        return Neg(rename_term(t.arg, mapping))
    if isinstance(t, Pow):
        return Pow(rename_term(t.base, mapping), t.exp)
    return type(t)(rename_term(t.left, mapping), rename_term(t.right, mapping))


def substitute_term(t: Term, mapping: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, IntLit):
        return t
    if isinstance(t, Neg):
        return Neg(substitute_term(t.arg, mapping))
    if isinstance(t, Pow):
        return Pow(substitute_term(t.base, mapping), t.exp)
    return type(t)(substitute_term(t.left, mapping), substitute_term(t.right, mapping))


def substitute(phi: Formula, mapping: dict[str, Term]) -> Formula:
    """Capture-naive substitution of free variables (bound names shadow)."""
    if isinstance(phi, QUANTIFIERS):
        inner = {k: v for k, v in mapping.items() if k != phi.var}
        return type(phi)(phi.var, substitute(phi.body, inner))
    if isinstance(phi, (Not, And, Or)):
        if isinstance(phi, Not):
            return Not(substitute(phi.arg, mapping))
        return type(phi)(substitute(phi.left, mapping), substitute(phi.right, mapping))
    return map_terms(phi, lambda t: substitute_term(t, mapping))


def substitute_as(phi: Formula) -> Formula:
    """Replace every PAS2(t) by P2(1 + 4*t)."""
    if isinstance(phi, PAS2):
        return Pn(2, Add(IntLit(1), Mul(IntLit(4), phi.term)))
    if isinstance(phi, (Eq, Pn)):
        return phi
    if isinstance(phi, Not):
        return Not(substitute_as(phi.arg))
    if isinstance(phi, (And, Or)):
        return type(phi)(substitute_as(phi.left), substitute_as(phi.right))
    return type(phi)(phi.var, substitute_as(phi.body))


# ---- sympy bridge ----

def to_sympy(t: Term) -> sympy.Expr:
    if isinstance(t, Var):
        return sympy.Symbol(t.name)
    if isinstance(t, IntLit):
        return sympy.Integer(t.value)
    if isinstance(t, Add):
        return to_sympy(t.left) + to_sympy(t.right)
    if isinstance(t, Sub):
        return to_sympy(t.left) - to_sympy(t.right)
    if isinstance(t, Mul):
        return to_sympy(t.left) * to_sympy(t.right)
    if isinstance(t, Neg):
        return -to_sympy(t.arg)
    return to_sympy(t.base) ** t.exp


def term_polynomial(t: Term, var: str) -> sympy.Poly:
    """t as a polynomial in var with coefficients in ZZ[other variables]."""
    expr = sympy.expand(to_sympy(t))
    return sympy.Poly(expr, sympy.Symbol(var))


def from_sympy(expr: sympy.Expr) -> Term:
    """Integer-coefficient polynomial expression back to a term (sum of monomials)."""
    expr = sympy.expand(expr)
    poly = sympy.Poly(expr, *sorted(expr.free_symbols, key=lambda s: s.name)) if expr.free_symbols else None
    if poly is None:
        return IntLit(int(expr))
    gens = [g.name for g in poly.gens]
    terms: list[Term] = []
    for monom, coeff in sorted(poly.terms(), key=lambda mc: mc[0]):
        factors: list[Term] = []
        for name, k in zip(gens, monom):
            if k == 1:
                factors.append(Var(name))
            elif k > 1:
                factors.append(Pow(Var(name), k))
        c = int(coeff)
        if not factors:
            terms.append(IntLit(c))
            continue
        body = mul(*factors)
        terms.append(body if c == 1 else Mul(IntLit(c), body))
    return add(*terms)
