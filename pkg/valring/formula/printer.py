from .ast import PAS2, Add, And, Eq, Exists, Forall, Formula, IntLit, Mul, Neg, Not, Or, Pn, Pow, Sub, Term, Var

# term levels: sum 1, product 2, unary minus 3, power 4, atom 5
# formula levels: quantifier 0, disjunction 1, conjunction 2, literal 3


def _term_level(t: Term) -> int:
    if isinstance(t, (Add, Sub)):
        return 1
    if isinstance(t, Mul):
        return 2
    if isinstance(t, Neg):
        return 3
    if isinstance(t, Pow):
        return 4
    if isinstance(t, IntLit) and t.value < 0:
        return 3
    return 5


def _t(t: Term, need: int) -> str:
    text = print_term(t)
    return f"({text})" if _term_level(t) < need else text


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, IntLit):
        return str(t.value)
    if isinstance(t, Add):
        return f"{_t(t.left, 1)} + {_t(t.right, 2)}"
    if isinstance(t, Sub):
        return f"{_t(t.left, 1)} - {_t(t.right, 2)}"
    if isinstance(t, Mul):
        return f"{_t(t.left, 2)}*{_t(t.right, 3)}"
    if isinstance(t, Neg):
        if isinstance(t.arg, IntLit) and t.arg.value >= 0:
            # "-3" would read back as a literal
            return f"-({t.arg.value})"
        return f"-{_t(t.arg, 3)}"
    if isinstance(t, Pow):
        return f"{_t(t.base, 5)}^{t.exp}"
    raise TypeError(f"not a term: {t!r}")


def _formula_level(phi: Formula) -> int:
    if isinstance(phi, (Exists, Forall)):
        return 0
    if isinstance(phi, Or):
        return 1
    if isinstance(phi, And):
        return 2
    return 3


def _f(phi: Formula, need: int) -> str:
    text = print_formula(phi)
    return f"({text})" if _formula_level(phi) < need else text


def print_formula(phi: Formula) -> str:
    if isinstance(phi, Eq):
        return f"{print_term(phi.left)} = {print_term(phi.right)}"
    if isinstance(phi, Pn):
        return f"P{phi.n}({print_term(phi.term)})"
    if isinstance(phi, PAS2):
        return f"PAS2({print_term(phi.term)})"
    if isinstance(phi, Not):
        return f"!{_f(phi.arg, 3)}"
    if isinstance(phi, And):
        return f"{_f(phi.left, 2)} & {_f(phi.right, 3)}"
    if isinstance(phi, Or):
        return f"{_f(phi.left, 1)} | {_f(phi.right, 2)}"
    if isinstance(phi, (Exists, Forall)):
        q = "E" if isinstance(phi, Exists) else "A"
        body = phi.body
        inner = print_formula(body) if isinstance(body, (Exists, Forall)) else f"({print_formula(body)})"
        return f"{q} {phi.var} {inner}"
    raise TypeError(f"not a formula: {phi!r}")


def to_text(node) -> str:
    return print_term(node) if isinstance(node, Term) else print_formula(node)
