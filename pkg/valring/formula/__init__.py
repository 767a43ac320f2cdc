from .ast import (
    PAS2,
    Add,
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    IntLit,
    Mul,
    Neg,
    Not,
    Or,
    Pn,
    Pow,
    Sub,
    Term,
    Var,
    conj,
    disj,
    exists,
    forall,
    free_vars,
    substitute,
    substitute_as,
)
from .evaluator import EvalResult, StrategyConfig, eval_qf, eval_term, evaluate
from .parser import parse, parse_term
from .printer import print_formula, print_term, to_text
from .shapes import canonical, canonical_text, match_shape

__all__ = [
    "PAS2", "Add", "And", "Eq", "Exists", "Forall", "Formula", "IntLit", "Mul", "Neg", "Not", "Or", "Pn",
    "Pow", "Sub", "Term", "Var", "conj", "disj", "exists", "forall", "free_vars", "substitute",
    "substitute_as", "EvalResult", "StrategyConfig", "eval_qf", "eval_term", "evaluate", "parse",
    "parse_term", "print_formula", "print_term", "to_text", "canonical", "canonical_text", "match_shape",
]
