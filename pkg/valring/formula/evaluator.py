"""Evaluation of formulas in a field.

eval_qf is exact on quantifier-free formulas. eval is three-valued: it answers True or False only
when certified (registered decider, exhaustive enumeration over a finite field, a found witness,
or a tautology) and Unknown otherwise.
"""

import itertools
import logging
from dataclasses import dataclass, field

import sympy
from pydantic import BaseModel

from ..config import settings
from ..errors import MissingBinding, NotExact, Unsupported, ValringError
from ..fields import Element, Field, FiniteField, HenselProblem, hensel_root
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
    free_vars,
    from_sympy,
    is_quantifier_free,
    to_sympy,
)
from .shapes import _flatten, decide_shape

logger = logging.getLogger("evaluator")

TRUE, FALSE, UNKNOWN = "true", "false", "unknown"


class StrategyConfig(BaseModel):
    depth: int = settings.search_depth
    vmax: int = settings.search_vmax
    use_deciders: bool = True
    max_enum: int = settings.max_enum


@dataclass
class EvalResult:
    verdict: str
    witnesses: dict[str, Element] = field(default_factory=dict)
    strategy_log: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witnesses": {k: v.owner.format_element(v) for k, v in self.witnesses.items()},
            "strategy": self.strategy_log,
        }


# ---- quantifier-free ----

def eval_term(t: Term, env: dict[str, Element], K: Field) -> Element:
    if isinstance(t, Var):
        if t.name not in env:
            raise MissingBinding(f"no value for {t.name}")
        return K.coerce(env[t.name])
    if isinstance(t, IntLit):
        return K.from_int(t.value)
    if isinstance(t, Add):
        return K.add(eval_term(t.left, env, K), eval_term(t.right, env, K))
    if isinstance(t, Sub):
        return K.sub(eval_term(t.left, env, K), eval_term(t.right, env, K))
    if isinstance(t, Mul):
        return K.mul(eval_term(t.left, env, K), eval_term(t.right, env, K))
    if isinstance(t, Neg):
        return K.neg(eval_term(t.arg, env, K))
    if isinstance(t, Pow):
        return K.pow(eval_term(t.base, env, K), t.exp)
    raise TypeError(f"not a term: {t!r}")


def _atom(phi: Formula, env: dict[str, Element], K: Field) -> bool:
    from ..predicates import is_artin_schreier, is_nth_power
    if isinstance(phi, Eq):
        d = K.sub(eval_term(phi.left, env, K), eval_term(phi.right, env, K))
        if not K.is_exact(d):
            if K.val_bound(d)[1]:
                return False
            raise NotExact("equality of inexact values")
        return K.is_zero(d)
    value = eval_term(phi.term, env, K)
    if isinstance(phi, Pn):
        return is_nth_power(value, phi.n).value
    return is_artin_schreier(value).value


def eval_qf(phi: Formula, env: dict[str, Element], K: Field, assume: frozenset = frozenset()) -> bool:
    """Truth value of a quantifier-free formula; atoms in `assume` count as true."""
    if isinstance(phi, (Eq, Pn, PAS2)):
        return True if phi in assume else _atom(phi, env, K)
    if isinstance(phi, Not):
        return not eval_qf(phi.arg, env, K, assume)
    if isinstance(phi, And):
        return eval_qf(phi.left, env, K, assume) and eval_qf(phi.right, env, K, assume)
    if isinstance(phi, Or):
        return eval_qf(phi.left, env, K, assume) or eval_qf(phi.right, env, K, assume)
    raise Unsupported("eval_qf needs a quantifier-free formula")


# ---- tautologies ----

def _tautology(phi: Formula) -> bool | None:
    """True/False when phi is constant as a polynomial identity, None otherwise."""
    if isinstance(phi, Eq):
        diff = sympy.expand(to_sympy(phi.left) - to_sympy(phi.right))
        if diff == 0:
            return True
        if diff.is_number:
            return False
        return None
    if isinstance(phi, Not):
        v = _tautology(phi.arg)
        return None if v is None else not v
    if isinstance(phi, (And, Or)):
        a, b = _tautology(phi.left), _tautology(phi.right)
        if isinstance(phi, And):
            if a is False or b is False:
                return False
            return True if a is True and b is True else None
        if a is True or b is True:
            return True
        return False if a is False and b is False else None
    if isinstance(phi, (Exists, Forall)):
        return _tautology(phi.body)
    return None


# ---- search ----

def _order(vmax: int):
    yield 0
    for v in range(1, vmax + 1):
        yield v
        yield -v


def candidates(K: Field, cfg: StrategyConfig):
    """0 first, then pi^v * (c_0 + c_1 pi + ...) with c_0 nonzero, v = 0, 1, -1, ..."""
    yield K.zero()
    pi = K.uniformizer()
    lifts = list(K.residue_lifts())
    units = [a for a in lifts if not K.is_zero(a)]
    powers = [K.pow(pi, i) for i in range(max(cfg.depth, 1))]
    for v in _order(cfg.vmax):
        scale = K.pow(pi, v) if v >= 0 else K.inv(K.pow(pi, -v))
        for head in units:
            for tail in itertools.product(lifts, repeat=max(cfg.depth, 1) - 1):
                a = head
                for c, pw in zip(tail, powers[1:]):
                    a = K.add(a, K.mul(c, pw))
                yield K.mul(a, scale)


def _polynomial_atom(body: Formula, var: str, env: dict[str, Element]):
    """First top-level conjunct f(var) = 0 with f nonconstant in var and every other variable bound."""
    for atom in _flatten(body, And):
        if not isinstance(atom, Eq):
            continue
        expr = sympy.expand(to_sympy(atom.left) - to_sympy(atom.right))
        sym = sympy.Symbol(var)
        if sym not in expr.free_symbols:
            continue
        if {s.name for s in expr.free_symbols} - {var} - set(env):
            continue
        return atom, sympy.Poly(expr, sym)
    return None


def _hensel_candidate(poly: sympy.Poly, approx: Element, env: dict[str, Element], K: Field) -> Element | None:
    coeffs = [eval_term(from_sympy(c), env, K) for c in reversed(poly.all_coeffs())]
    prob = HenselProblem(tuple(coeffs), approx)
    try:
        if not prob.admissible():
            return None
        return hensel_root(prob)
    except ValringError:
        return None


class _Evaluator:
    def __init__(self, K: Field, cfg: StrategyConfig):
        self.K = K
        self.cfg = cfg
        self.log: list[str] = []

    def note(self, tag: str) -> None:
        if tag not in self.log:
            self.log.append(tag)

    def run(self, phi: Formula, env: dict[str, Element], assume: frozenset = frozenset()):
        """(verdict, witnesses) with verdict in TRUE / FALSE / UNKNOWN."""
        K = self.K
        if self.cfg.use_deciders and not isinstance(phi, (Eq, Pn, PAS2)):
            found = decide_shape(phi, env, K)
            if found is not None:
                name, (verdict, witnesses) = found
                self.note(f"decider:{name}")
                return (TRUE if verdict else FALSE), (witnesses if verdict else {})
        if is_quantifier_free(phi):
            try:
                self.note("qf")
                return (TRUE if eval_qf(phi, env, K, assume) else FALSE), {}
            except NotExact:
                return UNKNOWN, {}
        if isinstance(phi, Not):
            verdict, _ = self.run(phi.arg, env, assume)
            return {TRUE: FALSE, FALSE: TRUE}.get(verdict, UNKNOWN), {}
        if isinstance(phi, (And, Or)):
            return self._connective(phi, env, assume)
        if isinstance(K, FiniteField) and K.q <= self.cfg.max_enum:
            return self._enumerate(phi, env, assume)
        if isinstance(phi, Exists):
            return self._exists(phi, env, assume)
        return self._forall(phi, env, assume)

    def _connective(self, phi, env, assume):
        a, wa = self.run(phi.left, env, assume)
        is_and = isinstance(phi, And)
        stop = FALSE if is_and else TRUE
        if a == stop:
            return a, wa
        b, wb = self.run(phi.right, env, assume)
        if b == stop:
            return b, wb
        if a == b:
            return a, ({**wa, **wb} if a == TRUE else {})
        return UNKNOWN, {}

    def _enumerate(self, phi, env, assume):
        self.note("enumeration")
        want = TRUE if isinstance(phi, Exists) else FALSE
        unknown = False
        for a in self.K.elements():
            verdict, witnesses = self.run(phi.body, {**env, phi.var: a}, assume)
            if verdict == want:
                if want == TRUE:
                    return TRUE, {phi.var: a, **witnesses}
                return FALSE, {}
            unknown = unknown or verdict == UNKNOWN
        if unknown:
            return UNKNOWN, {}
        return (FALSE if want == TRUE else TRUE), {}

    def _exists(self, phi: Exists, env, assume):
        K = self.K
        taut = _tautology(phi.body)
        if taut is not None:
            self.note("tautology")
            return (TRUE, {phi.var: K.zero()}) if taut else (FALSE, {})
        self.note("search")
        root_atom = _polynomial_atom(phi.body, phi.var, env)
        for a in candidates(K, self.cfg):
            inner = {**env, phi.var: a}
            verdict, witnesses = self.run(phi.body, inner, assume)
            if verdict == TRUE:
                return TRUE, {phi.var: a, **witnesses}
            if root_atom is None:
                continue
            atom, poly = root_atom
            try:
                root = _hensel_candidate(poly, a, env, K)
            except (MissingBinding, NotExact):
                root = None
            if root is None:
                continue
            verdict, witnesses = self.run(phi.body, {**env, phi.var: root}, assume | {atom})
            if verdict == TRUE:
                self.note("hensel")
                return TRUE, {phi.var: root, **witnesses}
        return UNKNOWN, {}

    def _forall(self, phi: Forall, env, assume):
        taut = _tautology(phi.body)
        if taut is not None:
            self.note("tautology")
            return (TRUE if taut else FALSE), {}
        self.note("negation")
        verdict, _ = self.run(Exists(phi.var, Not(phi.body)), env, assume)
        return {TRUE: FALSE, FALSE: TRUE}.get(verdict, UNKNOWN), {}


def evaluate(phi: Formula, env: dict[str, Element], K: Field, strategy: StrategyConfig | None = None) -> EvalResult:
    cfg = strategy or StrategyConfig()
    missing = free_vars(phi) - set(env)
    if missing:
        raise MissingBinding(f"no value for {', '.join(sorted(missing))}")
    ev = _Evaluator(K, cfg)
    try:
        verdict, witnesses = ev.run(phi, env)
    except ValringError as exc:
        logger.info("evaluator: giving up: %s", exc.detail)
        verdict, witnesses = UNKNOWN, {}
    if verdict != TRUE:
        witnesses = {}
    logger.debug("evaluator: %s via %s", verdict, ",".join(ev.log))
    return EvalResult(verdict, witnesses, ev.log)
