"""Defining formulas for the valuation ring of a fixed finite extension of Q_p.

The extension is L(pi) with L = Q_p(gamma) unramified of degree f (gamma a root of G) and pi a root
of x^e + H*_{e-1}(gamma) x^(e-1) + ... + H*_0(gamma). Roots y of H*_z with G(z) = 0 are uniformizers,
and for k = 2 (p != 2) or k = 3 (p = 2):

    O_K = {x : E z E y E w (G(z) = 0 & H*_z(y) = 0 & 1 + y x^k = w^k)}

The universal formula says x is not the inverse of y*o with o in O_K, i.e. of a nonzero element of M_K.
"""

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from ..config import settings
from ..errors import InvalidPlan, NotEisenstein, NotIrreducible, ValringError
from ..fields import Element, PadicField, find_roots, poly_eval
from ..fields.finite import is_irreducible_mod_p
from ..fields.padic import default_generator
from ..formula.ast import (
    Add,
    Eq,
    Formula,
    IntLit,
    Mul,
    Not,
    Pow,
    Var,
    conj,
    exists,
    forall,
    from_sympy,
    mul,
)
from .membership import oracle_OK

logger = logging.getLogger("valdef")

Z, Y = sympy.symbols("z y")


@dataclass(frozen=True)
class ExtensionPlan:
    p: int
    f: int
    e: int
    G: tuple[int, ...]
    hstar: tuple[tuple[Fraction, ...], ...]

    @property
    def which_power(self) -> int:
        return 2 if self.p != 2 else 3

    def to_dict(self) -> dict:
        return {
            "p": self.p, "f": self.f, "e": self.e, "G": list(self.G),
            "Hstar": [[str(c) for c in h] for h in self.hstar], "power": self.which_power,
        }


def make_plan(p: int, f: int = 1, e: int = 1, G: Sequence[int] | None = None,
              hstar: Sequence[Sequence] | None = None) -> ExtensionPlan:
    """Plan with defaults: G = z - 1 for f = 1 (else the canonical generator), H* = x^e - p."""
    if G is None:
        G = (-1, 1) if f == 1 else default_generator(p, f)
    if hstar is None:
        hstar = [(-p,)] + [(0,)] * (e - 1)
    hs = tuple(tuple(Fraction(c) for c in (h if isinstance(h, (list, tuple)) else (h,))) for h in hstar)
    return ExtensionPlan(int(p), int(f), int(e), tuple(int(c) for c in G), hs)


def plan_for_field(K: PadicField) -> ExtensionPlan:
    return ExtensionPlan(K.p, K.f, K.e, K.G, K.hstar[: K.e])


def field_for_plan(plan: ExtensionPlan, precision: int | None = None) -> PadicField:
    return PadicField(plan.p, plan.f, plan.G, list(plan.hstar) + [(Fraction(1),)], precision)


def _unramified(plan: ExtensionPlan) -> PadicField:
    return PadicField(plan.p, plan.f, plan.G)


def _eval_h(K: PadicField, h: Sequence[Fraction], gamma: Element) -> Element:
    """H*_j(gamma); constants stay exact even when gamma is a Hensel approximation."""
    if not any(h[1:]):
        return K.from_fraction(h[0]) if h else K.zero()
    return poly_eval([K.from_fraction(c) for c in h], gamma)


def validate_plan(plan: ExtensionPlan) -> PadicField:
    """Checks G and that H*_gamma' is Eisenstein at every root gamma' of G; returns the field."""
    if not sympy.isprime(plan.p):
        raise InvalidPlan(f"{plan.p} is not prime")
    if plan.f < 1 or plan.e < 1:
        raise InvalidPlan("degrees must be positive")
    if len(plan.G) != plan.f + 1 or plan.G[-1] != 1:
        raise InvalidPlan(f"G = {list(plan.G)} is not monic of degree {plan.f}")
    if not is_irreducible_mod_p(plan.G, plan.p):
        raise InvalidPlan(f"G = {list(plan.G)} is reducible modulo {plan.p}")
    if len(plan.hstar) != plan.e:
        raise InvalidPlan(f"expected {plan.e} coefficients H*_0..H*_(e-1), got {len(plan.hstar)}")
    if plan.which_power == plan.p:
        raise InvalidPlan("the power in the formula must avoid the residue characteristic")
    L = _unramified(plan)
    roots = find_roots([L.from_int(c) for c in plan.G], L)
    if len(roots) != plan.f:
        raise InvalidPlan(f"G has {len(roots)} roots in the unramified field, expected {plan.f}")
    for gamma in roots:
        for j, h in enumerate(plan.hstar):
            c = _eval_h(L, h, gamma)
            v = L.val_bound(c)[0]
            if (j == 0 and v != 1) or (j > 0 and v < 1):
                raise InvalidPlan(f"H*_{j} has valuation {v} at the root {L.format_element(gamma)}")
    try:
        return field_for_plan(plan)
    except (NotEisenstein, NotIrreducible) as exc:
        raise InvalidPlan(exc.detail) from exc


def _g_expr(plan: ExtensionPlan):
    return sum(c * Z ** i for i, c in enumerate(plan.G))


def _h_expr(plan: ExtensionPlan):
    """D * H*_z(y) with D clearing denominators."""
    denom = 1
    for h in plan.hstar:
        for c in h:
            denom = math.lcm(denom, Fraction(c).denominator)
    expr = Y ** plan.e
    for j, h in enumerate(plan.hstar):
        expr += sum(sympy.Rational(c.numerator, c.denominator) * Z ** i for i, c in enumerate(h)) * Y ** j
    return sympy.expand(denom * expr)


def _atoms(plan: ExtensionPlan) -> tuple[Formula, Formula]:
    return Eq(from_sympy(_g_expr(plan)), IntLit(0)), Eq(from_sympy(_h_expr(plan)), IntLit(0))


def _power_eq(target: str, k: int) -> Formula:
    return Eq(Add(IntLit(1), Mul(Var("y"), Pow(Var(target), k))), Pow(Var("w"), k))


def build_extension_formula(plan: ExtensionPlan) -> tuple[Formula, Formula]:
    """(existential, universal) formulas in x defining O_K."""
    validate_plan(plan)
    g, h = _atoms(plan)
    k = plan.which_power
    existential = exists(["z", "y", "w"], conj(g, h, _power_eq("x", k)))
    inverse = Eq(mul(Var("x"), Var("y"), Var("o")), IntLit(1))
    universal = forall(["z", "y", "o", "w"], Not(conj(g, h, _power_eq("o", k), inverse)))
    return existential, universal


def maximal_ideal_formula(plan: ExtensionPlan) -> Formula:
    """x = y*o with y a uniformizer from the plan and o in O_K."""
    validate_plan(plan)
    g, h = _atoms(plan)
    link = Eq(Var("x"), mul(Var("y"), Var("o")))
    return exists(["z", "y", "o", "w"], conj(g, h, _power_eq("o", plan.which_power), link))


def hstar_at(plan: ExtensionPlan, K: PadicField, gamma: Element) -> list[Element]:
    """The monic polynomial H*_gamma(y), low-to-high."""
    return [_eval_h(K, h, gamma) for h in plan.hstar] + [K.one()]


def uniformizer_set(plan: ExtensionPlan, K: PadicField) -> list[Element]:
    """Every y with G(z) = 0 and H*_z(y) = 0 for some z in K; each must have valuation 1/e."""
    out = []
    G = [K.from_int(c) for c in plan.G]
    for gamma in find_roots(G, K):
        for y in find_roots(hstar_at(plan, K, gamma), K):
            if K.val_bound(y)[0] != Fraction(1, plan.e):
                raise InvalidPlan(f"root {K.format_element(y)} of H* is not a uniformizer")
            out.append(y)
    return out


def verify_extension_formula(plan: ExtensionPlan, K: PadicField, samples: int = 200, seed: int | None = None) -> dict:
    """Evaluate both formulas on random exact elements against val >= 0."""
    from ..formula.evaluator import UNKNOWN, evaluate

    existential, universal = build_extension_formula(plan)
    rng = random.Random(settings.seed if seed is None else seed)
    e = plan.e
    report = {"samples": samples, "agree_existential": 0, "agree_universal": 0, "unknown": 0, "failures": []}
    for _ in range(samples):
        x = K.random_element(rng, -4 * e, 4 * e)
        truth = oracle_OK(x)
        for name, phi in (("existential", existential), ("universal", universal)):
            try:
                result = evaluate(phi, {"x": x}, K)
            except ValringError as exc:
                report["failures"].append({"x": K.format_element(x), "formula": name, "error": exc.code})
                continue
            if result.verdict == UNKNOWN:
                report["unknown"] += 1
                report["failures"].append({"x": K.format_element(x), "formula": name, "verdict": "unknown"})
            elif (result.verdict == "true") == truth:
                report[f"agree_{name}"] += 1
            else:
                report["failures"].append({"x": K.format_element(x), "formula": name, "verdict": result.verdict})
    report["ok"] = not report["failures"]
    logger.info("valdef: extension formula check %d/%d/%d of %d", report["agree_existential"],
                report["agree_universal"], report["unknown"], samples)
    return report
