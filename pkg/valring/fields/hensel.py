import logging
from dataclasses import dataclass
from typing import Sequence

from ..errors import CriterionFails, InsufficientPrecision, NotValuedField
from .base import INF, Element, Field

logger = logging.getLogger("fields")

MAX_NEWTON_STEPS = 64


def poly_eval(poly: Sequence[Element], x: Element) -> Element:
    """Horner; poly is low-to-high."""
    K = x.owner
    acc = K.zero()
    for c in reversed(poly):
        acc = K.add(K.mul(acc, x), c)
    return acc


def poly_derivative(poly: Sequence[Element]) -> list[Element]:
    if len(poly) <= 1:
        return [poly[0].owner.zero()] if poly else []
    K = poly[0].owner
    return [K.mul(K.from_int(i), c) for i, c in enumerate(poly) if i > 0]


def as_poly(K: Field, coeffs: Sequence) -> list[Element]:
    return [K.coerce(c) for c in coeffs]


@dataclass(frozen=True)
class HenselProblem:
    poly: tuple
    approx: Element

    @property
    def field(self) -> Field:
        return self.approx.owner

    def criterion(self) -> tuple:
        """(val f(a), val f'(a)) at the approximation."""
        K = self.field
        fa = poly_eval(self.poly, self.approx)
        dfa = poly_eval(poly_derivative(list(self.poly)), self.approx)
        return K.val_bound(fa)[0], K.val_bound(dfa)[0]

    def admissible(self) -> bool:
        vf, vd = self.criterion()
        return vf == INF or (vd != INF and vf > 2 * vd)


def hensel_root(prob: HenselProblem, precision: int | None = None) -> Element:
    """Newton iteration from prob.approx.

    The result carries known_precision kp = e*(val f(r) - val f'(a)) pi-digits, i.e. the true
    root agrees with r modulo pi^kp; an exact root is returned exact.
    """
    K = prob.field
    if not K.is_valued:
        raise NotValuedField("Hensel lifting needs a valued field")
    poly = [K.coerce(c) for c in prob.poly]
    dpoly = poly_derivative(poly)
    a = K.representative(prob.approx)
    fa = poly_eval(poly, a)
    if K.is_zero(fa):
        return a
    vf = K.val(fa)
    dfa = poly_eval(dpoly, a)
    if K.is_zero(dfa):
        raise CriterionFails("f'(a) = 0")
    vd = K.val(dfa)
    if not vf > 2 * vd:
        raise CriterionFails(f"val f(a) = {vf} is not > 2 val f'(a) = {2 * vd}")
    e = K.e
    target = K.precision if precision is None else precision
    need = target + int(e * vd)
    # working digits: enough headroom for the derivative's valuation
    work = need + int(e * abs(vd)) + 2
    r = a
    for step in range(MAX_NEWTON_STEPS):
        fr = poly_eval(poly, r)
        if K.is_zero(fr):
            logger.debug("fields: exact Hensel root after %d steps", step)
            return r
        vfr = K.val(fr)
        if e * vfr >= need:
            kp = int(e * (vfr - vd))
            return K.truncate(r, kp)
        dfr = poly_eval(dpoly, r)
        delta = K.representative(K.truncate(K.div(fr, dfr), work))
        r = K.representative(K.truncate(K.sub(r, delta), work))
    raise InsufficientPrecision(f"Newton iteration did not reach {target} digits")


def deflate(poly: Sequence[Element], a: Element) -> list[Element]:
    """Quotient of poly by (y - a), low-to-high; a must be a root."""
    K = a.owner
    n = len(poly) - 1
    out = [K.zero()] * n
    acc = K.zero()
    for i in range(n, 0, -1):
        acc = K.add(K.mul(acc, a), poly[i])
        out[i - 1] = acc
    return out


def _same_root(K: Field, r: Element, s: Element) -> bool:
    return K.is_exact(r) and K.is_exact(s) and K.is_zero(K.sub(r, s))


def find_roots(poly: Sequence, K: Field, depth: int | None = None) -> list[Element]:
    """Roots in O_K of a polynomial with integral coefficients.

    Residue-digit tree search: a ball a + pi^k O_K is kept only if e*val f(a) >= k, and closed
    once Hensel's criterion certifies a unique root inside it. An exact root a is recorded and
    the ball is searched again for the roots of f / (y - a).
    """
    poly = [K.coerce(c) for c in poly]
    depth = depth if depth is not None else 8 * K.e + 8
    pi = K.uniformizer()
    lifts = list(K.residue_lifts())
    roots: list[Element] = []
    frontier = [(poly, K.zero(), 0)]
    while frontier:
        f, a, k = frontier.pop(0)
        if len(f) < 2:
            continue
        fa = poly_eval(f, a)
        if K.is_zero(fa):
            roots.append(a)
            frontier.append((deflate(f, a), a, k))
            continue
        va = K.val(fa)
        if K.e * va < k:
            continue
        if k > 0:
            dfa = poly_eval(poly_derivative(f), a)
            if not K.is_zero(dfa):
                vd = K.val(dfa)
                if va > 2 * vd and k > K.e * vd:
                    roots.append(hensel_root(HenselProblem(tuple(f), a)))
                    continue
        if k >= depth:
            logger.debug("fields: root search abandoned a ball at depth %d", k)
            continue
        step = K.pow(pi, k)
        for c in lifts:
            frontier.append((f, K.add(a, K.mul(c, step)), k + 1))
    unique: list[Element] = []
    for r in roots:
        if not any(_same_root(K, r, s) for s in unique):
            unique.append(r)
    return unique
