import logging
import math
import random
from fractions import Fraction
from functools import cached_property
from typing import Callable

from .errors import (
    BadParameter,
    BaseSetInapplicable,
    InsufficientPrecision,
    InvariantViolation,
    NotExact,
    NotUnit,
    SEllUndecided,
    Unsupported,
)
from .fields import INF, Element, Field, FiniteField, HenselProblem, LaurentField, PadicField, hensel_root, ord_p

logger = logging.getLogger("predicates")

MAX_POWER = 64
# exponents above this are taken modulo pi^precision instead of exactly
EXACT_POWER_LIMIT = 4096


class PredicateVerdict:
    """value/reason plus an optional witness, computed on first access."""

    def __init__(self, value: bool, reason: str, witness: Element | Callable[[], Element] | None = None,
                 detail: dict | None = None):
        self.value = bool(value)
        self.reason = reason
        self._witness = witness
        self.detail = detail or {}

    @cached_property
    def witness(self) -> Element | None:
        if callable(self._witness):
            return self._witness()
        return self._witness

    def __bool__(self) -> bool:
        return self.value

    def __repr__(self) -> str:
        return f"PredicateVerdict({self.value}, {self.reason!r})"

    def to_dict(self, with_witness: bool = False) -> dict:
        out = {"value": self.value, "reason": self.reason, **self.detail}
        if with_witness and self.witness is not None:
            out["witness"] = str(self.witness)
        return out


def power_truncated(K: Field, x: Element, n: int, digits: int | None = None) -> Element:
    """x^n; exact for small n, otherwise square-and-multiply modulo pi^digits (x integral)."""
    if n <= EXACT_POWER_LIMIT or isinstance(K, FiniteField):
        return K.pow(x, n)
    digits = K.precision if digits is None else digits
    result = K.one()
    base = K.truncate(x, digits)
    while n:
        if n & 1:
            result = K.truncate(K.mul(result, base), digits)
        n >>= 1
        if n:
            base = K.truncate(K.mul(base, base), digits)
    return result


def t_applicable(k: FiniteField) -> bool:
    """T needs non-cubes when the residue characteristic is 2."""
    return not (k.p == 2 and math.gcd(k.q - 1, 3) == 1)


# ---- P_n ----

def is_nth_power(x: Element, n: int) -> PredicateVerdict:
    if n < 2:
        raise BadParameter(f"n must be at least 2, got {n}")
    if n > MAX_POWER:
        raise Unsupported(f"n = {n} exceeds {MAX_POWER}")
    K = x.owner
    if isinstance(K, FiniteField):
        return _finite_power(K, x, n)
    if K.is_zero(x):
        return PredicateVerdict(False, "zero")
    if isinstance(K, LaurentField):
        return _laurent_power(K, x, n)
    return _padic_power(K, x, n)


def _finite_power(K: FiniteField, x, n: int) -> PredicateVerdict:
    if x.value == 0:
        return PredicateVerdict(False, "zero")
    if not K.is_power_int(x.value, n):
        return PredicateVerdict(False, "residue")
    return PredicateVerdict(True, "residue", lambda: K.element(K.root_int(x.value, n)))


def _padic_power(K: PadicField, x, n: int) -> PredicateVerdict:
    e = K.e
    try:
        v = int(K.val(x) * e)
    except InsufficientPrecision as exc:
        raise NotExact(str(exc.detail)) from exc
    if v % n:
        return PredicateVerdict(False, "valuation")
    pi = K.uniformizer()
    u = K.div(x, K.pow(pi, v))
    m = 2 * e * ord_p(n, K.p) + 1
    if K.known_precision(u) < m:
        raise NotExact(f"unit part known to {K.known_precision(u)} digits, {m} needed")

    def close(a, level: int) -> bool:
        diff = K.sub(power_truncated(K, a, n, m), u)
        return K.val_bound(diff)[0] * e >= level

    lifts = list(K.residue_lifts())
    survivors = [a for a in lifts[1:] if close(a, 1)]
    level = 1
    while level < m and survivors:
        step = K.pow(pi, level)
        nxt = []
        for a in survivors:
            for c in lifts:
                b = K.add(a, K.mul(c, step))
                if close(b, level + 1):
                    nxt.append(b)
        survivors = nxt
        level += 1
    if not survivors:
        return PredicateVerdict(False, "unit-search", detail={"digits": m})
    approx = survivors[0]

    def witness():
        poly = (K.neg(K.representative(u)),) + (K.zero(),) * (n - 1) + (K.one(),)
        root = hensel_root(HenselProblem(poly, approx))
        return K.mul(root, K.pow(pi, v // n))

    return PredicateVerdict(True, "hensel", witness, detail={"digits": m})


def _laurent_power(K: LaurentField, x, n: int) -> PredicateVerdict:
    p, k = K.p, K.residue_field
    j, tame = 0, n
    while tame % p == 0:
        tame //= p
        j += 1
    if j and not K.is_exact(x):
        raise NotExact("p-th power test needs every coefficient")
    try:
        K.val(x)
    except InsufficientPrecision as exc:
        raise NotExact(str(exc.detail)) from exc
    w = x
    if j:
        if any(exp % p ** j for exp in K.terms(x)):
            return PredicateVerdict(False, "support")
        w = K.frobenius_root(x, j)
    if tame == 1:
        return PredicateVerdict(True, "frobenius", w)
    v = int(K.val(w))
    if v % tame:
        return PredicateVerdict(False, "valuation")
    c = w.coeffs[0]
    if not k.is_power_int(c, tame):
        return PredicateVerdict(False, "residue")

    def witness():
        lead = K.monomial(c, v)
        u = K.div(w, lead)
        poly = (K.neg(K.representative(u)),) + (K.zero(),) * (tame - 1) + (K.one(),)
        root = hensel_root(HenselProblem(poly, K.one()))
        return K.mul(K.monomial(k.root_int(c, tame), v // tame), root)

    return PredicateVerdict(True, "hensel", witness)


# ---- P_2^AS ----

def is_artin_schreier(x: Element) -> PredicateVerdict:
    K = x.owner
    if isinstance(K, FiniteField):
        y = K.artin_schreier_table.get(x.value)
        if y is None:
            return PredicateVerdict(False, "residue")
        return PredicateVerdict(True, "residue", K.element(y))
    if K.characteristic != 2:
        return _artin_schreier_odd(K, x)
    return _artin_schreier_char2(K, x)


def _artin_schreier_odd(K: Field, x) -> PredicateVerdict:
    # x = y^2 + y  <=>  1 + 4x = (2y + 1)^2
    d = K.add(K.one(), K.mul(K.from_int(4), x))
    if K.is_zero(d):
        return PredicateVerdict(True, "double-root", K.div(K.from_int(-1), K.from_int(2)))
    square = is_nth_power(d, 2)
    if not square:
        return PredicateVerdict(False, f"discriminant-{square.reason}")
    return PredicateVerdict(
        True, "discriminant", lambda: K.div(K.sub(square.witness, K.one()), K.from_int(2))
    )


def _artin_schreier_char2(K: LaurentField, x) -> PredicateVerdict:
    k = K.residue_field
    cur = x
    acc = K.zero()
    while True:
        v, certain = K.val_bound(cur)
        if not certain or v >= 0:
            break
        v = int(v)
        if v % 2:
            return PredicateVerdict(False, "odd-pole")
        d = k.frobenius_root_int(cur.coeffs[0], 1)
        term = K.monomial(d, v // 2)
        cur = K.sub(cur, K.add(K.mul(term, term), term))
        acc = K.add(acc, term)
    if K.known_precision(cur) <= 0:
        raise NotExact("residue of the reduced element is unknown")
    r = K.residue(cur)
    y0 = k.artin_schreier_table.get(r.value)
    if y0 is None:
        return PredicateVerdict(False, "residue-trace")

    def witness():
        poly = (K.neg(K.representative(cur)), K.one(), K.one())
        root = hensel_root(HenselProblem(poly, K.monomial(y0, 0)))
        return K.add(acc, root)

    return PredicateVerdict(True, "hensel", witness)


# ---- T_p, T, T+ ----

def in_T_p(x: Element, p: int) -> PredicateVerdict:
    if p not in (2, 3):
        raise BadParameter(f"T_p is defined for p in {{2, 3}}, got {p}")
    K = x.owner
    shifted = is_nth_power(K.add(K.from_int(p ** p), x), p)
    if not shifted:
        return PredicateVerdict(False, f"shift-not-P{p}")
    if is_nth_power(x, p):
        return PredicateVerdict(False, f"in-P{p}")
    return PredicateVerdict(True, f"T{p}", lambda: shifted.witness, detail={"disjunct": f"T{p}"})


def in_T(x: Element) -> PredicateVerdict:
    t2 = in_T_p(x, 2)
    if t2:
        return t2
    t3 = in_T_p(x, 3)
    if t3:
        return t3
    return PredicateVerdict(False, "neither", detail={"T2": t2.reason, "T3": t3.reason})


def in_T_plus(x: Element) -> PredicateVerdict:
    K = x.owner
    if K.is_zero(x):
        return PredicateVerdict(False, "zero")
    if is_artin_schreier(x):
        return PredicateVerdict(False, "x-in-AS")
    if is_artin_schreier(K.inv(x)):
        return PredicateVerdict(False, "inverse-in-AS")
    return PredicateVerdict(True, "Tplus")


BASES: dict[str, Callable[[Element], PredicateVerdict]] = {"T": in_T, "Tplus": in_T_plus}


def base_member(name: str, x: Element) -> PredicateVerdict:
    if name not in BASES:
        raise BadParameter(f"unknown base set {name!r}")
    return BASES[name](x)


# ---- S_ell ----

def _check_ell(K: Field, ell: int) -> None:
    q = K.residue_field.q
    if ell <= 0 or ell % (q * (q - 1)):
        raise BadParameter(f"ell = {ell} is not a positive multiple of q(q-1) = {q * (q - 1)}")


def s_ell_witness(y: Element, ell: int, base: str = "T") -> tuple[Element, dict]:
    """a in base with y^ell - 1 + a in base, for a unit y."""
    K = y.owner
    if K.val_bound(y) != (0, True):
        raise NotUnit(f"{K.format_element(y)} is not a unit")
    _check_ell(K, ell)
    k = K.residue_field
    shift = K.sub(power_truncated(K, y, ell), K.one())
    if base == "T":
        if not t_applicable(k):
            raise BaseSetInapplicable(f"every element of F_{k.q} is a cube")
        a = K.uniformizer()
    elif base == "Tplus":
        a = None
        for c in k.elements():
            if c.value and in_T_plus(K.lift(c)):
                a = K.lift(c)
                break
        if a is None:
            raise BaseSetInapplicable(f"T+ of F_{k.q} is empty")
    else:
        raise BadParameter(f"unknown base set {base!r}")
    shift_val, _ = K.val_bound(shift)
    if shift_val * K.e < 2:
        raise InvariantViolation(f"val(y^ell - 1) = {shift_val} is below 2/e")
    if K.val(a) > shift_val - Fraction(1, K.e):
        raise InvariantViolation("witness valuation bound violated")
    z = K.add(shift, a)
    if not base_member(base, a) or not base_member(base, z):
        raise InvariantViolation(f"S_ell witness failed to re-verify in {base}")
    cert = {
        "base": base,
        "a": K.format_element(a),
        "ell": ell,
        "val_shift": str(shift_val) if shift_val != INF else "inf",
    }
    return a, cert


def s_ell_member(y: Element, ell: int, base: str = "T") -> PredicateVerdict:
    K = y.owner
    v, certain = K.val_bound(y)
    if not certain:
        raise NotExact("valuation of y is unknown")
    if v < 0:
        # y^ell - 1 + a has negative valuation while base sets sit inside O_K
        return PredicateVerdict(False, "negative-valuation")
    if v > 0:
        raise SEllUndecided("S_ell membership is not decided for elements of positive valuation")
    a, cert = s_ell_witness(y, ell, base)
    return PredicateVerdict(True, "witness", a, detail=cert)


# ---- supplementary checks ----

def square_shift_invariance(x: Element, p: int = 2) -> bool:
    """x in P_p iff x + p^p in P_p, for val(x) < 0."""
    K = x.owner
    if not K.val(x) < 0:
        raise BadParameter("square_shift_invariance needs val(x) < 0")
    return bool(is_nth_power(x, p)) == bool(is_nth_power(K.add(x, K.from_int(p ** p)), p))


def ball_in_base(a: Element, base: str, samples: int = 20, rng: random.Random | None = None) -> tuple[bool, list[str]]:
    """Spot-check a + a*M_K inside the base set."""
    K = a.owner
    rng = rng or random.Random(0)
    failures = []
    for _ in range(samples):
        m = K.random_element(rng, 1, 4)
        point = K.add(a, K.mul(a, m))
        if not base_member(base, point):
            failures.append(K.format_element(point))
    if failures:
        logger.info("predicates: %d ball points left %s", len(failures), base)
    return not failures, failures
