import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..config import settings
from ..errors import DivisionByZero, FieldMismatch, InsufficientPrecision, MalformedDescriptor, NotIntegral
from .base import INF, Element, Field
from .finite import FiniteField


@dataclass(frozen=True, eq=True)
class LaurentElement(Element):
    """sum coeffs[i] t^(lead_exp + i); known_to is the exclusive t-exponent bound of certified
    digits (None for an exact Laurent polynomial). Coefficients are residue-field encodings."""

    owner: "LaurentField"
    lead_exp: int
    coeffs: tuple[int, ...]
    known_to: int | None = None

    def __repr__(self) -> str:
        return f"LaurentElement({self.owner.format_element(self)!r} in {self.owner.descriptor})"


def _min_bound(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class LaurentField(Field):
    kind = "laurent"

    def __init__(self, residue: FiniteField, precision: int | None = None):
        self.k = residue
        self.p = residue.p
        self.precision = int(precision if precision is not None else settings.precision)
        if self.precision < 1:
            raise MalformedDescriptor("precision must be positive")

    @property
    def key(self) -> tuple:
        return ("laurent", self.k.key, self.precision)

    @property
    def descriptor(self) -> str:
        prec = "" if self.precision == settings.precision else f":prec={self.precision}"
        return f"Laurent:{self.p}^{self.k.f}{prec}"

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def residue_field(self) -> FiniteField:
        return self.k

    # ---- construction ----
    def make(self, lead_exp: int, coeffs: Sequence[int], known_to: int | None = None) -> LaurentElement:
        coeffs = list(coeffs)
        if known_to is not None:
            coeffs = coeffs[: max(0, known_to - lead_exp)]
        start = 0
        while start < len(coeffs) and coeffs[start] == 0:
            start += 1
        coeffs = coeffs[start:]
        lead_exp += start
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            return LaurentElement(self, 0 if known_to is None else known_to, (), known_to)
        return LaurentElement(self, lead_exp, tuple(coeffs), known_to)

    def monomial(self, c: int, exp: int) -> LaurentElement:
        return self.make(exp, [c])

    def from_int(self, n: int) -> LaurentElement:
        return self.monomial(int(n) % self.p, 0)

    def from_fraction(self, value: Fraction) -> LaurentElement:
        c = self.k.from_fraction(value)
        return self.monomial(c.value, 0)

    def from_terms(self, terms: dict[int, int], known_to: int | None = None) -> LaurentElement:
        if not terms:
            return self.make(0, [], known_to)
        lo, hi = min(terms), max(terms)
        return self.make(lo, [terms.get(i, 0) for i in range(lo, hi + 1)], known_to)

    def _check(self, x) -> LaurentElement:
        if not isinstance(x, LaurentElement) or x.owner != self:
            raise FieldMismatch(f"{x!r} is not an element of {self.descriptor}")
        return x

    def coefficient(self, x: LaurentElement, i: int) -> int:
        j = i - x.lead_exp
        if 0 <= j < len(x.coeffs):
            return x.coeffs[j]
        return 0

    def terms(self, x: LaurentElement) -> dict[int, int]:
        return {x.lead_exp + i: c for i, c in enumerate(x.coeffs) if c}

    # ---- arithmetic ----
    def add(self, x, y):
        x, y = self._check(x), self._check(y)
        if not x.coeffs and x.known_to is None:
            return y
        if not y.coeffs and y.known_to is None:
            return x
        lo = min(x.lead_exp, y.lead_exp)
        hi = max(x.lead_exp + len(x.coeffs), y.lead_exp + len(y.coeffs))
        k = self.k
        out = [k.add_int(self.coefficient(x, i), self.coefficient(y, i)) for i in range(lo, hi)]
        return self.make(lo, out, _min_bound(x.known_to, y.known_to))

    def neg(self, x):
        x = self._check(x)
        return LaurentElement(self, x.lead_exp, tuple(self.k.neg_int(c) for c in x.coeffs), x.known_to)

    def _lower(self, x: LaurentElement):
        if x.coeffs:
            return x.lead_exp
        return INF if x.known_to is None else x.known_to

    def mul(self, x, y):
        x, y = self._check(x), self._check(y)
        if (not x.coeffs and x.known_to is None) or (not y.coeffs and y.known_to is None):
            return self.zero()
        known_to = None
        if x.known_to is not None:
            known_to = _min_bound(known_to, x.known_to + self._lower(y))
        if y.known_to is not None:
            known_to = _min_bound(known_to, y.known_to + self._lower(x))
        k = self.k
        length = len(x.coeffs) + len(y.coeffs) - 1
        if known_to is not None:
            length = min(length, known_to - x.lead_exp - y.lead_exp)
        out = [0] * max(length, 0)
        for i, a in enumerate(x.coeffs):
            if not a or i >= len(out):
                continue
            for j, b in enumerate(y.coeffs):
                if i + j >= len(out):
                    break
                if b:
                    out[i + j] = k.add_int(out[i + j], k.mul_int(a, b))
        return self.make(x.lead_exp + y.lead_exp, out, known_to)

    def inv(self, x):
        x = self._check(x)
        if not x.coeffs:
            if x.known_to is None:
                raise DivisionByZero("inverse of 0")
            raise InsufficientPrecision("element is 0 to known precision")
        k = self.k
        v = x.lead_exp
        if x.known_to is None and len(x.coeffs) == 1:
            return self.make(-v, [k.inv_int(x.coeffs[0])])
        rel = self.precision if x.known_to is None else min(self.precision, x.known_to - v)
        u = x.coeffs
        b0 = k.inv_int(u[0])
        b = [b0]
        for n in range(1, rel):
            acc = 0
            for i in range(1, min(n, len(u) - 1) + 1):
                if u[i]:
                    acc = k.add_int(acc, k.mul_int(u[i], b[n - i]))
            b.append(k.neg_int(k.mul_int(b0, acc)))
        return self.make(-v, b, -v + rel)

    def frobenius(self, x: LaurentElement, j: int = 1) -> LaurentElement:
        """x^(p^j) coefficientwise."""
        x = self._check(x)
        pj = self.p ** j
        terms = {e * pj: self.k.pow_int(c, pj) for e, c in self.terms(x).items()}
        known_to = None if x.known_to is None else x.known_to * pj
        return self.from_terms(terms, known_to)

    def frobenius_root(self, x: LaurentElement, j: int = 1) -> LaurentElement:
        """The p^j-th root of an element whose support is divisible by p^j."""
        x = self._check(x)
        pj = self.p ** j
        terms = {e // pj: self.k.frobenius_root_int(c, j) for e, c in self.terms(x).items()}
        known_to = None if x.known_to is None else x.known_to // pj
        return self.from_terms(terms, known_to)

    def pow(self, x, n: int):
        x = self._check(x)
        if n < 0:
            return self.pow(self.inv(x), -n)
        j = 0
        while n and n % self.p == 0:
            n //= self.p
            j += 1
        return self.frobenius(super().pow(x, n), j) if j else super().pow(x, n)

    # ---- valuation ----
    def val(self, x):
        x = self._check(x)
        if not x.coeffs:
            if x.known_to is None:
                return INF
            raise InsufficientPrecision(f"element is 0 modulo t^{x.known_to}")
        return Fraction(x.lead_exp)

    def val_bound(self, x):
        x = self._check(x)
        if x.coeffs:
            return Fraction(x.lead_exp), True
        if x.known_to is None:
            return INF, True
        return Fraction(x.known_to), False

    def residue(self, x):
        x = self._check(x)
        v, certain = self.val_bound(x)
        if v < 0:
            if certain:
                raise NotIntegral(f"valuation {v} < 0")
            raise InsufficientPrecision("cannot decide integrality")
        if x.known_to is not None and x.known_to <= 0:
            raise InsufficientPrecision("constant coefficient unknown")
        return self.k.element(self.coefficient(x, 0))

    def lift(self, a):
        if getattr(a, "owner", None) != self.k:
            raise FieldMismatch(f"{a!r} is not in the residue field {self.k.descriptor}")
        return self.monomial(a.value, 0)

    def uniformizer(self):
        return self.monomial(1, 1)

    # ---- exactness ----
    def is_exact(self, x) -> bool:
        return self._check(x).known_to is None

    def is_zero(self, x) -> bool:
        x = self._check(x)
        return not x.coeffs and x.known_to is None

    def known_precision(self, x):
        kt = self._check(x).known_to
        return INF if kt is None else kt

    def truncate(self, x, digits: int):
        x = self._check(x)
        return self.make(x.lead_exp, x.coeffs, _min_bound(x.known_to, digits))

    def representative(self, x):
        x = self._check(x)
        return self.make(x.lead_exp, x.coeffs)

    # ---- literals ----
    def symbols(self) -> dict[str, Element]:
        return {"t": self.uniformizer(), "z": self.monomial(self.k.generator().value, 0)}

    def format_element(self, x) -> str:
        x = self._check(x)
        terms = []
        for e, c in sorted(self.terms(x).items()):
            coef = self.k.format_element(self.k.element(c))
            if "+" in coef:
                coef = f"({coef})"
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if not mono:
                terms.append(coef)
            elif coef == "1":
                terms.append(mono)
            else:
                terms.append(f"{coef}*{mono}")
        text = " + ".join(terms) if terms else "0"
        if x.known_to is not None:
            bound = f"O(t^{x.known_to})"
            text = bound if not terms else f"{text} + {bound}"
        return text

    # ---- sampling ----
    def random_unit(self, rng: random.Random, length: int = 6) -> LaurentElement:
        coeffs = [rng.randrange(1, self.k.q)] + [rng.randrange(self.k.q) for _ in range(rng.randint(0, length - 1))]
        return self.make(0, coeffs)

    def random_element(self, rng: random.Random, vmin: int = 0, vmax: int = 0):
        u = self.random_unit(rng)
        return self.make(rng.randint(vmin, vmax), u.coeffs)
