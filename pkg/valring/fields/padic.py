import math
import random
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Sequence

from sympy import QQ, isprime, multiplicity
from sympy.polys.matrices import DomainMatrix

from ..config import settings
from ..errors import (
    DivisionByZero,
    FieldMismatch,
    InsufficientPrecision,
    InvariantViolation,
    MalformedDescriptor,
    NotEisenstein,
    NotIntegral,
    NotIrreducible,
)
from .base import INF, Element, Field
from .finite import FiniteField, finite_field, is_irreducible_mod_p, smallest_irreducible


def ord_p(c, p: int):
    """p-adic order of an int or Fraction; INF for zero."""
    if c == 0:
        return INF
    c = Fraction(c)
    return multiplicity(p, abs(c.numerator)) - multiplicity(p, c.denominator)


def reduce_fraction(c, p: int, m: int) -> Fraction:
    """Some c' = k / p^s with ord_p(c - c') >= m."""
    c = Fraction(c)
    if c == 0:
        return Fraction(0)
    s = max(0, -ord_p(c, p))
    if m + s <= 0:
        return Fraction(0)
    u = c * p ** s
    mod = p ** (m + s)
    k = u.numerator * pow(u.denominator, -1, mod) % mod
    # balanced representative keeps small negatives small
    if k > mod // 2:
        k -= mod
    return Fraction(k, p ** s)


def residue_mod_p(c, p: int) -> int:
    c = Fraction(c)
    return c.numerator * pow(c.denominator, -1, p) % p


def default_generator(p: int, f: int) -> tuple[int, ...]:
    """z - 1 for f = 1, else the canonical lift of the smallest irreducible of degree f."""
    if f == 1:
        return (-1, 1)
    return smallest_irreducible(p, f)


def _min_prec(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _qq(c) -> object:
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


@dataclass(frozen=True, eq=True)
class PadicElement(Element):
    owner: "PadicField"
    coords: tuple
    known_precision: int | None = None

    @cached_property
    def norm_valuation(self):
        return self.owner._norm_val(self)

    @cached_property
    def digit_valuation(self):
        return self.owner._coord_val(self.coords)

    def __repr__(self) -> str:
        return f"PadicElement({self.owner.format_element(self)!r} in {self.owner.descriptor})"


class PadicField(Field):
    """Q_p and towers L(pi) over L = Q_p(gamma), gamma a root of G, pi a root of an Eisenstein H*.

    Coordinates are exact rationals in the basis gamma^i pi^j, stored at index j*f + i.
    """

    kind = "padic"

    def __init__(
        self,
        p: int,
        f: int = 1,
        G: Sequence[int] | None = None,
        eis: Sequence[Sequence] | None = None,
        precision: int | None = None,
    ):
        if not isprime(p):
            raise MalformedDescriptor(f"{p} is not prime")
        if f < 1:
            raise MalformedDescriptor(f"unramified degree must be positive, got {f}")
        self.p = int(p)
        self.f = int(f)
        self.precision = int(precision if precision is not None else settings.precision)
        if self.precision < 1:
            raise MalformedDescriptor("precision must be positive")
        G = tuple(int(c) for c in (G if G is not None else default_generator(self.p, self.f)))
        if len(G) != self.f + 1 or G[-1] != 1:
            raise NotIrreducible(f"G = {list(G)} is not monic of degree {self.f}")
        if not is_irreducible_mod_p(G, self.p):
            raise NotIrreducible(f"G = {list(G)} is reducible modulo {self.p}")
        self.G = G
        if eis is None:
            eis = [(-self.p,), (1,)]
        self.hstar: tuple[tuple[Fraction, ...], ...] = tuple(
            tuple(Fraction(c) for c in (coef if isinstance(coef, (list, tuple)) else (coef,))) for coef in eis
        )
        if len(self.hstar) < 2:
            raise NotEisenstein("Eisenstein polynomial must have degree at least 1")
        self.e = len(self.hstar) - 1
        self.n = self.e * self.f
        self._h = [self._lreduce(list(c)) for c in self.hstar]
        self._check_eisenstein()

    # ---- identity ----
    @property
    def key(self) -> tuple:
        return ("padic", self.p, self.f, self.G, self.hstar, self.precision)

    @property
    def is_plain(self) -> bool:
        return self.f == 1 and self.e == 1 and self._h[0] == (Fraction(-self.p),)

    @property
    def descriptor(self) -> str:
        prec = "" if self.precision == settings.precision else f":prec={self.precision}"
        if self.is_plain:
            return f"Qp:{self.p}{prec}"
        gpart = "" if self.G == default_generator(self.p, self.f) else f":G={','.join(map(str, self.G))}"
        coeffs = ",".join(self._format_poly(c, "g") for c in self.hstar)
        return f"Ext:Qp:{self.p}:unram={self.f}{gpart}:eis=[{coeffs}]{prec}"

    @property
    def characteristic(self) -> int:
        return 0

    @cached_property
    def residue_field(self) -> FiniteField:
        return finite_field(self.p, self.f, tuple(c % self.p for c in self.G))

    # ---- L = Q_p(gamma) arithmetic ----
    def _lreduce(self, poly: list) -> tuple:
        f, G = self.f, self.G
        poly = list(poly) + [0] * max(0, f - len(poly))
        for k in range(len(poly) - 1, f - 1, -1):
            c = poly[k]
            if c:
                poly[k] = 0
                for i in range(f):
                    poly[k - f + i] -= c * G[i]
        return tuple(poly[:f])

    def _lmul(self, a: Sequence, b: Sequence) -> tuple:
        if self.f == 1:
            return (a[0] * b[0],)
        prod = [0] * (2 * self.f - 1)
        for i, ai in enumerate(a):
            if ai:
                for k, bk in enumerate(b):
                    if bk:
                        prod[i + k] += ai * bk
        return self._lreduce(prod)

    def _lval(self, a: Sequence):
        # unramified: residues of 1, gamma, ... are independent
        return min(ord_p(c, self.p) for c in a)

    def _check_eisenstein(self) -> None:
        if self._h[self.e] != (1,) + (0,) * (self.f - 1):
            raise NotEisenstein("Eisenstein polynomial must be monic")
        for j in range(self.e):
            v = self._lval(self._h[j])
            if j == 0 and v != 1:
                raise NotEisenstein(f"constant term has valuation {v}, expected 1")
            if v < 1:
                raise NotEisenstein(f"coefficient of x^{j} has valuation {v} < 1")

    # ---- K arithmetic ----
    def _blocks(self, coords: Sequence) -> list:
        f = self.f
        return [tuple(coords[j * f:(j + 1) * f]) for j in range(self.e)]

    def _kmul(self, x: Sequence, y: Sequence) -> tuple:
        if self.n == 1:
            return (x[0] * y[0],)
        e, f = self.e, self.f
        xs, ys = self._blocks(x), self._blocks(y)
        zero = (0,) * f
        acc = [list(zero) for _ in range(2 * e - 1)]
        for j1, a in enumerate(xs):
            if not any(a):
                continue
            for j2, b in enumerate(ys):
                if not any(b):
                    continue
                ab = self._lmul(a, b)
                row = acc[j1 + j2]
                for i in range(f):
                    row[i] += ab[i]
        # pi^e = -sum_j h_j pi^j
        for k in range(2 * e - 2, e - 1, -1):
            c = acc[k]
            if not any(c):
                continue
            for j in range(e):
                ch = self._lmul(c, self._h[j])
                row = acc[k - e + j]
                for i in range(f):
                    row[i] -= ch[i]
            acc[k] = list(zero)
        return tuple(v for block in acc[:e] for v in block)

    def _coord_val(self, coords: Sequence):
        best = INF
        for j, block in enumerate(self._blocks(coords)):
            for c in block:
                if c:
                    v = ord_p(c, self.p) + Fraction(j, self.e)
                    if v < best:
                        best = v
        return best if best == INF else Fraction(best)

    def _columns(self, coords: Sequence) -> list[tuple]:
        cols = []
        for k in range(self.n):
            basis = [0] * self.n
            basis[k] = 1
            cols.append(self._kmul(coords, basis))
        return cols

    def _matrix(self, coords: Sequence) -> DomainMatrix:
        cols = self._columns(coords)
        rows = [[_qq(cols[j][i]) for j in range(self.n)] for i in range(self.n)]
        return DomainMatrix(rows, (self.n, self.n), QQ)

    def norm(self, x: PadicElement) -> Fraction:
        """N_{K/Q_p}(x) as det of the multiplication matrix."""
        if self.n == 1:
            return Fraction(x.coords[0])
        return _frac(self._matrix(x.coords).det())

    def _norm_val(self, x: PadicElement):
        if not any(x.coords):
            return INF
        return Fraction(ord_p(self.norm(x), self.p), self.n)

    def _mk(self, coords: Sequence, known_precision: int | None = None) -> PadicElement:
        return PadicElement(self, tuple(coords), known_precision)

    def _check(self, x) -> PadicElement:
        if not isinstance(x, PadicElement) or x.owner != self:
            raise FieldMismatch(f"{x!r} is not an element of {self.descriptor}")
        return x

    def _digits_lower(self, x: PadicElement):
        v, _ = self.val_bound(x)
        return v if v == INF else int(math.floor(v * self.e))

    def from_int(self, n: int) -> PadicElement:
        return self._mk((int(n),) + (0,) * (self.n - 1))

    def from_fraction(self, value: Fraction) -> PadicElement:
        return self._mk((Fraction(value),) + (0,) * (self.n - 1))

    def from_l(self, a: Sequence) -> PadicElement:
        """Embed an L-vector (coefficients of 1, gamma, ..., gamma^(f-1))."""
        return self._mk(tuple(a) + (0,) * (self.n - self.f))

    def add(self, x, y):
        x, y = self._check(x), self._check(y)
        return self._mk(tuple(a + b for a, b in zip(x.coords, y.coords)), _min_prec(x.known_precision, y.known_precision))

    def neg(self, x):
        x = self._check(x)
        return self._mk(tuple(-a for a in x.coords), x.known_precision)

    def sub(self, x, y):
        x, y = self._check(x), self._check(y)
        return self._mk(tuple(a - b for a, b in zip(x.coords, y.coords)), _min_prec(x.known_precision, y.known_precision))

    def mul(self, x, y):
        x, y = self._check(x), self._check(y)
        if x.known_precision is None and y.known_precision is None:
            return self._mk(self._kmul(x.coords, y.coords))
        if (x.known_precision is None and not any(x.coords)) or (y.known_precision is None and not any(y.coords)):
            return self.zero()
        cands = []
        if x.known_precision is not None:
            cands.append(x.known_precision + self._digits_lower(y))
        if y.known_precision is not None:
            cands.append(y.known_precision + self._digits_lower(x))
        return self._mk(self._kmul(x.coords, y.coords), min(cands))

    def _solve(self, y: PadicElement, target: Sequence) -> tuple:
        m = self._matrix(y.coords)
        b = DomainMatrix([[_qq(c)] for c in target], (self.n, 1), QQ)
        sol = m.lu_solve(b)
        return tuple(_frac(row[0]) for row in sol.to_list())

    def inv(self, x):
        x = self._check(x)
        if x.known_precision is None and not any(x.coords):
            raise DivisionByZero("inverse of 0")
        v = self.val(x)
        one = (1,) + (0,) * (self.n - 1)
        coords = (Fraction(1) / Fraction(x.coords[0]),) if self.n == 1 else self._solve(x, one)
        kp = None if x.known_precision is None else x.known_precision - 2 * int(v * self.e)
        return self._mk(coords, kp)

    def div(self, x, y):
        x, y = self._check(x), self._check(y)
        if x.known_precision is None and y.known_precision is None:
            if not any(y.coords):
                raise DivisionByZero("division by 0")
            if self.n == 1:
                return self._mk((Fraction(x.coords[0]) / Fraction(y.coords[0]),))
            return self._mk(self._solve(y, x.coords))
        return self.mul(x, self.inv(y))

    def pow(self, x, n: int):
        x = self._check(x)
        if self.n == 1 and x.known_precision is None:
            if n < 0 and x.coords[0] == 0:
                raise DivisionByZero("negative power of 0")
            return self._mk((Fraction(x.coords[0]) ** n,))
        return super().pow(x, n)

    # ---- valuation ----
    def val(self, x):
        x = self._check(x)
        if not any(x.coords):
            if x.known_precision is None:
                return INF
            raise InsufficientPrecision(f"element is 0 to {x.known_precision} digits")
        v = x.norm_valuation
        if x.known_precision is not None and v * self.e >= x.known_precision:
            raise InsufficientPrecision(f"valuation not separated from precision {x.known_precision}")
        return v

    def norm_val(self, x):
        """Determinant route, without precision checks."""
        return self._check(x).norm_valuation

    def digit_val(self, x):
        """Coordinate route: min ord_p(c_ij) + j/e."""
        return self._check(x).digit_valuation

    def val_bound(self, x):
        x = self._check(x)
        v = x.digit_valuation
        if x.known_precision is None:
            return v, True
        if v == INF or v * self.e >= x.known_precision:
            return Fraction(x.known_precision, self.e), False
        return v, True

    def residue(self, x):
        x = self._check(x)
        v, certain = self.val_bound(x)
        if certain and v < 0:
            raise NotIntegral(f"valuation {v} < 0")
        if v < 0:
            raise InsufficientPrecision("cannot decide integrality")
        k = self.residue_field
        guess = k.from_coeffs([residue_mod_p(c, self.p) for c in x.coords[: self.f]])
        if self.val_bound(self.sub(x, self.lift(guess)))[0] > 0:
            return guess
        for a in k.elements():
            if self.val_bound(self.sub(x, self.lift(a)))[0] > 0:
                return a
        raise InvariantViolation("no residue candidate matched an integral element")  # pragma: no cover

    def lift(self, a):
        k = self.residue_field
        if getattr(a, "owner", None) != k:
            raise FieldMismatch(f"{a!r} is not in the residue field {k.descriptor}")
        return self.from_l(a.coeffs)

    def uniformizer(self):
        if self.e == 1:
            return self.from_l(tuple(-c for c in self._h[0]))
        coords = [0] * self.n
        coords[self.f] = 1
        return self._mk(coords)

    def generator(self) -> PadicElement:
        if self.f == 1:
            return self.from_int(-self.G[0])
        coords = [0] * self.n
        coords[1] = 1
        return self._mk(coords)

    def eisenstein_root(self) -> PadicElement:
        return self.uniformizer()

    # ---- exactness ----
    def is_exact(self, x) -> bool:
        return self._check(x).known_precision is None

    def is_zero(self, x) -> bool:
        x = self._check(x)
        return x.known_precision is None and not any(x.coords)

    def known_precision(self, x):
        kp = self._check(x).known_precision
        return INF if kp is None else kp

    def truncate(self, x, digits: int):
        x = self._check(x)
        out = []
        for j, block in enumerate(self._blocks(x.coords)):
            m = -((j - digits) // self.e)
            out.extend(reduce_fraction(c, self.p, m) for c in block)
        return self._mk(out, _min_prec(x.known_precision, digits))

    def representative(self, x):
        return self._mk(self._check(x).coords)

    # ---- literals ----
    def symbols(self) -> dict[str, Element]:
        return {"g": self.generator(), "u": self.eisenstein_root()}

    @staticmethod
    def _format_poly(coeffs: Sequence, var: str) -> str:
        terms = []
        for i, c in reversed(list(enumerate(coeffs))):
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            terms.append(_term(c, mono))
        return _join(terms)

    def format_element(self, x) -> str:
        x = self._check(x)
        terms = []
        for j, block in enumerate(self._blocks(x.coords)):
            for i, c in enumerate(block):
                if c == 0:
                    continue
                parts = []
                if i:
                    parts.append("g" if i == 1 else f"g^{i}")
                if j:
                    parts.append("u" if j == 1 else f"u^{j}")
                terms.append(_term(c, "*".join(parts)))
        text = _join(terms)
        if x.known_precision is not None:
            if self.e == 1:
                bound = f"{self.p}^{x.known_precision}" if self.is_plain else f"u^{x.known_precision}"
            else:
                bound = f"u^{x.known_precision}"
            text = f"O({bound})" if text == "0" else f"{text} + O({bound})"
        return text

    # ---- sampling ----
    def random_unit(self, rng: random.Random) -> PadicElement:
        p, f = self.p, self.f
        k = self.residue_field
        r = k.digits(rng.randrange(1, k.q))
        coords = [Fraction(r[i] + p * rng.randrange(0, p * p)) for i in range(f)]
        for _ in range(self.n - f):
            coords.append(Fraction(rng.randrange(-p * p, p * p + 1)))
        d = rng.choice((1, 1, 1, 2, 3, 5, 7))
        while d % p == 0:
            d += 1
        return self._mk(tuple(c / d for c in coords))

    def random_element(self, rng: random.Random, vmin: int = 0, vmax: int = 0):
        k = rng.randint(vmin, vmax)
        return self.mul(self.random_unit(rng), self.pow(self.uniformizer(), k))


def _term(c, mono: str) -> str:
    if not mono:
        return str(c)
    if c == 1:
        return mono
    if c == -1:
        return f"-{mono}"
    return f"{c}*{mono}"


def _join(terms: list[str]) -> str:
    if not terms:
        return "0"
    text = terms[0]
    for t in terms[1:]:
        text += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return text
