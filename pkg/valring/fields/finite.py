import itertools
import logging
import math
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np
from sympy import factorint, isprime, primitive_root
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_pow_mod, gf_rem

from ..errors import DivisionByZero, FieldMismatch, MalformedDescriptor, NotIrreducible, NotValuedField, TooLarge
from .base import INF, Element, Field

logger = logging.getLogger("fields")

# exp/log tables are materialised; past this size the tables stop being cheap
TABLE_LIMIT = 1 << 16


def _to_gf(coeffs: Sequence[int]) -> list:
    """Low-to-high coefficients -> galoistools dense list (high-to-low, no leading zeros)."""
    out = [ZZ(int(c)) for c in reversed(coeffs)]
    while out and out[0] == 0:
        out.pop(0)
    return out


def _from_gf(poly: list, p: int) -> int:
    value = 0
    for c in poly:
        value = value * p + int(c) % p
    return value


def is_irreducible_mod_p(coeffs: Sequence[int], p: int) -> bool:
    poly = _to_gf([int(c) % p for c in coeffs])
    if len(poly) < 2:
        return False
    return bool(gf_irreducible_p(poly, p, ZZ))


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree f over F_p, low-to-high with c0 most significant."""
    for low in itertools.product(range(p), repeat=f):
        coeffs = (*low, 1)
        if is_irreducible_mod_p(coeffs, p):
            return coeffs
    raise NotIrreducible(f"no irreducible polynomial of degree {f} over F_{p}")  # pragma: no cover


def prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    fac = factorint(q)
    if len(fac) != 1:
        return None
    ((p, f),) = fac.items()
    return int(p), int(f)


@dataclass(frozen=True, eq=True)
class FiniteFieldElement(Element):
    owner: "FiniteField"
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.owner.digits(self.value)

    def __repr__(self) -> str:
        return f"FiniteFieldElement({self.owner.format_element(self)!r} in F_{self.owner.q})"


class FiniteField(Field):
    """F_{p^f} = F_p[z]/(modulus); elements encoded as the integer sum c_i p^i."""

    kind = "finite"

    def __init__(self, p: int, f: int = 1, modulus: Sequence[int] | None = None):
        if not isprime(p):
            raise MalformedDescriptor(f"{p} is not prime")
        if f < 1:
            raise MalformedDescriptor(f"degree must be positive, got {f}")
        if p ** f > TABLE_LIMIT:
            raise TooLarge(f"F_{p}^{f} exceeds the supported size {TABLE_LIMIT}")
        self.p = int(p)
        self.f = int(f)
        if modulus is None:
            modulus = smallest_irreducible(self.p, self.f)
        else:
            modulus = tuple(int(c) % self.p for c in modulus)
            if len(modulus) != self.f + 1 or modulus[-1] != 1:
                raise NotIrreducible(f"modulus {list(modulus)} is not monic of degree {self.f}")
            if not is_irreducible_mod_p(modulus, self.p):
                raise NotIrreducible(f"modulus {list(modulus)} is reducible over F_{self.p}")
        self.modulus: tuple[int, ...] = tuple(modulus)
        self._weights = [self.p ** i for i in range(self.f)]
        self._build_tables()

    # ---- identity ----
    @property
    def key(self) -> tuple:
        return ("finite", self.p, self.f, self.modulus)

    @property
    def descriptor(self) -> str:
        if self.modulus == smallest_irreducible(self.p, self.f):
            return f"Fq:{self.p}^{self.f}"
        return f"Fq:{self.p}^{self.f}:mod={','.join(map(str, self.modulus))}"

    @property
    def q(self) -> int:
        return self.p ** self.f

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def residue_field(self) -> "FiniteField":
        return self

    @property
    def is_valued(self) -> bool:
        return False

    # ---- tables ----
    def _build_tables(self) -> None:
        q, p, f = self.q, self.p, self.f
        exp = [0] * (q - 1)
        if f == 1:
            g = int(primitive_root(p)) if p > 2 else 1
            acc = 1
            for i in range(q - 1):
                exp[i] = acc
                acc = acc * g % p
        else:
            mod = _to_gf(self.modulus)
            gen = self._find_generator(mod)
            poly = [ZZ(1)]
            for i in range(q - 1):
                exp[i] = _from_gf(poly, p)
                poly = gf_rem(gf_mul(poly, gen, p, ZZ), mod, p, ZZ)
        log = [-1] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log
        if f > 1:
            self._digits = [tuple((v // w) % p for w in self._weights) for v in range(q)]
        logger.debug("fields: built tables for F_%d", q)

    def _find_generator(self, mod: list) -> list:
        q, p = self.q, self.p
        orders = [(q - 1) // r for r in factorint(q - 1)]
        for v in range(p, q):
            cand = _to_gf(self.digits_raw(v))
            if all(gf_pow_mod(cand, k, mod, p, ZZ) != [ZZ(1)] for k in orders):
                return cand
        raise NotIrreducible("modulus does not yield a cyclic multiplicative group")  # pragma: no cover

    def digits_raw(self, v: int) -> tuple[int, ...]:
        return tuple((v // w) % self.p for w in self._weights)

    def digits(self, v: int) -> tuple[int, ...]:
        if self.f == 1:
            return (v,)
        return self._digits[v]

    def encode(self, coeffs: Sequence[int]) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.f:
            # reduce a longer polynomial modulo the defining modulus
            rem = gf_rem(_to_gf([c % self.p for c in coeffs]), _to_gf(self.modulus), self.p, ZZ)
            return _from_gf(rem, self.p)
        return sum((int(c) % self.p) * w for c, w in zip(coeffs, self._weights))

    # ---- scalar int arithmetic ----
    def add_int(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        da, db = self._digits[a], self._digits[b]
        return sum(((x + y) % self.p) * w for x, y, w in zip(da, db, self._weights))

    def neg_int(self, a: int) -> int:
        if self.f == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return sum(((-x) % self.p) * w for x, w in zip(self._digits[a], self._weights))

    def mul_int(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow_int(self, a: int, n: int) -> int:
        if a == 0:
            if n > 0:
                return 0
            if n == 0:
                return 1
            raise DivisionByZero("negative power of 0")
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def log_int(self, a: int) -> int:
        return self._log[a]

    def is_power_int(self, a: int, n: int) -> bool:
        """Nonzero n-th power test by the discrete log."""
        if a == 0:
            return False
        return self._log[a] % math.gcd(n, self.q - 1) == 0

    def root_int(self, a: int, n: int) -> int | None:
        if not self.is_power_int(a, n):
            return None
        m = self.q - 1
        g = math.gcd(n, m)
        mm = m // g
        k = (self._log[a] // g) * pow(n // g, -1, mm) % mm if mm > 1 else 0
        return self._exp[k % m]

    def frobenius_root_int(self, a: int, j: int) -> int:
        """The unique p^j-th root of a."""
        return self.pow_int(a, self.p ** ((-j) % self.f))

    @cached_property
    def artin_schreier_table(self) -> dict[int, int]:
        """y^2 + y -> first y in canonical order."""
        table: dict[int, int] = {}
        for y in range(self.q):
            table.setdefault(self.add_int(self.mul_int(y, y), y), y)
        return table

    def trace_int(self, a: int) -> int:
        """Absolute trace to F_p."""
        acc, cur = 0, a
        for _ in range(self.f):
            acc = self.add_int(acc, cur)
            cur = self.pow_int(cur, self.p)
        return acc

    # ---- numpy array arithmetic for scans ----
    @cached_property
    def exp_array(self) -> np.ndarray:
        return np.array(self._exp, dtype=np.int64)

    @cached_property
    def log_array(self) -> np.ndarray:
        return np.array([max(v, 0) for v in self._log], dtype=np.int64)

    @cached_property
    def digit_matrix(self) -> np.ndarray:
        return np.array([self.digits_raw(v) for v in range(self.q)], dtype=np.int64).reshape(self.q, self.f)

    @cached_property
    def weight_vector(self) -> np.ndarray:
        return np.array(self._weights, dtype=np.int64)

    def elements_array(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def add_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.f == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        d = (self.digit_matrix[a] + self.digit_matrix[b]) % self.p
        return d @ self.weight_vector

    def neg_arrays(self, a: np.ndarray) -> np.ndarray:
        if self.f == 1:
            return (-a) % self.p
        if self.p == 2:
            return a.copy()
        return ((-self.digit_matrix[a]) % self.p) @ self.weight_vector

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = self.exp_array[(self.log_array[a] + self.log_array[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def pow_arrays(self, a: np.ndarray, n: int) -> np.ndarray:
        """Square-and-multiply on whole arrays."""
        a = np.asarray(a, dtype=np.int64)
        result = np.ones_like(a)
        base = a
        while n:
            if n & 1:
                result = self.mul_arrays(result, base)
            n >>= 1
            if n:
                base = self.mul_arrays(base, base)
        return result

    def power_counts(self, n: int) -> np.ndarray:
        """counts[y] = #{w : w^n = y}."""
        return np.bincount(self.pow_arrays(self.elements_array(), n), minlength=self.q)

    def artin_schreier_counts(self) -> np.ndarray:
        w = self.elements_array()
        return np.bincount(self.add_arrays(self.mul_arrays(w, w), w), minlength=self.q)

    # ---- Field interface ----
    def element(self, value: int) -> FiniteFieldElement:
        return FiniteFieldElement(self, int(value))

    def from_coeffs(self, coeffs: Sequence[int]) -> FiniteFieldElement:
        return self.element(self.encode(coeffs))

    def elements(self) -> Iterator[FiniteFieldElement]:
        for v in range(self.q):
            yield FiniteFieldElement(self, v)

    def generator(self) -> FiniteFieldElement:
        """The class of z modulo the defining polynomial."""
        if self.f == 1:
            return self.element((-self.modulus[0]) % self.p)
        return self.element(self.p)

    def from_int(self, n: int) -> FiniteFieldElement:
        return self.element(int(n) % self.p)

    def from_fraction(self, value: Fraction) -> FiniteFieldElement:
        if value.denominator % self.p == 0:
            raise DivisionByZero(f"{value} has no image in F_{self.q}")
        return self.element(self.mul_int(value.numerator % self.p, self.inv_int(value.denominator % self.p)))

    def _check(self, x) -> int:
        if not isinstance(x, FiniteFieldElement) or x.owner != self:
            raise FieldMismatch(f"{x!r} is not an element of {self.descriptor}")
        return x.value

    def add(self, x, y):
        return self.element(self.add_int(self._check(x), self._check(y)))

    def neg(self, x):
        return self.element(self.neg_int(self._check(x)))

    def mul(self, x, y):
        return self.element(self.mul_int(self._check(x), self._check(y)))

    def inv(self, x):
        return self.element(self.inv_int(self._check(x)))

    def pow(self, x, n: int):
        return self.element(self.pow_int(self._check(x), n))

    def val(self, x):
        return INF if self._check(x) == 0 else Fraction(0)

    def val_bound(self, x):
        return self.val(x), True

    def residue(self, x):
        self._check(x)
        return x

    def lift(self, a):
        self._check(a)
        return a

    def uniformizer(self):
        raise NotValuedField(f"{self.descriptor} is a finite field")

    def is_exact(self, x) -> bool:
        return True

    def is_zero(self, x) -> bool:
        return self._check(x) == 0

    def truncate(self, x, digits: int):
        return x

    def representative(self, x):
        return x

    def symbols(self) -> dict[str, Element]:
        return {"z": self.generator()}

    def format_element(self, x) -> str:
        v = self._check(x)
        if self.f == 1:
            return str(v)
        terms = []
        for i, c in reversed(list(enumerate(self.digits(v)))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    def random_element(self, rng: random.Random, vmin: int = 0, vmax: int = 0):
        return self.element(rng.randrange(self.q))


@lru_cache(maxsize=256)
def finite_field(p: int, f: int = 1, modulus: tuple[int, ...] | None = None) -> FiniteField:
    return FiniteField(p, f, modulus)


@lru_cache(maxsize=256)
def field_of_order(q: int) -> FiniteField:
    pf = prime_power(q)
    if pf is None:
        raise MalformedDescriptor(f"{q} is not a prime power")
    return finite_field(*pf)
