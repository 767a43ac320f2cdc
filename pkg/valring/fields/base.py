import math
import random
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Iterator

from ..errors import FieldMismatch, NotValuedField

INF = math.inf


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


class Element:
    """Operator plumbing shared by all element types; arithmetic lives on the owning field."""

    owner: "Field"

    def _coerce(self, other) -> "Element":
        return self.owner.coerce(other)

    def __add__(self, other):
        return self.owner.add(self, self._coerce(other))

    def __radd__(self, other):
        return self.owner.add(self._coerce(other), self)

    def __sub__(self, other):
        return self.owner.sub(self, self._coerce(other))

    def __rsub__(self, other):
        return self.owner.sub(self._coerce(other), self)

    def __mul__(self, other):
        return self.owner.mul(self, self._coerce(other))

    def __rmul__(self, other):
        return self.owner.mul(self._coerce(other), self)

    def __truediv__(self, other):
        return self.owner.div(self, self._coerce(other))

    def __rtruediv__(self, other):
        return self.owner.div(self._coerce(other), self)

    def __neg__(self):
        return self.owner.neg(self)

    def __pow__(self, n: int):
        return self.owner.pow(self, n)

    def val(self):
        return self.owner.val(self)

    def residue(self):
        return self.owner.residue(self)

    @property
    def exact(self) -> bool:
        return self.owner.is_exact(self)

    def is_zero(self) -> bool:
        return self.owner.is_zero(self)

    def __str__(self) -> str:
        return self.owner.format_element(self)


class Field(ABC):
    """Abstract field interface consumed by predicates, formula, decompose and valdef."""

    kind: str = "field"
    p: int
    e: int = 1
    precision: int = 64

    # ---- identity ----
    @property
    @abstractmethod
    def key(self) -> tuple: ...

    @property
    @abstractmethod
    def descriptor(self) -> str: ...

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.descriptor}>"

    # ---- structure ----
    @property
    @abstractmethod
    def characteristic(self) -> int: ...

    @property
    @abstractmethod
    def residue_field(self): ...

    @property
    def q(self) -> int:
        return self.residue_field.q

    @property
    def is_valued(self) -> bool:
        return True

    # ---- construction ----
    @abstractmethod
    def from_int(self, n: int) -> Element: ...

    @abstractmethod
    def from_fraction(self, value: Fraction) -> Element: ...

    def zero(self) -> Element:
        return self.from_int(0)

    def one(self) -> Element:
        return self.from_int(1)

    def coerce(self, value) -> Element:
        if isinstance(value, Element):
            if value.owner != self:
                raise FieldMismatch(f"element of {value.owner.descriptor} used in {self.descriptor}")
            return value
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_fraction(value)
        raise FieldMismatch(f"cannot coerce {type(value).__name__} into {self.descriptor}")

    # ---- arithmetic ----
    @abstractmethod
    def add(self, x, y) -> Element: ...

    @abstractmethod
    def neg(self, x) -> Element: ...

    @abstractmethod
    def mul(self, x, y) -> Element: ...

    @abstractmethod
    def inv(self, x) -> Element: ...

    def sub(self, x, y) -> Element:
        return self.add(x, self.neg(y))

    def div(self, x, y) -> Element:
        return self.mul(x, self.inv(y))

    def pow(self, x, n: int) -> Element:
        if n < 0:
            return self.pow(self.inv(x), -n)
        result = self.one()
        base = x
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    # ---- valuation ----
    @abstractmethod
    def val(self, x): ...

    @abstractmethod
    def val_bound(self, x) -> tuple[Fraction | float, bool]:
        """(v, certain): the valuation when certain, otherwise a lower bound for an
        element indistinguishable from zero at its known precision."""

    def ord_pi(self, x) -> int | float:
        v = self.val(x)
        return v if v == INF else int(v * self.e)

    @abstractmethod
    def residue(self, x): ...

    @abstractmethod
    def lift(self, a) -> Element: ...

    def uniformizer(self) -> Element:
        raise NotValuedField(f"{self.descriptor} carries the trivial valuation")

    # ---- exactness ----
    @abstractmethod
    def is_exact(self, x) -> bool: ...

    @abstractmethod
    def is_zero(self, x) -> bool:
        """True only for the exact zero."""

    @abstractmethod
    def truncate(self, x, digits: int) -> Element:
        """x modulo pi^digits (absolute), flagged inexact."""

    @abstractmethod
    def representative(self, x) -> Element:
        """The stored digits of x as an exact element."""

    def known_precision(self, x) -> int | float:
        return INF

    # ---- literals ----
    @abstractmethod
    def symbols(self) -> dict[str, Element]: ...

    def parse_element(self, text: str) -> Element:
        from .literals import parse_literal
        return parse_literal(self, text)

    @abstractmethod
    def format_element(self, x) -> str: ...

    # ---- sampling ----
    @abstractmethod
    def random_element(self, rng: random.Random, vmin: int = 0, vmax: int = 0) -> Element:
        """Exact element with e*val in [vmin, vmax] (pi-digit units)."""

    def residue_lifts(self) -> Iterator[Element]:
        for a in self.residue_field.elements():
            yield self.lift(a)
