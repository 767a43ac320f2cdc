import random

from ..errors import FieldMismatch, Unsupported
from .base import INF, Element, Field
from .descriptor import make_field
from .finite import FiniteField, FiniteFieldElement, field_of_order, finite_field, prime_power, smallest_irreducible
from .hensel import HenselProblem, find_roots, hensel_root, poly_derivative, poly_eval
from .laurent import LaurentElement, LaurentField
from .padic import PadicElement, PadicField, ord_p

__all__ = [
    "INF", "Element", "Field", "FiniteField", "FiniteFieldElement", "HenselProblem", "LaurentElement",
    "LaurentField", "PadicElement", "PadicField", "arith", "field_of_order", "find_roots", "finite_field",
    "format_element", "hensel_root", "lift", "make_field", "norm_val", "ord_p", "parse_element",
    "poly_derivative", "poly_eval", "prime_power", "random_element", "residue", "smallest_irreducible",
    "uniformizer", "val",
]


def val(x: Element):
    return x.owner.val(x)


def norm_val(x: Element):
    K = x.owner
    if isinstance(K, PadicField):
        return K.norm_val(x)
    return K.val(x)


def residue(x: Element):
    return x.owner.residue(x)


def lift(a: FiniteFieldElement, K: Field) -> Element:
    return K.lift(a)


def uniformizer(K: Field) -> Element:
    return K.uniformizer()


def parse_element(K: Field, text: str) -> Element:
    return K.parse_element(text)


def format_element(x: Element) -> str:
    return x.owner.format_element(x)


def random_element(K: Field, rng: random.Random, vmin: int = 0, vmax: int = 0) -> Element:
    return K.random_element(rng, vmin, vmax)


_OPS = {
    "add": lambda K, x, y: K.add(x, y),
    "sub": lambda K, x, y: K.sub(x, y),
    "mul": lambda K, x, y: K.mul(x, y),
    "div": lambda K, x, y: K.div(x, y),
}


def arith(op: str, x: Element, y=None) -> Element:
    """Dispatch for add/sub/mul/div/pow/inv; pow takes an int exponent as y."""
    K = x.owner
    if op == "inv":
        return K.inv(x)
    if op == "pow":
        return K.pow(x, int(y))
    if op not in _OPS:
        raise Unsupported(f"unknown operation {op!r}")
    if isinstance(y, Element) and y.owner != K:
        raise FieldMismatch(f"{op} across {K.descriptor} and {y.owner.descriptor}")
    return _OPS[op](K, x, K.coerce(y))
