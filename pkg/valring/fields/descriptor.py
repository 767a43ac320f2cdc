"""Field descriptor grammar.

    Qp:<p>[:prec=<n>]
    Fq:<p>^<f>[:mod=<c0,...,cf>]
    Laurent:<p>^<f>[:prec=<n>]
    Ext:Qp:<p>:unram=<f>[:G=<g0,...,gf>]:eis=[<c0,...,ce>][:prec=<n>]

Coefficients of the Eisenstein polynomial are literals in g (the unramified generator).
"""

from functools import lru_cache

import pyparsing as pp

from ..errors import MalformedDescriptor, MalformedLiteral
from .base import Field
from .finite import FiniteField
from .laurent import LaurentField
from .padic import PadicField

INT = pp.Combine(pp.Optional("-") + pp.Word(pp.nums)).set_parse_action(lambda t: int(t[0]))
NAT = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
INT_LIST = pp.Group(pp.DelimitedList(INT, delim=","))
COEFF = pp.Regex(r"[^,\[\]:]+")
COEFF_LIST = pp.Group(pp.DelimitedList(COEFF, delim=","))
PREC = pp.Optional(pp.Suppress(":prec=") + NAT("prec"))

QP = pp.Suppress("Qp:") + NAT("p") + PREC
FQ = pp.Suppress("Fq:") + NAT("p") + pp.Suppress("^") + NAT("f") + pp.Optional(pp.Suppress(":mod=") + INT_LIST("mod"))
LAURENT = pp.Suppress("Laurent:") + NAT("p") + pp.Suppress("^") + NAT("f") + PREC
EXT = (
    pp.Suppress("Ext:Qp:") + NAT("p")
    + pp.Suppress(":unram=") + NAT("f")
    + pp.Optional(pp.Suppress(":G=") + INT_LIST("G"))
    + pp.Suppress(":eis=")
    + ((pp.Suppress("[") + COEFF_LIST("eis") + pp.Suppress("]")) | COEFF_LIST("eis"))
    + PREC
)

DESCRIPTOR = (
    QP.copy().set_parse_action(lambda t: t.__setitem__("kind", "Qp"))
    | FQ.copy().set_parse_action(lambda t: t.__setitem__("kind", "Fq"))
    | LAURENT.copy().set_parse_action(lambda t: t.__setitem__("kind", "Laurent"))
    | EXT.copy().set_parse_action(lambda t: t.__setitem__("kind", "Ext"))
) + pp.StringEnd()


def _eisenstein_coeffs(p: int, f: int, G, texts: list[str]) -> list[tuple]:
    base = PadicField(p, f, G)
    coeffs = []
    for text in texts:
        try:
            c = base.parse_element(text)
        except MalformedLiteral as exc:
            raise MalformedDescriptor(f"bad Eisenstein coefficient {text!r}: {exc.detail}") from exc
        coeffs.append(tuple(c.coords))
    return coeffs


@lru_cache(maxsize=128)
def make_field(descriptor: str) -> Field:
    text = descriptor.strip().replace("−", "-").replace(" ", "")
    try:
        parsed = DESCRIPTOR.parse_string(text, parse_all=True)
    except pp.ParseBaseException as exc:
        raise MalformedDescriptor(f"{descriptor!r}: {exc.msg} at column {exc.col}") from exc
    kind = parsed["kind"]
    prec = parsed.get("prec")
    p = parsed["p"]
    if kind == "Qp":
        return PadicField(p, precision=prec)
    if kind == "Fq":
        mod = tuple(parsed["mod"]) if "mod" in parsed else None
        return FiniteField(p, parsed["f"], mod)
    if kind == "Laurent":
        return LaurentField(FiniteField(p, parsed["f"]), precision=prec)
    f = parsed["f"]
    G = tuple(parsed["G"]) if "G" in parsed else None
    eis = _eisenstein_coeffs(p, f, G, list(parsed["eis"]))
    return PadicField(p, f, G, eis, precision=prec)
