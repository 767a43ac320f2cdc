"""Membership in the valuation ring through the sumset and decomposition branches.

O_K = ({0, 1} + S_ell(B)) u {a + b + c*d : a, b, c, d in B} with B = T (method main) or
B = T+ (method main2), for ell a positive multiple of q(q - 1).
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..config import settings
from ..decompose import DecompositionCertificate, lift_decomposition
from ..errors import (
    BadParameter,
    InvariantViolation,
    MethodInapplicable,
    NotExact,
    ResidueNotCovered,
    Unsupported,
)
from ..fields import Element, Field, FiniteField, prime_power
from ..formula.ast import (
    PAS2,
    Add,
    And,
    Eq,
    Exists,
    Formula,
    IntLit,
    Mul,
    Not,
    Or,
    Pn,
    Pow,
    Sub,
    Term,
    Var,
    conj,
    disj,
    exists,
)
from ..predicates import base_member, s_ell_witness, t_applicable

logger = logging.getLogger("valdef")

METHODS = {"main": "T", "main2": "Tplus"}
BRANCHES = ("auto", "sumset_sell", "cauchy_davenport")


@dataclass(frozen=True)
class EllConstant:
    ell: int
    q: int | None = None
    mode: str = "per-field"


def choose_ell(q: int | None = None, *, uniform: bool = False, n: int | None = None, set_name: str = "T") -> EllConstant:
    """Per-field ell = q(q - 1); uniform ell = lcm of q(q - 1) over applicable q < N."""
    if not uniform:
        if q is None or prime_power(q) is None:
            raise BadParameter(f"{q} is not a prime power")
        return EllConstant(q * (q - 1), q, "per-field")
    from ..scanner import get_N, uniform_ell
    if n is None:
        n = get_N(set_name, compute=False)
    ell = uniform_ell(n, set_name)
    if q is not None and ell % (q * (q - 1)):
        # q_K >= N with the sumset branch in use
        ell = math.lcm(ell, q * (q - 1))
    return EllConstant(ell, q, "uniform")


@dataclass
class MembershipCertificate:
    verdict: str
    branch: str
    x: Element
    base: str
    ell: int | None = None
    shift: int | None = None
    unit: Element | None = None
    a: Element | None = None
    decomposition: DecompositionCertificate | None = None
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        K = self.x.owner
        out = {"verdict": self.verdict, "branch": self.branch}
        if self.branch == "negative_valuation":
            out["val"] = self.data["val"]
        elif self.branch == "sumset_sell":
            out.update(
                shift=self.shift, unit=K.format_element(self.unit), a=K.format_element(self.a), ell=self.ell,
                base=self.base,
            )
        else:
            out.update(self.decomposition.to_dict(), base=self.base)
        return out


def _number(v):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else str(v)


def oracle_OK(x: Element) -> bool:
    K = x.owner
    if not K.is_exact(x):
        raise NotExact("oracle needs an exact element")
    return K.val(x) >= 0


def _resolve_ell(K: Field, base: str, ell: int | None, ell_mode: str) -> int:
    q = K.residue_field.q
    if ell is None:
        ell = choose_ell(q, uniform=ell_mode == "uniform", set_name=base).ell
    if ell <= 0 or ell % (q * (q - 1)):
        raise BadParameter(f"ell = {ell} is not a positive multiple of q(q-1) = {q * (q - 1)}")
    return ell


def _sumset(x: Element, K: Field, base: str, ell: int) -> MembershipCertificate:
    """x = shift + s with s a unit; shift 1 whenever x - 1 is a unit."""
    s = K.sub(x, K.one())
    shift = 1
    if K.val(s) != 0:
        s, shift = x, 0
    a, cert = s_ell_witness(s, ell, base)
    return MembershipCertificate("inside", "sumset_sell", x, base, ell=ell, shift=shift, unit=s, a=a, data=cert)


def decide_OK(
    x: Element,
    K: Field,
    method: str = "main2",
    *,
    ell: int | None = None,
    branch: str = "auto",
    ell_mode: str | None = None,
) -> MembershipCertificate:
    if method not in METHODS:
        raise BadParameter(f"unknown method {method!r}")
    if branch not in BRANCHES:
        raise BadParameter(f"unknown branch {branch!r}")
    if isinstance(K, FiniteField):
        raise Unsupported("decide_OK needs a valued field")
    x = K.coerce(x)
    if not K.is_exact(x):
        raise NotExact("decide_OK needs an exact element")
    base = METHODS[method]
    k = K.residue_field
    if method == "main" and not t_applicable(k):
        raise MethodInapplicable(f"every element of F_{k.q} is a cube")
    v = K.val(x)
    if v < 0:
        cert = MembershipCertificate("outside", "negative_valuation", x, base, data={"val": _number(v)})
        logger.debug("valdef: %s outside, val %s", K.format_element(x), v)
        return cert
    ell = _resolve_ell(K, base, ell, ell_mode or settings.ell_mode)

    cert = None
    use_cd = branch == "cauchy_davenport"
    if branch == "auto":
        from ..scanner import get_N
        use_cd = k.q >= get_N(base)
    if use_cd:
        try:
            dec = lift_decomposition(x, K, base)
            cert = MembershipCertificate("inside", "cauchy_davenport", x, base, ell=ell, decomposition=dec)
        except ResidueNotCovered:
            if branch == "cauchy_davenport":
                raise
            logger.info("valdef: residue decomposition unavailable for q=%d, using the sumset branch", k.q)
    if cert is None:
        cert = _sumset(x, K, base, ell)
    if not verify_certificate(cert, K):
        raise InvariantViolation(f"{cert.branch} certificate for {K.format_element(x)} failed to re-verify")
    return cert


def verify_certificate(cert: MembershipCertificate, K: Field) -> bool:
    """Independent re-check through the predicates only."""
    x = cert.x
    if cert.verdict == "outside":
        return K.val(x) < 0
    if cert.branch == "sumset_sell":
        s = K.sub(x, K.from_int(cert.shift))
        if cert.shift not in (0, 1) or K.val_bound(s) != (0, True):
            return False
        q = K.residue_field.q
        if cert.ell % (q * (q - 1)):
            return False
        from ..predicates import power_truncated
        z = K.add(K.sub(power_truncated(K, s, cert.ell), K.one()), cert.a)
        return bool(base_member(cert.base, cert.a)) and bool(base_member(cert.base, z))
    dec = cert.decomposition
    if dec is None or dec.target != x or not dec.holds():
        return False
    return all(base_member(cert.base, m) for m in dec.members())


# ---- formulas ----

def base_formula(t: Term, base: str, fresh: str = "v") -> Formula:
    """B(t) for B = T or T+ (T+ through an existential inverse)."""
    if base == "T":
        t2 = And(Pn(2, Add(IntLit(4), t)), Not(Pn(2, t)))
        t3 = And(Pn(3, Add(IntLit(27), t)), Not(Pn(3, t)))
        return Or(t2, t3)
    if base == "Tplus":
        v = Var(fresh)
        return Exists(fresh, conj(Eq(Mul(t, v), IntLit(1)), Not(PAS2(t)), Not(PAS2(v))))
    raise BadParameter(f"unknown base set {base!r}")


def main_formula(ell: int, base: str = "T") -> Formula:
    """Existential formula in x for O_K with generating set `base`."""
    if ell < 1:
        raise BadParameter("ell must be positive")
    x, u, a, b, c, d = (Var(n) for n in "xuabcd")
    shifted = Add(Sub(Pow(u, ell), IntLit(1)), a)
    sumset = exists(["u", "a"], conj(
        Or(Eq(x, u), Eq(x, Add(IntLit(1), u))),
        base_formula(a, base),
        base_formula(shifted, base),
    ))
    decomposition = exists(["a", "b", "c", "d"], conj(
        Eq(x, Add(Add(a, b), Mul(c, d))),
        *(base_formula(t, base) for t in (a, b, c, d)),
    ))
    return disj(sumset, decomposition)


def main_formula_for(K: Field, method: str = "main2", ell: int | None = None) -> Formula:
    base = METHODS[method]
    ell = _resolve_ell(K, base, ell, settings.ell_mode)
    return main_formula(ell, base)


__all__ = [
    "EllConstant", "MembershipCertificate", "choose_ell", "decide_OK", "oracle_OK", "verify_certificate",
    "main_formula", "main_formula_for", "base_formula",
]
