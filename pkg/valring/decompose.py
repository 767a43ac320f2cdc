"""Finite-field combinatorics behind the definitions.

Residue-level generating sets, the a + b + c*d decomposition and its lift to O_K, coverage scans
that fix the constant N, power-map surjectivity and point counts on the witness curves.
All residue work is vectorised over the integer encoding of k (see FiniteField).
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from sympy.ntheory import n_order

from .config import settings
from .errors import (
    BadParameter,
    InvariantViolation,
    NoDecomposition,
    NotIntegral,
    ResidueNotCovered,
    TooLarge,
)
from .fields import Element, Field, FiniteField, FiniteFieldElement, field_of_order, prime_power

logger = logging.getLogger("decompose")

SET_NAMES = ("T2", "T3", "T", "Tplus")
MAX_Q = 1 << 12


def _check_q(q: int) -> FiniteField:
    if q > max(MAX_Q, settings.max_enum):
        raise TooLarge(f"q = {q} exceeds {max(MAX_Q, settings.max_enum)}")
    if prime_power(q) is None:
        raise BadParameter(f"{q} is not a prime power")
    return field_of_order(q)


# ---- residue-level sets ----

def nonzero_powers(k: FiniteField, n: int) -> np.ndarray:
    mask = k.power_counts(n) > 0
    mask[0] = False
    return mask


def inverse_array(k: FiniteField) -> np.ndarray:
    els = k.elements_array()
    inv = k.exp_array[(-k.log_array[els]) % (k.q - 1)]
    return np.where(els == 0, 0, inv)


def set_mask(name: str, k: FiniteField) -> np.ndarray:
    """Boolean membership mask over the encodings of k."""
    els = k.elements_array()
    if name in ("T2", "T3"):
        p = int(name[1])
        powers = nonzero_powers(k, p)
        shifted = k.add_arrays(els, np.full_like(els, k.from_int(p ** p).value))
        return powers[shifted] & ~powers
    if name == "T":
        return set_mask("T2", k) | set_mask("T3", k)
    if name == "Tplus":
        image = k.artin_schreier_counts() > 0
        return (els != 0) & ~image & ~image[inverse_array(k)]
    if name.startswith("P") and name[1:].isdigit():
        return nonzero_powers(k, int(name[1:]))
    raise BadParameter(f"unknown set {name!r}")


def definable_set_residue(name: str, k: FiniteField) -> tuple[FiniteFieldElement, ...]:
    """Members in canonical order."""
    if k.q > MAX_Q:
        raise TooLarge(f"q = {k.q} exceeds {MAX_Q}")
    return tuple(k.element(v) for v in np.flatnonzero(set_mask(name, k)))


# ---- a + b + c*d ----

@dataclass
class DecompositionCertificate:
    a: Element
    b: Element
    c: Element
    d: Element
    target: Element
    level: str = "residue"
    residue: "DecompositionCertificate | None" = field(default=None, repr=False)

    def members(self) -> tuple[Element, Element, Element, Element]:
        return self.a, self.b, self.c, self.d

    def holds(self) -> bool:
        K = self.target.owner
        total = K.add(K.add(self.a, self.b), K.mul(self.c, self.d))
        return K.is_zero(K.sub(total, self.target))

    def to_dict(self) -> dict:
        fmt = self.target.owner.format_element
        out = {k: fmt(getattr(self, k)) for k in ("a", "b", "c", "d", "target")}
        out["level"] = self.level
        return out


def _product_table(k: FiniteField, members: np.ndarray) -> np.ndarray:
    """first[t] = flat index of the lex-first (c, d) with c*d = t, or -1."""
    c, d = np.meshgrid(members, members, indexing="ij")
    prods = k.mul_arrays(c.ravel(), d.ravel())
    first = np.full(k.q, -1, dtype=np.int64)
    values, idx = np.unique(prods, return_index=True)
    first[values] = idx
    return first


def iter_decompositions(theta: FiniteFieldElement, S: Sequence[FiniteFieldElement]) -> Iterator[DecompositionCertificate]:
    """Every (a, b, c, d) in S^4 with a + b + c*d = theta, lexicographic."""
    k = theta.owner
    members = np.array(sorted({s.value for s in S}), dtype=np.int64)
    if members.size == 0:
        raise BadParameter("generating set is empty")
    c, d = np.meshgrid(members, members, indexing="ij")
    prods = k.mul_arrays(c.ravel(), d.ravel())
    for a in members:
        for b in members:
            t = k.add_int(theta.value, k.neg_int(k.add_int(int(a), int(b))))
            for i in np.flatnonzero(prods == t):
                yield DecompositionCertificate(
                    k.element(a), k.element(b), k.element(c.ravel()[i]), k.element(d.ravel()[i]), theta
                )


def cd_decompose(theta: FiniteFieldElement, S: Sequence[FiniteFieldElement]) -> DecompositionCertificate:
    k = theta.owner
    members = np.array(sorted({s.value for s in S}), dtype=np.int64)
    if members.size == 0:
        raise BadParameter("generating set is empty")
    first = _product_table(k, members)
    m = members.size
    for a in members:
        for b in members:
            t = k.add_int(theta.value, k.neg_int(k.add_int(int(a), int(b))))
            i = first[t]
            if i >= 0:
                c, d = members[i // m], members[i % m]
                return DecompositionCertificate(k.element(a), k.element(b), k.element(c), k.element(d), theta)
    raise NoDecomposition(f"{k.format_element(theta)} is not a + b + c*d over the given set")


def coverage(k: FiniteField, S: Sequence[FiniteFieldElement] | np.ndarray) -> tuple[bool, list[int]]:
    """(covered, uncovered encodings) for {a + b + c*d : a, b, c, d in S}."""
    if isinstance(S, np.ndarray) and S.dtype == bool:
        members = np.flatnonzero(S)
    else:
        members = np.array(sorted({s.value for s in S}), dtype=np.int64)
    if members.size == 0:
        return False, list(range(k.q))
    a, b = np.meshgrid(members, members, indexing="ij")
    sums = np.unique(k.add_arrays(a.ravel(), b.ravel()))
    prods = np.unique(k.mul_arrays(a.ravel(), b.ravel()))
    s, p = np.meshgrid(sums, prods, indexing="ij")
    reached = np.zeros(k.q, dtype=bool)
    reached[k.add_arrays(s.ravel(), p.ravel())] = True
    failures = [int(v) for v in np.flatnonzero(~reached)]
    return not failures, failures


# ---- scans ----

def t_applicable_q(q: int) -> bool:
    """T needs a non-cube in characteristic 2."""
    p, _ = prime_power(q)
    return p != 2 or math.gcd(q - 1, 3) != 1


@dataclass
class ScanRecord:
    q: int
    set_name: str
    size: int
    covered: bool
    failures: list[int]
    ms: int
    applicable: bool = True

    def to_dict(self) -> dict:
        return {
            "q": self.q, "set": self.set_name, "size": self.size, "covered": self.covered,
            "failures": self.failures, "ms": self.ms, "applicable": self.applicable,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScanRecord":
        return cls(data["q"], data["set"], data["size"], data["covered"], data["failures"], data["ms"],
                   data.get("applicable", True))


def scan_one(set_name: str, q: int) -> ScanRecord:
    start = time.perf_counter()
    k = _check_q(q)
    mask = set_mask(set_name, k)
    covered, failures = coverage(k, mask)
    applicable = t_applicable_q(q) if set_name == "T" else True
    ms = int((time.perf_counter() - start) * 1000)
    return ScanRecord(q, set_name, int(mask.sum()), covered, failures, ms, applicable)


def prime_powers(qmin: int, qmax: int) -> list[int]:
    return [q for q in range(max(qmin, 2), qmax + 1) if prime_power(q) is not None]


def minimal_N(records: Sequence[ScanRecord], qmin: int) -> int:
    """Least N with every applicable q >= N covered; qmin when nothing fails."""
    uncovered = [r.q for r in records if r.applicable and not r.covered]
    return max(uncovered) + 1 if uncovered else qmin


def monotonicity_breaks(records: Sequence[ScanRecord]) -> list[int]:
    """Applicable q that fail after some smaller applicable q was covered."""
    seen_covered = False
    breaks = []
    for r in sorted(records, key=lambda r: r.q):
        if not r.applicable:
            continue
        if r.covered:
            seen_covered = True
        elif seen_covered:
            breaks.append(r.q)
    return breaks


@dataclass
class ScanResult:
    set_name: str
    qmin: int
    qmax: int
    records: list[ScanRecord]
    N: int

    def to_dict(self) -> dict:
        return {
            "set": self.set_name, "qmin": self.qmin, "qmax": self.qmax, "N": self.N,
            "monotonicity_breaks": monotonicity_breaks(self.records),
        }


def scan_N(set_name: str, qmin: int, qmax: int) -> ScanResult:
    if qmax > MAX_Q:
        raise TooLarge(f"qmax = {qmax} exceeds {MAX_Q}")
    if set_name not in ("T", "Tplus") and not (set_name.startswith("P") and set_name[1:].isdigit()):
        raise BadParameter(f"unknown set {set_name!r}")
    records = [scan_one(set_name, q) for q in prime_powers(qmin, qmax)]
    return ScanResult(set_name, qmin, qmax, records, minimal_N(records, qmin))


# ---- lifting ----

def residue_base_set(base: str) -> str:
    if base not in ("T", "Tplus"):
        raise BadParameter(f"unknown base set {base!r}")
    return base


def lift_decomposition(theta: Element, K: Field, base: str = "T") -> DecompositionCertificate:
    """a^ = theta - (b^ + c^ d^) with b^, c^, d^ canonical lifts; every member re-verified in K."""
    from .predicates import base_member

    K.coerce(theta)
    if K.val(theta) < 0:
        raise NotIntegral("theta has negative valuation")
    k = K.residue_field
    if k.q > MAX_Q:
        raise TooLarge(f"residue field of order {k.q}")
    S = definable_set_residue(residue_base_set(base), k)
    if not S:
        raise ResidueNotCovered(f"{base}(k) is empty for q = {k.q}")
    tried = 0
    for cert in iter_decompositions(K.residue(theta), S):
        tried += 1
        b, c, d = (K.lift(x) for x in (cert.b, cert.c, cert.d))
        a = K.sub(theta, K.add(b, K.mul(c, d)))
        if K.residue(a) != cert.a:
            raise InvariantViolation("residue of the lifted a differs from the residue-level a")
        if all(base_member(base, x) for x in (a, b, c, d)):
            lifted = DecompositionCertificate(a, b, c, d, theta, level="lifted", residue=cert)
            if not lifted.holds():
                raise InvariantViolation("lifted decomposition does not sum to theta")
            logger.debug("decompose: lifted after %d residue candidates", tried)
            return lifted
    raise ResidueNotCovered(f"no liftable {base}-decomposition of the residue over q = {k.q}")


# ---- power maps ----

def power_surjective(q: int, m: int) -> bool:
    """F_q^* = (F_q^*)^m, by enumeration and by gcd(q - 1, m) = 1; the two must agree."""
    if m < 1 or m > 64:
        raise BadParameter(f"m = {m} outside 1..64")
    k = _check_q(q)
    image = k.pow_arrays(k.elements_array()[1:], m)
    by_enumeration = np.unique(image).size == q - 1
    by_gcd = math.gcd(q - 1, m) == 1
    if by_enumeration != by_gcd:
        raise InvariantViolation(f"q = {q}, m = {m}: enumeration says {by_enumeration}, gcd says {by_gcd}")
    return by_gcd


def power_surjective_family(p: int, s: int, m: int, count: int = 4) -> list[dict]:
    """Surjectivity of x -> x^m along q = p^(s + a*h), h the order of p mod m."""
    if math.gcd(p, m) != 1:
        raise BadParameter(f"p = {p} and m = {m} are not coprime")
    h = n_order(p, m) if m > 1 else 1
    expected = math.gcd(p ** s - 1, m) == 1
    rows = []
    for a in range(count):
        f = s + a * h
        q = p ** f
        surjective = math.gcd(q - 1, m) == 1
        method = "gcd"
        if q <= MAX_Q:
            surjective = power_surjective(q, m)
            method = "enumeration"
        if surjective != expected:
            raise InvariantViolation(f"surjectivity changes along the family at q = {q}")
        rows.append({"q": q, "f": f, "surjective": surjective, "method": method})
    return rows


def all_cubes_char2_scan(fmax: int) -> list[int]:
    """f <= fmax with every element of F_(2^f) a cube."""
    if fmax < 1 or fmax > 20:
        raise BadParameter(f"fmax = {fmax} outside 1..20")
    found = []
    for f in range(1, fmax + 1):
        q = 2 ** f
        all_cubes = power_surjective(q, 3) if q <= MAX_Q else math.gcd(q - 1, 3) == 1
        if all_cubes:
            found.append(f)
    return found


# ---- witness curves ----

def curve_points(name: str, q: int, a: FiniteFieldElement | int) -> int:
    """Affine points of the curves witnessing that T_2 (or T_3) and T^+ are infinite.

    dimC:  w^2 = 4 + x, a v^2 = x                 (odd q, a a non-square)
           w^3 = 27 + x, a v^3 = x                (even q, a a non-cube)
    dim2C: 1 + 4x = a w^2, 1 + 4/x = a v^2, x != 0   (odd q, a a non-square)
           w^2 + w = a - x, v^2 + v = a - 1/x        (even q, a outside the AS image)
    """
    k = _check_q(q)
    a = k.coerce(a) if isinstance(a, FiniteFieldElement) else k.element(a)
    av = a.value
    els = k.elements_array()
    if name == "dimC":
        n = 2 if k.p != 2 else 3
        counts = k.power_counts(n)
        if av == 0 or k.is_power_int(av, n):
            raise BadParameter(f"a must be a non-{'square' if n == 2 else 'cube'}")
        shift = k.add_arrays(els, np.full_like(els, k.from_int(n ** n).value))
        scaled = k.mul_arrays(els, np.full_like(els, k.inv_int(av)))
        return int((counts[shift] * counts[scaled]).sum())
    if name == "dim2C":
        x = els[1:]
        inv = inverse_array(k)[x]
        if k.p == 2:
            if av in k.artin_schreier_table:
                raise BadParameter("a must lie outside the Artin-Schreier image")
            counts = k.artin_schreier_counts()
            neg_a = np.full_like(x, av)
            left = k.add_arrays(neg_a, k.neg_arrays(x))
            right = k.add_arrays(neg_a, k.neg_arrays(inv))
            return int((counts[left] * counts[right]).sum())
        if av == 0 or k.is_power_int(av, 2):
            raise BadParameter("a must be a non-square")
        counts = k.power_counts(2)
        one = np.ones_like(x)
        four = np.full_like(x, k.from_int(4).value)
        ainv = np.full_like(x, k.inv_int(av))
        left = k.mul_arrays(k.add_arrays(one, k.mul_arrays(four, x)), ainv)
        right = k.mul_arrays(k.add_arrays(one, k.mul_arrays(four, inv)), ainv)
        return int((counts[left] * counts[right]).sum())
    raise BadParameter(f"unknown curve {name!r}")
