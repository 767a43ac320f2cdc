"""Recognition of named formulas and their dedicated deciders.

Shapes match up to renaming of bound variables and reordering of conjunctions/disjunctions.
A decider returns (verdict, witnesses), verdict None meaning it cannot certify in this field.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

import sympy

from ..errors import ValringError
from ..fields import Element, Field, FiniteField, find_roots
from .ast import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    IntLit,
    Not,
    Or,
    Pow,
    Var,
    free_vars,
    map_terms,
    rename_term,
    substitute,
    substitute_as,
    term_vars,
    to_sympy,
)
from .parser import parse
from .printer import print_formula

logger = logging.getLogger("evaluator")

Decision = tuple[bool | None, dict[str, Element]]


# ---- canonical form ----

def _flatten(phi: Formula, cls) -> list[Formula]:
    if isinstance(phi, cls):
        return _flatten(phi.left, cls) + _flatten(phi.right, cls)
    return [phi]


def canonical(phi: Formula, mapping: dict[str, str] | None = None, level: int = 0) -> Formula:
    """Bound variables renamed by binder depth; conjunctions and disjunctions flattened and sorted."""
    mapping = mapping or {}
    if isinstance(phi, (Exists, Forall)):
        name = f"_b{level}"
        return type(phi)(name, canonical(phi.body, {**mapping, phi.var: name}, level + 1))
    if isinstance(phi, Not):
        return Not(canonical(phi.arg, mapping, level))
    if isinstance(phi, (And, Or)):
        cls = type(phi)
        parts = sorted((canonical(p, mapping, level) for p in _flatten(phi, cls)), key=print_formula)
        out = parts[0]
        for p in parts[1:]:
            out = cls(out, p)
        return out
    return map_terms(phi, lambda t: rename_term(t, mapping))


@lru_cache(maxsize=4096)
def canonical_text(phi: Formula) -> str:
    return print_formula(canonical(phi))


def free_var_list(phi: Formula) -> list[str]:
    return sorted(free_vars(phi))


def pow_exponents(phi: Formula) -> list[int]:
    found: set[int] = set()

    def visit_term(t):
        if isinstance(t, Pow):
            found.add(t.exp)
            visit_term(t.base)
        elif hasattr(t, "left"):
            visit_term(t.left)
            visit_term(t.right)
        elif hasattr(t, "arg"):
            visit_term(t.arg)
        return t

    def visit(f):
        if isinstance(f, (Exists, Forall)):
            visit(f.body)
        elif isinstance(f, Not):
            visit(f.arg)
        elif isinstance(f, (And, Or)):
            visit(f.left)
            visit(f.right)
        else:
            map_terms(f, visit_term)

    visit(phi)
    return sorted(found)


# ---- registry ----

@dataclass
class Shape:
    name: str
    template: Callable[[dict], Formula]
    candidates: Callable[[Formula], Iterable[dict]] = lambda phi: [{}]
    decide: Callable[[dict, Element], Decision] = None
    applies: Callable[[Field], bool] = lambda K: True


@dataclass
class Match:
    shape: str
    params: dict
    var: str
    decide: Callable[[dict, Element], Decision] = field(repr=False)
    applies: Callable[[Field], bool] = field(repr=False)


SHAPES: list[Shape] = []
CUSTOM_MATCHERS: list[Callable[[Formula], Match | None]] = []


def register(shape: Shape) -> Shape:
    SHAPES.append(shape)
    return shape


def _t_p_decider(p: int):
    def decide(params, x):
        from ..predicates import in_T_p
        return in_T_p(x, p).value, {}
    return decide


def _t_decider(params, x):
    from ..predicates import in_T
    return in_T(x).value, {}


def _tplus_decider(params, x):
    from ..predicates import in_T_plus
    K = x.owner
    v = in_T_plus(x)
    return v.value, ({"z": K.inv(x)} if v else {})


def _as_decider(params, x):
    from ..predicates import is_artin_schreier
    v = is_artin_schreier(x)
    return v.value, ({"y": v.witness} if v else {})


def _pn_decider(params, x):
    from ..predicates import is_nth_power
    K = x.owner
    if K.is_zero(x):
        return True, {"y": K.zero()}
    v = is_nth_power(x, params["n"])
    return v.value, ({"y": v.witness} if v else {})


def _main_decider(method: str):
    def decide(params, x):
        from ..valdef.membership import decide_OK
        from ..errors import MethodInapplicable
        K = x.owner
        if isinstance(K, FiniteField):
            return None, {}
        q = K.residue_field.q
        if params["ell"] % (q * (q - 1)):
            return None, {}
        try:
            cert = decide_OK(x, K, method, ell=params["ell"])
        except MethodInapplicable:
            return None, {}
        return cert.verdict == "inside", {}
    return decide


def _main_template(base: str, prime: bool = False):
    def build(params):
        from ..valdef.membership import main_formula
        phi = main_formula(params["ell"], base)
        return substitute_as(phi) if prime else phi
    return build


def _ell_candidates(phi):
    return [{"ell": k} for k in pow_exponents(phi) if k >= 2]


register(Shape("T2", lambda _: parse("P2(4 + x) & !P2(x)"), decide=_t_p_decider(2)))
register(Shape("T3", lambda _: parse("P3(27 + x) & !P3(x)"), decide=_t_p_decider(3)))
register(Shape("T", lambda _: parse("(P2(4 + x) & !P2(x)) | (P3(27 + x) & !P3(x))"), decide=_t_decider))
register(Shape("Tplus", lambda _: parse("E z (x*z = 1 & !PAS2(x) & !PAS2(z))"), decide=_tplus_decider))
register(Shape("PAS2", lambda _: parse("E y (x = y^2 + y)"), decide=_as_decider))
register(Shape(
    "Pn", lambda p: parse(f"E y (x = y^{p['n']})"),
    candidates=lambda phi: [{"n": k} for k in pow_exponents(phi) if 2 <= k <= 64],
    decide=_pn_decider,
))
register(Shape("main", _main_template("T"), candidates=_ell_candidates, decide=_main_decider("main")))
register(Shape("main2", _main_template("Tplus"), candidates=_ell_candidates, decide=_main_decider("main2")))
register(Shape(
    "main_prime", _main_template("Tplus", prime=True), candidates=_ell_candidates, decide=_main_decider("main2"),
    applies=lambda K: K.characteristic != 2,
))


# ---- extension shapes ----

def _peel(phi: Formula, cls) -> tuple[list[str], Formula]:
    names = []
    while isinstance(phi, cls):
        names.append(phi.var)
        phi = phi.body
    return names, phi


def _same(a: Formula, b: Formula) -> bool:
    return canonical_text(a) == canonical_text(b)


def _classify(atoms: list[Formula], z: str, y: str, o: str, w: str, x: str) -> dict | None:
    """Split the conjuncts into G(z) = 0, H(z, y) = 0, the power equation and an optional link."""
    if not all(isinstance(a, Eq) for a in atoms):
        return None
    found: dict = {}
    for atom in atoms:
        names = term_vars(atom.left) | term_vars(atom.right)
        diff = sympy.expand(to_sympy(atom.left) - to_sympy(atom.right))
        if names == {z} and "G" not in found:
            found["G"] = diff
        elif y in names and names <= {z, y} and "H" not in found:
            found["H"] = diff
        elif w in names:
            for k in (2, 3):
                pattern = Eq(_one_plus(y, o, k), Pow(Var(w), k))
                if _same(atom, pattern):
                    found["k"] = k
        elif names == {x, y, o}:
            found["link"] = atom
    return found


def _one_plus(y: str, o: str, k: int):
    from .ast import Add, Mul
    return Add(IntLit(1), Mul(Var(y), Pow(Var(o), k)))


def _match_extension(phi: Formula) -> Match | None:
    free = free_var_list(phi)
    if len(free) != 1:
        return None
    x = free[0]
    if isinstance(phi, Exists):
        names, body = _peel(phi, Exists)
        atoms = _flatten(body, And)
        if len(names) == 3 and len(atoms) == 3:
            z, y, w = names
            found = _classify(atoms, z, y, x, w, x)
            if found and {"G", "H", "k"} <= found.keys():
                return Match("edef_exists", {**found, "names": names}, x, _edef_exists, lambda K: True)
        if len(names) == 4 and len(atoms) == 4:
            z, y, o, w = names
            found = _classify(atoms, z, y, o, w, x)
            link = found.get("link") if found else None
            if link is not None and {"G", "H", "k"} <= found.keys() and _same(link, Eq(Var(x), _times(y, o))):
                return Match("maximal_ideal", {**found, "names": names}, x, _edef_ideal, lambda K: True)
        return None
    if isinstance(phi, Forall):
        names, body = _peel(phi, Forall)
        if len(names) != 4 or not isinstance(body, Not):
            return None
        atoms = _flatten(body.arg, And)
        if len(atoms) != 4:
            return None
        z, y, o, w = names
        found = _classify(atoms, z, y, o, w, x)
        link = found.get("link") if found else None
        if link is None or not {"G", "H", "k"} <= found.keys():
            return None
        if not _same(link, Eq(_times(x, y, o), IntLit(1))):
            return None
        return Match("edef_forall", {**found, "names": names}, x, _edef_forall, lambda K: True)
    return None


def _times(*names: str):
    from .ast import mul
    return mul(*[Var(n) for n in names])


CUSTOM_MATCHERS.append(_match_extension)


def _poly_in(K: Field, expr, var: str, env: dict[str, Element]) -> list[Element]:
    """Coefficients (low-to-high) of expr in var, evaluated in K under env."""
    from .ast import from_sympy
    from .evaluator import eval_term
    poly = sympy.Poly(expr, sympy.Symbol(var))
    coeffs = list(reversed(poly.all_coeffs()))
    return [eval_term(from_sympy(c), env, K) for c in coeffs]


def _uniformizer_pairs(params: dict, K: Field) -> list[tuple[Element, Element]]:
    return _pairs(K, params["G"], params["H"], params["names"][0], params["names"][1])


@lru_cache(maxsize=64)
def _pairs(K: Field, G, H, z: str, y: str) -> list[tuple[Element, Element]]:
    """(z, y) with G(z) = 0 and H(z, y) = 0, found once per field."""
    pairs = []
    for zr in find_roots(_poly_in(K, G, z, {}), K):
        hz = _poly_in(K, H, y, {z: zr})
        lead = hz[-1]
        if K.is_zero(lead):
            continue
        monic = [K.div(c, lead) for c in hz]
        for yr in find_roots(monic, K):
            pairs.append((zr, yr))
    return pairs


def _power_or_zero(K: Field, t: Element, k: int):
    from ..predicates import is_nth_power
    if K.is_exact(t) and K.is_zero(t):
        return True, K.zero()
    v = is_nth_power(t, k)
    return v.value, (v.witness if v else None)


def _edef_exists(params: dict, x: Element) -> Decision:
    K = x.owner
    if isinstance(K, FiniteField):
        return None, {}
    z, y, w = params["names"]
    k = params["k"]
    for zr, yr in _uniformizer_pairs(params, K):
        ok, root = _power_or_zero(K, K.add(K.one(), K.mul(yr, K.pow(x, k))), k)
        if ok:
            return True, {z: zr, y: yr, w: root}
    return False, {}


def _edef_ideal(params: dict, x: Element) -> Decision:
    K = x.owner
    if isinstance(K, FiniteField):
        return None, {}
    z, y, o, w = params["names"]
    k = params["k"]
    for zr, yr in _uniformizer_pairs(params, K):
        ov = K.div(x, yr)
        ok, root = _power_or_zero(K, K.add(K.one(), K.mul(yr, K.pow(ov, k))), k)
        if ok:
            return True, {z: zr, y: yr, o: ov, w: root}
    return False, {}


def _edef_forall(params: dict, x: Element) -> Decision:
    K = x.owner
    if isinstance(K, FiniteField):
        return None, {}
    if K.is_zero(x):
        return True, {}
    k = params["k"]
    for zr, yr in _uniformizer_pairs(params, K):
        ov = K.inv(K.mul(x, yr))
        ok, _ = _power_or_zero(K, K.add(K.one(), K.mul(yr, K.pow(ov, k))), k)
        if ok:
            return False, {}
    return True, {}


# ---- lookup ----

@lru_cache(maxsize=1024)
def match_shape(phi: Formula) -> Match | None:
    free = free_var_list(phi)
    if len(free) != 1:
        return None
    x = free[0]
    target = canonical_text(phi)
    for shape in SHAPES:
        for params in shape.candidates(phi):
            try:
                template = shape.template(params)
            except (ValringError, ValueError):
                continue
            if x != "x":
                template = substitute(template, {"x": Var(x)})
            if canonical_text(template) == target:
                return Match(shape.name, params, x, shape.decide, shape.applies)
    for matcher in CUSTOM_MATCHERS:
        m = matcher(phi)
        if m is not None:
            return m
    return None


def decide_shape(phi: Formula, env: dict[str, Element], K: Field) -> tuple[str, Decision] | None:
    m = match_shape(phi)
    if m is None or m.var not in env or not m.applies(K):
        return None
    try:
        verdict, witnesses = m.decide(m.params, env[m.var])
    except ValringError as exc:
        logger.debug("evaluator: decider %s gave up: %s", m.shape, exc.detail)
        return None
    if verdict is None:
        return None
    return m.shape, (verdict, witnesses)
