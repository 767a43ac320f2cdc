"""Invariant suites run by `valring selftest`.

Each suite cross-checks one family of deciders against an independent oracle (valuations,
exhaustive enumeration, gcd rules) on seeded samples. `reduced` keeps a full run well under a
minute; `full` uses the acceptance sample counts.
"""

import itertools
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import scanner
from .decompose import (
    all_cubes_char2_scan,
    cd_decompose,
    coverage,
    definable_set_residue,
    power_surjective_family,
    prime_powers,
    set_mask,
)
from .errors import MethodInapplicable, NoDecomposition, ResidueNotCovered, ValringError
from .fields import HenselProblem, field_of_order, find_roots, hensel_root, make_field, poly_derivative, poly_eval
from .formula import (
    PAS2,
    Add,
    And,
    Eq,
    Exists,
    Forall,
    IntLit,
    Mul,
    Neg,
    Not,
    Or,
    Pn,
    Pow,
    StrategyConfig,
    Sub,
    Var,
    eval_qf,
    evaluate,
    parse,
    print_formula,
    substitute_as,
)
from .predicates import (
    in_T,
    in_T_p,
    in_T_plus,
    is_artin_schreier,
    is_nth_power,
    t_applicable,
)
from .valdef import (
    decide_OK,
    field_for_plan,
    hstar_at,
    main_formula_for,
    make_plan,
    oracle_OK,
    uniformizer_set,
    verify_extension_formula,
)

logger = logging.getLogger("selftest")

FIELDS = (
    "Qp:2", "Qp:3", "Qp:5", "Qp:7", "Qp:11", "Qp:13",
    "Ext:Qp:2:unram=1:eis=[-2,0,1]", "Ext:Qp:3:unram=2:eis=[-3,1]",
    "Laurent:2^1", "Laurent:3^1", "Laurent:2^2", "Laurent:5^1", "Laurent:2^3", "Laurent:3^2",
)
REDUCED_FIELDS = ("Qp:2", "Qp:3", "Qp:5", "Ext:Qp:2:unram=1:eis=[-2,0,1]", "Laurent:2^1", "Laurent:2^2",
                  "Laurent:3^1")
PLANS = ((2, 1, 2), (3, 2, 1), (5, 1, 3))


@dataclass(frozen=True)
class Scale:
    name: str
    fields: tuple[str, ...]
    samples: int
    val_samples: int
    unit_samples: int
    lift_qmax: int
    scan_qmax: int
    power_qmax: int
    power_mmax: int
    ext_samples: int
    round_trips: int
    hensel_problems: int
    enum_qmax: int
    enum_nmax: int


SCALES = {
    "reduced": Scale("reduced", REDUCED_FIELDS, 25, 60, 20, 25, 49, 256, 12, 20, 500, 40, 64, 6),
    "full": Scale("full", FIELDS, 500, 1000, 200, 49, 101, 4096, 60, 200, 10_000, 500, 512, 12),
}


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, condition: bool, message: str) -> None:
        self.checks += 1
        if not condition:
            self.failures.append(message)

    def to_dict(self) -> dict:
        return {"suite": self.name, "ok": self.ok, "checks": self.checks, "failures": self.failures[:20],
                "failure_count": len(self.failures)}


def _sample(K, rng: random.Random, spread: int = 6):
    return K.random_element(rng, -spread * K.e, spread * K.e)


# ---- suites ----

def suite_definition(scale: Scale, seed: int) -> SuiteResult:
    """decide_OK with T+ agrees with val >= 0."""
    out = SuiteResult("definition")
    for desc in scale.fields:
        K = make_field(desc)
        rng = random.Random(f"{seed}:definition:{desc}")
        for _ in range(scale.samples):
            x = _sample(K, rng)
            try:
                inside = decide_OK(x, K, "main2").verdict == "inside"
            except ValringError as exc:
                out.check(False, f"{desc} {K.format_element(x)}: {exc.code}")
                continue
            out.check(inside == oracle_OK(x), f"{desc} {K.format_element(x)}: verdict {inside}")
    return out


def suite_main(scale: Scale, seed: int) -> SuiteResult:
    """decide_OK with T on applicable residue fields; rejection on the all-cubes ones."""
    out = SuiteResult("main")
    for desc in scale.fields:
        K = make_field(desc)
        if not t_applicable(K.residue_field):
            try:
                decide_OK(K.one(), K, "main")
            except MethodInapplicable:
                out.check(True, "")
            else:
                out.check(False, f"{desc}: method main accepted an all-cubes residue field")
            continue
        rng = random.Random(f"{seed}:main:{desc}")
        for _ in range(scale.samples):
            x = _sample(K, rng)
            try:
                inside = decide_OK(x, K, "main").verdict == "inside"
            except ValringError as exc:
                out.check(False, f"{desc} {K.format_element(x)}: {exc.code}")
                continue
            out.check(inside == oracle_OK(x), f"{desc} {K.format_element(x)}: verdict {inside}")
    return out


def suite_valuation_bounds(scale: Scale, seed: int) -> SuiteResult:
    """T inside O_K, T+ inside the units, and residue-level members lift."""
    out = SuiteResult("lemma-val")
    for desc in scale.fields:
        K = make_field(desc)
        rng = random.Random(f"{seed}:lemma-val:{desc}")
        for _ in range(scale.val_samples):
            x = _sample(K, rng)
            if in_T(x):
                out.check(K.val(x) >= 0, f"{desc} {K.format_element(x)} in T with negative valuation")
            if in_T_plus(x):
                out.check(K.val(x) == 0, f"{desc} {K.format_element(x)} in T+ off the units")
    for q in prime_powers(2, scale.lift_qmax):
        k = field_of_order(q)
        fields = [make_field(f"Laurent:{k.p}^{k.f}")]
        if k.f == 1:
            fields.append(make_field(f"Qp:{k.p}"))
        for K in fields:
            res = K.residue_field
            for name, p in (("T2", 2), ("T3", 3)):
                if res.p == p:
                    continue
                mask = set_mask(name, res)
                for v in range(1, q):
                    if mask[v]:
                        a = K.lift(res.element(v))
                        out.check(bool(in_T_p(a, p)), f"{K.descriptor}: lift of {v} not in {name}")
            mask = set_mask("Tplus", res)
            for v in range(1, q):
                if mask[v]:
                    out.check(bool(in_T_plus(K.lift(res.element(v)))), f"{K.descriptor}: lift of {v} not in T+")
    return out


def suite_unit_powers(scale: Scale, seed: int) -> SuiteResult:
    """val(y^ell - 1) >= 2 pi-digits for units y and ell = q(q - 1)."""
    out = SuiteResult("unit-powers")
    for desc in scale.fields:
        K = make_field(desc)
        q = K.residue_field.q
        ell = q * (q - 1)
        rng = random.Random(f"{seed}:unit-powers:{desc}")
        for _ in range(scale.unit_samples):
            y = K.random_element(rng, 0, 0)
            d = K.sub(K.pow(y, ell), K.one())
            out.check(K.ord_pi(d) >= 2, f"{desc} {K.format_element(y)}: ord {K.ord_pi(d)}")
    return out


def suite_cd_scan(scale: Scale, seed: int) -> SuiteResult:
    """N-scans for T and T+, the F_5 example, and certificate re-verification."""
    out = SuiteResult("cd-scan")
    for set_name in ("T", "Tplus"):
        result = scanner.n_scan(set_name, 2, scale.scan_qmax)
        for r in result.records:
            if r.applicable and r.q >= result.N:
                out.check(r.covered, f"{set_name}: q = {r.q} >= N = {result.N} not covered")
            out.check(r.covered == (not r.failures), f"{set_name}: q = {r.q} coverage flag inconsistent")
    f5 = field_of_order(5)
    out.check([a.value for a in definable_set_residue("T2", f5)] == [0, 2], "T2(F_5) is not {0, 2}")
    out.check(coverage(f5, definable_set_residue("T", f5))[0], "F_5 not covered by T")
    for q in prime_powers(2, scale.lift_qmax):
        k = field_of_order(q)
        S = definable_set_residue("T", k)
        if not S:
            continue
        members = {s.value for s in S}
        _, failures = coverage(k, S)
        for theta in k.elements():
            try:
                cert = cd_decompose(theta, S)
            except NoDecomposition:
                out.check(theta.value in failures, f"q = {q}: {theta.value} undecomposed but reported covered")
                continue
            ok = cert.holds() and all(m.value in members for m in cert.members())
            out.check(ok, f"q = {q}: certificate for {theta.value} does not re-verify")
    return out


def suite_power_scan(scale: Scale, seed: int) -> SuiteResult:
    """gcd rule against enumeration, and the all-cubes exponents in characteristic 2."""
    out = SuiteResult("power-scan")
    try:
        rows = scanner.power_scan(scale.power_qmax, scale.power_mmax)
        out.check(bool(rows), "power scan produced no rows")
    except ValringError as exc:
        out.check(False, f"power scan: {exc.detail}")
    out.check(all_cubes_char2_scan(12) == [1, 3, 5, 7, 9, 11], "all-cubes exponents are not the odd f <= 11")
    for p, s, m in ((2, 1, 3), (3, 1, 4), (5, 2, 3), (7, 1, 6)):
        try:
            power_surjective_family(p, s, m)
            out.check(True, "")
        except ValringError as exc:
            out.check(False, f"family p={p} s={s} m={m}: {exc.detail}")
    return out


def _class_roots(K, poly, depth: int) -> int:
    """Classes y mod pi^depth, y = sum c_j pi^j for 1 <= j < depth, holding a root of poly.

    A class counts when y is an exact root or Hensel's criterion puts the root inside it.
    """
    dpoly = poly_derivative(poly)
    lifts = list(K.residue_lifts())
    powers = [K.pow(K.uniformizer(), j) for j in range(1, depth)]
    count = 0
    for digits in itertools.product(lifts, repeat=depth - 1):
        y = K.zero()
        for c, pj in zip(digits, powers):
            y = K.add(y, K.mul(c, pj))
        fy = poly_eval(poly, y)
        if K.is_zero(fy):
            count += 1
            continue
        dfy = poly_eval(dpoly, y)
        if K.is_zero(dfy):
            continue
        vf, vd = K.val(fy), K.val(dfy)
        if vf > 2 * vd and K.e * (vf - vd) >= depth:
            count += 1
    return count


def suite_extension(scale: Scale, seed: int) -> SuiteResult:
    """Extension formulas agree with val >= 0; the uniformizer set is complete with valuation 1/e."""
    out = SuiteResult("extension")
    for p, f, e in PLANS:
        plan = make_plan(p, f, e)
        K = field_for_plan(plan)
        gammas = find_roots([K.from_int(c) for c in plan.G], K)
        out.check(len(gammas) == f, f"plan {p},{f},{e}: {len(gammas)} roots of G")
        expected = sum(_class_roots(K, hstar_at(plan, K, g), e + 2) for g in gammas)
        ys = uniformizer_set(plan, K)
        out.check(len(ys) == expected, f"plan {p},{f},{e}: {len(ys)} uniformizers, residue scan finds {expected}")
        for y in ys:
            out.check(K.val(y) == Fraction(1, e), f"plan {p},{f},{e}: uniformizer {K.format_element(y)}")
        report = verify_extension_formula(plan, K, scale.ext_samples, seed)
        for failure in report["failures"]:
            out.check(False, f"plan {p},{f},{e}: {failure}")
        out.check(report["agree_existential"] == scale.ext_samples, f"plan {p},{f},{e}: existential disagrees")
        out.check(report["agree_universal"] == scale.ext_samples, f"plan {p},{f},{e}: universal disagrees")
    return out


def suite_as_substitution(scale: Scale, seed: int) -> SuiteResult:
    """PAS2(t) -> P2(1 + 4t) preserves verdicts away from characteristic 2, and the main formulas
    agree with decide_OK on each branch."""
    out = SuiteResult("as-substitution")
    atom = PAS2(Var("x"))
    replaced = substitute_as(atom)
    for desc in scale.fields:
        K = make_field(desc)
        if K.characteristic == 2 or K.residue_field.p == 2:
            continue
        methods = ["main2"] + (["main"] if t_applicable(K.residue_field) else [])
        formulas = {m: main_formula_for(K, m) for m in methods}
        formula_prime = substitute_as(formulas["main2"])
        rng = random.Random(f"{seed}:as-substitution:{desc}")
        for _ in range(scale.samples):
            x = _sample(K, rng)
            if K.is_zero(K.add(K.one(), K.mul(K.from_int(4), x))):
                continue
            env = {"x": x}
            label = f"{desc} {K.format_element(x)}"
            out.check(eval_qf(atom, env, K) == eval_qf(replaced, env, K), f"{label}: atom")
            a = evaluate(formulas["main2"], env, K).verdict
            b = evaluate(formula_prime, env, K).verdict
            out.check(a == b != "unknown", f"{label}: {a} vs {b}")
            for method, phi in formulas.items():
                verdict = a if method == "main2" else evaluate(phi, env, K).verdict
                for branch in ("sumset_sell", "cauchy_davenport"):
                    try:
                        cert = decide_OK(x, K, method, branch=branch)
                    except ResidueNotCovered:
                        continue
                    except ValringError as exc:
                        out.check(False, f"{label} {method}/{branch}: {exc.code}")
                        continue
                    out.check((cert.verdict == "inside") == (verdict == "true"),
                              f"{label} {method}/{branch}: decide_OK {cert.verdict}, formula {verdict}")
    return out


def random_term(rng: random.Random, depth: int, names: list[str]):
    if depth <= 0 or rng.random() < 0.3:
        if names and rng.random() < 0.6:
            return Var(rng.choice(names))
        return IntLit(rng.randint(-9, 9))
    kind = rng.choice(("add", "sub", "mul", "neg", "pow"))
    if kind == "neg":
        return Neg(random_term(rng, depth - 1, names))
    if kind == "pow":
        return Pow(random_term(rng, depth - 1, names), rng.randint(0, 4))
    cls = {"add": Add, "sub": Sub, "mul": Mul}[kind]
    return cls(random_term(rng, depth - 1, names), random_term(rng, depth - 1, names))


def random_formula(rng: random.Random, depth: int, names: list[str] | None = None):
    names = list(names or ["x"])
    if depth <= 0 or rng.random() < 0.25:
        kind = rng.choice(("eq", "pn", "as"))
        t = random_term(rng, 2, names)
        if kind == "eq":
            return Eq(t, random_term(rng, 2, names))
        if kind == "pn":
            return Pn(rng.randint(2, 5), t)
        return PAS2(t)
    kind = rng.choice(("not", "and", "or", "exists", "forall"))
    if kind == "not":
        return Not(random_formula(rng, depth - 1, names))
    if kind in ("and", "or"):
        cls = And if kind == "and" else Or
        return cls(random_formula(rng, depth - 1, names), random_formula(rng, depth - 1, names))
    var = f"v{len(names)}"
    cls = Exists if kind == "exists" else Forall
    return cls(var, random_formula(rng, depth - 1, names + [var]))


def suite_evaluator(scale: Scale, seed: int) -> SuiteResult:
    """Generic evaluation of the named formulas matches the deciders; parse/print round trip."""
    out = SuiteResult("evaluator")
    plain = StrategyConfig(use_deciders=False)
    texts = {
        "T": parse("(P2(4 + x) & !P2(x)) | (P3(27 + x) & !P3(x))"),
        "Tplus": parse("E z (x*z = 1 & !PAS2(x) & !PAS2(z))"),
        "PAS2": parse("E y (x = y^2 + y)"),
    }
    for desc in scale.fields:
        K = make_field(desc)
        rng = random.Random(f"{seed}:evaluator:{desc}")
        for _ in range(scale.samples):
            x = _sample(K, rng)
            env = {"x": x}
            label = f"{desc} {K.format_element(x)}"
            expect_t = "true" if in_T(x) else "false"
            out.check(evaluate(texts["T"], env, K, plain).verdict == expect_t, f"{label}: T")
            out.check(evaluate(texts["T"], env, K).verdict == expect_t, f"{label}: T via decider")
            expect = "true" if in_T_plus(x) else "false"
            out.check(evaluate(texts["Tplus"], env, K).verdict == expect, f"{label}: T+")
            expect = "true" if is_artin_schreier(x) else "false"
            out.check(evaluate(texts["PAS2"], env, K).verdict == expect, f"{label}: PAS2")
    rng = random.Random(f"{seed}:round-trip")
    for _ in range(scale.round_trips):
        phi = random_formula(rng, 4)
        text = print_formula(phi)
        out.check(parse(text) == phi, f"round trip: {text}")
    return out


def suite_hensel(scale: Scale, seed: int) -> SuiteResult:
    """hensel_root postconditions, and P_n over F_q against enumeration."""
    out = SuiteResult("hensel")
    rng = random.Random(f"{seed}:hensel")
    fields = [make_field(d) for d in ("Qp:5", "Qp:7", "Laurent:3^1", "Ext:Qp:2:unram=1:eis=[-2,0,1]")]
    for i in range(scale.hensel_problems):
        K = fields[i % len(fields)]
        n = rng.choice([m for m in (2, 3, 5) if m % K.residue_field.p])
        a = K.random_element(rng, 0, 0)
        u = K.add(K.pow(a, n), K.mul(K.random_element(rng, 0, 0), K.pow(K.uniformizer(), rng.randint(1, 4))))
        poly = (K.neg(u),) + (K.zero(),) * (n - 1) + (K.one(),)
        prob = HenselProblem(poly, a)
        label = f"{K.descriptor} x^{n} - {K.format_element(u)}"
        if not prob.admissible():
            out.check(False, f"{label}: not admissible")
            continue
        r = K.representative(hensel_root(prob))
        fr = poly_eval(poly, r)
        out.check(K.is_zero(fr) or K.ord_pi(fr) >= K.precision, f"{label}: residual too large")
        fa = poly_eval(poly, a)
        dfa = poly_eval(poly_derivative(list(poly)), a)
        out.check(K.ord_pi(K.sub(r, a)) >= K.ord_pi(fa) - K.ord_pi(dfa), f"{label}: root too far")
    for q in prime_powers(2, scale.enum_qmax):
        k = field_of_order(q)
        for n in range(2, scale.enum_nmax + 1):
            powers = {k.pow_int(v, n) for v in range(1, q)}
            for v in range(q):
                got = is_nth_power(k.element(v), n).value
                out.check(got == (v in powers), f"F_{q}: P{n}({v}) = {got}")
    return out


SUITES: dict[str, Callable[[Scale, int], SuiteResult]] = {
    "definition": suite_definition,
    "main": suite_main,
    "lemma-val": suite_valuation_bounds,
    "unit-powers": suite_unit_powers,
    "cd-scan": suite_cd_scan,
    "power-scan": suite_power_scan,
    "extension": suite_extension,
    "as-substitution": suite_as_substitution,
    "evaluator": suite_evaluator,
    "hensel": suite_hensel,
}


def run_suites(names: list[str] | None = None, scale: str = "reduced", seed: int = 0) -> list[SuiteResult]:
    plan = SCALES[scale]
    results = []
    for name in names or list(SUITES):
        start = time.perf_counter()
        try:
            result = SUITES[name](plan, seed)
        except Exception as exc:
            logger.exception("selftest: suite %s crashed", name)
            result = SuiteResult(name, 1, [f"crashed: {exc}"])
        result.seconds = round(time.perf_counter() - start, 2)
        logger.info(f"selftest: {name} {'ok' if result.ok else 'FAILED'} checks={result.checks} "
                    f"elapsed={result.seconds:.1f}s")
        results.append(result)
    return results
