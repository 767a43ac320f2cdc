import random

import pytest

from valring.errors import BadParameter, MethodInapplicable, NotExact, ResidueNotCovered, Unsupported
from valring.fields import make_field
from valring.formula import evaluate
from valring.valdef import choose_ell, decide_OK, main_formula, main_formula_for, oracle_OK, verify_certificate


def test_choose_ell():
    assert choose_ell(5).ell == 20
    assert choose_ell(4).ell == 12
    with pytest.raises(BadParameter):
        choose_ell(6)


def test_outside(q5):
    cert = decide_OK(q5.parse_element("2/5"), q5, "main2")
    assert cert.to_dict() == {"verdict": "outside", "branch": "negative_valuation", "val": -1}
    assert verify_certificate(cert, q5)


def test_outside_fractional_valuation(sqrt2):
    x = sqrt2.inv(sqrt2.uniformizer())
    assert decide_OK(x, sqrt2, "main2").to_dict()["val"] == "-1/2"


def test_sumset_branch(q5):
    cert = decide_OK(q5.from_int(3), q5, "main", branch="sumset_sell")
    assert cert.verdict == "inside"
    assert cert.branch == "sumset_sell"
    assert cert.ell == 20
    assert cert.shift == 1
    assert verify_certificate(cert, q5)


def test_zero_and_one_are_inside(q5):
    for x in (q5.zero(), q5.one()):
        assert decide_OK(x, q5, "main2", branch="sumset_sell").verdict == "inside"


def test_decomposition_branch(q5):
    cert = decide_OK(q5.from_int(3), q5, "main", branch="cauchy_davenport")
    assert cert.branch == "cauchy_davenport"
    assert cert.decomposition.holds()
    assert set(cert.to_dict()) >= {"a", "b", "c", "d", "base"}


def test_method_inapplicable(q2):
    with pytest.raises(MethodInapplicable):
        decide_OK(q2.one(), q2, "main")


def test_rejects_finite_fields_and_inexact_input(f5, q5):
    with pytest.raises(Unsupported):
        decide_OK(f5.one(), f5, "main2")
    with pytest.raises(NotExact):
        decide_OK(q5.parse_element("1 + O(5^4)"), q5, "main2")


@pytest.mark.parametrize("descriptor", ["Qp:3", "Qp:2", "Laurent:2^1", "Laurent:2^2", "Laurent:3^1"])
def test_agrees_with_valuation(descriptor):
    K = make_field(descriptor)
    rng = random.Random(7)
    for _ in range(12):
        x = K.random_element(rng, -3 * K.e, 3 * K.e)
        cert = decide_OK(x, K, "main2", branch="sumset_sell")
        assert (cert.verdict == "inside") == oracle_OK(x)
        assert verify_certificate(cert, K)


def test_main_formula_structure():
    phi = main_formula(20, "T")
    assert phi.left.var == "u"
    with pytest.raises(BadParameter):
        main_formula(0)


@pytest.mark.parametrize("descriptor", ["Qp:3", "Qp:5", "Qp:7"])
def test_formula_agrees_with_decide_ok(descriptor):
    K = make_field(descriptor)
    rng = random.Random(11)
    for method in ("main", "main2"):
        phi = main_formula_for(K, method)
        for _ in range(8):
            x = K.random_element(rng, -2, 3)
            verdict = evaluate(phi, {"x": x}, K).verdict
            assert verdict != "unknown"
            for branch in ("sumset_sell", "cauchy_davenport"):
                try:
                    cert = decide_OK(x, K, method, branch=branch)
                except ResidueNotCovered:
                    continue
                assert (cert.verdict == "inside") == (verdict == "true"), (method, branch, K.format_element(x))
