import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valring.decompose import definable_set_residue
from valring.errors import BadParameter, BaseSetInapplicable, SEllUndecided
from valring.fields import make_field
from valring.predicates import (
    ball_in_base,
    in_T,
    in_T_p,
    in_T_plus,
    is_artin_schreier,
    is_nth_power,
    s_ell_member,
    square_shift_invariance,
    t_applicable,
)


def _values(S):
    return sorted(a.value for a in S)


def test_t2_of_f5(f5):
    assert _values(definable_set_residue("T2", f5)) == [0, 2]
    assert [bool(in_T_p(a, 2)) for a in f5.elements()] == [True, False, True, False, False]


def test_tplus_of_f2():
    k = make_field("Fq:2^1")
    assert _values(definable_set_residue("Tplus", k)) == [1]


def test_nonzero_powers_exclude_zero(q5, f5):
    assert not is_nth_power(q5.zero(), 2)
    assert not is_nth_power(f5.zero(), 3)


def test_square_in_q5(q5):
    v = is_nth_power(q5.from_int(4), 2)
    assert v
    w = v.witness
    assert q5.is_zero(q5.sub(q5.mul(w, w), q5.from_int(4)))
    assert not is_nth_power(q5.from_int(2), 2)
    assert is_nth_power(q5.from_int(2), 2).reason == "unit-search"
    assert is_nth_power(q5.from_int(5), 2).reason == "valuation"


def test_square_witness_in_q7():
    K = make_field("Qp:7")
    v = is_nth_power(K.from_int(2), 2)
    assert v
    diff = K.sub(K.mul(v.witness, v.witness), K.from_int(2))
    assert K.val_bound(diff)[0] >= 10


def test_powers_in_characteristic_2(laurent2):
    assert is_nth_power(laurent2.parse_element("t^2 + t^4"), 2)
    assert not is_nth_power(laurent2.uniformizer(), 2)
    assert is_nth_power(laurent2.parse_element("t^3"), 3)
    assert not is_nth_power(laurent2.parse_element("t^2"), 3)


def test_artin_schreier(q5, laurent2):
    assert not is_artin_schreier(q5.one())
    # 1 + 4x = 0 has the double root -1/2
    assert is_artin_schreier(q5.parse_element("-1/4"))
    assert is_artin_schreier(q5.from_int(2))
    assert not is_artin_schreier(laurent2.parse_element("t^-2"))
    assert is_artin_schreier(laurent2.parse_element("t^-2 + t^-1"))
    assert is_artin_schreier(laurent2.uniformizer())


def test_base_sets(q3, q5):
    assert in_T_plus(q3.one())
    assert in_T_p(q5.from_int(5), 2)
    assert in_T(q5.from_int(5))
    assert not in_T_plus(q5.zero())
    with pytest.raises(BadParameter):
        in_T_p(q5.one(), 5)


def test_t_applicable():
    assert not t_applicable(make_field("Fq:2^1"))
    assert t_applicable(make_field("Fq:2^2"))
    assert t_applicable(make_field("Fq:3^1"))


def test_s_ell(q5):
    ell = 20
    y = q5.from_int(2)
    verdict = s_ell_member(y, ell, "T")
    assert verdict
    assert verdict.detail["ell"] == ell
    assert not s_ell_member(q5.parse_element("1/5"), ell, "T")
    with pytest.raises(SEllUndecided):
        s_ell_member(q5.from_int(5), ell, "T")
    with pytest.raises(BadParameter):
        s_ell_member(y, 7, "T")


def test_s_ell_base_inapplicable(q2):
    with pytest.raises(BaseSetInapplicable):
        s_ell_member(q2.one(), 2, "T")


def test_ball_around_uniformizer(q5):
    ok, failures = ball_in_base(q5.from_int(5), "T", samples=10)
    assert ok, failures


@given(st.integers(0, 2 ** 16), st.integers(-6, -1))
def test_square_shift_invariance(seed, v):
    K = make_field("Qp:2")
    x = K.random_element(random.Random(seed), v, v)
    assert square_shift_invariance(x)
