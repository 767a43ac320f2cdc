from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valring.errors import DivisionByZero, FieldMismatch, InsufficientPrecision, MalformedDescriptor, NotIntegral
from valring.fields import INF, make_field, ord_p


def test_ord_p():
    assert ord_p(50, 5) == 2
    assert ord_p(Fraction(2, 5), 5) == -1
    assert ord_p(0, 5) == INF


def test_valuation_of_rationals(q5):
    assert q5.val(q5.parse_element("2/5")) == -1
    assert q5.val(q5.parse_element("75")) == 2
    assert q5.val(q5.zero()) == INF


def test_residue(q5):
    x = q5.parse_element("7/2")
    assert q5.residue(x).value == 1
    with pytest.raises(NotIntegral):
        q5.residue(q5.parse_element("1/5"))


def test_division_by_zero(q5):
    with pytest.raises(DivisionByZero):
        q5.inv(q5.zero())


def test_inexact_literals(q5):
    x = q5.parse_element("1 + O(5^3)")
    assert not q5.is_exact(x)
    assert q5.known_precision(x) == 3
    zero_ish = q5.parse_element("O(5^2)")
    with pytest.raises(InsufficientPrecision):
        q5.val(zero_ish)
    assert q5.val_bound(zero_ish) == (2, False)


def test_fields_do_not_mix(q5, q3):
    with pytest.raises(FieldMismatch):
        q5.add(q5.one(), q3.one())


def test_descriptor_errors():
    with pytest.raises(MalformedDescriptor):
        make_field("Qp:6")
    with pytest.raises(MalformedDescriptor):
        make_field("Zp:5")


def test_ramified_extension(sqrt2):
    pi = sqrt2.uniformizer()
    assert sqrt2.e == 2
    assert sqrt2.val(pi) == Fraction(1, 2)
    assert sqrt2.ord_pi(pi) == 1
    assert sqrt2.mul(pi, pi) == sqrt2.from_int(2)


def test_unramified_extension():
    K = make_field("Ext:Qp:3:unram=2:eis=[-3,1]")
    assert K.e == 1
    assert K.residue_field.q == 9
    g = K.generator()
    assert K.val(g) == 0


def test_norm_and_digit_valuations_agree(sqrt2, rng):
    for _ in range(20):
        x = sqrt2.random_element(rng, -3, 3)
        assert sqrt2.norm_val(x) == sqrt2.digit_val(x)


@given(st.integers(-4, 4), st.integers(0, 2 ** 16))
def test_random_element_valuation(k, seed):
    import random

    K = make_field("Qp:3")
    x = K.random_element(random.Random(seed), k, k)
    assert K.ord_pi(x) == k


@given(st.fractions(max_denominator=50).filter(lambda c: c != 0), st.fractions(max_denominator=50).filter(lambda c: c != 0))
def test_valuation_is_multiplicative(a, b):
    K = make_field("Qp:5")
    x, y = K.from_fraction(a), K.from_fraction(b)
    assert K.val(K.mul(x, y)) == K.val(x) + K.val(y)
    assert K.val(K.add(x, y)) >= min(K.val(x), K.val(y))


def test_truncate(q5):
    x = q5.parse_element("1 + 5 + 125")
    t = q5.truncate(x, 2)
    assert q5.known_precision(t) == 2
    assert q5.residue(t).value == 1
