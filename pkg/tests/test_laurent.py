import pytest

from valring.errors import InsufficientPrecision, NotIntegral
from valring.fields import INF, make_field


def test_valuation_and_residue(laurent2):
    x = laurent2.parse_element("t^-3 + 1 + t")
    assert laurent2.val(x) == -3
    with pytest.raises(NotIntegral):
        laurent2.residue(x)
    y = laurent2.parse_element("1 + t")
    assert laurent2.residue(y).value == 1
    assert laurent2.val(laurent2.zero()) == INF


def test_inverse_is_a_truncated_series(laurent2):
    y = laurent2.parse_element("1 + t")
    inv = laurent2.inv(y)
    assert not laurent2.is_exact(inv)
    assert laurent2.known_precision(inv) == laurent2.precision
    # 1/(1 + t) = 1 + t + t^2 + ... in characteristic 2
    assert all(c == 1 for c in inv.coeffs)


def test_monomial_inverse_is_exact(laurent2):
    t = laurent2.uniformizer()
    assert laurent2.is_exact(laurent2.inv(t))
    assert laurent2.val(laurent2.inv(t)) == -1


def test_frobenius(laurent4):
    x = laurent4.parse_element("z*t + 1")
    sq = laurent4.mul(x, x)
    assert laurent4.frobenius(x) == sq
    assert laurent4.frobenius_root(sq) == x


def test_pow_by_characteristic(laurent2):
    x = laurent2.parse_element("1 + t + t^3")
    assert laurent2.pow(x, 4) == laurent2.mul(laurent2.mul(x, x), laurent2.mul(x, x))


def test_precision_descriptor():
    K = make_field("Laurent:3^1:prec=10")
    assert K.precision == 10
    assert K.descriptor == "Laurent:3^1:prec=10"


def test_inexact_zero(laurent2):
    x = laurent2.parse_element("O(t^4)")
    with pytest.raises(InsufficientPrecision):
        laurent2.val(x)
    assert laurent2.val_bound(x) == (4, False)


def test_format(laurent4):
    x = laurent4.parse_element("t^-1 + (z + 1)*t")
    assert laurent4.format_element(x) == "t^-1 + (z + 1)*t"
