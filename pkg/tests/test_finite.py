import pyparsing as pp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from valring.errors import DivisionByZero, MalformedDescriptor, NotIrreducible, TooLarge
from valring.fields import FiniteField, make_field, prime_power, smallest_irreducible
from valring.fields import descriptor

ORDERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def test_smallest_irreducible_f4():
    assert smallest_irreducible(2, 2) == (1, 1, 1)


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(12) is None
    assert prime_power(1) is None


def test_bad_parameters():
    with pytest.raises(MalformedDescriptor):
        FiniteField(6)
    with pytest.raises(NotIrreducible):
        FiniteField(2, 2, (1, 0, 1))
    with pytest.raises(TooLarge):
        FiniteField(2, 17)


def test_descriptor_round_trip():
    assert make_field("Fq:2^2").descriptor == "Fq:2^2"
    assert make_field("Fq:3^2:mod=2,1,1").descriptor == "Fq:3^2:mod=2,1,1"


def test_descriptor_lists_use_delimited_list():
    assert isinstance(descriptor.INT_LIST.expr, pp.DelimitedList)
    assert isinstance(descriptor.COEFF_LIST.expr, pp.DelimitedList)
    assert list(descriptor.INT_LIST.parse_string("2,1,1", parse_all=True)[0]) == [2, 1, 1]


@pytest.mark.parametrize("q", ORDERS)
def test_multiplicative_group_is_cyclic(q):
    p, f = prime_power(q)
    k = FiniteField(p, f)
    g = int(k.exp_array[1 % (q - 1)])
    powers = {k.pow_int(g, i) for i in range(q - 1)}
    assert len(powers) == q - 1
    assert 0 not in powers


@pytest.mark.parametrize("q", ORDERS)
def test_inverse(q):
    p, f = prime_power(q)
    k = FiniteField(p, f)
    for a in k.elements():
        if a.value:
            assert k.mul(a, k.inv(a)) == k.one()
    with pytest.raises(DivisionByZero):
        k.inv(k.zero())


@given(st.sampled_from(ORDERS), st.data())
def test_field_axioms(q, data):
    p, f = prime_power(q)
    k = FiniteField(p, f)
    a, b, c = (k.element(data.draw(st.integers(0, q - 1))) for _ in range(3))
    assert k.mul(a, k.add(b, c)) == k.add(k.mul(a, b), k.mul(a, c))
    assert k.add(a, k.neg(a)) == k.zero()
    assert k.pow(a, q) == a


def test_is_power_excludes_zero(f5):
    assert not f5.is_power_int(0, 2)
    assert sorted(v for v in range(5) if f5.is_power_int(v, 2)) == [1, 4]


def test_artin_schreier_table_f4(f4):
    # y^2 + y takes the values 0 and 1 on F_4
    assert sorted(f4.artin_schreier_table) == [0, 1]


def test_format_element(f4, f5):
    assert f5.format_element(f5.element(3)) == "3"
    z = f4.generator()
    assert f4.format_element(z) == "z"
    assert f4.pow(z, 3) == f4.one()


def test_literal_in_finite_field(f4):
    z = f4.generator()
    assert f4.parse_element("z^2 + z + 1") == f4.zero()
    assert f4.parse_element("z + 1") == f4.add(z, f4.one())
