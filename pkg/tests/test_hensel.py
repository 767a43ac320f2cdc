from fractions import Fraction

import pytest

from valring.errors import CriterionFails
from valring.fields import HenselProblem, find_roots, hensel_root, make_field, poly_eval


def _x2_minus(K, c):
    return (K.from_int(-c), K.zero(), K.one())


def test_square_root_of_two_in_q7():
    K = make_field("Qp:7")
    prob = HenselProblem(_x2_minus(K, 2), K.from_int(3))
    assert prob.admissible()
    root = hensel_root(prob)
    residual = poly_eval(prob.poly, root)
    assert K.val_bound(residual)[0] >= K.precision
    assert K.residue(root).value == 3


def test_exact_root_is_returned_exact():
    K = make_field("Qp:5")
    root = hensel_root(HenselProblem(_x2_minus(K, 4), K.from_int(2)))
    assert K.is_exact(root)
    assert root == K.from_int(2)


def test_criterion_fails():
    K = make_field("Qp:2")
    with pytest.raises(CriterionFails):
        hensel_root(HenselProblem(_x2_minus(K, 2), K.zero()))


def test_find_roots_counts():
    K = make_field("Qp:7")
    assert len(find_roots(_x2_minus(K, 2), K)) == 2
    assert find_roots(_x2_minus(K, 3), K) == []


def test_cube_root_in_laurent():
    K = make_field("Laurent:2^1")
    u = K.parse_element("1 + t")
    prob = HenselProblem((K.neg(u), K.zero(), K.zero(), K.one()), K.one())
    root = hensel_root(prob, precision=20)
    residual = K.sub(K.pow(root, 3), u)
    assert K.val_bound(residual)[0] >= 20


def _near(K, r, c, digits=20):
    return K.val_bound(K.sub(r, K.from_int(c)))[0] >= digits


def test_find_roots_keeps_congruent_exact_roots():
    K = make_field("Qp:3")
    roots = find_roots((4, -5, 1), K)
    assert len(roots) == 2
    assert sorted(_near(K, r, 4) for r in roots) == [False, True]
    assert sorted(_near(K, r, 1) for r in roots) == [False, True]


def test_find_roots_both_uniformizers(sqrt2):
    roots = find_roots((-2, 0, 1), sqrt2)
    assert len(roots) == 2
    assert all(sqrt2.val_bound(r)[0] == Fraction(1, 2) for r in roots)
    assert sqrt2.val_bound(sqrt2.add(*roots))[0] >= 10


def test_find_roots_repeated_root_once():
    K = make_field("Qp:5")
    assert find_roots((1, -2, 1), K) == [K.one()]


def _postcondition(prob, root):
    K = prob.field
    vf, vd = prob.criterion()
    residual = poly_eval(prob.poly, root)
    assert K.e * K.val_bound(residual)[0] >= K.precision
    assert K.val_bound(K.sub(root, prob.approx))[0] >= vf - vd


def test_hensel_root_unramified():
    K = make_field("Ext:Qp:3:unram=2:eis=[-3,1]")
    poly = (K.one(), K.zero(), K.one())
    seed = next(a for a in K.residue_lifts() if K.val_bound(poly_eval(poly, a))[0] > 0)
    prob = HenselProblem(poly, seed)
    assert prob.admissible()
    _postcondition(prob, hensel_root(prob))


def test_hensel_root_ramified(sqrt2):
    x = sqrt2.add(sqrt2.one(), sqrt2.uniformizer())
    prob = HenselProblem((sqrt2.neg(x), sqrt2.zero(), sqrt2.zero(), sqrt2.one()), sqrt2.one())
    assert prob.admissible()
    _postcondition(prob, hensel_root(prob))


def test_hensel_root_zero_derivative():
    K = make_field("Qp:5")
    prob = HenselProblem(_x2_minus(K, 4), K.zero())
    assert not prob.admissible()
    with pytest.raises(CriterionFails):
        hensel_root(prob)
