import pytest

from valring.decompose import (
    all_cubes_char2_scan,
    cd_decompose,
    coverage,
    curve_points,
    definable_set_residue,
    iter_decompositions,
    lift_decomposition,
    minimal_N,
    monotonicity_breaks,
    power_surjective,
    power_surjective_family,
    scan_one,
    set_mask,
)
from valring.errors import BadParameter, NoDecomposition, NotIntegral, TooLarge
from valring.fields import field_of_order


def _values(cert):
    return tuple(m.value for m in cert.members())


def test_cd_decompose_over_t2_of_f5(f5):
    S = definable_set_residue("T2", f5)
    assert _values(cd_decompose(f5.element(3), S)) == (2, 2, 2, 2)
    assert _values(cd_decompose(f5.element(1), S)) == (0, 2, 2, 2)


def test_cd_decompose_is_first_of_all_decompositions(f5):
    S = definable_set_residue("T", f5)
    for theta in f5.elements():
        first = cd_decompose(theta, S)
        assert first.holds()
        assert _values(next(iter_decompositions(theta, S))) == _values(first)


def test_no_decomposition(f5):
    with pytest.raises(NoDecomposition):
        cd_decompose(f5.element(1), [f5.zero()])
    with pytest.raises(BadParameter):
        cd_decompose(f5.element(1), [])


def test_coverage(f5):
    assert coverage(f5, set_mask("T", f5)) == (True, [])
    covered, failures = coverage(f5, set_mask("Tplus", f5))
    assert not covered
    assert failures == [0, 1, 2, 3]


def test_power_sets_exclude_zero(f5):
    assert [a.value for a in definable_set_residue("P2", f5)] == [1, 4]


def test_power_surjective():
    assert not power_surjective(4, 3)
    assert power_surjective(8, 3)
    assert power_surjective(7, 1)
    with pytest.raises(BadParameter):
        power_surjective(6, 2)
    with pytest.raises(BadParameter):
        power_surjective(5, 0)


def test_power_surjective_family():
    rows = power_surjective_family(2, 1, 3)
    assert [r["f"] for r in rows] == [1, 3, 5, 7]
    assert all(r["surjective"] for r in rows)
    with pytest.raises(BadParameter):
        power_surjective_family(3, 1, 3)


def test_all_cubes_in_characteristic_2():
    assert all_cubes_char2_scan(12) == [1, 3, 5, 7, 9, 11]


def test_curve_points():
    assert curve_points("dimC", 5, 2) == 6
    with pytest.raises(BadParameter):
        curve_points("dimC", 5, 1)
    with pytest.raises(BadParameter):
        curve_points("dim2C", 4, 1)


def test_scan_records():
    records = [scan_one("T", q) for q in (2, 3, 4, 5)]
    assert records[0].applicable is False
    assert records[3].covered
    assert [r.covered for r in records[1:]] == [False, False, True]
    assert minimal_N(records, 2) == 5
    assert monotonicity_breaks(records) == []


def test_scan_limits():
    with pytest.raises(TooLarge):
        scan_one("T", 8192)
    with pytest.raises(BadParameter):
        scan_one("T", 6)


def test_lift_decomposition(q5):
    theta = q5.from_int(3)
    cert = lift_decomposition(theta, q5, "T")
    assert cert.level == "lifted"
    assert cert.holds()
    assert q5.residue(cert.a) == cert.residue.a
    with pytest.raises(NotIntegral):
        lift_decomposition(q5.parse_element("1/5"), q5, "T")


def test_residue_sets_of_f4():
    k = field_of_order(4)
    # z and z + 1 lie outside the Artin-Schreier image {0, 1}
    assert [a.value for a in definable_set_residue("Tplus", k)] == [2, 3]
