import pytest

from valring import scanner
from valring.errors import BadParameter, TooLarge


def test_n_scan_is_cached():
    first = scanner.n_scan("T", 2, 16)
    assert [r.q for r in first.records] == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
    again = scanner.n_scan("T", 2, 16)
    assert [r.to_dict() for r in again.records] == [r.to_dict() for r in first.records]
    assert again.to_dict() == first.to_dict()
    assert scanner.get_N("T", compute=False) == first.N


def test_forced_rescan_keeps_verdicts():
    cached = scanner.n_scan("Tplus", 2, 9)
    forced = scanner.n_scan("Tplus", 2, 9, force=True)
    assert [(r.q, r.covered) for r in forced.records] == [(r.q, r.covered) for r in cached.records]


def test_scan_parameters():
    with pytest.raises(BadParameter):
        scanner.n_scan("S", 2, 10)
    with pytest.raises(TooLarge):
        scanner.n_scan("T", 2, 5000)
    with pytest.raises(BadParameter):
        scanner.n_scan("T", 10, 5)
    with pytest.raises(BadParameter):
        scanner.curve_scan("dim3C", 2, 10)


def test_power_scan():
    rows = scanner.power_scan(16, 3)
    assert len(rows) == 30
    by_pair = {(r["q"], r["m"]): r["surjective"] for r in rows}
    assert by_pair[(4, 3)] is False
    assert by_pair[(8, 3)] is True


def test_curve_scan():
    rows = scanner.curve_scan("dimC", 3, 13)
    # every element of F_8 is a cube, so q = 8 has no admissible a
    assert {r["q"] for r in rows} == {3, 4, 5, 7, 9, 11, 13}
    five = next(r for r in rows if r["q"] == 5)
    assert five == {"q": 5, "curve": "dimC", "a": "2", "count": 6}


def test_uniform_ell():
    assert scanner.uniform_ell(6, "T") == 60
    assert scanner.uniform_ell(6, "Tplus") == 60
    assert scanner.uniform_ell(2, "T") == 1


def test_scan_key_is_stable():
    assert scanner.scan_key("n-scan", {"a": 1, "b": 2}) == scanner.scan_key("n-scan", {"b": 2, "a": 1})
    assert scanner.scan_key("n-scan", {"a": 1}) != scanner.scan_key("power-scan", {"a": 1})
