import pytest

from quartic.conjecture import (
    FamilySpec,
    family_poly,
    scan_conjecture31,
    scan_family,
    verify_conjecture31,
    conjecture31_report,
)
from quartic.descent import verify_chain_t2
from quartic.pell import alpha_power_exact, jacobi


def test_family_poly_table():
    assert family_poly(3, 1, "+").coeffs == (2, 1)
    assert family_poly(2, 1, "-").coeffs == (8, -4, -1)
    assert family_poly(6, 2, "+").coeffs == (96, 24, 1)
    assert family_poly(4, 3, "-").coeffs == (12, -1)
    assert family_poly(2, 2, "+").coeffs == (32, 8, -1)


@pytest.mark.parametrize("d, i, sign", [(5, 1, "+"), (3, 0, "+"), (3, 1, "*")])
def test_family_poly_rejects(d, i, sign):
    with pytest.raises(ValueError):
        family_poly(d, i, sign)


def test_family_spec():
    assert FamilySpec(3, 1).t == 2
    assert FamilySpec(2, 1).t == 1
    assert FamilySpec(6, 2).poly("+") == family_poly(6, 2, "+")
    with pytest.raises(ValueError):
        FamilySpec(7, 1)


def test_scan_d3_i1_all_minus_one():
    rep = scan_family(3, [1], range(-25, 26), "+")
    assert len(rep.tested) == 50 and not rep.exceptions and not rep.skipped
    assert all(e.value == -1 for e in rep.tested)


def test_scan_d2_i1_both_signs():
    for sign in "+-":
        rep = scan_family(2, [1], range(-10, 11), sign)
        assert len(rep.tested) == 20 and not rep.exceptions


def test_scan_d4_i1_single_w():
    for sign in "+-":
        rep = scan_family(4, [1], [1], sign)
        assert [e.value for e in rep.tested] == [-1]
        assert rep.tested[0].t == 3


def test_scan_consistent_with_descent():
    ws = [w for w in range(-12, 13) if w]
    rep = scan_family(3, [1], ws, "+")
    certs = [verify_chain_t2(1 + 840 * w) for w in ws]
    assert [e.value for e in rep.tested] == [c.jacobi_value for c in certs]
    assert [e.N for e in rep.tested] == [c.witness_modulus for c in certs]


def test_scan_records_non_minus_one_values():
    # t = 7 (d = 2, i = 2): every value comes out +1; an exact P_n recomputation agrees
    rep = scan_family(2, [2], [1, -1], "+")
    assert [e.value for e in rep.exceptions] == [1, 1]
    for e in rep.tested:
        assert jacobi(alpha_power_exact(e.t, e.n).p, e.N) == e.value
    js = rep.to_json()
    assert len(js["exceptions"]) == 2 and js["zero_symbols"] == []


def test_scan_report_completeness_and_order():
    rep = scan_family(4, [3, 1, 2], range(-3, 4), "-")
    assert len(rep.tested) == 3 * 6
    assert [(e.i, e.w) for e in rep.tested] == sorted((e.i, e.w) for e in rep.tested)


def test_scan_rejects_empty_ranges():
    with pytest.raises(ValueError):
        scan_family(3, [], [1], "+")
    with pytest.raises(ValueError):
        scan_family(3, [0], [1], "+")


@pytest.mark.parametrize("i, w, factor", [(1, 1, 1), (3, 1, -1), (5, -1, 1)])
def test_conjecture31_instances(i, w, factor):
    res = verify_conjecture31(i, w)
    assert res.t == 3 * i * i - 1
    assert res.sign_factor == factor
    assert res.lhs == res.middle == -1 and res.holds


def test_conjecture31_i1_matches_proven_chain():
    res = verify_conjecture31(1, 1)
    ab = alpha_power_exact(2, res.b)
    assert res.middle == jacobi(4 * ab.q + 1, 2 * ab.p + 1)


def test_conjecture31_rejects_even_i():
    with pytest.raises(ValueError):
        verify_conjecture31(2, 1)
    with pytest.raises(ValueError):
        verify_conjecture31(1, 0)


def test_conjecture31_report():
    results = scan_conjecture31([1, 3], [-2, -1, 0, 1, 2])
    rep = conjecture31_report(results)
    assert len(rep["results"]) == 8 and rep["exceptions"] == []
    assert "open conjecture" in rep["status"]
