import json

import pytest

import fqval


def test_valuations():
    assert fqval.fermat_quotient_valuation(2, 5) == 1
    assert fqval.fermat_quotient_valuation(2, 1093) == 2
    assert fqval.vp(2**1092 - 1, 1093) == 2
    assert fqval.mul_order(3, 7) == 6
    p = 2**127 - 1
    assert fqval.fermat_quotient_valuation(3, p) == 1
    assert fqval.mul_order(2, p) == 127


def test_big_integers_round_trip():
    z = fqval.teichmuller_lift(2, 1093, 40)
    assert isinstance(z, int)
    assert z < 1093**40
    assert pow(z, 1092, 1093**40) == 1


def test_bounds():
    assert fqval.thm2_bound(5, 2, 3)["bound"] == 864
    r = fqval.thm2_bound(1093, 2)
    assert r["formula"] == "base2"
    assert r["bound"] > 2
    lo, hi = fqval.conj1_bound(2, 1093)
    assert lo <= hi and abs(lo - 2.272) < 1e-3
    assert fqval.thm3_bound(5, 2, 4) == 865


def test_errors_map_to_value_error():
    with pytest.raises(fqval.DomainError):
        fqval.fermat_quotient_valuation(10, 5)
    with pytest.raises(ValueError):
        fqval.vp(12, 6)
    with pytest.raises(fqval.DomainError):
        fqval.nagell_check(31, 2, 1)


def test_certificate():
    params = {"p": 257, "alpha1": 2, "alpha2": 4, "m1": 48, "m2": 96, "g": 16, "K": 3, "L": 4,
              "R1": 2, "R2": 8, "S1": 2, "S2": 1, "b1": 256, "b2": 256, "c1": 0, "c2": 0}
    out = fqval.verify_certificate(params)
    assert out["verdict"] == "Certified"
    assert out["bound"] == "11"
    params["R2"] = 7
    assert fqval.verify_certificate(params)["verdict"] == "NotCertified"


def test_parameters():
    sel = fqval.select_parameters("11.32", 3, "1.027", 1000, 1, 1)
    assert sel["L"] == 5
    assert sel["K"] == 56601
    p = 2**283
    while not all(p % d for d in range(2, 1000)) or pow(2, p - 1, p) != 1:
        p += 1
    assert fqval.check_kl_condition("11.32", 3, "1.027", 10**6, 1, 1, p) == "holds"


def test_divisor_tools():
    assert fqval.nagell_check(13, 3, 2) == {"lhs": 1, "rhs": 1, "holds": True}
    assert not fqval.nagell_check(2, 7, 1)["holds"]
    assert 0 < fqval.thm4_min_constant("2^4 * 31") <= 1


def test_heuristic_sum():
    h = fqval.heuristic_partial_sum(100, 100)
    assert h["sum_le_bound"]
    assert h["sum"] > 0


def test_scan_resume_export(tmp_path):
    out, ck, csv = tmp_path / "s.jsonl", tmp_path / "s.ck", tmp_path / "s.csv"
    s = fqval.run_scan(1090, 1100, 2, 3, out, checkpoint=ck, workers=2)
    assert s["wieferich_hits"] == 1
    assert s["violations"] == 0
    again = fqval.resume(1090, 1100, 2, 3, out, ck)
    assert again["records"] == s["records"]
    first = json.loads(out.read_text().splitlines()[0])
    assert first["p"] == "1091"
    assert fqval.export_csv(str(out), str(csv)) == s["records"]
    assert csv.read_text().startswith("p,x,valuation,bound,margin,wieferich\n")
