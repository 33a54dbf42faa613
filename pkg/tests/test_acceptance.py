"""Acceptance criteria, one test (or a small group) per criterion.

Each test records a single PASS/FAIL line; the lines are printed together at
the end of the pytest run. The negative control of criterion 7 cannot be met
at the stated truncation and is marked as a strict expected failure; the
same control is demonstrated at K = 3 right after it.
"""

import pytest

from yangcenter.brauer import check_fusion, check_trace_reduction
from yangcenter.central import (centrality_control, compare_classical, make_engine,
                                verify_alternate_form, verify_centrality,
                                verify_completed_centrality, verify_divisibility,
                                verify_smap_fixed)
from yangcenter.classical import check_annihilated, check_jacobi
from yangcenter.cli import main
from yangcenter.context import AlgebraContext
from yangcenter.engine import check_classical_oracle
from yangcenter.identities import check_almost, check_formulae, check_fseries, check_rbar, check_ybe

pytestmark = pytest.mark.acceptance

O3 = AlgebraContext(3)
SP4 = AlgebraContext(4, "sp")
RGRID = [AlgebraContext(3), AlgebraContext(4), AlgebraContext(5), SP4]


def _all_pass(recs):
    bad = [r for r in recs if r["status"] != "pass"]
    return not bad, (f"{bad[0]['name']} {bad[0].get('algebra', '')}: {bad[0]['witness']}" if bad else "")


def test_c01_rmatrix(criterion):
    recs = []
    for c in RGRID:
        recs += [check_ybe(c), check_almost(c), check_formulae(c)]
    ok, why = _all_pass(recs)
    assert criterion(1, "YBE, almost-unitarity and P/Q formulae on o3, o4, o5, sp4", ok, why)


def test_c02_fseries(criterion):
    ok, why = _all_pass([check_fseries(c, 12) for c in RGRID])
    assert criterion(2, "f-series coefficients and both identities through order 12", ok, why)


def test_c03_rbar(criterion):
    ok, why = _all_pass([check_rbar(c, K=6, M=6) for c in RGRID])
    assert criterion(3, "Rbar unitarity and crossing symmetry mod h^6", ok, why)


BGRID = [(AlgebraContext(3), 3), (AlgebraContext(4), 3), (SP4, 2)]


def test_c04_fusion(criterion):
    ok, why = _all_pass([check_fusion(c, m) for c, top in BGRID for m in range(1, top + 1)])
    assert criterion(4, "projection symmetrizer equals fused R-matrix product", ok, why)


def test_c05_trace_reduction(criterion):
    ok, why = _all_pass([check_trace_reduction(c, m) for c, top in BGRID for m in range(2, top + 1)])
    assert criterion(5, "partial trace of S_m is a_m S_{m-1}", ok, why)


def test_c06_engine_oracle(criterion):
    recs = [check_classical_oracle(c, max_modes=3, max_weight=4) for c in (O3, SP4)]
    recs += [check_jacobi(c) for c in (O3, SP4)]
    ok, why = _all_pass(recs)
    n = sum(r["checked"] for r in recs[:2])
    assert criterion(6, "h^0 normal forms match classical PBW; Jacobi", ok, why or f"{n} words")


def test_c07_centrality(criterion):
    recs = [verify_centrality(c, m, make_engine(c, K=2, D=3), U=2)
            for c, m in ((O3, 1), (O3, 2), (SP4, 1))]
    ok, why = _all_pass(recs)
    assert criterion(7, "centrality at the critical level, K=2 D=3 U=2", ok, why)


@pytest.mark.xfail(strict=True, reason="at K=2 the series is constant mod h^2, so no witness can appear")
def test_c07_negative_control_stated_truncation(criterion):
    rep = centrality_control(O3, 1, level=0, K=2, D=3, U=2)
    ok = rep["status"] == "pass"
    criterion(7, "negative control at c=0, K=2 D=3 U=2 (not attainable, see README)", ok,
              "" if ok else "no nonzero discrepancy")
    assert ok


def test_c07_negative_control_k3(criterion):
    pos = [verify_centrality(c, m, make_engine(c, K=3, D=3), U=1) for c, m in ((O3, 1), (O3, 2), (SP4, 1))]
    neg = centrality_control(O3, 1, level=0, K=3, D=3, U=1)
    ok = _all_pass(pos)[0] and neg["status"] == "pass"
    assert criterion(7, "K=3 D=3 U=1: central at c_crit, witness at c=0", ok,
                     f"witness {neg['witness']}" if ok else "")


def test_c08_classical_limit(criterion):
    recs = [compare_classical(c, 2) for c in (O3, SP4)]
    recs += [check_annihilated(c, m=2, max_mode=3) for c in (O3, SP4)]
    ok, why = _all_pass(recs)
    assert criterion(8, "classical limit of Phi_2 is phi_22; phi_22 annihilated", ok, why)


def test_c08_extended_o5(criterion):
    c = AlgebraContext(5)
    ok, why = _all_pass([compare_classical(c, 2), check_annihilated(c, m=2, max_mode=3)])
    assert criterion(8, "extended run on o5", ok, why)


def test_c09_alternate_form(criterion):
    rep = verify_alternate_form(O3, 2, make_engine(O3, K=4, D=4), U=1)
    ok = rep["status"] == "pass"
    assert criterion(9, "both point orders give T+_2 on o3 (K=4 D=4 U=1)", ok,
                     f"h powers {rep['h_powers_present']}" if ok else str(rep["witness"]))


def test_c10_divisibility(criterion):
    rep = verify_divisibility(O3, 2, make_engine(O3, K=3, D=3), U=1)
    ok = rep["status"] == "pass"
    assert criterion(10, "sum_k b_k T+_k with shifts vanishes mod h^2, o3 K=3", ok, str(rep["witness"] or ""))


def test_c11_smap(criterion):
    rep = verify_smap_fixed(O3.with_(D=2), engine=make_engine(O3, K=2, D=2))
    ok = rep["status"] == "pass"
    assert criterion(11, "braiding fixes T+_1(u)1 (x) T+_1(v)1, o3 K=2 D=2", ok, f"{rep['checked']} coefficients")


def test_c11_smap_deeper(criterion):
    rep = verify_smap_fixed(O3.with_(K=6, D=5, M=8))
    ctrl = verify_smap_fixed(O3.with_(K=6, D=5, M=8, level=0))
    ok = rep["status"] == "pass" and ctrl["status"] == "fail"
    assert criterion(11, "K=6 D=5: fixed at c_crit, moved at c=0", ok, f"{rep['checked']} coefficients")


def test_c12_completed(criterion):
    rep = verify_completed_centrality(O3, 1, make_engine(O3, K=2, D=2))
    ok = rep["status"] == "pass"
    assert criterion(12, "T_1(u) commutes with t^{(+-1)} on words of degree <= 1, K=2 D=2", ok,
                     str(rep["witness"] or f"{rep['checked']} commutators"))


def test_c12_completed_deeper(criterion):
    c0 = O3.with_(level=0)
    rep = verify_completed_centrality(O3, 1, make_engine(O3, K=3, D=3))
    ctrl = verify_completed_centrality(c0, 1, make_engine(c0, K=3, D=3))
    ok = rep["status"] == "pass" and ctrl["status"] == "fail"
    assert criterion(12, "K=3 D=3: commutes at c_crit, not at c=0", ok)


def test_c13_determinism(criterion, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    codes = [main(["suite", "--N", "3", "--out", str(p)]) for p in paths]
    same = paths[0].read_bytes() == paths[1].read_bytes()
    assert criterion(13, "identical configs give byte-identical reports", same and codes == [0, 0],
                     f"exit code {codes[0]}")
