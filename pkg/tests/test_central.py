from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import yangcenter.central as central
from yangcenter.brauer import symmetrizer
from yangcenter.central import (DivisibilityError, b_coefficients, build_Phi, build_T_plus,
                                centrality_control, commutativity_probe, compare_classical,
                                make_engine, series_offsets, substitute_shift,
                                verify_alternate_form, verify_centrality,
                                verify_completed_centrality, verify_divisibility,
                                verify_smap_fixed, verify_vacuum_image,
                                verify_vertex_consistency)
from yangcenter.context import AlgebraContext
from yangcenter.engine import TruncationError

O3 = AlgebraContext(3)
SP4 = AlgebraContext(4, "sp")


def test_window_guard():
    with pytest.raises(TruncationError):
        build_T_plus(O3, 1, make_engine(O3, K=3, D=2), U=1)


@pytest.mark.parametrize("ctx,m", [(O3, 1), (O3, 2), (SP4, 1), (SP4, 2)])
def test_leading_term_is_rank(ctx, m):
    T = build_T_plus(ctx, m, make_engine(ctx, K=2, D=3), U=2)
    assert T.coeff(0).h_part(0).terms == {(0, ()): Fraction(symmetrizer(ctx, m).rank)}


def test_T1_frozen_o3():
    T = build_T_plus(O3, 1, make_engine(O3, K=3, D=3), U=1)
    got = T.to_json()["coefficients"]
    assert got[0]["terms"] == [
        {"h": 0, "word": [], "coef": "3"},
        {"h": 2, "word": [[-1, 1, 1], [-1, 1, 1]], "coef": "1"},
        {"h": 2, "word": [[-1, 1, 2], [-1, 2, 1]], "coef": "2"},
        {"h": 2, "word": [[-2, 1, 1]], "coef": "-1"},
    ]


def test_offsets():
    assert series_offsets(O3, 2) == (-1, 0)
    assert series_offsets(SP4, 2) == (0, -1)
    assert series_offsets(O3, 3, "alternate") == (0, -1, -2)


@pytest.mark.parametrize("ctx,m", [(O3, 1), (O3, 2), (SP4, 1)])
def test_centrality_nonvacuous_regime(ctx, m):
    rep = verify_centrality(ctx, m, make_engine(ctx, K=3, D=3), U=1)
    assert rep["status"] == "pass"
    assert rep["checked"] > 0


def test_centrality_fails_off_critical_level():
    rep = centrality_control(O3, 1, level=0, K=3, D=3, U=1)
    assert rep["status"] == "pass"
    assert rep["witness"]["h"] == 2


def test_alternate_form():
    rep = verify_alternate_form(O3, 2, make_engine(O3, K=4, D=4), U=1)
    assert rep["status"] == "pass"
    assert 2 in rep["h_powers_present"]


def test_b_coefficients():
    assert b_coefficients(O3, 2) == [5, Fraction(-10, 3), 1]
    assert b_coefficients(SP4, 2) == [5, Fraction(-5, 2), 1]
    # the h^0 part sum_k b_k rank(S_k) must vanish
    for ctx in (O3, SP4):
        ranks = [1] + [symmetrizer(ctx, k).rank for k in (1, 2)]
        assert sum(b * r for b, r in zip(b_coefficients(ctx, 2), ranks)) == 0


def test_divisibility():
    assert verify_divisibility(O3, 2, make_engine(O3, K=3, D=3), U=1)["status"] == "pass"


def test_divisibility_control(monkeypatch):
    bad = [Fraction(5), Fraction(-3), Fraction(1)]
    monkeypatch.setattr(central, "b_coefficients", lambda ctx, m: bad)
    assert verify_divisibility(O3, 2, make_engine(O3, K=3, D=3), U=1)["status"] == "fail"
    with pytest.raises(DivisibilityError):
        build_Phi(O3, 2, make_engine(O3, K=3, D=3), U=0)


def test_phi_needs_room():
    with pytest.raises(TruncationError):
        build_Phi(O3, 2, make_engine(O3, K=2, D=3), U=0)


@pytest.mark.parametrize("ctx", [O3, SP4], ids=["o3", "sp4"])
def test_classical_limit(ctx):
    assert compare_classical(ctx, 2)["status"] == "pass"


def test_smap_fixed_point():
    rep = verify_smap_fixed(O3.with_(K=6, D=5, M=8))
    assert rep["status"] == "pass" and rep["checked"] > 100


def test_smap_off_critical_level():
    assert verify_smap_fixed(O3.with_(K=6, D=5, M=8, level=0))["status"] == "fail"


def test_smap_only_lowest_case():
    with pytest.raises(NotImplementedError):
        verify_smap_fixed(O3, k=2, m=1)


def test_completed_centrality():
    assert verify_completed_centrality(O3, 1, make_engine(O3, K=3, D=3))["status"] == "pass"
    c0 = O3.with_(level=0)
    assert verify_completed_centrality(c0, 1, make_engine(c0, K=3, D=3))["status"] == "fail"


def test_vacuum_image():
    assert verify_vacuum_image(O3, 1)["status"] == "pass"


def test_vertex_consistency():
    assert verify_vertex_consistency(O3, 1, make_engine(O3, K=4, D=3))["status"] == "pass"
    c0 = O3.with_(level=0)
    assert verify_vertex_consistency(c0, 1, make_engine(c0, K=4, D=3))["status"] == "fail"


def test_commutativity_probe_runs():
    rep = commutativity_probe(O3, make_engine(O3, K=2, D=3))
    assert rep["pairs"] and rep["status"] in ("pass", "fail")


# ---------------------------------------------------------------- properties

terms = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3), st.just(())),
                        st.integers(-4, 4).map(Fraction), max_size=5)


@given(terms, st.fractions(min_value=-3, max_value=3, max_denominator=3),
       st.fractions(min_value=-3, max_value=3, max_denominator=3))
@settings(max_examples=60, deadline=None)
def test_shift_composes(series, a, b):
    K, U = 5, 3
    series = {k: v for k, v in series.items() if v}
    twice = substitute_shift(substitute_shift(series, a, K, U), b, K, U)
    once = substitute_shift(series, a + b, K, U)
    clean = lambda d: {k: v for k, v in d.items() if v}
    assert clean(twice) == clean(once)


@given(terms)
@settings(max_examples=30, deadline=None)
def test_zero_shift_is_identity(series):
    series = {k: v for k, v in series.items() if v and k[0] < 5}
    assert {k: v for k, v in substitute_shift(series, 0, 5, 3).items() if v} == series
