from fractions import Fraction
from math import comb

import pytest

from yangcenter.brauer import (BrauerError, a_coefficient, check_fusion, check_trace_reduction,
                               evaluation_offsets, max_m, symmetrizer, verify_conjugation)
from yangcenter.context import AlgebraContext
from yangcenter.tensor import TensorOp, build_pq, partial_trace

GRID = [(AlgebraContext(3), 3), (AlgebraContext(4), 3), (AlgebraContext(4, "sp"), 2)]
CASES = [(c, m) for c, top in GRID for m in range(1, top + 1)]
IDS = [f"{c.label}-m{m}" for c, m in CASES]


def expected_rank(ctx, m):
    # traceless symmetric tensors for o; the m-th fundamental for sp
    N = ctx.N
    if ctx.kind == "o":
        return comb(N + m - 1, m) - (comb(N + m - 3, m - 2) if m >= 2 else 0)
    return comb(N, m) - (comb(N, m - 2) if m >= 2 else 0)


@pytest.mark.parametrize("ctx", [AlgebraContext(3), AlgebraContext(4), AlgebraContext(4, "sp"),
                                 AlgebraContext(6, "sp")], ids=lambda c: c.label)
def test_two_leg_closed_form(ctx):
    # o: (1 + P)/2 - Q/N; sp: (1 - P)/2 - Q/N
    P, Q = build_pq(ctx)
    one = TensorOp.identity(P.legs, ctx.N)
    want = (one + P.scale(ctx.sign)).scale(Fraction(1, 2)) - Q.scale(Fraction(1, ctx.N))
    assert symmetrizer(ctx, 2).S == want


@pytest.mark.parametrize("ctx,m", CASES, ids=IDS)
def test_rank_and_idempotent(ctx, m):
    b = symmetrizer(ctx, m)
    assert b.rank == expected_rank(ctx, m)
    assert b.S @ b.S == b.S


@pytest.mark.parametrize("ctx,m", CASES, ids=IDS)
def test_fusion_matches_projection(ctx, m):
    assert check_fusion(ctx, m)["status"] == "pass"


def test_fusion_wrong_spacing_fails():
    assert check_fusion(AlgebraContext(3), 2, spacing=+1)["status"] == "fail"


FROZEN_A = {("o3", 2): "5/3", ("o3", 3): "7/5", ("o4", 2): "9/4", ("o4", 3): "16/9",
            ("sp4", 2): "5/4"}


@pytest.mark.parametrize("ctx,m", [c for c in CASES if c[1] >= 2],
                         ids=[i for i, c in zip(IDS, CASES) if c[1] >= 2])
def test_trace_reduction(ctx, m):
    rec = check_trace_reduction(ctx, m)
    assert rec["status"] == "pass"
    assert Fraction(rec["a"]) == Fraction(FROZEN_A[(ctx.label, m)])
    # the frozen value also equals the rank ratio
    assert a_coefficient(ctx, m) == Fraction(expected_rank(ctx, m), expected_rank(ctx, m - 1))


def test_trace_of_m2_by_hand():
    ctx = AlgebraContext(3)
    S = symmetrizer(ctx, 2).S
    assert partial_trace(S, ["2"]) == TensorOp.identity(("1",), 3).scale(Fraction(5, 3))


def test_offsets():
    assert evaluation_offsets(AlgebraContext(3), 3) == [-2, -1, 0]
    assert evaluation_offsets(AlgebraContext(4, "sp"), 2) == [0, -1]


def test_m_out_of_range():
    assert max_m(AlgebraContext(4, "sp")) == 2
    with pytest.raises(BrauerError):
        symmetrizer(AlgebraContext(4, "sp"), 3)


@pytest.mark.parametrize("m", [1, 2])
def test_conjugation_o3(m):
    assert verify_conjugation(AlgebraContext(3), m, K=3)["status"] == "pass"


def test_conjugation_control():
    assert verify_conjugation(AlgebraContext(3), 2, K=3, spacing=+1)["status"] == "fail"
