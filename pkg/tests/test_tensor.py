from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yangcenter.context import AlgebraContext
from yangcenter.exact import MPoly, RatFun, expand_ratfun
from yangcenter.identities import check_almost, check_formulae, check_fseries, check_rbar, check_ybe
from yangcenter.tensor import (TensorError, TensorOp, build_pq, f_series, lr_product,
                               partial_trace, prime_transpose)

GRID = [AlgebraContext(3), AlgebraContext(4), AlgebraContext(5), AlgebraContext(4, "sp")]
IDS = [c.label for c in GRID]


def f_oracle(kappa, M):
    """Solve f(x) f(x + kappa) (1 - x^{-2}) = 1 in t = 1/x with rational functions.

    (x + kappa)^{-r} = t^r / (1 + kappa t)^r, and the whole product is expanded
    in t, so this shares nothing with the series code beyond the kernel.
    """
    T = ("t",)
    t = MPoly.var(T, "t")
    one = MPoly.const(T, 1)
    f = [Fraction(1)] + [Fraction(0)] * M
    for r in range(1, M + 1):
        F = sum((t ** k * c for k, c in enumerate(f)), MPoly(T))
        G = sum((RatFun(t ** k * c, (one + t * kappa) ** k) for k, c in enumerate(f) if c),
                RatFun(MPoly(T)))
        resid = expand_ratfun(G * RatFun(F) * RatFun(one - t * t), "t", (0, r))[r]
        f[r] = -(resid.const_value() if resid else Fraction(0)) / 2
    return f


@pytest.mark.parametrize("ctx", GRID, ids=IDS)
def test_fseries_matches_oracle(ctx):
    assert list(f_series(ctx, 8).coeffs) == f_oracle(ctx.kappa, 8)


def test_fseries_frozen_o3():
    want = ["1", "0", "1/2", "1/4", "3/8", "5/16", "11/32", "21/64", "43/128"]
    assert list(f_series(AlgebraContext(3), 8).coeffs) == [Fraction(x) for x in want]


@pytest.mark.parametrize("ctx", GRID, ids=IDS)
def test_fseries_identities_to_order_12(ctx):
    assert check_fseries(ctx, 12)["status"] == "pass"


@pytest.mark.parametrize("ctx", GRID, ids=IDS)
def test_formulae(ctx):
    assert check_formulae(ctx)["status"] == "pass"


def test_ybe_uncleared_o3():
    assert check_ybe(AlgebraContext(3), cleared=False)["status"] == "pass"


@pytest.mark.parametrize("ctx", GRID, ids=IDS)
def test_ybe_cleared(ctx):
    assert check_ybe(ctx)["status"] == "pass"


@pytest.mark.parametrize("ctx", GRID, ids=IDS)
def test_almost_unitarity(ctx):
    assert check_almost(ctx)["status"] == "pass"


def test_wrong_kappa_breaks_almost_unitarity():
    # sp P, Q with the orthogonal kappa
    class Fake(AlgebraContext):
        @property
        def kappa(self):
            return Fraction(1)

    assert check_almost(Fake(4, "sp"))["status"] == "fail"


@pytest.mark.parametrize("ctx", GRID[:1] + GRID[3:], ids=["o3", "sp4"])
def test_rbar_suite(ctx):
    assert check_rbar(ctx, K=4, M=4)["status"] == "pass"


def test_partial_traces():
    ctx = AlgebraContext(4, "sp")
    P, Q = build_pq(ctx)
    one = TensorOp.identity(("1",), 4)
    assert partial_trace(P, ["2"]) == one
    assert partial_trace(Q, ["2"]) == one
    assert partial_trace(TensorOp.identity(("1", "2"), 4), ["2"]) == one.scale(4)


def test_prime_transpose_involution():
    ctx = AlgebraContext(4, "sp")
    P, Q = build_pq(ctx)
    op = P + Q.scale(3)
    for leg in ("1", "2"):
        assert prime_transpose(ctx, prime_transpose(ctx, op, leg), leg) == op


def test_unknown_leg():
    P, _ = build_pq(AlgebraContext(3))
    with pytest.raises(TensorError):
        partial_trace(P, ["7"])


# ---------------------------------------------------------------- properties

vals = st.integers(-3, 3).map(Fraction)


def one_leg(leg, N=2):
    return st.lists(vals, min_size=N * N, max_size=N * N).map(
        lambda xs: TensorOp((leg,), N, {((i,), (j,)): xs[i * N + j] for i in range(N) for j in range(N)}))


def two_leg(N=2):
    n = N ** 4
    idx = [((a, b), (c, d)) for a in range(N) for b in range(N) for c in range(N) for d in range(N)]
    return st.lists(vals, min_size=n, max_size=n).map(
        lambda xs: TensorOp(("1", "2"), N, dict(zip(idx, xs))))


@given(one_leg("1"), one_leg("2"))
@settings(max_examples=40, deadline=None)
def test_embedded_disjoint_legs_commute(a, b):
    A, B = a.embed(("1", "2")), b.embed(("1", "2"))
    assert A @ B == B @ A


@given(one_leg("1"), one_leg("2"), two_leg())
@settings(max_examples=40, deadline=None)
def test_lr_product_sides(a, b, x):
    A, B = a.embed(("1", "2")), b.embed(("1", "2"))
    assert lr_product(A, x, ["1"]) == A @ x
    assert lr_product(B, x, ["1"]) == x @ B


@given(two_leg(), two_leg())
@settings(max_examples=30, deadline=None)
def test_trace_is_cyclic_on_leg(x, y):
    assert partial_trace(x @ y, ["1", "2"]) == partial_trace(y @ x, ["1", "2"])
