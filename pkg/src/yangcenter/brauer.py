"""Symmetrizers on (C^N)^{(x) m}, built twice: once as a spectral projection
and once as an evaluated R-matrix product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial

from .context import AlgebraContext
from .exact import MPoly, RatFun, rat
from .linalg import column_space, inverse, matmul, nullspace
from .tensor import (TensorOp, build_pq, build_R, build_Rbar, partial_trace,
                     span_op)


class BrauerError(ValueError):
    pass


class DegenerateParameterError(BrauerError):
    pass


def max_m(ctx: AlgebraContext) -> int:
    return ctx.N if ctx.kind == "o" else ctx.N // 2


def _check_m(ctx, m, lo=1):
    if not lo <= m <= max_m(ctx):
        raise BrauerError(f"m={m} outside 1..{max_m(ctx)} for {ctx.label}")


def legs_of(m):
    return tuple(str(k) for k in range(1, m + 1))


def evaluation_offsets(ctx: AlgebraContext, m: int, spacing: int = -1):
    """Offsets c_i with u_i = u + c_i h.

    o:  (u-(m-1)h, ..., u-h, u);  sp: (u, u-h, ..., u-(m-1)h).
    spacing=+1 flips the step (used as a negative control).
    """
    step = -spacing
    if ctx.kind == "o":
        return [-step * (m - i) for i in range(1, m + 1)]
    return [-step * (i - 1) for i in range(1, m + 1)]


@dataclass(frozen=True)
class SymmetrizerBundle:
    m: int
    S: TensorOp
    offsets: tuple
    rank: int

    def dense(self):
        return to_dense(self.S)


def to_dense(op: TensorOp):
    N, n = op.N, len(op.legs)
    idx = {t: k for k, t in enumerate(product(range(N), repeat=n))}
    A = [[Fraction(0)] * len(idx) for _ in idx]
    for (r, c), v in op.entries.items():
        A[idx[r]][idx[c]] = v
    return A


def from_dense(A, legs, N):
    keys = list(product(range(N), repeat=len(legs)))
    return TensorOp(legs, N, {(keys[i], keys[j]): A[i][j]
                              for i in range(len(keys)) for j in range(len(keys)) if A[i][j]})


def brauer_images(ctx: AlgebraContext, m: int):
    """Matrix images rho(s_ij), rho(eps_ij), i < j, on legs 1..m."""
    legs = legs_of(m)
    s = Fraction(ctx.sign)
    out = []
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            P, Q = build_pq(ctx, (str(i), str(j)))
            out.append(((i, j), P.embed(legs).scale(s), Q.embed(legs).scale(s)))
    return out


def symmetrizer(ctx: AlgebraContext, m: int) -> SymmetrizerBundle:
    """Projection onto W = {x : s x = x, eps x = 0} along the span of the
    images of (s - 1) and eps."""
    _check_m(ctx, m)
    legs = legs_of(m)
    n = ctx.N ** m
    offs = tuple(evaluation_offsets(ctx, m))
    if m == 1:
        return SymmetrizerBundle(1, TensorOp.identity(legs, ctx.N), offs, n)
    constraints = []
    spanning = []
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _, s, e in brauer_images(ctx, m):
        sm1 = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(to_dense(s), ident)]
        ed = to_dense(e)
        constraints += sm1 + ed
        spanning += [list(col) for col in zip(*sm1)] + [list(col) for col in zip(*ed)]
    W = nullspace(constraints, n)
    Kb = column_space(spanning, n)
    if len(W) + len(Kb) != n:
        raise BrauerError(f"W + K does not span: dim W={len(W)}, dim K={len(Kb)}, N^m={n}")
    B = [list(row) for row in zip(*(W + Kb))]  # basis vectors as columns
    Binv = inverse(B)
    # S = B diag(1_W, 0_K) B^{-1}
    Wcols = [list(row[:len(W)]) + [Fraction(0)] * len(Kb) for row in B]
    S = matmul(Wcols, Binv)
    return SymmetrizerBundle(m, from_dense(S, legs, ctx.N), offs, len(W))


def fusion_eval(ctx: AlgebraContext, m: int, spacing: int = -1, check_constant=True) -> TensorOp:
    """(1/m!) prod_{i<j} R_ij(u_i - u_j) at the evaluation points, computed with
    symbolic u and h."""
    _check_m(ctx, m)
    legs = legs_of(m)
    V = ("u", "h")
    u, h = MPoly.var(V, "u"), MPoly.var(V, "h")
    pts = [u + h * c for c in evaluation_offsets(ctx, m, spacing)]
    one = RatFun(MPoly.const(V, 1))
    out = TensorOp.identity(legs, ctx.N, one)
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            x = pts[i - 1] - pts[j - 1]
            if x.is_zero() or (x - h * ctx.kappa).is_zero():
                raise BrauerError(f"evaluation hits a pole of R_{i}{j}")
            out = out @ build_R(ctx, x, h, (str(i), str(j))).embed(legs)
    out = out.scale(Fraction(1, factorial(m)))
    if check_constant and not out.is_constant():
        raise BrauerError("u/h dependence did not cancel in the fused product")
    return out.map(lambda v: v.const_value())


def a_coefficient(ctx: AlgebraContext, m: int) -> Fraction:
    """a_m = +-(+-N+m-3)(+-N+2m-2) / (m(+-N+2m-4)); upper sign for o."""
    s = ctx.sign
    n = s * ctx.N
    den = m * (n + 2 * m - 4)
    if den == 0:
        raise DegenerateParameterError(f"a_m has a vanishing denominator for {ctx.label}, m={m}")
    return Fraction(s * (n + m - 3) * (n + 2 * m - 2), den)


def trace_reduce(ctx: AlgebraContext, m: int, bundles=None) -> Fraction:
    """Return a_m after asserting tr_m S_m = a_m S_{m-1}."""
    _check_m(ctx, m)
    if m == 1:
        return Fraction(ctx.N)
    get = (lambda k: bundles[k]) if bundles else (lambda k: symmetrizer(ctx, k).S)
    a = a_coefficient(ctx, m)
    t = partial_trace(get(m), [str(m)])
    if not t == get(m - 1).scale(a):
        raise BrauerError(f"trace reduction fails for {ctx.label}, m={m}")
    return a


def verify_conjugation(ctx: AlgebraContext, m: int, alpha=0, K=None, spacing=-1) -> dict:
    """S^1 Rbar(v + h alpha | u_[m]) = backward product . S^1 mod h^K.

    Everything depends on v - u only, so one variable x = v - u is used.
    """
    _check_m(ctx, m)
    K = ctx.K if K is None else K
    alpha = rat(alpha)
    legs = ("0",) + legs_of(m)
    x = MPoly.var(("x",), "x")
    offs = evaluation_offsets(ctx, m, spacing)
    S = symmetrizer(ctx, m).S.embed(legs)
    facs = {j: build_Rbar(ctx, x, ("0", str(j)), shift=alpha - offs[j - 1], K=K).embed(legs)
            for j in range(1, m + 1)}
    fwd = None
    for j in range(m, 0, -1):
        fwd = facs[j] if fwd is None else fwd @ facs[j]
    bwd = None
    for j in range(1, m + 1):
        bwd = facs[j] if bwd is None else bwd @ facs[j]
    diff = (S @ fwd) - (bwd @ S)
    witness = None
    for k in sorted(diff.entries):
        v = diff.entries[k]
        if not v.is_zero():
            witness = {"entry": [list(k[0]), list(k[1])],
                       "value": [str(c) for c in v.coeffs]}
            break
    return {"name": "conjugation", "m": m, "alpha": str(alpha), "K": K,
            "status": "pass" if witness is None else "fail", "witness": witness}


def check_fusion(ctx: AlgebraContext, m: int, spacing: int = -1) -> dict:
    """Projection-built symmetrizer against the fused R-matrix product."""
    S = symmetrizer(ctx, m).S
    try:
        F = fusion_eval(ctx, m, spacing)
    except BrauerError as e:
        return {"name": "fusion", "algebra": ctx.label, "m": m, "status": "fail",
                "witness": {"error": str(e)}}
    d = S - F
    witness = None
    for k in sorted(d.entries):
        if d.entries[k]:
            witness = {"entry": [list(k[0]), list(k[1])], "value": str(d.entries[k])}
            break
    return {"name": "fusion", "algebra": ctx.label, "m": m, "rank": symmetrizer(ctx, m).rank,
            "status": "pass" if witness is None else "fail", "witness": witness}


def check_trace_reduction(ctx: AlgebraContext, m: int) -> dict:
    try:
        a = trace_reduce(ctx, m)
    except BrauerError as e:
        return {"name": "trace-reduction", "algebra": ctx.label, "m": m, "status": "fail",
                "witness": {"error": str(e)}}
    return {"name": "trace-reduction", "algebra": ctx.label, "m": m, "a": str(a),
            "status": "pass", "witness": None}
