"""Sparse operators on labeled tensor legs and the rational R-matrices.

A TensorOp stores only nonzero entries, keyed by (row multi-index,
column multi-index) with one index per leg. Scalars may be Fractions,
MPoly, RatFun or HSeries; the class only needs +, *, and a zero test.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb

from .context import AlgebraContext
from .exact import (ExactAlgebraError, HSeries, MPoly, RatFun, _is_zero,
                    binom_series, rat)


class TensorError(ValueError):
    pass


class TensorOp:
    __slots__ = ("legs", "N", "entries")

    def __init__(self, legs, N, entries):
        self.legs = tuple(str(x) for x in legs)
        if len(set(self.legs)) != len(self.legs):
            raise TensorError(f"repeated leg labels {self.legs}")
        self.N = N
        self.entries = {k: v for k, v in entries.items() if not _is_zero(v)}

    @classmethod
    def identity(cls, legs, N, one=Fraction(1)):
        legs = tuple(legs)
        return cls(legs, N, {(idx, idx): one for idx in product(range(N), repeat=len(legs))})

    @classmethod
    def zero(cls, legs, N):
        return cls(legs, N, {})

    # -- leg bookkeeping
    def reorder(self, legs):
        legs = tuple(str(x) for x in legs)
        if sorted(legs) != sorted(self.legs):
            raise TensorError(f"cannot reorder legs {self.legs} as {legs}")
        if legs == self.legs:
            return self
        pos = [self.legs.index(x) for x in legs]
        return TensorOp(legs, self.N, {(tuple(r[p] for p in pos), tuple(c[p] for p in pos)): v
                                       for (r, c), v in self.entries.items()})

    def embed(self, legs):
        """Tensor with identity on the extra legs (order given by `legs`)."""
        legs = tuple(str(x) for x in legs)
        missing = [x for x in self.legs if x not in legs]
        if missing:
            raise TensorError(f"legs {missing} are not in the target {legs}")
        extra = [x for x in legs if x not in self.legs]
        out = {}
        for (r, c), v in self.entries.items():
            for e in product(range(self.N), repeat=len(extra)):
                rr = dict(zip(self.legs, r))
                cc = dict(zip(self.legs, c))
                rr.update(zip(extra, e))
                cc.update(zip(extra, e))
                out[(tuple(rr[x] for x in legs), tuple(cc[x] for x in legs))] = v
        return TensorOp(legs, self.N, out)

    def _aligned(self, other):
        if set(self.legs) != set(other.legs):
            raise TensorError(f"leg sets differ: {self.legs} vs {other.legs}; embed first")
        if self.N != other.N:
            raise TensorError("dimension mismatch")
        return other.reorder(self.legs)

    # -- algebra
    def __add__(self, other):
        other = self._aligned(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return TensorOp(self.legs, self.N, out)

    def __neg__(self):
        return TensorOp(self.legs, self.N, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return TensorOp(self.legs, self.N, {k: v * s for k, v in self.entries.items()})

    def __matmul__(self, other):
        other = self._aligned(other)
        rows = {}
        for (r, c), v in other.entries.items():
            rows.setdefault(r, []).append((c, v))
        out = {}
        for (r, m), a in self.entries.items():
            for c, b in rows.get(m, ()):
                t = a * b
                k = (r, c)
                out[k] = out[k] + t if k in out else t
        return TensorOp(self.legs, self.N, out)

    def map(self, f):
        return TensorOp(self.legs, self.N, {k: f(v) for k, v in self.entries.items()})

    def is_zero(self):
        return all(_is_zero(v) for v in self.entries.values())

    def __eq__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.legs)

    def is_constant(self):
        return all(isinstance(v, (int, Fraction)) or v.is_const() for v in self.entries.values())

    def __repr__(self):
        return f"TensorOp(legs={self.legs}, N={self.N}, nnz={len(self.entries)})"


def prime_transpose(ctx: AlgebraContext, op: TensorOp, leg) -> TensorOp:
    """A' = (eps_i eps_j a_{j'i'}) on one leg."""
    leg = str(leg)
    if leg not in op.legs:
        raise TensorError(f"unknown leg {leg!r}")
    k = op.legs.index(leg)
    eps = ctx.eps
    out = {}
    for (r, c), v in op.entries.items():
        j, i = ctx.prime(r[k]), ctx.prime(c[k])
        rr = r[:k] + (i,) + r[k + 1:]
        cc = c[:k] + (j,) + c[k + 1:]
        s = eps[i] * eps[j]
        out[(rr, cc)] = v if s == 1 else -v
    return TensorOp(op.legs, op.N, out)


def transpose(op: TensorOp, leg) -> TensorOp:
    leg = str(leg)
    if leg not in op.legs:
        raise TensorError(f"unknown leg {leg!r}")
    k = op.legs.index(leg)
    out = {}
    for (r, c), v in op.entries.items():
        out[(r[:k] + (c[k],) + r[k + 1:], c[:k] + (r[k],) + c[k + 1:])] = v
    return TensorOp(op.legs, op.N, out)


def partial_trace(op: TensorOp, legs) -> TensorOp:
    legs = [str(x) for x in legs]
    for x in legs:
        if x not in op.legs:
            raise TensorError(f"unknown leg {x!r}")
    tk = [op.legs.index(x) for x in legs]
    keep = [k for k in range(len(op.legs)) if k not in tk]
    out = {}
    for (r, c), v in op.entries.items():
        if all(r[k] == c[k] for k in tk):
            key = (tuple(r[k] for k in keep), tuple(c[k] for k in keep))
            out[key] = out[key] + v if key in out else v
    return TensorOp([op.legs[k] for k in keep], op.N, out)


def full_trace(op: TensorOp):
    t = partial_trace(op, op.legs)
    return t.entries.get(((), ()), 0)


def lr_product(op: TensorOp, x: TensorOp, left_legs) -> TensorOp:
    """Ordered product: legs in `left_legs` of op act from the left on x,
    the remaining legs of op act from the right.

    With op = sum a_k (x) b_k this is sum a_k x b_k.
    """
    x = x.reorder(op.legs) if set(x.legs) == set(op.legs) else x
    x = op._aligned(x)
    left = [op.legs.index(str(l)) for l in left_legs]
    right = [k for k in range(len(op.legs)) if k not in left]
    byrow = {}
    for (r, c), v in x.entries.items():
        byrow.setdefault(r, []).append((c, v))
    out = {}
    for (R, C), a in op.entries.items():
        # (e_{R_L C_L} x e_{R_R C_R})_{I,J}: I_L = R_L, J_R = C_R, x_{(C_L, I_R),(J_L, R_R)}
        for (r, c), v in x.entries.items():
            if any(r[k] != C[k] for k in left) or any(c[k] != R[k] for k in right):
                continue
            I = list(r)
            J = list(c)
            for k in left:
                I[k] = R[k]
            for k in right:
                J[k] = C[k]
            key = (tuple(I), tuple(J))
            t = a * v
            out[key] = out[key] + t if key in out else t
    return TensorOp(op.legs, op.N, out)


# ------------------------------------------------------------ P, Q, R

def pq_entries(ctx: AlgebraContext):
    """Nonzero entries of P and Q on two legs as dicts of sign values."""
    N, eps = ctx.N, ctx.eps
    P = {((i, j), (j, i)): 1 for i in range(N) for j in range(N)}
    Q = {((i, ctx.prime(i)), (j, ctx.prime(j))): eps[i] * eps[j] for i in range(N) for j in range(N)}
    return P, Q


def span_op(ctx: AlgebraContext, legs, a, b, c, one=Fraction(1)) -> TensorOp:
    """a + b P + c Q on two legs (any scalar type for a, b, c)."""
    N = ctx.N
    P, Q = pq_entries(ctx)
    out = {}

    def put(k, v):
        out[k] = out[k] + v if k in out else v

    if not _is_zero(a):
        for idx in product(range(N), repeat=2):
            put((idx, idx), a)
    if not _is_zero(b):
        for k in P:
            put(k, b)
    if not _is_zero(c):
        for k, s in Q.items():
            put(k, c if s == 1 else -c)
    return TensorOp(legs, N, out)


def build_pq(ctx: AlgebraContext, legs=("1", "2")):
    z = Fraction(0)
    one = Fraction(1)
    return span_op(ctx, legs, z, one, z), span_op(ctx, legs, z, z, one)


def build_R(ctx: AlgebraContext, x, h, legs=("1", "2"), clear=False) -> TensorOp:
    """R(x) = 1 - hP/x + hQ/(x - h kappa) with x, h polynomials in one context.

    With clear=True the polynomial x (x - h kappa) R(x) is returned instead.
    """
    d = x - h * ctx.kappa
    if clear:
        return span_op(ctx, legs, x * d, -(h * d), h * x)
    one = RatFun(MPoly.const(x.vars, 1))
    return span_op(ctx, legs, one, -RatFun(h, x), RatFun(h, d))


# ------------------------------------------------------------ f-series

class FSeries:
    """Coefficients f_0..f_M of x^{-r} of the normalizing series."""

    def __init__(self, coeffs, kappa):
        self.coeffs = tuple(coeffs)
        self.kappa = kappa

    @property
    def M(self):
        return len(self.coeffs) - 1

    def __getitem__(self, r):
        return self.coeffs[r]

    def shifted(self, a) -> list:
        """Coefficients of f(x + a) in x^{-r}, r = 0..M."""
        return shift_inverse_powers(self.coeffs, a)


def shift_inverse_powers(coeffs, a):
    """g(x) = sum c_s x^{-s}; return the coefficients of g(x + a) up to the same order."""
    a = rat(a)
    M = len(coeffs) - 1
    out = [Fraction(0)] * (M + 1)
    for s, c in enumerate(coeffs):
        if not c:
            continue
        if s == 0:
            out[0] += c
            continue
        for k, b in enumerate(binom_series(s, a, M - s)):
            out[s + k] += c * b
    return out


def _mul_inv_series(a, b, M):
    out = [Fraction(0)] * (M + 1)
    for i, x in enumerate(a[:M + 1]):
        if x:
            for j in range(M + 1 - i):
                out[i + j] += x * b[j]
    return out


def f_series(ctx: AlgebraContext, M: int | None = None) -> FSeries:
    """Solve f(x) f(x + kappa) = (1 - x^{-2})^{-1} order by order."""
    M = ctx.M if M is None else M
    if M < 0:
        raise ExactAlgebraError("order must be nonnegative")
    kappa = ctx.kappa
    f = [Fraction(1)] + [Fraction(0)] * M
    for r in range(1, M + 1):
        # the x^{-r} coefficient is 2 f_r + (terms in f_1..f_{r-1})
        g = shift_inverse_powers(f, kappa)
        lhs = _mul_inv_series(f, g, M)[r]
        target = Fraction(1) if r % 2 == 0 else Fraction(0)
        f[r] = (target - lhs) / 2
    return FSeries(f, kappa)


def rbar_coefficients(ctx: AlgebraContext, K: int, shift=0, fs: FSeries | None = None):
    """Rbar(x + shift*h) = sum_l h^l x^{-l} (alpha_l + beta_l P + gamma_l Q).

    Returns three lists of Fractions of length K.
    """
    if fs is None:
        fs = f_series(ctx, max(ctx.M, K - 1))
    if K - 1 > fs.M:
        raise ExactAlgebraError("insufficient f-series order")
    a = rat(shift)
    M = K - 1
    # with w = h/x, (x + a h)^{-r} h^r = w^r (1 + a w)^{-r}
    fpart = [Fraction(0)] * K
    for r in range(K):
        if fs[r]:
            for k, b in enumerate(binom_series(r, a, M - r)):
                fpart[r + k] += fs[r] * b
    # h/(x + b h) = w (1 + b w)^{-1}
    pser = [Fraction(0)] + [-c for c in binom_series(1, a, M - 1)] if M >= 1 else [Fraction(0)]
    qser = [Fraction(0)] + list(binom_series(1, a - ctx.kappa, M - 1)) if M >= 1 else [Fraction(0)]
    one = [Fraction(1)] + [Fraction(0)] * M
    alpha = _mul_inv_series(fpart, one, M)
    beta = _mul_inv_series(fpart, pser + [Fraction(0)] * (K - len(pser)), M)
    gamma = _mul_inv_series(fpart, qser + [Fraction(0)] * (K - len(qser)), M)
    return alpha[:K], beta[:K], gamma[:K]


def _hseries_from_coeffs(coeffs, x: MPoly):
    K = len(coeffs)
    one = MPoly.const(x.vars, 1)
    return HSeries([RatFun(one * c, x ** l) if c else RatFun(MPoly(x.vars), one) for l, c in enumerate(coeffs)], K)


def build_Rbar(ctx: AlgebraContext, x: MPoly, legs=("1", "2"), shift=0, K=None,
               fs: FSeries | None = None) -> TensorOp:
    """Normalized R-matrix Rbar(x + shift*h) mod h^K as a TensorOp.

    Entries are HSeries in h whose coefficients are RatFun in the variables
    of x; (x + a h)^{-r} is expanded with x large.
    """
    K = ctx.K if K is None else K
    if K > max(ctx.M, 0) and fs is None:
        raise ExactAlgebraError(f"insufficient f-series order: K={K} needs M >= K, have M={ctx.M}")
    al, be, ga = rbar_coefficients(ctx, K, shift, fs)
    return span_op(ctx, legs, _hseries_from_coeffs(al, x), _hseries_from_coeffs(be, x),
                   _hseries_from_coeffs(ga, x))


def build_R_product(ctx: AlgebraContext, n: int, m: int, us, vs, z: MPoly,
                    direction="forward", K=None, shift=0, factor=None) -> TensorOp:
    """Ordered product of Rbar_ij(z + u_i - v_{j-n}) on legs 1..n+m.

    forward: i = 1..n ascending, and for each i, j = n+m..n+1 descending.
    backward: i = n..1 descending, and for each i, j = n+1..n+m ascending.
    `factor(i, j)` may replace the default factor (used by tests).
    """
    if n < 1 or m < 1:
        raise TensorError("n and m must be positive")
    legs = tuple(str(k) for k in range(1, n + m + 1))
    order = factor_order(n, m, direction)
    out = None
    for i, j in order:
        if factor is not None:
            f = factor(i, j)
        else:
            f = build_Rbar(ctx, z + us[i - 1] - vs[j - n - 1], (str(i), str(j)), shift, K)
        f = f.embed(legs)
        out = f if out is None else out @ f
    return out


def factor_order(n: int, m: int, direction="forward"):
    if direction == "forward":
        return [(i, j) for i in range(1, n + 1) for j in range(n + m, n, -1)]
    if direction == "backward":
        return [(i, j) for i in range(n, 0, -1) for j in range(n + 1, n + m + 1)]
    raise TensorError(f"unknown direction {direction!r}")
