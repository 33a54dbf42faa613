"""Identity checks for P, Q, R(u), the normalizing series and Rbar(u).

Each check returns a report record {"name", "status", "witness", ...}.
"""

from __future__ import annotations

from fractions import Fraction

from .context import AlgebraContext
from .exact import HSeries, MPoly, RatFun, rat_str
from .tensor import (TensorOp, build_pq, build_R, build_Rbar, f_series,
                     prime_transpose, shift_inverse_powers, _mul_inv_series)


def _record(name, ctx, witness, **extra):
    return dict({"name": name, "algebra": ctx.label,
                 "status": "pass" if witness is None else "fail", "witness": witness}, **extra)


def _op_witness(a: TensorOp, b: TensorOp):
    d = a - b
    for k in sorted(d.entries):
        v = d.entries[k]
        if not _zero(v):
            return {"entry": [list(k[0]), list(k[1])], "value": str(v)}
    return None


def _zero(v):
    z = getattr(v, "is_zero", None)
    return z() if z else v == 0


def check_formulae(ctx: AlgebraContext) -> dict:
    """P^2 = 1, Q^2 = N Q, PQ = QP = +-Q, P' = Q, Q' = P on either leg."""
    P, Q = build_pq(ctx)
    one = TensorOp.identity(P.legs, ctx.N)
    s = ctx.sign
    cases = [("P^2 = 1", P @ P, one), ("Q^2 = NQ", Q @ Q, Q.scale(ctx.N)),
             ("PQ = sQ", P @ Q, Q.scale(s)), ("QP = sQ", Q @ P, Q.scale(s))]
    for leg in P.legs:
        cases.append((f"P' = Q (leg {leg})", prime_transpose(ctx, P, leg), Q))
        cases.append((f"Q' = P (leg {leg})", prime_transpose(ctx, Q, leg), P))
    witness = None
    for label, a, b in cases:
        w = _op_witness(a, b)
        if w:
            witness = dict(w, identity=label)
            break
    return _record("formulae", ctx, witness, identities=[c[0] for c in cases])


def check_ybe(ctx: AlgebraContext, cleared=True) -> dict:
    """R12(u) R13(u+v) R23(v) = R23(v) R13(u+v) R12(u).

    cleared=True multiplies each factor by its scalar denominator x(x - h kappa);
    both sides pick up the same nonzero polynomial, so the identity is
    equivalent and stays polynomial.
    """
    V = ("u", "v", "h")
    u, v, h = (MPoly.var(V, x) for x in V)
    legs = ("1", "2", "3")
    R12 = build_R(ctx, u, h, ("1", "2"), clear=cleared).embed(legs)
    R13 = build_R(ctx, u + v, h, ("1", "3"), clear=cleared).embed(legs)
    R23 = build_R(ctx, v, h, ("2", "3"), clear=cleared).embed(legs)
    w = _op_witness(R12 @ R13 @ R23, R23 @ R13 @ R12)
    return _record("yang-baxter", ctx, w, cleared=cleared)


def check_almost(ctx: AlgebraContext) -> dict:
    """R(u) R(-u) = R(u) R(u + h kappa)' = 1 - h^2 u^{-2}."""
    V = ("u", "h")
    u, h = MPoly.var(V, "u"), MPoly.var(V, "h")
    R = build_R(ctx, u, h)
    target = RatFun(u * u - h * h, u * u)
    one = TensorOp.identity(R.legs, ctx.N, target)
    witness = None
    checks = [("R(u)R(-u)", R @ build_R(ctx, -u, h))]
    for leg in R.legs:
        checks.append((f"R(u)R(u+h kappa)' (leg {leg})",
                       R @ prime_transpose(ctx, build_R(ctx, u + h * ctx.kappa, h), leg)))
    for label, lhs in checks:
        w = _op_witness(lhs, one)
        if w:
            witness = dict(w, identity=label)
            break
    return _record("almost-unitarity", ctx, witness, identities=[c[0] for c in checks])


def check_fseries(ctx: AlgebraContext, M=None) -> dict:
    """First coefficients 1, 0, 1/2, kappa/2, 3/8 and both defining identities
    f(x) f(x + kappa) = f(x) f(-x) = (1 - x^{-2})^{-1} through x^{-M}."""
    M = ctx.M if M is None else M
    fs = f_series(ctx, M)
    k = ctx.kappa
    expected = [Fraction(1), Fraction(0), Fraction(1, 2), k / 2, Fraction(3, 8)]
    witness = None
    for r, e in enumerate(expected[:M + 1]):
        if fs[r] != e:
            witness = {"coefficient": r, "got": rat_str(fs[r]), "expected": rat_str(e)}
            break
    target = [Fraction(1) if r % 2 == 0 else Fraction(0) for r in range(M + 1)]
    neg = [c if r % 2 == 0 else -c for r, c in enumerate(fs.coeffs)]
    for label, other in (("f(x)f(x+kappa)", shift_inverse_powers(fs.coeffs, k)), ("f(x)f(-x)", neg)):
        prod = _mul_inv_series(list(fs.coeffs), other, M)
        if witness is None and prod != target:
            r = next(r for r in range(M + 1) if prod[r] != target[r])
            witness = {"identity": label, "order": r, "got": rat_str(prod[r])}
    return _record("normalizing-series", ctx, witness, M=M,
                   coefficients=[rat_str(c) for c in fs.coeffs])


def check_rbar(ctx: AlgebraContext, K=6, M=6) -> dict:
    """Crossing symmetry, its transposed form and unitarity of Rbar mod h^K."""
    c = ctx.with_(M=M, K=K)
    W = ("u",)
    x = MPoly.var(W, "u")
    Rb = build_Rbar(c, x, K=K)
    Rb_k = build_Rbar(c, x, shift=c.kappa, K=K)
    Rb_neg = build_Rbar(c, -x, K=K)
    one = TensorOp.identity(Rb.legs, c.N, HSeries([RatFun.const(W, 1)], K))
    checks = [("Rbar(u)Rbar(-u)", Rb @ Rb_neg, one), ("Rbar(-u)Rbar(u)", Rb_neg @ Rb, one)]
    for leg in Rb.legs:
        pk = prime_transpose(c, Rb_k, leg)
        checks.append((f"Rbar(u)Rbar(u+h kappa)' (leg {leg})", Rb @ pk, one))
        checks.append((f"Rbar(u+h kappa)'Rbar(u) (leg {leg})", pk @ Rb, one))
        checks.append((f"Rbar(-u)' = Rbar(u+h kappa) (leg {leg})", prime_transpose(c, Rb_neg, leg), Rb_k))
    witness = None
    for label, a, b in checks:
        w = _op_witness(a, b)
        if w:
            witness = dict(w, identity=label)
            break
    return _record("rbar-suite", c, witness, K=K, M=M, identities=[ch[0] for ch in checks])
