"""Exact scalars: rationals, sparse polynomials, rational functions and
truncated series.

Everything here is immutable once built and uses Fraction arithmetic only.
Polynomials carry their variable context; terms are kept in graded
lexicographic order when listed.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

Rat = Fraction


def rat(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot make a rational from {x!r}")


def rat_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class ExactAlgebraError(ValueError):
    pass


class NotAUnitError(ExactAlgebraError):
    pass


def _grlex(e):
    return (sum(e), e)


class MPoly:
    """Sparse polynomial with Fraction coefficients over a named variable tuple."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise ExactAlgebraError("exponent vector does not match the variable context")
            if c:
                clean[tuple(e)] = rat(c)
        self.terms = clean

    # -- constructors
    @classmethod
    def const(cls, vars, c):
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): rat(c)} if c else {})

    @classmethod
    def var(cls, vars, name):
        vars = tuple(vars)
        if name not in vars:
            raise ExactAlgebraError(f"unknown variable {name!r}")
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, vars, exps, c=1):
        return cls(vars, {tuple(exps): rat(c)})

    def _new(self, terms):
        p = MPoly.__new__(MPoly)
        p.vars = self.vars
        p.terms = terms
        return p

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                raise ExactAlgebraError("polynomials live in different variable contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(self.vars, other)
        return NotImplemented

    # -- predicates
    def is_zero(self):
        return not self.terms

    def is_const(self):
        return all(not any(e) for e in self.terms)

    def const_value(self):
        if not self.is_const():
            raise ExactAlgebraError("polynomial is not constant")
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def __bool__(self):
        return bool(self.terms)

    # -- ring operations
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self._new({})
            return self._new({e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return self._new(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ExactAlgebraError("negative power of a polynomial")
        out = MPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.vars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- structure
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex(t[0]), reverse=True)

    def lead(self):
        if not self.terms:
            raise ExactAlgebraError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex)
        return e, self.terms[e]

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, k: int):
        return max((e[k] for e in self.terms), default=-1)

    def min_degree_in(self, k: int):
        return min((e[k] for e in self.terms), default=0)

    def coeffs_in(self, k: int):
        """Split as sum_d c_d x_k^d; each c_d has x_k exponent 0."""
        out = {}
        for e, c in self.terms.items():
            d = e[k]
            e2 = e[:k] + (0,) + e[k + 1:]
            out.setdefault(d, {})[e2] = c
        return {d: self._new(t) for d, t in out.items()}

    def shift_var(self, k: int, d: int):
        """Multiply by x_k^d (d may be negative if it stays polynomial)."""
        t = {}
        for e, c in self.terms.items():
            if e[k] + d < 0:
                raise ExactAlgebraError("shift would leave the polynomial ring")
            t[e[:k] + (e[k] + d,) + e[k + 1:]] = c
        return self._new(t)

    def content(self):
        """Positive rational content: gcd of numerators over lcm of denominators."""
        from math import gcd, lcm
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den) if num else Fraction(1)

    def evaluate(self, point: dict):
        total = Fraction(0)
        vals = [rat(point[v]) for v in self.vars]
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def partial_eval(self, point: dict):
        """Substitute rationals for some variables; context unchanged."""
        idx = {self.vars.index(v): rat(x) for v, x in point.items()}
        t = {}
        for e, c in self.terms.items():
            f = c
            e2 = list(e)
            for k, x in idx.items():
                if e[k]:
                    f *= x ** e[k]
                e2[k] = 0
            e2 = tuple(e2)
            v = t.get(e2, 0) + f
            if v:
                t[e2] = v
            else:
                t.pop(e2, None)
        return self._new(t)

    def divmod_lead(self, other: "MPoly"):
        """Multivariate division by a single divisor (grlex); returns (q, r)."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        le, lc = other.lead()
        q = {}
        r = {}
        p = dict(self.terms)
        while p:
            e = max(p, key=_grlex)
            c = p[e]
            if all(a >= b for a, b in zip(e, le)):
                qe = tuple(a - b for a, b in zip(e, le))
                qc = c / lc
                q[qe] = q.get(qe, 0) + qc
                for e2, c2 in other.terms.items():
                    ee = tuple(a + b for a, b in zip(qe, e2))
                    v = p.get(ee, 0) - qc * c2
                    if v:
                        p[ee] = v
                    else:
                        p.pop(ee, None)
            else:
                r[e] = c
                del p[e]
        return self._new({e: c for e, c in q.items() if c}), self._new(r)

    def divexact(self, other: "MPoly"):
        q, r = self.divmod_lead(other)
        if not r.is_zero():
            raise ExactAlgebraError("polynomial division is not exact")
        return q

    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            if not mon:
                parts.append(rat_str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{rat_str(c)}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------- gcd

def _monic(p: MPoly) -> MPoly:
    if p.is_zero():
        return p
    return p * (1 / p.lead()[1])


def _main_var(p: MPoly):
    for k in range(len(p.vars) - 1, -1, -1):
        if p.degree_in(k) > 0:
            return k
    return None


def _content_in(p: MPoly, k: int) -> MPoly:
    g = None
    for c in p.coeffs_in(k).values():
        g = c if g is None else poly_gcd(g, c)
        if g.is_const():
            return MPoly.const(p.vars, 1)
    return g


def poly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Monic gcd via recursive primitive remainder sequences."""
    if a.is_zero():
        return _monic(b)
    if b.is_zero():
        return _monic(a)
    if a.is_const() or b.is_const():
        return MPoly.const(a.vars, 1)
    if len(a.terms) == 1 and len(b.terms) == 1:
        ea, eb = next(iter(a.terms)), next(iter(b.terms))
        return MPoly.monomial(a.vars, tuple(min(x, y) for x, y in zip(ea, eb)))
    ka, kb = _main_var(a), _main_var(b)
    k = max(ka, kb)
    if a.degree_in(k) == 0:
        return poly_gcd(a, _content_in(b, k))
    if b.degree_in(k) == 0:
        return poly_gcd(_content_in(a, k), b)
    ca, cb = _content_in(a, k), _content_in(b, k)
    pa, pb = a.divexact(ca), b.divexact(cb)
    c = poly_gcd(ca, cb)
    if pa.degree_in(k) < pb.degree_in(k):
        pa, pb = pb, pa
    while not pb.is_zero():
        r = _prem(pa, pb, k)
        pa = pb
        if r.is_zero():
            pb = r
        else:
            pb = r.divexact(_content_in(r, k)) if r.degree_in(k) > 0 else r
        if not pb.is_zero() and pb.degree_in(k) == 0:
            # remainder free of x_k: primitive parts are coprime in x_k
            return _monic(c)
    g = pa.divexact(_content_in(pa, k))
    return _monic(c * g)


def _prem(a: MPoly, b: MPoly, k: int) -> MPoly:
    db = b.degree_in(k)
    cb = b.coeffs_in(k)
    lc = cb[db]
    r = a
    while not r.is_zero() and r.degree_in(k) >= db:
        dr = r.degree_in(k)
        lr = r.coeffs_in(k)[dr]
        r = lc * r - (lr * b).shift_var(k, dr - db)
    return r


# ---------------------------------------------------------------- RatFun

class RatFun:
    """num/den with den monic under grlex and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized=False):
        if not isinstance(num, MPoly):
            raise TypeError("numerator must be an MPoly")
        if den is None:
            den = MPoly.const(num.vars, 1)
        elif isinstance(den, (int, Fraction)):
            den = MPoly.const(num.vars, den)
        if den.vars != num.vars:
            raise ExactAlgebraError("numerator and denominator contexts differ")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @property
    def vars(self):
        return self.num.vars

    @classmethod
    def const(cls, vars, c):
        return cls(MPoly.const(vars, c), _normalized=False)

    @classmethod
    def var(cls, vars, name):
        return cls(MPoly.var(vars, name))

    def _coerce(self, other):
        if isinstance(other, RatFun):
            if other.vars != self.vars:
                raise ExactAlgebraError("rational functions live in different contexts")
            return other
        if isinstance(other, MPoly):
            return RatFun(other)
        if isinstance(other, (int, Fraction)):
            return RatFun(MPoly.const(self.vars, other), _normalized=True) if other else RatFun(
                MPoly(self.vars), MPoly.const(self.vars, 1), _normalized=True)
        return NotImplemented

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_const(self):
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        return self.num.const_value() / self.den.const_value()

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFun(MPoly(self.vars), MPoly.const(self.vars, 1), _normalized=True)
            return RatFun(self.num * other, self.den, _normalized=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return RatFun(MPoly(self.vars), MPoly.const(self.vars, 1), _normalized=True)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFun(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, MPoly)):
            other = self._coerce(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        # cross multiplication is the decisive test
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def evaluate(self, point: dict):
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num.evaluate(point) / d

    def __repr__(self):
        return f"RatFun({self})"

    def __str__(self):
        if self.den.is_const() and self.den.const_value() == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _reduce(num: MPoly, den: MPoly):
    if num.is_zero():
        return num, MPoly.const(num.vars, 1)
    if len(den.terms) == 1:
        # monomial denominator: cancel the shared monomial part only
        (ed, cd), = den.terms.items()
        m = list(ed)
        for e in num.terms:
            m = [min(a, b) for a, b in zip(m, e)]
        if any(m):
            num = num._new({tuple(a - b for a, b in zip(e, m)): c for e, c in num.terms.items()})
            ed = tuple(a - b for a, b in zip(ed, m))
        return num * (1 / cd), MPoly.monomial(num.vars, ed)
    g = poly_gcd(num, den)
    if not g.is_const():
        num = num.divexact(g)
        den = den.divexact(g)
    lc = den.lead()[1]
    return num * (1 / lc), den * (1 / lc)


def normalize_ratfun(f: RatFun) -> RatFun:
    return RatFun(f.num, f.den)


# ---------------------------------------------------------------- series

class LaurentSeries:
    """Laurent expansion in a small variable; coefficients are RatFun."""

    __slots__ = ("var", "small", "coeffs", "window")

    def __init__(self, var, coeffs, window):
        lo, hi = window
        if hi < lo:
            raise ExactAlgebraError("empty expansion window")
        self.var = var
        self.small = var
        self.window = (lo, hi)
        self.coeffs = {k: c for k, c in coeffs.items() if lo <= k <= hi and not c.is_zero()}

    def __getitem__(self, k):
        lo, hi = self.window
        if not lo <= k <= hi:
            raise ExactAlgebraError(f"exponent {k} outside the window {self.window}")
        return self.coeffs.get(k)

    def __mul__(self, other):
        if self.var != other.var:
            raise ExactAlgebraError("series in different variables")
        lo = self.window[0] + other.window[0]
        # exact only up to the smaller upper margin
        hi = min(self.window[1] + other.window[0], other.window[1] + self.window[0])
        out = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                if lo <= a + b <= hi:
                    out[a + b] = out[a + b] + ca * cb if a + b in out else ca * cb
        return LaurentSeries(self.var, out, (lo, hi))


def expand_ratfun(f: RatFun, small: str, window) -> LaurentSeries:
    """Expand f in nonnegative powers of the variable `small`.

    The remaining variables stay symbolic and appear in the coefficients.
    """
    lo, hi = window
    if hi < lo:
        raise ExactAlgebraError("empty expansion window")
    if small not in f.vars:
        raise ExactAlgebraError(f"small variable {small!r} is not in the context {f.vars}")
    k = f.vars.index(small)
    s = f.den.min_degree_in(k)
    d = f.den.shift_var(k, -s)
    dc = d.coeffs_in(k)
    nc = f.num.coeffs_in(k)
    d0 = RatFun(dc[0])
    q = []
    for n in range(0, hi + s + 1):
        acc = RatFun(nc[n]) if n in nc else RatFun(MPoly(f.vars))
        for i in range(1, n + 1):
            if i in dc and q[n - i]:
                acc = acc - RatFun(dc[i]) * q[n - i]
        q.append(acc / d0)
    coeffs = {n - s: c for n, c in enumerate(q) if lo <= n - s <= hi}
    return LaurentSeries(small, coeffs, (lo, hi))


class HSeries:
    """Truncated series c_0 + c_1 h + ... + c_{K-1} h^{K-1}."""

    __slots__ = ("coeffs", "K")

    def __init__(self, coeffs, K):
        coeffs = list(coeffs)[:K]
        if K < 1:
            raise ExactAlgebraError("truncation order must be positive")
        self.K = K
        zero = _zero_like(coeffs[0]) if coeffs else Fraction(0)
        self.coeffs = coeffs + [zero] * (K - len(coeffs))

    @classmethod
    def scalar(cls, c, K):
        return cls([c], K)

    def _coerce(self, other):
        if isinstance(other, HSeries):
            if other.K != self.K:
                K = min(self.K, other.K)
                return HSeries(other.coeffs, K)
            return other
        return HSeries([other], self.K)

    def __add__(self, other):
        other = self._coerce(other)
        K = min(self.K, other.K)
        return HSeries([a + b for a, b in zip(self.coeffs[:K], other.coeffs[:K])], K)

    __radd__ = __add__

    def __neg__(self):
        return HSeries([-c for c in self.coeffs], self.K)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, HSeries):
            return HSeries([c * other for c in self.coeffs], self.K)
        K = min(self.K, other.K)
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(K):
            acc = None
            for i in range(n + 1):
                if _is_zero(a[i]) or _is_zero(b[n - i]):
                    continue
                t = a[i] * b[n - i]
                acc = t if acc is None else acc + t
            out.append(acc if acc is not None else _zero_like(a[0]))
        return HSeries(out, K)

    def __rmul__(self, other):
        return HSeries([other * c for c in self.coeffs], self.K)

    def is_zero(self):
        return all(_is_zero(c) for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, HSeries):
            other = HSeries([other], self.K)
        K = min(self.K, other.K)
        return all(_is_zero(a - b) for a, b in zip(self.coeffs[:K], other.coeffs[:K]))

    def __hash__(self):
        return hash(self.K)

    def truncate(self, K):
        return HSeries(self.coeffs[:K], min(K, self.K))

    def __repr__(self):
        return "HSeries(" + ", ".join(str(c) for c in self.coeffs) + f"; K={self.K})"


def _is_zero(c):
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def _zero_like(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(0)
    return c * 0


def hseries_inverse(s: HSeries) -> HSeries:
    c0 = s.coeffs[0]
    if _is_zero(c0):
        raise NotAUnitError("not a unit in the h-adic ring: constant term is zero")
    if isinstance(c0, MPoly):
        if not c0.is_const():
            raise NotAUnitError("not a unit in the h-adic ring: constant term is not invertible")
        inv0 = MPoly.const(c0.vars, 1 / c0.const_value())
    elif isinstance(c0, (int, Fraction)):
        inv0 = 1 / Fraction(c0)
    else:
        inv0 = c0.inverse()
    b = [inv0]
    for n in range(1, s.K):
        acc = None
        for i in range(1, n + 1):
            if _is_zero(s.coeffs[i]):
                continue
            t = s.coeffs[i] * b[n - i]
            acc = t if acc is None else acc + t
        b.append(-(inv0 * acc) if acc is not None else _zero_like(inv0))
    return HSeries(b, s.K)


def binom_series(ell: int, a, k_max: int):
    """Coefficients C(-ell, k) a^k for k = 0..k_max: (1 + a t)^(-ell) = sum c_k t^k."""
    a = rat(a)
    if ell <= 0:
        return [Fraction(comb(-ell, k)) * a ** k for k in range(k_max + 1)]
    return [(-1) ** k * comb(ell + k - 1, k) * a ** k for k in range(k_max + 1)]
