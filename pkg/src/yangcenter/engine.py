"""Vacuum-module engine for the dual Yangian / double Yangian of type B, C, D.

Creation generators t^{(-r)}_ij (r >= 1) are keys (r, i, j) with 0-based
indices; words are tuples of keys, read left to right and applied to the
vacuum 1. Elements are dicts {(h power, word): Fraction}, truncated at
h^K and at weight (sum of r) D.

Relations:
  * commutators of creation modes come from the cleared form of
        R(u-v) T1+(u) T2+(v) = T2+(v) T1+(u) R(u-v),
    solved level by level (triangular in the u-power);
  * in "tt" mode (default) the unitarity constraint T+(u) T+(u+h kappa)' = 1
    eliminates the dependent generators, so ordered words in the remaining
    generators are a basis and normal forms are canonical;
  * annihilation modes t^{(r)} act through the mixed relation
        Rbar(x+a) T0(v) T1+(u) = T1+(u) T0(v) Rbar(x-a),  x = v-u, a = h sigma c / 2,
    rewritten as a rule for moving t0(v) past tau1(u).
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from math import comb

from .context import AlgebraContext
from .exact import rat_str
from .tensor import f_series, rbar_coefficients


class TruncationError(ValueError):
    pass


def weight(word) -> int:
    return sum(g[0] for g in word)


def _acc(out, key, val):
    v = out.get(key, 0) + val
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class ModuleElement:
    """Finite combination of words applied to the vacuum, with h-powers."""

    __slots__ = ("terms", "K", "D")

    def __init__(self, terms=None, K=None, D=None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}
        self.K = K
        self.D = D

    @classmethod
    def vacuum(cls, K=None, D=None):
        return cls({(0, ()): 1}, K, D)

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            _acc(t, k, v)
        return ModuleElement(t, self.K, self.D)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        return ModuleElement({k: v * s for k, v in self.terms.items()}, self.K, self.D)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def h_part(self, ell):
        return ModuleElement({(0, w): v for (hp, w), v in self.terms.items() if hp == ell}, self.K, self.D)

    def first_term(self):
        if not self.terms:
            return None
        k = min(self.terms)
        return k, self.terms[k]

    def to_json(self):
        return [{"h": hp, "word": word_json(w), "coef": rat_str(v)}
                for (hp, w), v in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{rat_str(v)}*h^{hp}*{word_str(w)}" for (hp, w), v in sorted(self.terms.items()))


def word_json(w):
    return [[-g[0], g[1] + 1, g[2] + 1] for g in w]


def word_str(w):
    return "".join(f"t{g[1] + 1}{g[2] + 1}(-{g[0]})" for g in w) or "1"


class VacuumEngine:
    """Normal forms and the module action for one context.

    mode "tt" (default) works in the quotient by the unitarity constraint and
    is canonical; mode "extended" keeps all N^2 generators per mode and only
    reorders words (no claim of canonicity, see README).
    """

    def __init__(self, ctx: AlgebraContext, K=None, D=None, mode="tt", trivial=False, vmax=None):
        if mode not in ("tt", "extended"):
            raise ValueError(f"unknown mode {mode!r}")
        self.ctx = ctx
        self.K = ctx.K if K is None else K
        self.D = ctx.D if D is None else D
        self.mode = mode
        self.trivial = trivial
        self.vmax = self.D + self.K + 1 if vmax is None else vmax
        self.N = ctx.N
        self.kappa = ctx.kappa
        self.eps = ctx.eps
        self._levels = {}
        self._nf = {}
        self._tt = {}
        self._act = {}
        self._rules = {}
        self._series = None

    # ---------------------------------------------------------- basics
    def independent(self, i, j) -> bool:
        if self.mode == "extended":
            return True
        partner = (self.N - 1 - j, self.N - 1 - i)
        if (i, j) == partner:
            return self.ctx.kind == "sp"
        return (i, j) < partner

    def generators(self, r):
        return [(r, i, j) for i in range(self.N) for j in range(self.N) if self.independent(i, j)]

    def basis_words(self, max_weight=None):
        """Ordered words in independent generators with weight <= max_weight."""
        D = self.D if max_weight is None else max_weight
        gens = [g for r in range(1, D + 1) for g in self.generators(r)]
        out = [()]

        def grow(prefix, start, wt):
            for k in range(start, len(gens)):
                g = gens[k]
                if wt + g[0] <= D:
                    w = prefix + (g,)
                    out.append(w)
                    grow(w, k, wt + g[0])

        grow((), 0, 0)
        return out

    def _keep(self, hp, word):
        return hp < self.K and weight(word) <= self.D

    # ---------------------------------------------------------- commutators
    def comm(self, g1, g2) -> dict:
        """[t^{(-r)}_ij, t^{(-s)}_kl] as a dict {(hp, word)} of free words."""
        if self.trivial:
            return {}
        (r, i, j), (s, k, l) = g1, g2
        L = r + s - 2
        lev = self._level(L)
        return lev[r - 1].get((i, k, j, l), {})

    def _level(self, L):
        """Commutator coefficients c[alpha, L - alpha], alpha = 0..L, as matrices."""
        if L in self._levels:
            return self._levels[L]
        K, N = self.K, self.N
        zero = [dict() for _ in range(L + 1)]
        if L + 2 > self.D:
            self._levels[L] = zero
            return zero
        upper = self._level(L + 1)
        hk = self.kappa
        x = []
        for a in range(L + 1):
            b = L + 2 - a
            E = self._rhs(a, b)
            # + h kappa (c[a-1, b] - c[a, b-1]) from the next level
            if a - 1 >= 0:
                _mat_axpy(E, upper[a - 1], hk, 1, K)
            _mat_axpy(E, upper[a], -hk, 1, K)
            if a >= 1:
                _mat_axpy(E, x[a - 1], 2, 0, K)
            if a >= 2:
                _mat_axpy(E, x[a - 2], -1, 0, K)
            x.append(E)
        self._levels[L] = x
        return x

    def level_residual(self, L):
        """Leftover equations a = L+1, L+2 of the triangular system (should vanish)."""
        K = self.K
        x = self._level(L)
        upper = self._level(L + 1)
        out = []
        for a in (L + 1, L + 2):
            b = L + 2 - a
            E = self._rhs(a, b)
            _mat_axpy(E, upper[a - 1], self.kappa, 1, K)
            if a <= L + 1:
                _mat_axpy(E, upper[a], -self.kappa, 1, K)
            # lhs: c[a-2,b] - 2 c[a-1,b-1] + c[a, b-2]
            lhs = {}
            if 0 <= a - 2 <= L:
                _mat_axpy(lhs, x[a - 2], 1, 0, K)
            if 0 <= a - 1 <= L and b >= 1:
                _mat_axpy(lhs, x[a - 1], -2, 0, K)
            _mat_axpy(E, lhs, -1, 0, K)
            out.append(E)
        return out

    def _tmat(self, leg, r):
        """Matrix of t^{(-r)} on leg 1 or 2 of the two-leg space."""
        N = self.N
        M = {}
        for i, k, j, l in product(range(N), repeat=4):
            if leg == 1 and k == l:
                M[(i, k, j, l)] = {(0, ((r, i, j),)): Fraction(1)}
            elif leg == 2 and i == j:
                M[(i, k, j, l)] = {(0, ((r, k, l),)): Fraction(1)}
        return M

    def _nmat(self, a, b):
        """u^a v^b coefficient of tau1(u) + tau2(v)."""
        M = {}
        if b == 0:
            _mat_axpy(M, self._tmat(1, a + 1), 1, 0, self.K)
        if a == 0:
            _mat_axpy(M, self._tmat(2, b + 1), 1, 0, self.K)
        return M

    def _rhs(self, a, b):
        """u^a v^b coefficient of (x - hk) N_P - x N_Q + h (x - hk) M_P - h x M_Q."""
        K, hk = self.K, self.kappa
        E = {}

        def NP(a, b):
            if a < 0 or b < 0:
                return {}
            X = self._nmat(a, b)
            out = _mul_right(X, "P", self)
            _mat_axpy(out, _mul_left(X, "P", self), -1, 0, K)
            return out

        def NQ(a, b):
            if a < 0 or b < 0:
                return {}
            X = self._nmat(a, b)
            out = _mul_right(X, "Q", self)
            _mat_axpy(out, _mul_left(X, "Q", self), -1, 0, K)
            return out

        def MX(a, b, which):
            if a < 0 or b < 0:
                return {}
            t12, t21 = self._prod_mats(a + 1, b + 1)
            out = _mul_left(t12, which, self)
            _mat_axpy(out, _mul_right(t21, which, self), -1, 0, K)
            return out

        _mat_axpy(E, NP(a - 1, b), 1, 0, K)
        _mat_axpy(E, NP(a, b - 1), -1, 0, K)
        _mat_axpy(E, NP(a, b), -hk, 1, K)
        _mat_axpy(E, NQ(a - 1, b), -1, 0, K)
        _mat_axpy(E, NQ(a, b - 1), 1, 0, K)
        _mat_axpy(E, MX(a - 1, b, "P"), 1, 1, K)
        _mat_axpy(E, MX(a, b - 1, "P"), -1, 1, K)
        _mat_axpy(E, MX(a, b, "P"), -hk, 2, K)
        _mat_axpy(E, MX(a - 1, b, "Q"), -1, 1, K)
        _mat_axpy(E, MX(a, b - 1, "Q"), 1, 1, K)
        # drop words beyond the degree bound
        for key in list(E):
            e = {k: v for k, v in E[key].items() if weight(k[1]) <= self.D}
            if e:
                E[key] = e
            else:
                del E[key]
        return E

    def _prod_mats(self, r, s):
        N = self.N
        t12, t21 = {}, {}
        for i, k, j, l in product(range(N), repeat=4):
            g1, g2 = (r, i, j), (s, k, l)
            t12[(i, k, j, l)] = {(0, (g1, g2)): Fraction(1)}
            t21[(i, k, j, l)] = {(0, (g2, g1)): Fraction(1)}
        return t12, t21

    # ---------------------------------------------------------- unitarity elimination
    def tt_expand(self, g) -> dict:
        """Express a dependent generator through the unitarity constraint."""
        if g in self._tt:
            return self._tt[g]
        r, i, j = g
        N, K, D, hk = self.N, self.K, self.D, self.kappa
        ip, jp = N - 1 - i, N - 1 - j
        e = self.eps
        out = {}
        self_pair = (jp, ip) == (i, j)
        # -eps_i eps_j sum_{s >= r} C(s-1, r-1) (h kappa)^{s-r} t^{(-s)}_{j'i'}
        for s in range(r, D + 1):
            hp = s - r
            if hp >= K:
                break
            if self_pair and s == r:
                continue
            c = -e[i] * e[j] * comb(s - 1, r - 1) * hk ** hp
            _acc(out, (hp, ((s, jp, ip),)), c)
        # + h sum_k eps_k eps_j sum_{p, s} C(s-1, r-p) (h kappa)^{s-1-(r-p)} t^{(-p)}_ik t^{(-s)}_{j'k'}
        for k in range(N):
            kp = N - 1 - k
            for p in range(1, r + 1):
                for s in range(r - p + 1, D + 1):
                    hp = 1 + s - 1 - (r - p)
                    if hp >= K or p + s > D:
                        continue
                    c = e[k] * e[j] * comb(s - 1, r - p) * hk ** (s - 1 - (r - p))
                    _acc(out, (hp, ((p, i, k), (s, jp, kp))), c)
        if self_pair:
            out = {key: v / 2 for key, v in out.items()}
        self._tt[g] = out
        return out

    # ---------------------------------------------------------- normal form
    def nf_word(self, word) -> dict:
        word = tuple(word)
        if weight(word) > self.D:
            return {}
        if word in self._nf:
            return self._nf[word]
        out = {}
        idx = next((k for k, g in enumerate(word) if not self.independent(g[1], g[2])), None)
        if idx is not None:
            for (hp, w), c in self.tt_expand(word[idx]).items():
                for (hp2, w2), c2 in self.nf_word(word[:idx] + w + word[idx + 1:]).items():
                    if hp + hp2 < self.K:
                        _acc(out, (hp + hp2, w2), c * c2)
        else:
            k = next((k for k in range(len(word) - 1) if word[k] > word[k + 1]), None)
            if k is None:
                out = {(0, word): Fraction(1)}
            else:
                self._swap_into(out, word, k, self.nf_word)
        self._nf[word] = out
        return out

    def _swap_into(self, out, word, k, rec):
        x, y = word[k], word[k + 1]
        for key, c in rec(word[:k] + (y, x) + word[k + 2:]).items():
            _acc(out, key, c)
        for (hp, w), c in self.comm(x, y).items():
            for (hp2, w2), c2 in rec(word[:k] + w + word[k + 2:]).items():
                if hp + hp2 < self.K:
                    _acc(out, (hp + hp2, w2), c * c2)

    def nf_word_random(self, word, rng: random.Random) -> dict:
        """Same rewriting with a random choice of the step; for confluence tests."""
        word = tuple(word)
        if weight(word) > self.D:
            return {}
        out = {}
        deps = [k for k, g in enumerate(word) if not self.independent(g[1], g[2])]
        descents = [k for k in range(len(word) - 1) if word[k] > word[k + 1]]
        moves = [("tt", k) for k in deps] + [("swap", k) for k in descents]
        if not moves:
            return {(0, word): Fraction(1)}
        kind, k = rng.choice(moves)
        if kind == "tt":
            for (hp, w), c in self.tt_expand(word[k]).items():
                for (hp2, w2), c2 in self.nf_word_random(word[:k] + w + word[k + 1:], rng).items():
                    if hp + hp2 < self.K:
                        _acc(out, (hp + hp2, w2), c * c2)
        else:
            self._swap_into(out, word, k, lambda w: self.nf_word_random(w, rng))
        return out

    def normal_form(self, x) -> ModuleElement:
        """Normal form of a ModuleElement, a dict {(hp, word)} or a single word."""
        if isinstance(x, tuple):
            terms = {(0, x): Fraction(1)}
        else:
            terms = getattr(x, "terms", x)
        out = {}
        for (hp, w), c in terms.items():
            if hp >= self.K:
                continue
            for (hp2, w2), c2 in self.nf_word(w).items():
                if hp + hp2 < self.K:
                    _acc(out, (hp + hp2, w2), c * c2)
        return ModuleElement(out, self.K, self.D)

    def element(self, word, coef=1, hp=0) -> ModuleElement:
        return self.normal_form({(hp, tuple(word)): Fraction(coef)})

    def product(self, x: ModuleElement, y: ModuleElement) -> ModuleElement:
        """Algebra product of two dual-Yangian elements (words concatenated)."""
        out = {}
        for (h1, w1), c1 in x.terms.items():
            for (h2, w2), c2 in y.terms.items():
                if h1 + h2 < self.K:
                    _acc(out, (h1 + h2, w1 + w2), c1 * c2)
        return self.normal_form(out)

    # ---------------------------------------------------------- mixed relation
    def _scalar_series(self):
        """Series in (h, v^{-1}, u) of the span{1, P, Q} coefficients of
        A = Rbar(x + a)^{-1} = Rbar(-x - a) and B = Rbar(x - a)."""
        if self._series is not None:
            return self._series
        ctx = self.ctx
        Kp = self.K + 2
        vmax = self.vmax
        umax = max(self.D - 1, 0)
        al, be, ga = rbar_coefficients(ctx, Kp, 0, f_series(ctx, max(ctx.M, Kp)))
        a_half = Fraction(ctx.sigma) * ctx.level / 2  # a = h * a_half

        def wpow(sign_h, sign_a):
            # (sign_h h)^l (v - (u + sign_a a))^{-l} as {(hp, vn, up)} for all l < Kp
            res = []
            for ell in range(Kp):
                ser = {}
                if ell == 0:
                    ser[(0, 0, 0)] = Fraction(1)
                    res.append(ser)
                    continue
                for k in range(0, vmax - ell + 1):
                    ck = comb(ell + k - 1, k)
                    for jj in range(0, min(k, umax) + 1):
                        hp = ell + (k - jj)
                        if hp >= Kp:
                            continue
                        c = ck * comb(k, jj) * (sign_a * a_half) ** (k - jj) * sign_h ** ell
                        _acc(ser, (hp, ell + k, jj), Fraction(c))
                res.append(ser)
            return res

        wa = wpow(-1, -1)
        wb = wpow(1, 1)
        if self.trivial:
            one = {(0, 0, 0): Fraction(1)}
            sa = {"1": one, "P": {}, "Q": {}}
            sb = {"1": one, "P": {}, "Q": {}}
        else:
            sa = {X: _combine(coef, wa) for X, coef in (("1", al), ("P", be), ("Q", ga))}
            sb = {X: _combine(coef, wb) for X, coef in (("1", al), ("P", be), ("Q", ga))}
        prods = {}
        for X in "1PQ":
            for Y in "1PQ":
                prods[(X, Y)] = _smul(sa[X], sb[Y], Kp, vmax, umax)
        self._series = prods
        return prods

    def _pair_rule(self, i0, j0, p, q):
        key = (i0, j0, p, q)
        if key in self._rules:
            return self._rules[key]
        N, e = self.N, self.eps
        prods = self._scalar_series()
        Aent = {"1": [((i0, p), 1)], "P": [((p, i0), 1)],
                "Q": [((c, N - 1 - c), e[i0] * e[c]) for c in range(N)] if p == N - 1 - i0 else []}
        Bent = {"1": [((j0, q), 1)], "P": [((q, j0), 1)],
                "Q": [((d, N - 1 - d), e[d] * e[j0]) for d in range(N)] if q == N - 1 - j0 else []}
        T1, T2, T3, T4 = {}, {}, {}, {}
        for X in "1PQ":
            for Y in "1PQ":
                ser = prods[(X, Y)]
                if not ser:
                    continue
                for (c, r), wa in Aent[X]:
                    for (d, s), wb in Bent[Y]:
                        w = wa * wb
                        _sadd(T1.setdefault((r, s, c, d), {}), ser, w)
                        if c == d:
                            _sadd(T2.setdefault((r, s), {}), ser, w)
                        if r == s:
                            _sadd(T3.setdefault((c, d), {}), ser, w)
                        if c == d and r == s:
                            _sadd(T4, ser, w)
        if i0 == j0:
            _acc(T2.setdefault((p, q), {}), (0, 0, 0), -1)
        if p == q:
            _acc(T3.setdefault((i0, j0), {}), (0, 0, 0), -1)
        if i0 == j0 and p == q:
            _acc(T4, (0, 0, 0), -1)
        rule = (
            {k: v for k, v in T1.items() if v},
            {k: _hdiv(v, 1, 1) for k, v in T2.items() if v},
            {k: _hdiv(v, 1, -1) for k, v in T3.items() if v},
            _hdiv(T4, 2, -1),
        )
        self._rules[key] = rule
        return rule

    def act_series(self, i0, j0, word) -> dict:
        """t_{i0 j0}(v) applied to word.1 as {(hp, vn, word)}: coefficient of v^{-vn}."""
        word = tuple(word)
        key = (i0, j0, word)
        if key in self._act:
            return self._act[key]
        if not word:
            return {}
        K, vmax = self.K, self.vmax
        (r1, p, q), rest = word[0], word[1:]
        T1, T2, T3, T4 = self._pair_rule(i0, j0, p, q)
        raw = {}
        for (r, s, c, d), ser in T1.items():
            sub = self.act_series(c, d, rest)
            if not sub:
                continue
            for (hp, vn, up), cv in ser.items():
                if up > r1 - 1:
                    continue
                mode = (r1 - up, r, s)
                for (hp2, vn2, w), cv2 in sub.items():
                    if hp + hp2 < K and vn + vn2 <= vmax:
                        _acc(raw, (hp + hp2, vn + vn2, (mode,) + w), cv * cv2)
        for (r, s), ser in T2.items():
            for (hp, vn, up), cv in ser.items():
                if up <= r1 - 1 and hp < K:
                    _acc(raw, (hp, vn, ((r1 - up, r, s),) + rest), cv)
        for (c, d), ser in T3.items():
            sub = None
            for (hp, vn, up), cv in ser.items():
                if up != r1 - 1 or hp >= K:
                    continue
                if sub is None:
                    sub = self.act_series(c, d, rest)
                for (hp2, vn2, w), cv2 in sub.items():
                    if hp + hp2 < K and vn + vn2 <= vmax:
                        _acc(raw, (hp + hp2, vn + vn2, w), cv * cv2)
        for (hp, vn, up), cv in T4.items():
            if up == r1 - 1 and hp < K:
                _acc(raw, (hp, vn, rest), cv)
        out = {}
        for (hp, vn, w), c in raw.items():
            for (hp2, w2), c2 in self.nf_word(w).items():
                if hp + hp2 < K:
                    _acc(out, (hp + hp2, vn, w2), c * c2)
        self._act[key] = out
        return out

    def act_mode(self, r, i, j, x) -> ModuleElement:
        """t^{(r)}_ij x for r >= 1 (coefficient of v^{-r} in t_ij(v) x)."""
        if r < 1:
            raise ValueError("annihilation modes have r >= 1")
        if r > self.vmax:
            raise TruncationError(f"mode r={r} beyond the v-window {self.vmax}")
        terms = getattr(x, "terms", x)
        out = {}
        for (hp, w), c in terms.items():
            for (hp2, vn, w2), c2 in self.act_series(i, j, w).items():
                if vn == r and hp + hp2 < self.K:
                    _acc(out, (hp + hp2, w2), c * c2)
        return ModuleElement(out, self.K, self.D)

    def act_t_series(self, i, j, x) -> dict:
        """t_ij(v) x as {vn: ModuleElement}."""
        terms = getattr(x, "terms", x)
        out = {}
        for (hp, w), c in terms.items():
            for (hp2, vn, w2), c2 in self.act_series(i, j, w).items():
                if hp + hp2 < self.K:
                    _acc(out.setdefault(vn, {}), (hp + hp2, w2), c * c2)
        return {vn: ModuleElement(t, self.K, self.D) for vn, t in sorted(out.items()) if t}

    def act_T(self, i, j, x) -> dict:
        """T_ij(v) x = delta_ij x + h t_ij(v) x, as {vn: ModuleElement}."""
        terms = getattr(x, "terms", x)
        out = {}
        if i == j:
            out[0] = dict(terms)
        for vn, el in self.act_t_series(i, j, x).items():
            d = out.setdefault(vn, {})
            for (hp, w), c in el.terms.items():
                if hp + 1 < self.K:
                    _acc(d, (hp + 1, w), c)
        return {vn: ModuleElement(t, self.K, self.D) for vn, t in sorted(out.items()) if t}

    # ---------------------------------------------------------- translation
    def apply_D(self, x) -> ModuleElement:
        """D g_1 ... g_k 1 = sum_k r_k g_1 ... (r_k + 1) ... g_k 1."""
        terms = getattr(x, "terms", x)
        out = {}
        for (hp, w), c in terms.items():
            if weight(w) + 1 > self.D:
                raise TruncationError(f"D raises weight beyond {self.D} on {word_str(w)}")
            for k, (r, i, j) in enumerate(w):
                _acc(out, (hp, w[:k] + ((r + 1, i, j),) + w[k + 1:]), c * r)
        return self.normal_form(out)


# ---------------------------------------------------------------- helpers

def _elem_axpy(dst, src, coef, hshift, K):
    for (hp, w), c in src.items():
        if hp + hshift < K:
            _acc(dst, (hp + hshift, w), c * coef)


def _mat_axpy(dst, src, coef, hshift, K):
    if not coef:
        return
    for key, el in src.items():
        d = dst.setdefault(key, {})
        _elem_axpy(d, el, coef, hshift, K)
        if not d:
            del dst[key]


def _mul_right(X, which, eng):
    """X P or X Q for a two-leg matrix of elements."""
    N, e = eng.N, eng.eps
    out = {}
    if which == "P":
        for (i, k, j, l), el in X.items():
            out[(i, k, l, j)] = dict(el)
        return out
    # (X Q)_{(i,k),(j,l)} = delta_{l j'} sum_m eps_m eps_j X_{(i,k),(m,m')}
    for (i, k, m, mp), el in X.items():
        if mp != N - 1 - m:
            continue
        for j in range(N):
            d = out.setdefault((i, k, j, N - 1 - j), {})
            _elem_axpy(d, el, e[m] * e[j], 0, eng.K)
    return {k: v for k, v in out.items() if v}


def _mul_left(X, which, eng):
    N, e = eng.N, eng.eps
    out = {}
    if which == "P":
        for (k, i, j, l), el in X.items():
            out[(i, k, j, l)] = dict(el)
        return out
    # (Q X)_{(i,k),(j,l)} = delta_{k i'} sum_m eps_i eps_m X_{(m,m'),(j,l)}
    for (m, mp, j, l), el in X.items():
        if mp != N - 1 - m:
            continue
        for i in range(N):
            d = out.setdefault((i, N - 1 - i, j, l), {})
            _elem_axpy(d, el, e[i] * e[m], 0, eng.K)
    return {k: v for k, v in out.items() if v}


def _combine(coefs, wp):
    out = {}
    for ell, c in enumerate(coefs):
        if c and ell < len(wp):
            for k, v in wp[ell].items():
                _acc(out, k, c * v)
    return out


def _smul(a, b, Kp, vmax, umax):
    out = {}
    for (h1, v1, u1), c1 in a.items():
        for (h2, v2, u2), c2 in b.items():
            if h1 + h2 < Kp and v1 + v2 <= vmax and u1 + u2 <= umax:
                _acc(out, (h1 + h2, v1 + v2, u1 + u2), c1 * c2)
    return out


def _sadd(dst, src, w):
    for k, v in src.items():
        _acc(dst, k, v * w)


def _hdiv(ser, n, sign):
    out = {}
    for (hp, vn, up), c in ser.items():
        if hp < n:
            raise ArithmeticError("h-division of the mixed-relation series is not exact")
        out[(hp - n, vn, up)] = c * sign
    return out


# ---------------------------------------------------------------- checks

def check_classical_oracle(ctx: AlgebraContext, max_modes=3, max_weight=4) -> dict:
    """h^0 normal forms of all words of <= max_modes generators (all N^2 index
    pairs) and weight <= max_weight against classical PBW straightening."""
    from itertools import product as iproduct

    from .classical import ClassicalAlgebra

    eng = VacuumEngine(ctx, K=1, D=max_weight)
    alg = ClassicalAlgebra(ctx)
    gens = [(r, i, j) for r in range(1, max_weight + 1) for i in range(ctx.N) for j in range(ctx.N)]
    checked = 0
    for n in range(1, max_modes + 1):
        for w in iproduct(gens, repeat=n):
            if weight(w) > max_weight:
                continue
            checked += 1
            got = {(mono, 0): v for (hp, mono), v in eng.normal_form(w).terms.items() if hp == 0}
            want = alg.pbw(w).terms
            if got != want:
                return {"name": "classical-oracle", "algebra": ctx.label, "checked": checked,
                        "status": "fail", "witness": {"word": word_json(w), "engine": str(got),
                                                      "classical": str(want)}}
    return {"name": "classical-oracle", "algebra": ctx.label, "checked": checked,
            "max_modes": max_modes, "max_weight": max_weight, "status": "pass", "witness": None}


def check_confluence(ctx: AlgebraContext, samples=200, seed=0, K=None, D=None) -> dict:
    """Random rewriting orders reach the same normal form."""
    eng = VacuumEngine(ctx, K=K, D=D)
    rng = random.Random(seed)
    gens = [(r, i, j) for r in range(1, eng.D + 1) for i in range(ctx.N) for j in range(ctx.N)]
    checked = 0
    for _ in range(samples):
        n = rng.randint(2, 4)
        w = ()
        for k in range(n):
            budget = eng.D - weight(w) - (n - k - 1)
            pool = [g for g in gens if g[0] <= budget]
            if not pool:
                break
            w += (rng.choice(pool),)
        if len(w) < 2:
            continue
        checked += 1
        a = eng.nf_word(w)
        b = {k: v for k, v in eng.nf_word_random(w, rng).items() if v}
        if a != b:
            return {"name": "confluence", "algebra": ctx.label, "checked": checked, "seed": seed,
                    "status": "fail", "witness": {"word": word_json(w)}}
    return {"name": "confluence", "algebra": ctx.label, "checked": checked, "seed": seed,
            "K": eng.K, "D": eng.D, "status": "pass", "witness": None}


def check_relation_residuals(ctx: AlgebraContext, K=None, D=None, mode="tt") -> dict:
    """The two leftover equations of each level reduce to zero in normal form."""
    eng = VacuumEngine(ctx, K=K, D=D, mode=mode)
    witness = None
    levels = list(range(max(eng.D - 1, 0)))
    for L in levels:
        for a, res in zip((L + 1, L + 2), eng.level_residual(L)):
            for key, el in sorted(res.items()):
                nf = eng.normal_form(el)
                if not nf.is_zero():
                    (hp, w), c = nf.first_term()
                    witness = {"level": L, "equation": a, "entry": [x + 1 for x in key],
                               "h": hp, "word": word_json(w), "coef": rat_str(c)}
                    break
            if witness:
                break
        if witness:
            break
    return {"name": "relation-residuals", "algebra": ctx.label, "mode": mode, "K": eng.K,
            "D": eng.D, "levels": levels, "status": "pass" if witness is None else "fail",
            "witness": witness}
