"""Classical side: the Lie algebra g_N spanned by f_ij with F + F' = 0,
its loop modes f_ij(r), PBW straightening in U(t^-1 g[t^-1]), the tau-extended
algebra, trace polynomials, and the vacuum module at level c.

Creation modes f_ij(-r), r >= 1, are written as keys (r, i, j) and sorted by
that tuple. Indices are 0-based.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb

from .context import AlgebraContext
from .exact import rat_str
from .tensor import pq_entries


class LieBasis:
    """Independent generators and structure constants of g_N.

    f_ij is kept when (i, j) <= (j', i') lexicographically; the partner is
    eliminated through f_ij = -eps_i eps_j f_{j'i'}. In the orthogonal case
    f_{i i'} = 0.
    """

    def __init__(self, ctx: AlgebraContext):
        self.ctx = ctx
        N = ctx.N
        self.pairs = [(i, j) for i in range(N) for j in range(N) if self.independent(i, j)]
        self._red = {(i, j): self._reduce(i, j) for i in range(N) for j in range(N)}
        self._bracket = {}
        P, Q = pq_entries(ctx)
        self._P, self._Q = P, Q
        for a in product(range(N), repeat=2):
            for b in product(range(N), repeat=2):
                self._bracket[(a, b)] = self._derive(a, b)

    def independent(self, i, j) -> bool:
        ctx = self.ctx
        partner = (ctx.prime(j), ctx.prime(i))
        if (i, j) == partner:
            return ctx.kind == "sp"
        return (i, j) < partner

    def _reduce(self, i, j):
        ctx = self.ctx
        if self.independent(i, j):
            return ((1, (i, j)),)
        partner = (ctx.prime(j), ctx.prime(i))
        if partner == (i, j):
            return ()
        return ((-ctx.eps[i] * ctx.eps[j], partner),)

    def reduce(self, i, j):
        """f_ij as a combination of independent generators."""
        return self._red[(i, j)]

    def _derive(self, a, b):
        """Read [f_ij, f_kl] off the matrix identity
        F1 F2 - F2 F1 = (P - Q) F2 - F2 (P - Q) at entry ((i,k), (j,l))."""
        (i, j), (k, l) = a, b
        N = self.ctx.N
        out = {}

        def add(coef, p, q):
            for c, g in self.reduce(p, q):
                out[g] = out.get(g, 0) + coef * c

        # ((P - Q) F2)_{(i,k),(j,l)} = sum_{x} (P - Q)_{(i,k),(j,x)} f_{x l}
        for x in range(N):
            if self._P.get(((i, k), (j, x))):
                add(self._P[((i, k), (j, x))], x, l)
            if self._Q.get(((i, k), (j, x))):
                add(-self._Q[((i, k), (j, x))], x, l)
        # (F2 (P - Q))_{(i,k),(j,l)} = sum_x f_{k x} (P - Q)_{(i,x),(j,l)}
        for x in range(N):
            if self._P.get(((i, x), (j, l))):
                add(-self._P[((i, x), (j, l))], k, x)
            if self._Q.get(((i, x), (j, l))):
                add(self._Q[((i, x), (j, l))], k, x)
        return {g: c for g, c in out.items() if c}

    def bracket(self, a, b):
        """[f_a, f_b] for arbitrary index pairs a, b, in independent generators."""
        return self._bracket[(a, b)]

    def central(self, a, b) -> int:
        """(P - Q) entry ((i,k),(j,l)) for a = (i,j), b = (k,l)."""
        (i, j), (k, l) = a, b
        return self._P.get(((i, k), (j, l)), 0) - self._Q.get(((i, k), (j, l)), 0)


@lru_cache(maxsize=None)
def lie_basis(ctx: AlgebraContext) -> LieBasis:
    return LieBasis(ctx)


def lie_bracket(ctx: AlgebraContext, x, y, level=None):
    """[f_ij(r), f_kl(s)] for x = (i, j, r), y = (k, l, s).

    Returns (modes, central) where modes maps (i', j', r+s) to coefficients and
    central is the scalar sigma r delta_{r+s,0} c (P - Q)_{(i,k),(j,l)}, reduced
    to the independent pair of x and y.
    """
    B = lie_basis(ctx)
    c = ctx.level if level is None else level
    (i, j, r), (k, l, s) = x, y
    modes = {}
    cen = Fraction(0)
    for cx, a in B.reduce(i, j):
        for cy, b in B.reduce(k, l):
            for g, v in B.bracket(a, b).items():
                key = (g[0], g[1], r + s)
                modes[key] = modes.get(key, 0) + cx * cy * v
            if r + s == 0 and r:
                cen += cx * cy * ctx.sigma * r * c * B.central(a, b)
    return {k: v for k, v in modes.items() if v}, cen


class ClassicalElement:
    """Finite sum of coef * monomial * tau^p with PBW-ordered monomials.

    Terms are keyed by (monomial, tau power); a monomial is a sorted tuple of
    creation keys (r, i, j).
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def one(cls):
        return cls({((), 0): 1})

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return ClassicalElement(t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        return ClassicalElement({k: v * s for k, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, ClassicalElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def tau_part(self, p):
        return ClassicalElement({(m, 0): v for (m, q), v in self.terms.items() if q == p})

    def degree(self):
        return max((sum(g[0] for g in m) for m, _ in self.terms), default=0)

    def to_json(self):
        return [{"word": [[-g[0], g[1] + 1, g[2] + 1] for g in m], "tau": p, "coef": rat_str(v)}
                for (m, p), v in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (m, p), v in sorted(self.terms.items()):
            w = "".join(f"f{g[1] + 1}{g[2] + 1}(-{g[0]})" for g in m)
            parts.append(f"{rat_str(v)}*{w or '1'}" + (f"*tau^{p}" if p else ""))
        return " + ".join(parts)


class ClassicalAlgebra:
    """PBW straightening and vacuum-module action for one context."""

    def __init__(self, ctx: AlgebraContext, level=None):
        self.ctx = ctx
        self.basis = lie_basis(ctx)
        self.level = ctx.level if level is None else Fraction(level)
        self._nf = {}
        self._act = {}

    # -- PBW straightening of creation words
    def letter(self, r, i, j):
        """f_ij(-r) as a list of (coef, independent key)."""
        return [(c, (r, a, b)) for c, (a, b) in self.basis.reduce(i, j)]

    def normal_form(self, word, strategy="left", rng=None) -> dict:
        """Monomial-only normal form of a word of creation keys; returns {mono: coef}."""
        word = tuple(word)
        if strategy == "left":
            return self._nf_left(word)
        rng = rng or random.Random(0)
        return self._nf_random(word, rng)

    def _expand_letters(self, word):
        for idx, (r, i, j) in enumerate(word):
            if not self.basis.independent(i, j):
                return idx, self.letter(r, i, j)
        return None, None

    def _nf_left(self, word):
        if word in self._nf:
            return self._nf[word]
        out = {}
        idx, rep = self._expand_letters(word)
        if idx is not None:
            for c, g in rep:
                for m, v in self._nf_left(word[:idx] + (g,) + word[idx + 1:]).items():
                    out[m] = out.get(m, 0) + c * v
        else:
            k = next((k for k in range(len(word) - 1) if word[k] > word[k + 1]), None)
            if k is None:
                out = {word: Fraction(1)}
            else:
                self._swap(word, k, out, self._nf_left)
        out = {m: v for m, v in out.items() if v}
        self._nf[word] = out
        return out

    def _nf_random(self, word, rng):
        idx, rep = self._expand_letters(word)
        out = {}
        if idx is not None:
            for c, g in rep:
                for m, v in self._nf_random(word[:idx] + (g,) + word[idx + 1:], rng).items():
                    out[m] = out.get(m, 0) + c * v
            return {m: v for m, v in out.items() if v}
        ks = [k for k in range(len(word) - 1) if word[k] > word[k + 1]]
        if not ks:
            return {word: Fraction(1)}
        self._swap(word, rng.choice(ks), out, lambda w: self._nf_random(w, rng))
        return {m: v for m, v in out.items() if v}

    def _swap(self, word, k, out, rec):
        x, y = word[k], word[k + 1]
        for m, v in rec(word[:k] + (y, x) + word[k + 2:]).items():
            out[m] = out.get(m, 0) + v
        modes, _ = lie_bracket(self.ctx, (x[1], x[2], -x[0]), (y[1], y[2], -y[0]), self.level)
        for (a, b, s), c in modes.items():
            for m, v in rec(word[:k] + ((-s, a, b),) + word[k + 2:]).items():
                out[m] = out.get(m, 0) + c * v

    def pbw(self, word, strategy="left", rng=None) -> ClassicalElement:
        return ClassicalElement({(m, 0): v for m, v in self.normal_form(word, strategy, rng).items()})

    def normalize(self, x: ClassicalElement) -> ClassicalElement:
        out = {}
        for (m, p), v in x.terms.items():
            for m2, v2 in self.normal_form(m).items():
                out[(m2, p)] = out.get((m2, p), 0) + v * v2
        return ClassicalElement(out)

    # -- products with tau moved to the right
    def ad_tau(self, mono):
        """[tau, x] on a monomial: a derivation with f(-r) -> r f(-r-1)."""
        out = {}
        for k, (r, i, j) in enumerate(mono):
            m = mono[:k] + ((r + 1, i, j),) + mono[k + 1:]
            out[m] = out.get(m, 0) + r
        return out

    def mul(self, x: ClassicalElement, y: ClassicalElement) -> ClassicalElement:
        out = {}
        for (m1, a), v1 in x.terms.items():
            for (m2, b), v2 in y.terms.items():
                cur = {m2: Fraction(1)}
                for j in range(a + 1):
                    cj = comb(a, j)
                    for m, v in cur.items():
                        for m3, v3 in self.normal_form(m1 + m).items():
                            key = (m3, a - j + b)
                            out[key] = out.get(key, 0) + v1 * v2 * cj * v * v3
                    nxt = {}
                    for m, v in cur.items():
                        for m4, v4 in self.ad_tau(m).items():
                            nxt[m4] = nxt.get(m4, 0) + v * v4
                    cur = nxt
        return ClassicalElement(out)

    def translation(self, x: ClassicalElement) -> ClassicalElement:
        """D with D 1 = 0 and [D, f(-r)] = r f(-r-1), on tau-free elements."""
        out = {}
        for (m, p), v in x.terms.items():
            for m2, v2 in self.ad_tau(m).items():
                for m3, v3 in self.normal_form(m2).items():
                    out[(m3, p)] = out.get((m3, p), 0) + v * v2 * v3
        return ClassicalElement(out)

    # -- vacuum module V_c
    def act(self, i, j, r, x: ClassicalElement) -> ClassicalElement:
        """f_ij(r) acting on a tau-free vector of the vacuum module."""
        out = {}
        for (m, p), v in x.terms.items():
            for m2, v2 in self._act_mono(i, j, r, m).items():
                out[(m2, p)] = out.get((m2, p), 0) + v * v2
        return ClassicalElement(out)

    def _act_mono(self, i, j, r, mono):
        key = (i, j, r, mono)
        if key in self._act:
            return self._act[key]
        out = {}
        if r < 0:
            for c, g in self.letter(-r, i, j):
                for m, v in self.normal_form((g,) + mono).items():
                    out[m] = out.get(m, 0) + c * v
        elif mono:
            x, rest = mono[0], mono[1:]
            # [f(r), x] rest 1
            modes, cen = lie_bracket(self.ctx, (i, j, r), (x[1], x[2], -x[0]), self.level)
            if cen:
                for m, v in self.normal_form(rest).items():
                    out[m] = out.get(m, 0) + cen * v
            for (a, b, s), c in modes.items():
                for m, v in self._act_mono(a, b, s, rest).items():
                    out[m] = out.get(m, 0) + c * v
            # x f(r) rest 1
            for m1, v1 in self._act_mono(i, j, r, rest).items():
                for m, v in self.normal_form((x,) + m1).items():
                    out[m] = out.get(m, 0) + v1 * v
        out = {m: v for m, v in out.items() if v}
        self._act[key] = out
        return out


def segal_sugawara(ctx: AlgebraContext, m: int, S=None) -> list:
    """phi_{m,0..m}: tr S (tau + F(-1)_1) ... (tau + F(-1)_m) = sum_k phi_{m,k} tau^{m-k}."""
    from .brauer import symmetrizer
    S = symmetrizer(ctx, m).S if S is None else S
    alg = ClassicalAlgebra(ctx)
    total = ClassicalElement()
    for (I, J), s in sorted(S.entries.items()):
        # trace pairs S_{J I} with the product entry (I, J)
        factors = []
        for a, b in zip(J, I):
            f = ClassicalElement({(((1, a, b),), 0): 1})
            factors.append(f + ClassicalElement({((), 1): 1}) if a == b else f)
        prod = ClassicalElement.one()
        for f in factors:
            prod = alg.mul(prod, f)
        total = total + prod.scale(s)
    total = alg.normalize(total)
    return [total.tau_part(m - k) for k in range(m + 1)]


def classical_limit(ctx: AlgebraContext, x) -> ClassicalElement:
    """h^0 part of a module element, t^{(-r)}_ij -> f_ij(-r), PBW-normalized.

    x is a mapping {(hpow, word): coef} or a ModuleElement.
    """
    terms = getattr(x, "terms", x)
    alg = ClassicalAlgebra(ctx)
    out = ClassicalElement()
    for (hp, word), v in terms.items():
        if hp < 0:
            raise ValueError("element has negative h-power content")
        if hp == 0:
            out = out + alg.pbw(word).scale(v)
    return out


def check_jacobi(ctx: AlgebraContext, modes=range(-2, 3), level=None) -> dict:
    """Jacobi identity for [f_a(r), f_b(s)] on independent generators, with the
    central term tracked as an extra coordinate."""
    B = lie_basis(ctx)
    c = ctx.level if level is None else Fraction(level)
    gens = [(i, j, r) for (i, j) in B.pairs for r in modes]

    def br(lin, y):
        out = {}
        for x, v in lin.items():
            if x == "C":
                continue
            md, cen = lie_bracket(ctx, x, y, c)
            for k, w in md.items():
                out[k] = out.get(k, 0) + v * w
            if cen:
                out["C"] = out.get("C", 0) + v * cen
        return out

    checked = 0
    for x, y, z in product(gens, repeat=3):
        checked += 1
        tot = {}
        for a, b, d in ((x, y, z), (y, z, x), (z, x, y)):
            for k, v in br(br({a: 1}, b), d).items():
                tot[k] = tot.get(k, 0) + v
        bad = {k: v for k, v in tot.items() if v}
        if bad:
            k = sorted(bad, key=str)[0]
            return {"name": "jacobi", "algebra": ctx.label, "checked": checked, "status": "fail",
                    "witness": {"triple": [list(x), list(y), list(z)], "term": str(k), "coef": rat_str(bad[k])}}
    return {"name": "jacobi", "algebra": ctx.label, "checked": checked, "status": "pass", "witness": None}


def check_annihilated(ctx: AlgebraContext, m=2, max_mode=3, level=None) -> dict:
    """f_ij(r) phi_{m,m} = 0 in the vacuum module for all i, j and 0 <= r <= max_mode."""
    phi = segal_sugawara(ctx, m)[m]
    alg = ClassicalAlgebra(ctx, level)
    checked = 0
    for i, j in product(range(ctx.N), repeat=2):
        for r in range(max_mode + 1):
            checked += 1
            y = alg.act(i, j, r, phi)
            if not y.is_zero():
                k = min(y.terms)
                return {"name": "segal-sugawara-annihilation", "algebra": ctx.label,
                        "level": rat_str(alg.level), "m": m, "checked": checked, "status": "fail",
                        "witness": {"i": i + 1, "j": j + 1, "r": r, "term": str(k),
                                    "coef": rat_str(y.terms[k])}}
    return {"name": "segal-sugawara-annihilation", "algebra": ctx.label, "level": rat_str(alg.level),
            "m": m, "checked": checked, "status": "pass", "witness": None}
