"""The polynomial Weyl algebra with the Moyal product.

Generators are ordered y = (p1, q1, p2, q2, ...), so y^{2i-1} = p_i and
y^{2i} = q_i.  A ``WeylElement`` may carry extra central parameters (used
by the flat Weyl bundle, where base coordinates x ride along); the star
product only contracts the symplectic pairs.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import CayleySingular, ContextMismatch, NotInLieAlgebra, NotSymplectic
from .matrix import Matrix
from .poly import Polynomial
from .scalar import Scalar, ONE, ZERO, I


def _ff(a, j):
    out = 1
    for r in range(j):
        out *= a - r
    return out


@lru_cache(maxsize=None)
def _pair_star(a, b, c, d):
    """p^a q^b * p^c q^d for one symplectic pair: tuples (p exp, q exp, hbar exp, coefficient)."""
    out = []
    for j in range(min(a, d) + 1):
        for l in range(min(b, c) + 1):
            num = _ff(a, j) * _ff(d, j) * _ff(b, l) * _ff(c, l)
            if l & 1:
                num = -num
            out.append((a - j + c - l, b - l + d - j, j + l,
                        Fraction(num, factorial(j) * factorial(l) * 2 ** (j + l))))
    return tuple(out)


@lru_cache(maxsize=200000)
def _mono_star(e1, e2, pairs):
    """Star product of two monomials: dict (exponent, hbar exponent) -> Fraction."""
    base = tuple(x + y for x, y in zip(e1, e2))
    acc = {(base, 0): Fraction(1)}
    for ip, iq in pairs:
        opts = _pair_star(e1[ip], e1[iq], e2[ip], e2[iq])
        if len(opts) == 1:
            continue
        nxt = {}
        for (exp, h), c in acc.items():
            for pe, qe, dh, cc in opts:
                ne = list(exp)
                ne[ip] = pe
                ne[iq] = qe
                key = (tuple(ne), h + dh)
                nxt[key] = nxt.get(key, 0) + c * cc
        acc = nxt
    return tuple((k, v) for k, v in acc.items() if v)


class WeylElement(Polynomial):
    """Polynomial whose ``*`` is the Moyal product m o exp(hbar alpha / 2).

    ``pairs`` lists (p index, q index) positions in the exponent vector;
    remaining generators are central parameters.
    """

    __slots__ = ("pairs",)

    def __init__(self, gens, terms=None, pairs=None):
        super().__init__(gens, terms)
        if pairs is None:
            pairs = default_pairs(self.gens)
        self.pairs = tuple(pairs)

    def _post_new(self, parent):
        self.pairs = parent.pairs

    def _check(self, other):
        super()._check(other)
        if getattr(other, "pairs", self.pairs) != self.pairs:
            raise ContextMismatch("Weyl elements with different symplectic pairings")

    def star(self, other):
        self._check(other)
        if not self._t or not other._t:
            return self._new({})
        acc = {}
        for e1, c1 in self._t.items():
            for e2, c2 in other._t.items():
                c12 = c1 * c2
                for (exp, h), q in _mono_star(e1, e2, self.pairs):
                    term = c12.shift(h) * q
                    prev = acc.get(exp)
                    acc[exp] = term if prev is None else prev + term
        return self._new({e: c for e, c in acc.items() if c})

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return self.star(other)
        return super().__mul__(other)

    def commutator(self, other):
        return self.star(other) - other.star(self)

    def poisson(self, other):
        """{f, g} = sum_s df/dp_s dg/dq_s - df/dq_s dg/dp_s."""
        out = self.zero()
        for ip, iq in self.pairs:
            p, q = self.gens[ip], self.gens[iq]
            out = out + self.partial(p).pointwise(other.partial(q)) - self.partial(q).pointwise(other.partial(p))
        return out


def default_pairs(gens):
    pairs = []
    for k, g in enumerate(gens):
        if g.startswith("p") and g[1:].isdigit():
            q = "q" + g[1:]
            if q in gens:
                pairs.append((k, gens.index(q)))
    return tuple(pairs)


class WeylContext:
    """W_{2n}: generators p1, q1, ..., pn, qn in y-order."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        gens = []
        for i in range(1, n + 1):
            gens += [f"p{i}", f"q{i}"]
        self.gens = tuple(gens)
        self._zero = WeylElement(self.gens)

    def __eq__(self, other):
        return isinstance(other, WeylContext) and other.n == self.n

    def __hash__(self):
        return hash(("W", self.n))

    def zero(self):
        return self._zero

    def one(self):
        return self._zero.one()

    def const(self, c):
        return self._zero.const(c)

    def p(self, i):
        return self._zero.var(f"p{i}")

    def q(self, i):
        return self._zero.var(f"q{i}")

    def y(self, k):
        """y^k with 1-based k."""
        return self._zero.var(self.gens[k - 1])

    def monomial(self, exp, c=1):
        return self._zero.monomial(exp, c)

    def element(self, terms):
        return WeylElement(self.gens, terms)

    def monomials_up_to(self, deg):
        """Exponent vectors of total degree <= deg, graded-lex order."""
        out = []

        def rec(prefix, left, slots):
            if slots == 0:
                out.append(tuple(prefix))
                return
            for k in range(left + 1):
                rec(prefix + [k], left - k, slots - 1)

        rec([], deg, 2 * self.n)
        from .poly import grlex_key
        return sorted(out, key=grlex_key)


def moyal_mul(f: WeylElement, g: WeylElement) -> WeylElement:
    return f.star(g)


# symplectic linear algebra --------------------------------------------

def symplectic_J(n):
    """Matrix of omega = sum dp_i ^ dq_i in y-order: J[p_i][q_i] = 1, J[q_i][p_i] = -1."""
    rows = [[ZERO] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[2 * i][2 * i + 1] = ONE
        rows[2 * i + 1][2 * i] = -ONE
    return Matrix(rows)


def is_symplectic(S: Matrix) -> bool:
    n = S.rows // 2
    J = symplectic_J(n)
    return S.rows == S.cols == 2 * n and S.T * J * S == J


def sp_act(S: Matrix, f: WeylElement) -> WeylElement:
    """Substitute y -> S y, i.e. y^k becomes sum_l S[k][l] y^l."""
    ctx_n = len(f.pairs)
    if S.rows != 2 * ctx_n or not is_symplectic(S):
        raise NotSymplectic("matrix does not preserve the symplectic form")
    images = {}
    y_index = []
    for ip, iq in f.pairs:
        y_index += [ip, iq]
    for row, k in enumerate(y_index):
        img = f.zero()
        for col, l in enumerate(y_index):
            s = S[row, col]
            if s:
                img = img + f.var(f.gens[l]).scale(s)
        images[f.gens[k]] = img
    for g in f.gens:
        images.setdefault(g, f.var(g))
    return f.substitute(images)


def is_in_sp(X: Matrix) -> bool:
    n = X.rows // 2
    J = symplectic_J(n)
    return X.rows == X.cols == 2 * n and (X.T * J + J * X).is_zero()


def sp_to_quadratic(X: Matrix, ctx: WeylContext | None = None) -> WeylElement:
    """Quadratic q_X with (1/hbar)[q_X, y^k] = sum_l X[k][l] y^l.

    Since the star commutator with a quadratic is hbar times the Poisson
    bracket, q_X = (1/2) y^T Q y with Q = J X.
    """
    if not is_in_sp(X):
        raise NotInLieAlgebra("matrix is not in sp_2n")
    n = X.rows // 2
    ctx = ctx or WeylContext(n)
    Q = symplectic_J(n) * X
    out = ctx.zero()
    for a in range(2 * n):
        for b in range(2 * n):
            c = Q[a, b]
            if c:
                out = out + ctx.y(a + 1).pointwise(ctx.y(b + 1)).scale(c * Fraction(1, 2))
    return out


def quadratic_to_sp(h: WeylElement) -> Matrix:
    """Inverse of sp_to_quadratic on homogeneous quadratics."""
    n = len(h.pairs)
    ctx = WeylContext(n)
    rows = []
    for k in range(1, 2 * n + 1):
        img = h.poisson(ctx.y(k))
        rows.append([img.coeff_of(ctx.y(l)) for l in range(1, 2 * n + 1)])
    return Matrix(rows)


def _coeff_of(self, mono):
    (e,) = mono._t.keys()
    return self._t.get(e, ZERO)


WeylElement.coeff_of = _coeff_of


def linear_derivation(X: Matrix, f: WeylElement) -> WeylElement:
    """Derivation with y^k -> (X y)^k extended by the Leibniz rule."""
    n = X.rows // 2
    ctx = WeylContext(n)
    out = f.zero()
    for k in range(2 * n):
        img = ctx.zero()
        for l in range(2 * n):
            if X[k, l]:
                img = img + ctx.y(l + 1).scale(X[k, l])
        out = out + f.partial(f.gens[k]).pointwise(img)
    return out


def cayley(g: Matrix) -> Matrix:
    """c(g) = (1 - g)(1 + g)^{-1}; the two factors commute."""
    n = g.rows
    one = Matrix.identity(n)
    plus = one + g
    if not plus.det():
        raise CayleySingular("1 + gamma is singular")
    return (one - g) * plus.inverse()


# finite-order twists ----------------------------------------------------

_UNITS = {"1": ONE, "id": ONE, "-1": -ONE, "i": I, "-i": -I}


class FiniteTwist:
    """Unitary twist acting on the complex lines z_j = q_j + i p_j by z_j -> lambda_j z_j.

    ``eigen`` has one Gaussian unit per symplectic pair.  Lines with
    eigenvalue 1 form the fixed part; the others form the transversal
    part, of complex dimension l.
    """

    def __init__(self, eigen):
        ev = []
        for x in eigen:
            x = _UNITS[x] if isinstance(x, str) else Scalar.coerce(x)
            if x.terms and set(x.terms) != {0}:
                raise ValueError("twist eigenvalues must be hbar-free")
            re, im = x.coeff(0)
            if re * re + im * im != 1 or (re and im):
                raise ValueError("twist eigenvalues must be among 1, -1, i, -i")
            ev.append(x)
        self.eigen = tuple(ev)
        self.n = len(ev)

    @property
    def order(self):
        k = 1
        while any(e ** k != ONE for e in self.eigen):
            k += 1
        return k

    @property
    def fixed(self):
        return [j for j, e in enumerate(self.eigen) if e == ONE]

    @property
    def transversal(self):
        return [j for j, e in enumerate(self.eigen) if e != ONE]

    @property
    def l(self):
        return len(self.transversal)

    def complex_matrix(self, lines=None):
        lines = self.transversal if lines is None else lines
        return Matrix.diag([self.eigen[j] for j in lines])

    def real_matrix(self):
        """Action on y = (p1, q1, ...): q' + i p' = lambda (q + i p)."""
        n = self.n
        rows = [[ZERO] * (2 * n) for _ in range(2 * n)]
        for j, lam in enumerate(self.eigen):
            a, b = lam.coeff(0)
            ip, iq = 2 * j, 2 * j + 1
            rows[iq][iq] = Scalar.const(a)
            rows[iq][ip] = Scalar.const(-b)
            rows[ip][ip] = Scalar.const(a)
            rows[ip][iq] = Scalar.const(b)
        return Matrix(rows)

    def inverse(self):
        return FiniteTwist([e.inv() for e in self.eigen])

    def act(self, f: WeylElement) -> WeylElement:
        return sp_act(self.real_matrix(), f)

    def __eq__(self, other):
        return isinstance(other, FiniteTwist) and self.eigen == other.eigen

    def __hash__(self):
        return hash(self.eigen)

    def __repr__(self):
        return f"FiniteTwist({[str(e) for e in self.eigen]})"
