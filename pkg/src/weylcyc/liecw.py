"""Lie algebra side: gl_N(W^V_{2n}), the map phi^N from Hochschild cochains,
the cocycles Theta, the Chevalley-Eilenberg differential, Chern-Weil, and
the characteristic power series.

gl_N(W^V) is stored as M_{N dimV}(W) with row index i * dimV + v, so the
matrix trace over N (x) V is the product of the two traces.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial

from .algebras import MatrixAlgebra, WeylAlgebra, vec_add
from .errors import ContextMismatch, DegreeError, NotInLieAlgebra, TruncationError
from .homalg import Chain, Cochain, MatrixTraceCochain
from .matrix import Matrix
from .scalar import Scalar, ONE, ZERO
from .tau import TauCochain, TwistedTrace
from .weyl import FiniteTwist, WeylContext, WeylElement, quadratic_to_sp


def perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


class GlW:
    """The Lie algebra gl_N(W_{2n} (x) End V)."""

    def __init__(self, n: int, N: int = 1, dimV: int = 1, twist: FiniteTwist | None = None):
        self.n, self.N, self.dimV = n, N, dimV
        self.weyl = WeylContext(n)
        self.base = WeylAlgebra(self.weyl.zero(), twist=twist.act if twist is not None else None)
        self.size = N * dimV
        self.alg = MatrixAlgebra(self.base, self.size)

    def __eq__(self, other):
        return isinstance(other, GlW) and (self.n, self.N, self.dimV) == (other.n, other.N, other.dimV)

    def __hash__(self):
        return hash((self.n, self.N, self.dimV))

    def _idx(self, i, v):
        return i * self.dimV + v

    def element(self, M: Matrix | None = None, Mp: Matrix | None = None, a=None) -> "GlWElement":
        """M (x) M' (x) a; omitted factors are identities (or 1 for a)."""
        M = M if M is not None else Matrix.identity(self.N)
        Mp = Mp if Mp is not None else Matrix.identity(self.dimV)
        if M.shape != (self.N, self.N) or Mp.shape != (self.dimV, self.dimV):
            raise ContextMismatch("matrix factor has the wrong size")
        a = self.weyl.one() if a is None else a
        avec = self.base.to_vec(a)
        out = {}
        for i in range(self.N):
            for j in range(self.N):
                m = M[i, j]
                if not m:
                    continue
                for v in range(self.dimV):
                    for w in range(self.dimV):
                        c = m * Mp[v, w]
                        if c:
                            r, s = self._idx(i, v), self._idx(j, w)
                            vec_add(out, {(r, s, k): x for k, x in avec.items()}, c)
        return GlWElement(self, out)

    def weyl_element(self, a) -> "GlWElement":
        return self.element(a=a)

    def unit(self):
        return self.element()

    def zero(self):
        return GlWElement(self, {})

    def blocks(self, x: "GlWElement"):
        """Coefficient polynomials a^{ij,vw} keyed by (i, j, v, w)."""
        out = {}
        for (r, s, k), c in x.vec.items():
            i, v = divmod(r, self.dimV)
            j, w = divmod(s, self.dimV)
            vec_add(out.setdefault((i, j, v, w), {}), {k: c})
        return {key: self.base.to_element(vec) for key, vec in out.items()}


class GlWElement:
    __slots__ = ("ctx", "vec")

    def __init__(self, ctx: GlW, vec: dict):
        self.ctx = ctx
        self.vec = {k: v for k, v in vec.items() if v}

    def _check(self, other):
        if other.ctx != self.ctx:
            raise ContextMismatch("elements of different Lie algebras")

    def __add__(self, other):
        self._check(other)
        return GlWElement(self.ctx, vec_add(dict(self.vec), other.vec))

    def __neg__(self):
        return GlWElement(self.ctx, {k: -v for k, v in self.vec.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = Scalar.coerce(s)
        return GlWElement(self.ctx, {k: v * s for k, v in self.vec.items()})

    def __mul__(self, other):
        self._check(other)
        return GlWElement(self.ctx, self.ctx.alg.mul(self.vec, other.vec))

    def bracket(self, other):
        return self * other - other * self

    def __eq__(self, other):
        return isinstance(other, GlWElement) and self.ctx == other.ctx and self.vec == other.vec

    def __hash__(self):
        return hash(frozenset(self.vec.items()))

    def __bool__(self):
        return bool(self.vec)

    def __repr__(self):
        return f"GlWElement({len(self.vec)} terms)"


# Lie cochains ------------------------------------------------------------------

class LieCochain:
    """Alternating multilinear functional of ``degree`` Lie algebra arguments."""

    def __init__(self, degree: int, fn):
        self.degree = degree
        self.fn = fn

    def __call__(self, *args):
        if len(args) != self.degree:
            raise DegreeError(f"Lie cochain of degree {self.degree} got {len(args)} arguments")
        return self.fn(tuple(args))


def phi_N(c: Cochain, args, modarg: GlWElement) -> Scalar:
    """sum_sigma sgn(sigma) c(x_0 (x) x_sigma(1) (x) ...), x_0 the module argument.

    ``c`` is a cochain on the matrix algebra; wrap plain cochains with
    ``MatrixTraceCochain`` first.  The trace over the matrix legs sits inside c.
    """
    ctx = modarg.ctx
    for x in args:
        modarg._check(x)
    acc = ZERO
    for perm in permutations(range(len(args))):
        ch = Chain.tensor(ctx.alg, [modarg.vec] + [args[j].vec for j in perm])
        v = c(ch)
        if v:
            acc = acc + (v if perm_sign(perm) > 0 else -v)
    return acc


def theta_cochain(ctx: GlW, k: int) -> Cochain:
    """tau^V_{2k} extended to gl_N by the matrix trace."""
    return MatrixTraceCochain(TauCochain(ctx.n, k), ctx.size)


def theta_eval(ctx: GlW, k: int, args, modarg: GlWElement | None = None) -> Scalar:
    if len(args) != 2 * k:
        raise DegreeError(f"Theta_{2 * k} takes {2 * k} arguments")
    return phi_N(theta_cochain(ctx, k), args, modarg if modarg is not None else ctx.unit())


def theta_at_one(ctx: GlW, k: int) -> LieCochain:
    """Theta_{V,N,2k}(1) as a cochain with trivial coefficients."""
    c = theta_cochain(ctx, k)
    one = ctx.unit()
    return LieCochain(2 * k, lambda args: phi_N(c, args, one))


def lie_diff(c: LieCochain, twist: FiniteTwist | None = None) -> LieCochain:
    """Chevalley-Eilenberg differential with trivial coefficients.

    (dc)(x_0..x_k) = sum_{i<j} (-1)^{i+j} c([x_i, x_j], x_0 .. ^i .. ^j .. x_k).
    With a twist the arguments must be gamma-invariant; there evaluation at 1
    intertwines the twisted and trivial complexes.
    """

    def fn(args):
        if twist is not None:
            for x in args:
                if _twist_vec(x, twist) != x.vec:
                    raise NotInLieAlgebra("twisted differential needs gamma-invariant arguments")
        acc = ZERO
        for i, j in combinations(range(len(args)), 2):
            rest = tuple(x for t, x in enumerate(args) if t not in (i, j))
            v = c(args[i].bracket(args[j]), *rest)
            if v:
                acc = acc + (v if (i + j) % 2 == 0 else -v)
        return acc

    return LieCochain(c.degree + 1, fn)


def _twist_vec(x: GlWElement, twist: FiniteTwist):
    out = {}
    for (r, s, k), c in x.vec.items():
        img = twist.act(x.ctx.base.proto.monomial(k[0]))
        vec_add(out, {(r, s, (e, ())): v for e, v in img.terms.items()}, c)
    return out


# Chern-Weil ---------------------------------------------------------------------

class StandardProjection:
    """h-equivariant projection g -> h = gl_N + gl_V + sp_2n.

    The identity matrix lies in both gl_N and gl_V; its trace part is
    counted once, which makes the map restrict to the identity on h.
    """

    def __init__(self, ctx: GlW):
        self.ctx = ctx

    def parts(self, x: GlWElement):
        """(gl_N matrix, traceless-shifted gl_V matrix, quadratic) of pr(x)."""
        ctx = self.ctx
        N, V = ctx.N, ctx.dimV
        MN = [[ZERO] * N for _ in range(N)]
        MV = [[ZERO] * V for _ in range(V)]
        scal = ZERO
        quad = ctx.weyl.zero()
        for (i, j, v, w), a in ctx.blocks(x).items():
            a0 = a.eval_at_zero()
            if v == w:
                MN[i][j] = MN[i][j] + a0 * Fraction(1, V)
            if i == j:
                MV[v][w] = MV[v][w] + a0 * Fraction(1, N)
            if i == j and v == w:
                scal = scal + a0
                quad = quad + a.homogeneous_part(2)
        scal = scal * Fraction(1, N * V)
        for v in range(V):
            MV[v][v] = MV[v][v] - scal
        return Matrix(MN), Matrix(MV), quad.scale(Fraction(1, N * V))

    def __call__(self, x: GlWElement) -> GlWElement:
        MN, MV, quad = self.parts(x)
        ctx = self.ctx
        return ctx.element(M=MN) + ctx.element(Mp=MV) + ctx.weyl_element(quad)

    def in_h(self, x: GlWElement) -> bool:
        return self(x) == x


def cw_curvature(pr: StandardProjection, u: GlWElement, v: GlWElement) -> GlWElement:
    """C(u ^ v) = [pr u, pr v] - pr [u, v]."""
    return pr(u).bracket(pr(v)) - pr(u.bracket(v))


def _pairings(m):
    """Permutations with sigma(2i-1) < sigma(2i)."""
    for perm in permutations(range(m)):
        if all(perm[2 * i] < perm[2 * i + 1] for i in range(m // 2)):
            yield perm


def cw_rho(P: "InvariantSeries", args, pr: StandardProjection, q: int | None = None) -> Scalar:
    """rho(P_q)(v_1 .. v_2q) with P_q the degree-q part of P, polarized."""
    if len(args) % 2:
        raise DegreeError("rho takes an even number of arguments")
    q = len(args) // 2 if q is None else q
    if 2 * q != len(args):
        raise DegreeError(f"rho of a degree {q} polynomial takes {2 * q} arguments")
    if q > P.order:
        raise TruncationError(f"series truncated at order {P.order} < {q}")
    if q == 0:
        return P.part(pr.parts(pr.ctx.zero()), 0)
    acc = ZERO
    curv = {}
    for perm in _pairings(2 * q):
        Cs = []
        for i in range(q):
            a, b = perm[2 * i], perm[2 * i + 1]
            if (a, b) not in curv:
                curv[(a, b)] = pr.parts(cw_curvature(pr, args[a], args[b]))
            Cs.append(curv[(a, b)])
        v = P.polarized(Cs)
        if v:
            acc = acc + (v if perm_sign(perm) > 0 else -v)
    return acc * Fraction(1, factorial(q))


def rho_cochain(P: "InvariantSeries", pr: StandardProjection, q: int) -> LieCochain:
    return LieCochain(2 * q, lambda args: cw_rho(P, args, pr, q))


# characteristic series ----------------------------------------------------------

def _add_parts(x, y):
    return tuple(a + b for a, b in zip(x, y))


def _scale_parts(x, s):
    MN, MV, quad = x
    return (MN.map(lambda e: e * s), MV.map(lambda e: e * s), quad.scale(s))


class InvariantSeries:
    """A truncated invariant power series on h, given by its homogeneous parts.

    ``fn(X, d)`` evaluates the degree-d part at X = (gl_N, gl_V, quadratic).
    """

    def __init__(self, fn, order: int):
        self.fn = fn
        self.order = order

    def part(self, X, d: int) -> Scalar:
        if d > self.order:
            raise TruncationError(f"series truncated at order {self.order} < {d}")
        return self.fn(X, d)

    def polarized(self, Xs) -> Scalar:
        """Symmetric multilinear form of the degree-q part, q = len(Xs)."""
        q = len(Xs)
        acc = ZERO
        for r in range(1, q + 1):
            for S in combinations(range(q), r):
                X = Xs[S[0]]
                for t in S[1:]:
                    X = _add_parts(X, Xs[t])
                v = self.part(X, q)
                if v:
                    acc = acc + (v if (q - r) % 2 == 0 else -v)
        return acc * Fraction(1, factorial(q))

    def __mul__(self, other: "InvariantSeries") -> "InvariantSeries":
        order = min(self.order, other.order)

        def fn(X, d):
            acc = ZERO
            for a in range(d + 1):
                acc = acc + self.fn(X, a) * other.fn(X, d - a)
            return acc

        return InvariantSeries(fn, order)


def _matrix_power_traces(M: Matrix, top: int):
    out = [Scalar.coerce(M.rows)]
    P = Matrix.identity(M.rows)
    for _ in range(top):
        P = P * M
        out.append(P.trace())
    return out


@lru_cache(maxsize=None)
def log_sinhc_coeffs(top: int):
    """c_k with log(sinh t / t) = sum_k c_k t^{2k}, from c_k = 2^{2k} B_{2k} / (2k (2k)!)."""
    B = _bernoulli(2 * top)
    return tuple(Fraction(2 ** (2 * k)) * B[2 * k] / (2 * k * factorial(2 * k)) for k in range(1, top + 1))


def _bernoulli(m):
    B = [Fraction(1)]
    for n in range(1, m + 1):
        s = sum(Fraction(_binom(n + 1, k)) * B[k] for k in range(n))
        B.append(-s / (n + 1))
    return B


def _binom(n, k):
    from math import comb
    return comb(n, k)


def _exp_series(g, order):
    """Coefficients of exp(sum_d g[d] t^d) up to t^order, g[0] = 0."""
    e = [ONE] + [ZERO] * order
    # e' = g' e
    for d in range(1, order + 1):
        acc = ZERO
        for j in range(1, d + 1):
            if g[j]:
                acc = acc + g[j] * e[d - j] * j
        e[d] = acc * Fraction(1, d)
    return e


def ahat_parts(Y: Matrix, order: int, hbar: bool = False):
    """Homogeneous parts of Ahat(Y) = exp(-1/2 tr log(sinh(Y/2) / (Y/2))) up to degree order."""
    traces = _matrix_power_traces(Y, order)
    g = [ZERO] * (order + 1)
    for k, c in enumerate(log_sinhc_coeffs(max(order // 2, 1)), start=1):
        if 2 * k <= order:
            g[2 * k] = traces[2 * k] * (Fraction(-1, 2) * c / 4 ** k)
    parts = _exp_series(g, order)
    if hbar:
        parts = [p.shift(d) for d, p in enumerate(parts)]
    return parts


def ch_parts(X: Matrix, order: int, gamma: Matrix | None = None):
    """Parts of tr(gamma exp X): tr(gamma X^d) / d!."""
    out = []
    P = gamma if gamma is not None else Matrix.identity(X.rows)
    for d in range(order + 1):
        out.append(P.trace() * Fraction(1, factorial(d)))
        P = P * X
    return out


def j_parts(X2: WeylElement, twist: FiniteTwist, order: int):
    """Parts of J_gamma(X) = sum_i tr_gamma(X * ... * X) / i!."""
    tr = TwistedTrace(twist)
    out = []
    P = X2.one()
    for d in range(order + 1):
        out.append(tr(P) * Fraction(1, factorial(d)))
        P = P.star(X2)
    return out


def char_series(kind: str, X, order: int, gamma=None):
    """Truncated evaluation of a characteristic series: the list of its homogeneous parts at X.

    kind: "Ahat" (X in sp as a matrix or quadratic), "Ahat_hbar", "Ch",
    "Ch_Vgamma" (gamma a matrix on V), "Jgamma" (X quadratic, gamma a FiniteTwist).
    """
    if order < 0:
        raise TruncationError("order must be nonnegative")
    if kind in ("Ahat", "Ahat_hbar"):
        Y = quadratic_to_sp(X) if isinstance(X, WeylElement) else X
        return ahat_parts(Y, order, hbar=kind == "Ahat_hbar")
    if kind == "Ch":
        return ch_parts(X, order)
    if kind == "Ch_Vgamma":
        if gamma is None:
            raise ValueError("Ch_Vgamma needs the matrix of gamma on V")
        return ch_parts(X, order, gamma)
    if kind == "Jgamma":
        if not isinstance(gamma, FiniteTwist):
            raise ValueError("Jgamma needs a FiniteTwist")
        return j_parts(X, gamma, order)
    raise ValueError(f"unknown series {kind!r}")


def ahat_series(order: int, hbar: bool = True) -> InvariantSeries:
    return InvariantSeries(lambda X, d: ahat_parts(quadratic_to_sp(X[2]), d, hbar)[d], order)


def ch_series(order: int, which: str = "N", scale=ONE) -> InvariantSeries:
    """Ch on the gl_N ("N") or gl_V ("V") component, evaluated at scale * X."""
    slot = 0 if which == "N" else 1
    s = Scalar.coerce(scale)
    return InvariantSeries(lambda X, d: ch_parts(X[slot], d)[d] * s ** d, order)
