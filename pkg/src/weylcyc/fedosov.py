"""Flat Weyl bundle over R^{2n}: Fedosov connection, Taylor lift, and the
form-valued cochains Psi and the chi densities.

Sections are polynomials in base coordinates x1..x2n and fiber coordinates
y1..y2n, with exterior generators dx1..dx2n.  The fiberwise product is the
Moyal product in y; x and dx are central up to Koszul signs.  Coordinate
order follows the Weyl algebra: x^{2s-1}, y^{2s-1} are the p-directions and
x^{2s}, y^{2s} the q-directions of pair s.

Connection: D = d + (1/hbar)[A, -] with

    A = A_SIGN * sum_s (q_s dx^{p_s} - p_s dx^{q_s}),

so that (1/hbar)[A(d/dx^j), -] = -d/dy^j for A_SIGN = 1.  Flat sections
are the Taylor lifts f(x + y).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from itertools import product

from .algebras import WeylAlgebra, vec_add
from .errors import ContextMismatch, DegreeError
from .graded import GradedElement, merge_sign
from .homalg import Chain, nabla_chain, omega_power, shuffle
from .poly import Polynomial
from .scalar import Scalar, ONE, ZERO
from .tau import SharpTraceCochain, tau_monomial
from .weyl import FiniteTwist, WeylElement

# Fixed by D^2 = 0 together with lift(f) * lift(g) = lift(f * g); the
# opposite sign gives flat sections f(x - y) instead of the Taylor lift.
A_SIGN = 1

HBAR_INV = Scalar.const(1, 0, -1)


class WeylBundle:
    """The flat Weyl bundle W (x) Lambda over R^{2n}."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        V = 2 * n
        self.xnames = tuple(f"x{j}" for j in range(1, V + 1))
        self.ynames = tuple(f"y{j}" for j in range(1, V + 1))
        pairs = tuple((V + 2 * s, V + 2 * s + 1) for s in range(n))
        self.proto = WeylElement(self.xnames + self.ynames, pairs=pairs)
        self.base_ring = Polynomial(self.xnames)
        self.forms = GradedElement(V, self.base_ring)
        self.ctx = WeylAlgebra(self.proto, m=V, nabla=self._d)
        self.unit = self.ctx.unit

    def __repr__(self):
        return f"WeylBundle(n={self.n})"

    def _d(self, el):
        if isinstance(el, GradedElement):
            return el.d(self.xnames)
        return GradedElement(2 * self.n, self.proto, {(): el}).d(self.xnames)

    # building sections -------------------------------------------------
    def _exp(self, x=None, y=None):
        V = 2 * self.n
        return tuple(x or (0,) * V) + tuple(y or (0,) * V)

    def monomial(self, xexp=None, yexp=None, forms=(), c=ONE) -> dict:
        return {(self._exp(xexp, yexp), tuple(forms)): Scalar.coerce(c)}

    def x(self, j: int) -> dict:
        """Base coordinate x^j (1-based)."""
        e = [0] * (2 * self.n)
        e[j - 1] = 1
        return self.monomial(xexp=e)

    def y(self, j: int) -> dict:
        e = [0] * (2 * self.n)
        e[j - 1] = 1
        return self.monomial(yexp=e)

    def dx(self, j: int) -> dict:
        return self.monomial(forms=(j - 1,))

    def section(self, el) -> dict:
        """Vector of a WeylElement or GradedElement over this bundle's generators."""
        return self.ctx.to_vec(el)

    def element(self, vec) -> GradedElement:
        return self.ctx.to_element(vec)

    def star(self, a: dict, b: dict) -> dict:
        return self.ctx.mul(a, b)

    # connection --------------------------------------------------------
    def connection_form(self) -> dict:
        """A = A_SIGN * sum_s (q_s dx^{p_s} - p_s dx^{q_s})."""
        out = {}
        s = Scalar.coerce(A_SIGN)
        for i in range(self.n):
            p, q = 2 * i + 1, 2 * i + 2
            vec_add(out, self.star(self.y(q), self.dx(p)), s)
            vec_add(out, self.star(self.y(p), self.dx(q)), -s)
        return out

    def symplectic_form(self) -> dict:
        """omega = sum_s dx^{p_s} ^ dx^{q_s}."""
        out = {}
        for i in range(self.n):
            vec_add(out, self.star(self.dx(2 * i + 1), self.dx(2 * i + 2)))
        return out

    def commutator(self, a: dict, b: dict) -> dict:
        return self.ctx.graded_commutator(a, b)

    def fedosov_D(self, s: dict, A: dict | None = None) -> dict:
        A = self.connection_form() if A is None else A
        out = dict(self.ctx.nabla(s))
        vec_add(out, self.commutator(A, s), HBAR_INV)
        return out

    def weyl_curvature(self, A: dict | None = None) -> dict:
        """Omega = dA + (1/2 hbar)[A, A]."""
        A = self.connection_form() if A is None else A
        out = dict(self.ctx.nabla(A))
        vec_add(out, self.commutator(A, A), HBAR_INV * Scalar.const(Fraction(1, 2)))
        return out

    def curvature_sign(self) -> int:
        """sigma with Omega = sigma * sum_s dx^{p_s} ^ dx^{q_s}."""
        Om = self.weyl_curvature()
        w = self.symplectic_form()
        for sigma in (1, -1):
            if Om == {k: v * Scalar.coerce(sigma) for k, v in w.items()}:
                return sigma
        raise ValueError("Weyl curvature is not a multiple of the symplectic form")

    # flat sections ------------------------------------------------------
    def lift(self, f: Polynomial) -> dict:
        """Taylor lift f(x) -> f(x + y)."""
        if f.gens != self.xnames:
            raise ContextMismatch(f"lift takes polynomials in {self.xnames}")
        out = {}
        for e, c in f.terms.items():
            for split in product(*(range(a + 1) for a in e)):
                coef = 1
                for a, b in zip(e, split):
                    coef *= comb(a, b)
                ye = split
                xe = tuple(a - b for a, b in zip(e, split))
                vec_add(out, {(xe + ye, ()): c * Scalar.const(coef)})
        return out

    # Psi and chi ---------------------------------------------------------
    def fiber_tau(self, key, k: int, twist: FiniteTwist | None = None) -> GradedElement:
        """tau_{2k} (or tau_{2k} # tr_gamma) on one basis tuple, as a form in x.

        The x parts multiply, the dx parts wedge in slot order, and tau sees
        the y parts alone.
        """
        V = 2 * self.n
        ys = tuple(e[V:] for e, _ in key)
        if twist is None:
            v = tau_monomial(self.n, False, ys)
        else:
            v = _sharp(twist, k).fn(tuple((y, ()) for y in ys))
        if not v:
            return self.forms.zero()
        sign, idx = 1, ()
        for _, f in key:
            s, idx = merge_sign(idx, f)
            if not s:
                return self.forms.zero()
            sign *= s
        xe = [0] * V
        for e, _ in key:
            for j in range(V):
                xe[j] += e[j]
        coeff = self.base_ring.monomial(tuple(xe), v if sign > 0 else -v)
        return self.forms._new({idx: coeff})

    def apply_tau(self, c: Chain, k: int, twist: FiniteTwist | None = None) -> GradedElement:
        if c.ctx != self.ctx:
            raise ContextMismatch("chain is not over this bundle")
        out = self.forms.zero()
        for key, coef in c.terms.items():
            if len(key) != 2 * k + 1:
                raise DegreeError(f"tau_{2 * k} on a degree {len(key) - 1} chain")
            v = self.fiber_tau(key, k, twist)
            if v:
                out = out + v.scale(coef)
        return out

    def psi(self, i: int, k: int, c: Chain, A: dict | None = None, twist: FiniteTwist | None = None,
            x0=None):
        """Psi^i_{2k}(c) = (1/hbar)^i tau_{2k}(c x (A)_i), c of degree 2k - i.

        Returns a form with polynomial coefficients, or its value at ``x0``.
        """
        if not 0 <= i <= 2 * k:
            raise DegreeError(f"Psi^{i}_{2 * k} needs 0 <= i <= 2k")
        if c.terms and c.degree != 2 * k - i:
            raise DegreeError(f"Psi^{i}_{2 * k} takes chains of degree {2 * k - i}")
        A = self.connection_form() if A is None else A
        if not c.terms:
            return self.forms.zero()
        w = self.apply_tau(shuffle(c, omega_power(A, i, self.ctx)), k, twist)
        w = w.scale(Scalar.const(1, 0, -i))
        return w if x0 is None else self.at(w, x0)

    def chi_density(self, i: int, r: int, alpha: GradedElement, c: Chain) -> GradedElement:
        """alpha ^ Psi^{2n-i}_{2n-2r}(c) for an i-form alpha and a chain of degree i - 2r."""
        if r < 0 or 2 * r > i:
            raise DegreeError(f"chi needs 0 <= 2r <= i, got r={r}, i={i}")
        if i > 2 * self.n:
            raise DegreeError(f"form degree {i} exceeds dimension {2 * self.n}")
        if alpha.m != 2 * self.n or alpha.proto.gens != self.xnames:
            raise ContextMismatch("alpha must be a form on the base")
        if any(d != i for d in alpha.degrees()):
            raise DegreeError(f"alpha must be homogeneous of degree {i}")
        if c.terms and c.degree != i - 2 * r:
            raise DegreeError(f"chi^{i - 2 * r} takes chains of degree {i - 2 * r}")
        if not alpha:
            return self.forms.zero()
        return alpha * self.psi(2 * self.n - i, self.n - r, c)

    def at(self, w: GradedElement, x0) -> GradedElement:
        """Coefficients of w evaluated at the point x0."""
        x0 = [Scalar.coerce(v) for v in x0]
        if len(x0) != 2 * self.n:
            raise ContextMismatch(f"point needs {2 * self.n} coordinates")
        one = self.base_ring.one()
        out = {}
        for idx, c in w.form.items():
            acc = ZERO
            for e, v in c.terms.items():
                t = v
                for a, p in zip(x0, e):
                    for _ in range(p):
                        t = t * a
                acc = acc + t
            if acc:
                out[idx] = one.scale(acc)
        return self.forms._new(out)

    def form_d(self, w: GradedElement) -> GradedElement:
        return w.d(self.xnames)

    # chains of sections ----------------------------------------------------
    def chain(self, slots, coef=ONE) -> Chain:
        return Chain.tensor(self.ctx, slots, coef)

    def nabla_chain(self, c: Chain) -> Chain:
        return nabla_chain(c)


def _sharp(twist, k, _cache={}):
    key = (tuple(twist.eigen), k)
    r = _cache.get(key)
    if r is None:
        r = _cache[key] = SharpTraceCochain(twist, k)
    return r


def connection_theta(bundle: WeylBundle, k: int, N: int = 1, dimV: int = 1) -> GradedElement:
    """Theta_{V,N,2k}(A ^ .. ^ A)(1) = sum_J Theta(A_{j_1}, .., A_{j_2k})(1) dx^{j_1} ^ .. ^ dx^{j_2k}.

    The components A_j are fiber-linear, hence lie in the Weyl algebra of the
    fiber; they enter gl_N(W) tensored with the identity matrix.
    """
    from .liecw import GlW, theta_eval
    from .weyl import WeylContext

    n = bundle.n
    V = 2 * n
    W = WeylContext(n)
    A = bundle.connection_form()
    comps = []
    for j in range(V):
        a = W.zero()
        for (e, f), c in A.items():
            if f == (j,):
                a = a + W.monomial(e[V:], c)
        comps.append(a)
    g = GlW(n, N, dimV)
    lie = [g.weyl_element(a) for a in comps]
    out = bundle.forms.zero()
    for J in product(range(V), repeat=2 * k):
        if len(set(J)) < len(J):
            continue
        v = theta_eval(g, k, [lie[j] for j in J])
        if not v:
            continue
        w = bundle.forms.one()
        for j in J:
            w = w * bundle.forms.dx(j)
        out = out + w.scale(v)
    return out


def psi_theta_bridge(bundle: WeylBundle, k: int):
    """(Psi^{2k}_{2k}(1), (1/hbar)^{2k} (1/(2k)!) Theta_{2k}(A ^ .. ^ A)(1))."""
    one = bundle.chain([bundle.unit])
    lhs = bundle.psi(2 * k, k, one)
    rhs = connection_theta(bundle, k).scale(Scalar.const(Fraction(1, factorial(2 * k)), 0, -2 * k))
    return lhs, rhs
