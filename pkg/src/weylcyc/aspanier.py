"""Alexander-Spanier cochains in the polynomial model, the map lambda into
differential forms, antisymmetrization, and the map X into cyclic cochains
of a traced algebra.

A k-cochain is a combination of f_0 (x) ... (x) f_k with f_i polynomials in
x1..xm, read as the function (x_0, ..., x_k) -> f_0(x_0) ... f_k(x_k).
Basis keys are tuples of exponent vectors.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from .algebras import AlgebraContext, MatrixAlgebra, WeylAlgebra, vec_add
from .errors import ContextMismatch, DegreeError
from .graded import GradedElement
from .homalg import Chain, Cochain
from .poly import Polynomial
from .scalar import Scalar, ONE, ZERO
from .weyl import WeylElement


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def coordinate_ring(m: int) -> Polynomial:
    return Polynomial(tuple(f"x{i}" for i in range(1, m + 1)))


class ASCochain:
    __slots__ = ("m", "k", "terms")

    def __init__(self, m: int, k: int, terms=None):
        if k < 0:
            raise DegreeError("AS cochains have degree >= 0")
        self.m, self.k = m, k
        t = {}
        for key, c in (terms or {}).items():
            if len(key) != k + 1:
                raise DegreeError(f"degree {k} cochain needs {k + 1} slots")
            if c:
                vec_add(t, {key: c})
        self.terms = t

    @classmethod
    def tensor(cls, fs, coef=ONE) -> "ASCochain":
        """f_0 (x) ... (x) f_k from polynomials in x1..xm."""
        m = len(fs[0].gens)
        acc = {(): Scalar.coerce(coef)}
        for f in fs:
            if len(f.gens) != m:
                raise ContextMismatch("tensor factors over different coordinate rings")
            acc = {key + (e,): c * v for key, c in acc.items() for e, v in f.terms.items()}
        return cls(m, len(fs) - 1, acc)

    def _like(self, k, terms):
        return ASCochain(self.m, k, terms)

    def __add__(self, other):
        if (other.m, other.k) != (self.m, self.k):
            raise ContextMismatch("cochains of different type")
        return self._like(self.k, vec_add(dict(self.terms), other.terms))

    def __neg__(self):
        return self._like(self.k, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = Scalar.coerce(s)
        return self._like(self.k, {key: c * s for key, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, ASCochain) and (self.m, self.k, self.terms) == (other.m, other.k, other.terms)

    def __hash__(self):
        return hash((self.m, self.k, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"ASCochain(m={self.m}, k={self.k}, {len(self.terms)} terms)"

    @property
    def zero_exp(self):
        return (0,) * self.m

    def permute(self, nu) -> "ASCochain":
        """(nu f)(x_0..x_k) = f(x_nu(0), .., x_nu(k)): slot j of the result holds f's slot nu^{-1}(j)."""
        out = {}
        for key, c in self.terms.items():
            new = [None] * len(key)
            for i, j in enumerate(nu):
                new[j] = key[i]
            vec_add(out, {tuple(new): c})
        return self._like(self.k, out)


# coface, codegeneracy and cyclic maps -------------------------------------------

def as_coface(f: ASCochain, i: int) -> ASCochain:
    """delta^i: insert the constant function 1 at slot i."""
    if not 0 <= i <= f.k + 1:
        raise DegreeError(f"coface index {i} out of range for degree {f.k}")
    z = f.zero_exp
    return f._like(f.k + 1, {key[:i] + (z,) + key[i:]: c for key, c in f.terms.items()})


def as_delta(f: ASCochain) -> ASCochain:
    out = {}
    for i in range(f.k + 2):
        vec_add(out, as_coface(f, i).terms, ONE if i % 2 == 0 else -ONE)
    return f._like(f.k + 1, out)


def as_delta_prime(f: ASCochain) -> ASCochain:
    """delta without the last face."""
    out = {}
    for i in range(f.k + 1):
        vec_add(out, as_coface(f, i).terms, ONE if i % 2 == 0 else -ONE)
    return f._like(f.k + 1, out)


def as_degeneracy(f: ASCochain, i: int) -> ASCochain:
    """s^{i,k}: multiply slots i and i+1."""
    if not 0 <= i < f.k:
        raise DegreeError(f"degeneracy index {i} out of range for degree {f.k}")
    out = {}
    for key, c in f.terms.items():
        vec_add(out, {key[:i] + (_add_exp(key[i], key[i + 1]),) + key[i + 2:]: c})
    return f._like(f.k - 1, out)


def as_extra_degeneracy_at(f: ASCochain) -> ASCochain:
    """s_x: evaluate the first slot at the base point x = 0."""
    if f.k < 1:
        raise DegreeError("s_x needs degree >= 1")
    z = f.zero_exp
    return f._like(f.k - 1, {key[1:]: c for key, c in f.terms.items() if key[0] == z})


def as_extra_degeneracy_wrap(f: ASCochain) -> ASCochain:
    """s^{k+1,k}: f_0 (x) .. (x) f_{k+1} -> f_1 (x) .. (x) f_k (x) f_{k+1} f_0."""
    if f.k < 1:
        raise DegreeError("wraparound degeneracy needs degree >= 1")
    out = {}
    for key, c in f.terms.items():
        vec_add(out, {key[1:-1] + (_add_exp(key[-1], key[0]),): c})
    return f._like(f.k - 1, out)


def as_degeneracies(f: ASCochain, which: str, i: int = 0) -> ASCochain:
    if which == "s_ik":
        return as_degeneracy(f, i)
    if which == "s_x_at_0":
        return as_extra_degeneracy_at(f)
    if which == "s_wrap":
        return as_extra_degeneracy_wrap(f)
    raise ValueError(f"unknown degeneracy {which!r}")


def as_iota(c: Scalar, m: int) -> ASCochain:
    """Constants into 0-cochains."""
    return ASCochain(m, 0, {((0,) * m,): Scalar.coerce(c)})


def as_epsilon(f: ASCochain) -> Scalar:
    """Evaluation of a 0-cochain at the base point."""
    if f.k != 0:
        raise DegreeError("epsilon takes 0-cochains")
    return f.terms.get((f.zero_exp,), ZERO)


def as_cyclic_t(f: ASCochain, signed: bool = True) -> ASCochain:
    """t^k(f_0 (x) .. (x) f_k) = (-1)^k f_1 (x) .. (x) f_k (x) f_0; ``signed=False`` drops (-1)^k."""
    s = -ONE if signed and f.k % 2 else ONE
    return f._like(f.k, {key[1:] + key[:1]: c * s for key, c in f.terms.items()})


def as_N(f: ASCochain) -> ASCochain:
    out = {}
    cur = f
    for _ in range(f.k + 1):
        vec_add(out, cur.terms)
        cur = as_cyclic_t(cur)
    return f._like(f.k, out)


def as_B(f: ASCochain) -> ASCochain:
    """B_AS = N s (id - t) with s the wraparound extra degeneracy; lowers the degree by one."""
    if f.k == 0:
        return ASCochain(f.m, 0, {})
    return as_N(as_extra_degeneracy_wrap(f - as_cyclic_t(f)))


def is_cyclic(f: ASCochain) -> bool:
    return as_cyclic_t(f) == f


def antisymmetrize(f: ASCochain) -> ASCochain:
    """epsilon^k f = (1/(k+1)!) sum_sigma sgn(sigma) sigma f."""
    out = {}
    n = f.k + 1
    w = Fraction(1, factorial(n))
    for sigma in permutations(range(n)):
        vec_add(out, f.permute(sigma).terms, Scalar.const(w * _sign(sigma)))
    return f._like(f.k, out)


def _sign(p):
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


# forms ----------------------------------------------------------------------------

def form_ring(m: int) -> GradedElement:
    return GradedElement(m, coordinate_ring(m))


def form_d(w: GradedElement) -> GradedElement:
    return w.d(w.proto.gens)


def _df(f: Polynomial, m: int) -> GradedElement:
    return form_d(GradedElement(m, f, {(): f}))


def lambda_map(f: ASCochain, r: int) -> GradedElement:
    """lambda_k^{k-2r}: ((k-2r)!/(k+1)!) sum over (2r+1, k-2r)-shuffles of
    sgn(nu) f_nu(0) .. f_nu(2r) df_nu(2r+1) ^ .. ^ df_nu(k)."""
    k, m = f.k, f.m
    if 2 * r > k or r < 0:
        raise DegreeError(f"lambda needs 0 <= 2r <= k, got r={r}, k={k}")
    R = coordinate_ring(m)
    W = GradedElement(m, R)
    out = W.zero()
    weight = Fraction(factorial(k - 2 * r), factorial(k + 1))
    for key, c in f.terms.items():
        fs = [R.monomial(e) for e in key]
        for head in combinations(range(k + 1), 2 * r + 1):
            tail = [j for j in range(k + 1) if j not in head]
            sgn = _sign(list(head) + tail)
            prod = R.one()
            for j in head:
                prod = prod * fs[j]
            term = W.lift(prod)
            for j in tail:
                term = term * _df(fs[j], m)
            out = out + term.scale(c * (weight * sgn))
    return out


def lambda_total(f: ASCochain):
    """{k - 2r: lambda_k^{k-2r}(f)} over 2r <= k."""
    return {f.k - 2 * r: lambda_map(f, r) for r in range(f.k // 2 + 1)}


# traced algebras and the map X -----------------------------------------------------

class TracedAlgebra:
    """Unital algebra with an action of polynomial functions and a trace.

    ``act(f_exp, vec)`` multiplies an algebra vector by the monomial x^f_exp;
    ``trace(vec)`` is a linear functional with trace(ab) = trace(ba).
    """

    def __init__(self, ctx: AlgebraContext, m: int, act, trace):
        self.ctx = ctx
        self.m = m
        self.act = act
        self.trace = trace


def matrix_test_algebra(m: int = 2, N: int = 2) -> TracedAlgebra:
    """M_N(Q(i)) (x) Q[x1..xm] with trace = (evaluation at 0) o (matrix trace)."""
    R = coordinate_ring(m)
    base = WeylAlgebra(WeylElement(R.gens, pairs=()))
    ctx = MatrixAlgebra(base, N)
    z = (0,) * m

    def act(e, vec):
        return {(i, j, (_add_exp(k[0], e), k[1])): c for (i, j, k), c in vec.items()}

    def trace(vec):
        acc = ZERO
        for (i, j, k), c in vec.items():
            if i == j and k == (z, ()):
                acc = acc + c
        return acc

    return TracedAlgebra(ctx, m, act, trace)


def chi_cochain(A: TracedAlgebra, f: ASCochain) -> Cochain:
    """X(f)(a_0..a_k) = Tr((f_0 a_0) (f_1 a_1) .. (f_k a_k))."""
    if f.m != A.m:
        raise ContextMismatch("cochain and algebra use different coordinate rings")
    ctx = A.ctx

    def fn(akeys):
        if len(akeys) != f.k + 1:
            raise DegreeError(f"X of a degree {f.k} cochain takes {f.k + 1} slots")
        acc = ZERO
        for fkey, c in f.terms.items():
            prod = ctx.unit
            for e, a in zip(fkey, akeys):
                prod = ctx.mul(prod, A.act(e, {a: ONE}))
            v = A.trace(prod)
            if v:
                acc = acc + c * v
        return acc

    return Cochain(f.k, fn)


def chi_X(A: TracedAlgebra, f: ASCochain, c: Chain) -> Scalar:
    if c.terms and c.degree != f.k:
        raise DegreeError(f"X of a degree {f.k} cochain takes degree {f.k} chains")
    return chi_cochain(A, f)(c)
