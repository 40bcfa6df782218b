"""Algebra contexts: a basis-level interface for Hochschild computations.

A context fixes a basis of an algebra.  Elements are sparse vectors
``{key: Scalar}``; chains are sparse combinations of key tuples, so equal
tensors cancel syntactically and ``b b c == 0`` can be checked exactly.
"""

from __future__ import annotations


from .errors import ContextMismatch
from .graded import GradedElement, merge_sign
from .poly import Polynomial
from .scalar import Scalar, ONE, ZERO
from .weyl import WeylElement, WeylContext, _mono_star


def vec_add(acc, vec, scale=ONE):
    for k, v in vec.items():
        w = v * scale if scale != ONE else v
        if k in acc:
            s = acc[k] + w
            if s:
                acc[k] = s
            else:
                del acc[k]
        elif w:
            acc[k] = w
    return acc


class AlgebraContext:
    """Abstract basis-level algebra.

    Subclasses implement ``mul_keys``, ``unit``, ``to_vec`` and ``to_element``.
    ``degree_key`` is the grading (0 for ungraded algebras).  ``gamma_key``
    and ``nabla_key`` are optional.
    """

    graded = False
    unit: dict

    def mul_keys(self, k1, k2) -> dict:
        raise NotImplementedError

    def degree_key(self, k) -> int:
        return 0

    def gamma_key(self, k) -> dict:
        raise ContextMismatch("context has no automorphism")

    def nabla_key(self, k) -> dict:
        raise ContextMismatch("context has no derivation")

    def is_unit_key(self, k) -> bool:
        return len(self.unit) == 1 and k in self.unit

    def is_scalar_vec(self, vec) -> bool:
        """True if vec is a Scalar multiple of the unit."""
        if not vec:
            return True
        (uk, uc), *rest = self.unit.items()
        if rest:
            ratio = None
            for k, c in self.unit.items():
                v = vec.get(k)
                if v is None:
                    return False
                r = v * c.inv()
                if ratio is None:
                    ratio = r
                elif r != ratio:
                    return False
            return len(vec) == len(self.unit)
        return len(vec) == 1 and uk in vec

    def mul(self, x: dict, y: dict) -> dict:
        out = {}
        for k1, c1 in x.items():
            for k2, c2 in y.items():
                vec_add(out, self.mul_keys(k1, k2), c1 * c2)
        return out

    def gamma(self, x: dict) -> dict:
        out = {}
        for k, c in x.items():
            vec_add(out, self.gamma_key(k), c)
        return out

    def nabla(self, x: dict) -> dict:
        out = {}
        for k, c in x.items():
            vec_add(out, self.nabla_key(k), c)
        return out

    def graded_commutator(self, x: dict, y: dict) -> dict:
        out = {}
        for k1, c1 in x.items():
            d1 = self.degree_key(k1)
            for k2, c2 in y.items():
                c = c1 * c2
                vec_add(out, self.mul_keys(k1, k2), c)
                sign = -1 if (d1 * self.degree_key(k2)) % 2 else 1
                vec_add(out, self.mul_keys(k2, k1), c * (-sign))
        return out

    def to_vec(self, x) -> dict:
        raise NotImplementedError

    def to_element(self, vec: dict):
        raise NotImplementedError


class WeylAlgebra(AlgebraContext):
    """(W_{2n} with central parameters) tensor Lambda(dx_1..dx_m).

    Keys are (exponent tuple, increasing form-index tuple).  With m = 0 and no
    parameters this is the plain Weyl algebra; with no symplectic pairs it is
    a commutative polynomial algebra.
    """

    def __init__(self, proto: Polynomial | WeylContext, m: int = 0, twist=None, nabla=None):
        if isinstance(proto, WeylContext):
            proto = proto.zero()
        if not isinstance(proto, WeylElement):
            proto = WeylElement(proto.gens, pairs=())
        self.proto = proto.zero()
        self.gens = proto.gens
        self.pairs = proto.pairs
        self.m = m
        self.graded = m > 0
        z = (0,) * len(self.gens)
        self.unit_key = (z, ())
        self.unit = {self.unit_key: ONE}
        self.twist = twist
        self._nabla = nabla
        self._mul_cache = {}
        self._gamma_cache = {}
        self._nabla_cache = {}

    def __eq__(self, other):
        return (isinstance(other, WeylAlgebra) and self.gens == other.gens and self.pairs == other.pairs
                and self.m == other.m and self.twist == other.twist)

    def __hash__(self):
        return hash((self.gens, self.pairs, self.m))

    def is_unit_key(self, k):
        return k == self.unit_key

    def is_scalar_vec(self, vec):
        return not vec or (len(vec) == 1 and self.unit_key in vec)

    def degree_key(self, k):
        return len(k[1])

    def mul_keys(self, k1, k2):
        key = (k1, k2)
        r = self._mul_cache.get(key)
        if r is not None:
            return r
        (e1, f1), (e2, f2) = k1, k2
        sign, f = merge_sign(f1, f2) if (f1 or f2) else (1, ())
        out = {}
        if sign:
            for (exp, h), q in _mono_star(e1, e2, self.pairs):
                c = Scalar.const(q if sign > 0 else -q, 0, h)
                vec_add(out, {(exp, f): c})
        self._mul_cache[key] = out
        return out

    def gamma_key(self, k):
        if self.twist is None:
            raise ContextMismatch("context has no automorphism")
        r = self._gamma_cache.get(k)
        if r is None:
            e, f = k
            img = self.twist(self.proto.monomial(e))
            r = {(ee, f): c for ee, c in img.terms.items()}
            self._gamma_cache[k] = r
        return r

    def nabla_key(self, k):
        if self._nabla is None:
            raise ContextMismatch("context has no derivation")
        r = self._nabla_cache.get(k)
        if r is None:
            r = self.to_vec(self._nabla(self.key_element(k)))
            self._nabla_cache[k] = r
        return r

    def key_element(self, k):
        e, f = k
        c = self.proto.monomial(e)
        if self.m == 0:
            return c
        return GradedElement(self.m, self.proto, {f: c})

    def to_vec(self, x) -> dict:
        if isinstance(x, GradedElement):
            out = {}
            for f, c in x.form.items():
                for e, v in c.terms.items():
                    out[(e, f)] = v
            return out
        if isinstance(x, Polynomial):
            if x.gens != self.gens:
                raise ContextMismatch("element outside this algebra")
            return {(e, ()): v for e, v in x.terms.items()}
        x = Scalar.coerce(x)
        return {self.unit_key: x} if x else {}

    def to_element(self, vec):
        if self.m == 0:
            return self.proto._new({k[0]: v for k, v in vec.items()})
        forms = {}
        for (e, f), v in vec.items():
            forms.setdefault(f, {})[e] = v
        return GradedElement(self.m, self.proto, {f: self.proto._new(t) for f, t in forms.items()})


class MatrixAlgebra(AlgebraContext):
    """M_N(base).  Keys are (i, j, base key); the unit is sum_i E_ii tensor 1."""

    def __init__(self, base: AlgebraContext, N: int, twist=None):
        self.base = base
        self.N = N
        self.graded = base.graded
        self.unit = {}
        for i in range(N):
            for k, c in base.unit.items():
                self.unit[(i, i, k)] = c
        self.twist = twist
        self._cache = {}

    def degree_key(self, k):
        return self.base.degree_key(k[2])

    def is_unit_key(self, k):
        return self.N == 1 and self.base.is_unit_key(k[2])

    def mul_keys(self, k1, k2):
        r = self._cache.get((k1, k2))
        if r is None:
            i, j, a = k1
            jj, l, b = k2
            r = {} if j != jj else {(i, l, k): c for k, c in self.base.mul_keys(a, b).items()}
            self._cache[(k1, k2)] = r
        return r

    def gamma_key(self, k):
        i, j, a = k
        return {(i, j, kk): c for kk, c in self.base.gamma_key(a).items()}

    def nabla_key(self, k):
        i, j, a = k
        return {(i, j, kk): c for kk, c in self.base.nabla_key(a).items()}

    def embed(self, i, j, x) -> dict:
        """Vector of E_ij tensor x."""
        return {(i, j, k): c for k, c in self.base.to_vec(x).items()}

    def to_vec(self, M) -> dict:
        out = {}
        for i in range(self.N):
            for j in range(self.N):
                vec_add(out, self.embed(i, j, M[i, j]))
        return out

    def to_element(self, vec):
        from .matrix import Matrix
        rows = [[{} for _ in range(self.N)] for _ in range(self.N)]
        for (i, j, k), c in vec.items():
            rows[i][j][k] = c
        return Matrix([[self.base.to_element(v) for v in r] for r in rows])


class ScalarAlgebra(AlgebraContext):
    """The ground ring itself, basis {1}."""

    def __init__(self):
        self.unit = {(): ONE}

    def mul_keys(self, k1, k2):
        return {(): ONE}

    def is_unit_key(self, k):
        return True

    def to_vec(self, x):
        x = Scalar.coerce(x)
        return {(): x} if x else {}

    def to_element(self, vec):
        return vec.get((), ZERO)
