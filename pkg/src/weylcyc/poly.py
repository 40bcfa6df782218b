"""Sparse commutative polynomials with Scalar coefficients."""

from __future__ import annotations

from fractions import Fraction

from .errors import ContextMismatch
from .scalar import Scalar, ZERO


def grlex_key(exp):
    """Sort key putting higher total degree first, then lexicographically larger."""
    return (-sum(exp), tuple(-e for e in exp))


class Polynomial:
    """Polynomial in ordered commuting generators.

    ``terms`` maps exponent tuples (one entry per generator) to nonzero Scalars.
    Subclasses override ``__mul__`` for a different algebra product; every
    other operation returns an instance of the same class with the same
    context.
    """

    __slots__ = ("gens", "_t", "_h")

    def __init__(self, gens, terms=None):
        self.gens = tuple(gens)
        t = {}
        if terms:
            m = len(self.gens)
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != m or any(e < 0 for e in exp):
                    raise ContextMismatch(f"exponent {exp} does not fit generators {self.gens}")
                c = Scalar.coerce(c)
                if c:
                    prev = t.get(exp)
                    c = c if prev is None else prev + c
                    if c:
                        t[exp] = c
                    else:
                        del t[exp]
        self._t = t
        self._h = None

    def _new(self, t):
        out = object.__new__(type(self))
        out.gens = self.gens
        out._t = t
        out._h = None
        out._post_new(self)
        return out

    def _post_new(self, parent):
        pass

    # constructors -----------------------------------------------------
    def zero(self):
        return self._new({})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = Scalar.coerce(c)
        return self._new({(0,) * len(self.gens): c} if c else {})

    def var(self, name):
        exp = [0] * len(self.gens)
        exp[self.index(name)] = 1
        return self._new({tuple(exp): Scalar.const(1)})

    def monomial(self, exp, c=1):
        c = Scalar.coerce(c)
        exp = tuple(exp)
        if len(exp) != len(self.gens):
            raise ContextMismatch(f"exponent {exp} does not fit generators {self.gens}")
        return self._new({exp: c} if c else {})

    # inspection -------------------------------------------------------
    def index(self, name) -> int:
        try:
            return self.gens.index(name)
        except ValueError:
            raise ContextMismatch(f"unknown generator {name!r}; context is {self.gens}") from None

    @property
    def terms(self):
        return dict(self._t)

    def items(self):
        return sorted(self._t.items(), key=lambda kv: grlex_key(kv[0]))

    def is_zero(self):
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def is_scalar(self):
        z = (0,) * len(self.gens)
        return all(e == z for e in self._t)

    def degree(self):
        return max((sum(e) for e in self._t), default=-1)

    def homogeneous_part(self, d):
        return self._new({e: c for e, c in self._t.items() if sum(e) == d})

    def eval_at_zero(self) -> Scalar:
        return self._t.get((0,) * len(self.gens), ZERO)

    def _check(self, other):
        if not isinstance(other, Polynomial) or other.gens != self.gens:
            raise ContextMismatch("polynomials live over different generator contexts")

    # linear structure -------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = self.const(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        t = dict(self._t)
        for e, c in other._t.items():
            prev = t.get(e)
            if prev is None:
                t[e] = c
            else:
                s = prev + c
                if s:
                    t[e] = s
                else:
                    del t[e]
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = self.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.const(other) - self

    def scale(self, c):
        c = Scalar.coerce(c)
        if not c:
            return self._new({})
        return self._new({e: v * c for e, v in self._t.items() if v * c})

    # products ---------------------------------------------------------
    def pointwise(self, other):
        """Commutative product of the underlying polynomials."""
        self._check(other)
        t = {}
        for e1, c1 in self._t.items():
            for e2, c2 in other._t.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                prev = t.get(e)
                t[e] = c if prev is None else prev + c
        return self._new({e: c for e, c in t.items() if c})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return self.pointwise(other)
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = self.one()
        for _ in range(k):
            out = out * self
        return out

    # calculus ---------------------------------------------------------
    def partial(self, name, times=1):
        j = self.index(name)
        t = {}
        for e, c in self._t.items():
            if e[j] < times:
                continue
            f = 1
            for r in range(times):
                f *= e[j] - r
            ne = e[:j] + (e[j] - times,) + e[j + 1:]
            t[ne] = c * f
        return self._new(t)

    def substitute(self, images):
        """Algebra map sending generator ``g`` to ``images[g]`` (same-class elements).

        Uses the product of the image class, so for commutative polynomials this
        is ordinary substitution.
        """
        out = None
        cache = {}
        for e, c in self._t.items():
            term = None
            for g, k in zip(self.gens, e):
                if not k:
                    continue
                key = (g, k)
                if key not in cache:
                    cache[key] = images[g].pointwise_power(k)
                term = cache[key] if term is None else term.pointwise(cache[key])
            if term is None:
                img = next(iter(images.values()))
                term = img.const(1)
            term = term.scale(c)
            out = term if out is None else out + term
        if out is None:
            return next(iter(images.values())).zero()
        return out

    def pointwise_power(self, k):
        out = self.one()
        for _ in range(k):
            out = out.pointwise(self)
        return out

    # comparison and printing ------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.gens == other.gens and self._t == other._t
        if isinstance(other, (int, Fraction, Scalar)):
            return self._t == self.const(other)._t
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.gens, frozenset(self._t.items())))
        return self._h

    def monomial_str(self, exp):
        parts = []
        for g, k in zip(self.gens, exp):
            if k == 1:
                parts.append(g)
            elif k:
                parts.append(f"{g}^{k}")
        return "*".join(parts)

    def __str__(self):
        if not self._t:
            return "0"
        out = []
        for exp, c in self.items():
            mono = self.monomial_str(exp)
            cs = str(c)
            if len(c.terms) > 1:
                cs = f"({cs})"
            if not mono:
                piece = cs
            elif cs == "1":
                piece = mono
            elif cs == "-1":
                piece = "-" + mono
            else:
                piece = f"{cs}*{mono}"
            out.append(piece)
        s = out[0]
        for p in out[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    def __repr__(self):
        return f"{type(self).__name__}({self})"
