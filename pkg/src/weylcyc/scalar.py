"""Laurent polynomials in hbar with Gaussian-rational coefficients.

This is the ground ring for every computation in the package.  Values are
immutable; all arithmetic is exact (``fractions.Fraction`` underneath).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import NotAUnit

ZERO_Q = Fraction(0)
ONE_Q = Fraction(1)


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to an exact rational")


def gmul(a, b):
    """Product of Gaussian rationals given as (re, im) pairs."""
    ar, ai = a
    br, bi = b
    if not ai and not bi:
        return (ar * br, ZERO_Q)
    return (ar * br - ai * bi, ar * bi + ai * br)


def ginv(a):
    ar, ai = a
    norm = ar * ar + ai * ai
    if not norm:
        raise NotAUnit("zero has no inverse")
    return (ar / norm, -ai / norm)


def fmt_q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_gauss(c) -> str:
    re, im = c
    if not im:
        return fmt_q(re)
    if not re:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        return f"{fmt_q(im)}*i"
    sign = "-" if im < 0 else "+"
    mag = -im if im < 0 else im
    tail = "i" if mag == 1 else f"{fmt_q(mag)}*i"
    return f"({fmt_q(re)} {sign} {tail})"


class Scalar:
    """Element of Q(i)[hbar, hbar^-1].

    ``terms`` maps an hbar exponent to an (re, im) pair of Fractions.  Zero
    coefficients are never stored, so the zero scalar has an empty map.
    """

    __slots__ = ("_t", "_h")

    def __init__(self, terms=None):
        t = {}
        if terms:
            for e, c in terms.items():
                re, im = _q(c[0]), _q(c[1])
                if re or im:
                    t[int(e)] = (re, im)
        self._t = t
        self._h = None

    @classmethod
    def _raw(cls, t):
        s = cls.__new__(cls)
        s._t = t
        s._h = None
        return s

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, re=0, im=0, hbar_exp=0) -> "Scalar":
        re, im = _q(re), _q(im)
        if not re and not im:
            return cls._raw({})
        return cls._raw({int(hbar_exp): (re, im)})

    @classmethod
    def hbar(cls, k: int = 1) -> "Scalar":
        return cls._raw({int(k): (ONE_Q, ZERO_Q)})

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating-point complex values are not exact")
        return cls.const(x)

    # inspection -------------------------------------------------------
    @property
    def terms(self):
        return dict(self._t)

    def items(self):
        return sorted(self._t.items())

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def is_constant(self) -> bool:
        """True when only the hbar^0 coefficient can be nonzero."""
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def coeff(self, e: int):
        return self._t.get(e, (ZERO_Q, ZERO_Q))

    def min_exp(self):
        return min(self._t) if self._t else None

    def max_exp(self):
        return max(self._t) if self._t else None

    def is_real(self) -> bool:
        return all(not im for _, im in self._t.values())

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for e, (br, bi) in other._t.items():
            c = t.get(e)
            if c is None:
                t[e] = (br, bi)
            else:
                re, im = c[0] + br, c[1] + bi
                if re or im:
                    t[e] = (re, im)
                else:
                    del t[e]
        return Scalar._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw({e: (-re, -im) for e, (re, im) in self._t.items()})

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return Scalar._raw({})
                q = _q(other)
                return Scalar._raw({e: (re * q, im * q) for e, (re, im) in self._t.items()})
            return NotImplemented
        if not self._t or not other._t:
            return Scalar._raw({})
        t = {}
        for e1, c1 in self._t.items():
            for e2, c2 in other._t.items():
                re, im = gmul(c1, c2)
                e = e1 + e2
                c = t.get(e)
                if c is not None:
                    re, im = re + c[0], im + c[1]
                t[e] = (re, im)
        return Scalar._raw({e: c for e, c in t.items() if c[0] or c[1]})

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        """Inverse of a unit c*hbar^m; anything with several hbar terms raises NotAUnit."""
        if len(self._t) != 1:
            raise NotAUnit(f"{self} is not a unit in Q(i)[hbar, 1/hbar]")
        (e, c), = self._t.items()
        return Scalar._raw({-e: ginv(c)})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise NotAUnit("division by zero")
            return self * (ONE_Q / _q(other))
        if isinstance(other, Scalar):
            return self * other.inv()
        return NotImplemented

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        out = Scalar.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "Scalar":
        return Scalar._raw({e: (re, -im) for e, (re, im) in self._t.items()})

    def shift(self, k: int) -> "Scalar":
        """Multiply by hbar^k."""
        return Scalar._raw({e + k: c for e, c in self._t.items()})

    def scale_gauss(self, c) -> "Scalar":
        if not c[0] and not c[1]:
            return Scalar._raw({})
        return Scalar._raw({e: gmul(v, c) for e, v in self._t.items()})

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self._t == other._t
        try:
            return self._t == Scalar.coerce(other)._t
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    # printing ---------------------------------------------------------
    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for e, c in sorted(self._t.items(), reverse=True):
            coef = fmt_gauss(c)
            if e == 0:
                parts.append(coef)
                continue
            h = "hbar" if e == 1 else f"hbar^{e}"
            if coef == "1":
                parts.append(h)
            elif coef == "-1":
                parts.append("-" + h)
            else:
                parts.append(f"{coef}*{h}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"Scalar({self})"


ZERO = Scalar()
ONE = Scalar.const(1)
I = Scalar.const(0, 1)
HBAR = Scalar.hbar(1)
