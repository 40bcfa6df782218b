"""Exterior algebra Lambda(dx_1..dx_m) tensored with a coefficient algebra.

Coefficients are any ``Polynomial`` (or subclass).  Their ``*`` is used for
the coefficient product, so with Weyl coefficients the product is the
fiberwise star product.  Coefficients have even degree, hence the only
Koszul signs come from reordering the dx generators.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ContextMismatch
from .scalar import Scalar


def merge_sign(a, b):
    """Sign and sorted union of two increasing index tuples, or (0, None) if they overlap."""
    if set(a) & set(b):
        return 0, None
    inv = 0
    for x in a:
        for y in b:
            if y < x:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(a + b))


class GradedElement:
    """Finite sum of coefficient * dx_I with I an increasing tuple of indices in 0..m-1."""

    __slots__ = ("m", "proto", "form", "_h")

    def __init__(self, m, proto, form=None):
        self.m = m
        self.proto = proto.zero()
        f = {}
        if form:
            for idx, c in form.items():
                idx = tuple(idx)
                if list(idx) != sorted(set(idx)) or any(not 0 <= j < m for j in idx):
                    raise ContextMismatch(f"bad exterior index {idx} for m={m}")
                if c.gens != self.proto.gens:
                    raise ContextMismatch("coefficient context mismatch")
                if c:
                    f[idx] = f[idx] + c if idx in f else c
                    if not f[idx]:
                        del f[idx]
        self.form = f
        self._h = None

    def _new(self, f):
        out = object.__new__(GradedElement)
        out.m = self.m
        out.proto = self.proto
        out.form = f
        out._h = None
        return out

    # constructors -----------------------------------------------------
    @classmethod
    def from_coeff(cls, m, c):
        return cls(m, c, {(): c})

    def lift(self, c):
        return self._new({(): c} if c else {})

    def dx(self, j):
        return self._new({(j,): self.proto.one()})

    def zero(self):
        return self._new({})

    def one(self):
        return self._new({(): self.proto.one()})

    # inspection -------------------------------------------------------
    @property
    def base(self):
        """Form-degree-zero part."""
        return self.form.get((), self.proto)

    def is_zero(self):
        return not self.form

    def __bool__(self):
        return bool(self.form)

    def degrees(self):
        return {len(i) for i in self.form}

    def degree(self):
        """Form degree of a homogeneous element (zero counts as degree 0)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("element is not homogeneous")
        return ds.pop() if ds else 0

    def part(self, d):
        return self._new({i: c for i, c in self.form.items() if len(i) == d})

    def coeff(self, idx):
        return self.form.get(tuple(idx), self.proto)

    def _check(self, other):
        if not isinstance(other, GradedElement) or other.m != self.m or other.proto.gens != self.proto.gens:
            raise ContextMismatch("graded elements over different contexts")

    # algebra ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        self._check(other)
        f = dict(self.form)
        for i, c in other.form.items():
            if i in f:
                s = f[i] + c
                if s:
                    f[i] = s
                else:
                    del f[i]
            else:
                f[i] = c
        return self._new(f)

    def __neg__(self):
        return self._new({i: -c for i, c in self.form.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = Scalar.coerce(s)
        out = {}
        for i, c in self.form.items():
            v = c.scale(s)
            if v:
                out[i] = v
        return self._new(out)

    def map_coeffs(self, fn):
        out = {}
        for i, c in self.form.items():
            v = fn(c)
            if v:
                out[i] = v
        return self._new(out)

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, GradedElement):
            return NotImplemented
        self._check(other)
        f = {}
        for i, a in self.form.items():
            for j, b in other.form.items():
                s, k = merge_sign(i, j)
                if not s:
                    continue
                c = a * b
                if s < 0:
                    c = -c
                if k in f:
                    c = f[k] + c
                if c:
                    f[k] = c
                elif k in f:
                    del f[k]
        return self._new(f)

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    wedge = __mul__

    def graded_commutator(self, other):
        """[a, b] = ab - (-1)^{|a||b|} ba, extended bilinearly over homogeneous parts."""
        out = self.zero()
        for da in self.degrees():
            a = self.part(da)
            for db in other.degrees():
                b = other.part(db)
                t = b * a
                out = out + a * b - (t if (da * db) % 2 == 0 else -t)
        return out

    def d(self, var_of_form):
        """Exterior derivative where dx_j differentiates coefficient variable ``var_of_form[j]``."""
        out = self.zero()
        for i, c in self.form.items():
            for j in range(self.m):
                dc = c.partial(var_of_form[j])
                if not dc:
                    continue
                out = out + self._new({(j,): dc}) * self._new({i: self.proto.one()})
        return out

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GradedElement):
            return self.m == other.m and self.form == other.form
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.m, frozenset(self.form.items())))
        return self._h

    def __str__(self):
        if not self.form:
            return "0"
        parts = []
        for i in sorted(self.form, key=lambda t: (len(t), t)):
            c = self.form[i]
            w = "*".join(f"dx{j + 1}" for j in i)
            parts.append(f"({c})" + (f"*{w}" if w else ""))
        return " + ".join(parts)

    __repr__ = __str__
