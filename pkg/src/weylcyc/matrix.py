"""Dense matrices over a ring whose elements support ``+``, ``-`` and ``*``.

Entries are usually ``Scalar`` (for Q(i) matrices and matrix traces) or
``WeylElement``.  Inversion and determinants need Scalar entries that are
hbar-free, i.e. honest Gaussian rationals.
"""

from __future__ import annotations

from .errors import ContextMismatch, DetSingular
from .scalar import Scalar, ZERO, ONE


class Matrix:
    __slots__ = ("rows", "cols", "a")

    def __init__(self, entries):
        a = [list(r) for r in entries]
        if not a or not a[0]:
            raise ValueError("matrix must have positive dimensions")
        if any(len(r) != len(a[0]) for r in a):
            raise ValueError("ragged matrix")
        self.rows = len(a)
        self.cols = len(a[0])
        self.a = [[Scalar.coerce(x) if isinstance(x, int) else x for x in r] for r in a]

    @classmethod
    def identity(cls, n, one=ONE, zero=ZERO):
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r, c, zero=ZERO):
        return cls([[zero] * c for _ in range(r)])

    @classmethod
    def unit(cls, n, i, j, one=ONE, zero=ZERO):
        """Matrix unit E_ij."""
        return cls([[one if (r, c) == (i, j) else zero for c in range(n)] for r in range(n)])

    @classmethod
    def diag(cls, vals, zero=ZERO):
        n = len(vals)
        return cls([[vals[i] if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.a[i][j]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_square(self):
        return self.rows == self.cols

    def __add__(self, other):
        if self.shape != other.shape:
            raise ContextMismatch(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.a, other.a)])

    def __neg__(self):
        return Matrix([[-x for x in r] for r in self.a])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ContextMismatch(f"cannot multiply {self.shape} by {other.shape}")
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = None
                    for k in range(self.cols):
                        t = self.a[i][k] * other.a[k][j]
                        acc = t if acc is None else acc + t
                    row.append(acc)
                out.append(row)
            return Matrix(out)
        return Matrix([[x * other for x in r] for r in self.a])

    def __rmul__(self, other):
        return Matrix([[other * x for x in r] for r in self.a])

    def __pow__(self, k):
        n = self.rows
        out = Matrix.identity(n, one=_one_like(self.a[0][0]), zero=_zero_like(self.a[0][0]))
        for _ in range(k):
            out = out * self
        return out

    def transpose(self):
        return Matrix([[self.a[i][j] for i in range(self.rows)] for j in range(self.cols)])

    T = property(transpose)

    def trace(self):
        if not self.is_square():
            raise ContextMismatch("trace of a non-square matrix")
        acc = self.a[0][0]
        for i in range(1, self.rows):
            acc = acc + self.a[i][i]
        return acc

    def map(self, fn):
        return Matrix([[fn(x) for x in r] for r in self.a])

    def conj_transpose(self):
        return Matrix([[self.a[i][j].conj() for i in range(self.rows)] for j in range(self.cols)])

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.a == other.a

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.a))

    def is_zero(self):
        return all(not x for r in self.a for x in r)

    # field operations (Scalar entries, hbar-free in practice) -----------
    def _reduce(self, rhs=None):
        """Gauss-Jordan elimination; returns (det, inverse or None)."""
        if not self.is_square():
            raise ContextMismatch("determinant of a non-square matrix")
        n = self.rows
        m = [list(r) for r in self.a]
        inv = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        det = ONE
        for col in range(n):
            piv = next((r for r in range(col, n) if m[r][col]), None)
            if piv is None:
                return ZERO, None
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                inv[col], inv[piv] = inv[piv], inv[col]
                det = -det
            p = m[col][col]
            det = det * p
            pinv = p.inv()
            m[col] = [x * pinv for x in m[col]]
            inv[col] = [x * pinv for x in inv[col]]
            for r in range(n):
                if r != col and m[r][col]:
                    f = m[r][col]
                    m[r] = [x - f * y for x, y in zip(m[r], m[col])]
                    inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
        return det, Matrix(inv)

    def det(self):
        return self._reduce()[0]

    def inverse(self):
        det, inv = self._reduce()
        if inv is None:
            raise DetSingular("matrix is singular")
        return inv

    def __str__(self):
        return "[" + "; ".join(", ".join(str(x) for x in r) for r in self.a) + "]"

    __repr__ = __str__


def _one_like(x):
    return x.one() if hasattr(x, "one") else ONE


def _zero_like(x):
    return x.zero() if hasattr(x, "zero") else ZERO
