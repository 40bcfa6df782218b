"""Chern characters of idempotents and their pairing with (b+B)-cocycles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .algebras import AlgebraContext, MatrixAlgebra, ScalarAlgebra, WeylAlgebra, vec_add
from .errors import DegreeError, NotIdempotent
from .homalg import Chain, MatrixTraceCochain, cochain_B, cochain_b
from .matrix import Matrix
from .scalar import Scalar, ZERO
from .tau import TauCochain, weyl_algebra
from .weyl import WeylElement


class Idempotent:
    """Square matrix e with e e = e over ``base`` (scalars by default)."""

    def __init__(self, e: Matrix, base: AlgebraContext | None = None):
        if not e.is_square():
            raise NotIdempotent("idempotent must be square")
        if base is None:
            w = next((x for r in e.a for x in r if isinstance(x, WeylElement)), None)
            base = WeylAlgebra(w.zero()) if w is not None else ScalarAlgebra()
        self.e = e
        self.base = base
        self.ctx = MatrixAlgebra(base, e.rows)
        self.vec = self._vec(e)
        if self.ctx.mul(self.vec, self.vec) != self.vec:
            raise NotIdempotent("e * e != e")

    def _vec(self, M):
        out = {}
        for i in range(M.rows):
            for j in range(M.cols):
                vec_add(out, self.ctx.embed(i, j, M[i, j]))
        return out

    def over(self, base: AlgebraContext) -> "Idempotent":
        """The same matrix viewed over another unital algebra (scalar entries embed)."""
        return Idempotent(self.e, base)

    @property
    def rank_trace(self):
        """Trace of the constant part of e."""
        acc = ZERO
        for (i, j, k), c in self.vec.items():
            if i == j and self.base.is_unit_key(k):
                acc = acc + c
        return acc


def chern_chain(e: Idempotent, k: int):
    """(c_0, ..., c_k) with c_0 = e and c_i = (-1)^i (2i)!/i! (e - 1/2) (x) e^{(x) 2i}."""
    if k < 0:
        raise DegreeError("k must be nonnegative")
    chains = [Chain(e.ctx, {(key,): c for key, c in e.vec.items()})]
    shifted = dict(e.vec)
    vec_add(shifted, e.ctx.unit, Scalar.const(Fraction(-1, 2)))
    for i in range(1, k + 1):
        coef = Fraction((-1) ** i * factorial(2 * i), factorial(i))
        chains.append(Chain.tensor(e.ctx, [shifted] + [e.vec] * (2 * i), coef))
    return tuple(chains)


@dataclass(frozen=True)
class TotCocycle:
    """(phi_0, phi_2, ..., phi_2k) on one algebra."""

    parts: tuple
    base: AlgebraContext | None = None

    def __post_init__(self):
        for i, phi in enumerate(self.parts):
            if phi.degree is not None and phi.degree != 2 * i:
                raise DegreeError(f"component {i} has degree {phi.degree}, expected {2 * i}")

    def defect(self, chains_by_degree):
        """Values of b phi_2i + B phi_2i+2 on the given chains (one list per odd degree 2i+1)."""
        out = []
        for i, chains in enumerate(chains_by_degree):
            b = cochain_b(self.parts[i]) if i < len(self.parts) else None
            B = cochain_B(self.parts[i + 1]) if i + 1 < len(self.parts) else None
            for c in chains:
                v = ZERO
                if b is not None:
                    v = v + b(c)
                if B is not None:
                    v = v + B(c)
                out.append(v)
        return out


def tau_cocycle(n: int) -> TotCocycle:
    return TotCocycle(tuple(TauCochain(n, k) for k in range(n + 1)), weyl_algebra(n))


def pair(phi: TotCocycle, e: Idempotent) -> Scalar:
    """sum_l phi_2l # tr (c_l) over the Chern character of e."""
    base = phi.base if phi.base is not None else getattr(phi.parts[0], "algebra", None)
    if base is not None and isinstance(e.base, ScalarAlgebra):
        e = e.over(base)
    chains = chern_chain(e, len(phi.parts) - 1)
    acc = ZERO
    for cochain, c in zip(phi.parts, chains):
        v = MatrixTraceCochain(cochain, e.ctx.N)(c)
        if v:
            acc = acc + v
    return acc


def pair_difference(phi: TotCocycle, P1: Idempotent, P2: Idempotent) -> Scalar:
    return pair(phi, P1) - pair(phi, P2)
