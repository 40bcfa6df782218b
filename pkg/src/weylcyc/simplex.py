"""Exact integration over the ordered simplex 0 <= u_1 <= ... <= u_m <= 1,
and the expansion of products of exponentials of pairwise Poisson operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import ContextMismatch, DegreeError
from .poly import Polynomial
from .scalar import Scalar, ZERO


@dataclass(frozen=True)
class SimplexSpec:
    m: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("simplex dimension must be nonnegative")

    @property
    def gens(self):
        return tuple(f"u{i}" for i in range(1, self.m + 1))


def u_ring(m):
    return Polynomial(SimplexSpec(m).gens)


@lru_cache(maxsize=None)
def monomial_integral(exp) -> Fraction:
    """Iterated integral of prod u_i^{exp_i}: integrating u_1 first keeps a monomial at each step."""
    out = Fraction(1)
    acc = 0
    for a in exp:
        acc += a + 1
        out /= acc
    return out


def simplex_integrate(P: Polynomial, spec: SimplexSpec | int) -> Scalar:
    if isinstance(spec, int):
        spec = SimplexSpec(spec)
    gens = spec.gens
    if P.gens != gens:
        stray = [g for g in P.gens if g not in gens and _used(P, g)]
        if stray:
            raise ContextMismatch(f"integrand uses {stray}, outside {gens}")
        P = _restrict(P, gens)
    out = ZERO
    for exp, c in P.terms.items():
        out = out + c * monomial_integral(exp)
    return out


def _used(P, g):
    j = P.gens.index(g)
    return any(e[j] for e in P.terms)


def _restrict(P, gens):
    t = {}
    for exp, c in P.terms.items():
        d = dict(zip(P.gens, exp))
        t[tuple(d.get(g, 0) for g in gens)] = c
    return Polynomial(gens, t)


def lambda_poly(i, j, m) -> Polynomial:
    """u_i - u_j + 1/2 with u_0 = 0 substituted."""
    R = u_ring(m)
    out = R.const(Fraction(1, 2))
    if i:
        out = out + R.var(f"u{i}")
    if j:
        out = out - R.var(f"u{j}")
    return out


@lru_cache(maxsize=None)
def lambda_product_integral(m, pairs, powers) -> Fraction:
    """Integral over Delta^m of prod (u_i - u_j + 1/2)^{n_ij}."""
    acc = {(0,) * m: Fraction(1)}
    for (i, j), k in zip(pairs, powers):
        if not k:
            continue
        # (u_i - u_j + 1/2)^k expanded by the trinomial theorem
        nxt = {}
        for a in range(k + 1):
            for b in range(k - a + 1):
                c = k - a - b
                if (a and not i) or (b and not j):
                    continue
                coef = Fraction(comb(k, a) * comb(k - a, b) * (-1) ** b, 2 ** c)
                for exp, v in acc.items():
                    ne = list(exp)
                    if a:
                        ne[i - 1] += a
                    if b:
                        ne[j - 1] += b
                    ne = tuple(ne)
                    nxt[ne] = nxt.get(ne, 0) + v * coef
        acc = nxt
    return sum((v * monomial_integral(e) for e, v in acc.items()), Fraction(0))


# tensors of monomials ----------------------------------------------------

def alpha_apply_monomial(i, j, slots, pairs):
    """alpha_ij on a tensor of monomials: list of (new slots, integer coefficient)."""
    out = []
    for ip, iq in pairs:
        for di, dj, sign in ((ip, iq, 1), (iq, ip, -1)):
            a, b = slots[i][di], slots[j][dj]
            if not a or not b:
                continue
            new = list(slots)
            si = list(new[i])
            sj = list(new[j])
            si[di] -= 1
            sj[dj] -= 1
            new[i] = tuple(si)
            new[j] = tuple(sj)
            out.append((tuple(new), sign * a * b))
    return out


def alpha_apply(i, j, tensor):
    """alpha_ij on a tensor given as a list of WeylElements; returns dict slots -> Scalar."""
    if not (0 <= i < len(tensor) and 0 <= j < len(tensor)) or i == j:
        raise DegreeError(f"slot indices {(i, j)} invalid for a tensor of length {len(tensor)}")
    pairs = tensor[0].pairs
    out = {}
    for key, c in _expand_tensor(tensor).items():
        for new, k in alpha_apply_monomial(i, j, key, pairs):
            out[new] = out.get(new, ZERO) + c * k
    return {k: v for k, v in out.items() if v}


def _expand_tensor(tensor):
    acc = {(): Scalar.const(1)}
    for f in tensor:
        nxt = {}
        for key, c in acc.items():
            for e, v in f.terms.items():
                nxt[key + (e,)] = c * v
        acc = nxt
    return acc


def ordered_exp_apply(pairs_lams, tensor, m=None):
    """Expand prod exp(hbar * lambda_ij * alpha_ij) on a tensor of WeylElements.

    ``pairs_lams`` is a list of ((i, j), lambda) with lambda a Polynomial in
    u_1..u_m.  Returns a dict mapping monomial slot tuples to Polynomial
    coefficients in u (with hbar inside the Scalar coefficients).  Each
    exponential is expanded to the order where alpha exhausts the degrees.
    """
    if not tensor:
        return {}
    L = len(tensor)
    for (i, j), _ in pairs_lams:
        if not (0 <= i < L and 0 <= j < L) or i == j:
            raise DegreeError(f"slot indices {(i, j)} invalid for a tensor of length {L}")
    wpairs = tensor[0].pairs
    R = pairs_lams[0][1].zero() if pairs_lams else u_ring(m or 0)
    state = {k: R.const(c) for k, c in _expand_tensor(tensor).items()}
    for (i, j), lam in pairs_lams:
        new = {}
        cur = state
        t = 0
        hl = lam.scale(Scalar.hbar(1))
        power = R.one()
        while cur:
            for k, c in cur.items():
                v = c * power * Fraction(1, factorial(t))
                new[k] = new[k] + v if k in new else v
            nxt = {}
            for k, c in cur.items():
                for k2, coef in alpha_apply_monomial(i, j, k, wpairs):
                    v = c * coef
                    nxt[k2] = nxt[k2] + v if k2 in nxt else v
            cur = {k: v for k, v in nxt.items() if v}
            t += 1
            power = power * hl
        state = {k: v for k, v in new.items() if v}
    return state
