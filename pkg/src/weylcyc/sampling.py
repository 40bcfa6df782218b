"""Seeded random generators for Weyl elements, chains and sections."""

from __future__ import annotations

import random

from .algebras import vec_add
from .homalg import Chain
from .scalar import Scalar
from .weyl import WeylContext, WeylElement


def random_weyl(rng: random.Random, W: WeylContext, max_degree: int = 2, nterms: int = 2,
                coef_range: int = 3) -> WeylElement:
    """Sum of ``nterms`` random monomials of degree <= max_degree; never zero."""
    mons = W.monomials_up_to(max_degree)
    f = W.zero()
    for _ in range(nterms):
        f = f + W.monomial(rng.choice(mons), rng.randint(-coef_range, coef_range))
    return f if f else W.monomial(rng.choice(mons), 1)


def random_gaussian(rng: random.Random, r: int = 3) -> Scalar:
    return Scalar.const(rng.randint(-r, r), rng.randint(-r, r) if rng.random() < 0.3 else 0)


def random_chain(rng: random.Random, ctx, W: WeylContext, degree: int, max_degree: int = 2,
                 nterms: int = 2) -> Chain:
    return Chain.tensor(ctx, [ctx.to_vec(random_weyl(rng, W, max_degree, nterms)) for _ in range(degree + 1)])


def random_base_poly(rng: random.Random, R, max_degree: int = 2, nterms: int = 2):
    m = len(R.gens)
    f = R.zero()
    for _ in range(nterms):
        e = [0] * m
        for _ in range(rng.randint(0, max_degree)):
            e[rng.randrange(m)] += 1
        f = f + R.monomial(tuple(e), rng.randint(-2, 2))
    return f if f else R.one()


def random_section(rng: random.Random, bundle, max_degree: int = 2, nterms: int = 3, forms: bool = True) -> dict:
    """Random section of the flat Weyl bundle, mixing x, y and dx."""
    V = 2 * bundle.n
    idx_choices = [()] + [(j,) for j in range(V)] + [(a, b) for a in range(V) for b in range(a + 1, V)]
    out = {}
    for _ in range(nterms):
        xe = [rng.randint(0, 1) for _ in range(V)]
        ye = [0] * V
        for _ in range(rng.randint(0, max_degree)):
            ye[rng.randrange(V)] += 1
        f = rng.choice(idx_choices) if forms else ()
        vec_add(out, bundle.monomial(xe, ye, f, rng.randint(-2, 2)))
    return out
