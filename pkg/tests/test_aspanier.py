import random
from fractions import Fraction

import pytest

from weylcyc import ONE, ZERO, Scalar
from weylcyc.aspanier import (ASCochain, antisymmetrize, as_B, as_coface, as_cyclic_t, as_degeneracies,
                              as_degeneracy, as_delta, as_delta_prime, as_epsilon, as_extra_degeneracy_at,
                              as_extra_degeneracy_wrap, as_iota, as_N, chi_cochain, chi_X, coordinate_ring,
                              form_d, form_ring, is_cyclic, lambda_map, lambda_total, matrix_test_algebra)
from weylcyc.errors import DegreeError
from weylcyc.graded import GradedElement
from weylcyc.homalg import Chain, cochain_B, cochain_b
from weylcyc.sampling import random_base_poly

M = 2
R = coordinate_ring(M)
x1, x2 = R.var("x1"), R.var("x2")
one = R.one()


def T(*fs, coef=ONE):
    return ASCochain.tensor(list(fs), coef)


def random_as(rng, k, deg=2, nterms=2):
    f = ASCochain(M, k, {})
    for _ in range(nterms):
        f = f + T(*[random_base_poly(rng, R, deg) for _ in range(k + 1)])
    return f


def forms():
    return form_ring(M)


def dx(i):
    return GradedElement(M, R, {(i,): one})


# coboundaries and degeneracies ------------------------------------------------------

def test_delta_degree_zero():
    f = x1 * x1 + x2
    assert as_delta(T(f)) == T(one, f) - T(f, one)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_delta_squares_to_zero(k):
    rng = random.Random(k)
    for _ in range(4):
        f = random_as(rng, k)
        assert not as_delta(as_delta(f))
        assert not as_delta_prime(as_delta_prime(f))


def test_degeneracy_examples():
    f0, f1, f2 = x1, x2 + one, x1 * x2
    assert as_degeneracies(T(f0, f1, f2), "s_ik", 0) == T(f0 * f1, f2)
    assert as_degeneracies(T(x1 + Scalar.const(3) * one, f1), "s_x_at_0") == T(f1).scale(3)
    assert as_degeneracies(T(f0, f1), "s_wrap") == T(f1 * f0)
    with pytest.raises(DegreeError):
        as_degeneracy(T(f0, f1), 1)
    with pytest.raises(DegreeError):
        as_coface(T(f0), 3)
    with pytest.raises(ValueError):
        as_degeneracies(T(f0, f1), "s_other")


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_contracting_homotopies(k):
    rng = random.Random(10 + k)
    for _ in range(4):
        f = random_as(rng, k)
        low = as_delta(as_extra_degeneracy_at(f)) if k else as_iota(as_epsilon(f), M)
        assert as_extra_degeneracy_at(as_delta(f)) + low == f
        low = as_delta_prime(as_extra_degeneracy_wrap(f)) if k else ASCochain(M, 0, {})
        assert as_extra_degeneracy_wrap(as_delta_prime(f)) + low == f


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_cosimplicial_identities(k):
    rng = random.Random(20 + k)
    f = random_as(rng, k)
    for j in range(k + 2):
        for i in range(j):
            assert as_coface(as_coface(f, i), j) == as_coface(as_coface(f, j - 1), i)
    g = random_as(rng, k + 1)
    for j in range(k):
        for i in range(j + 1):
            assert as_degeneracy(as_degeneracy(g, i), j) == as_degeneracy(as_degeneracy(g, j + 1), i)
    for j in range(k + 1):
        for i in range(k + 2):
            lhs = as_degeneracy(as_coface(f, i), j)
            if i < j:
                rhs = as_coface(as_degeneracy(f, j - 1), i)
            elif i in (j, j + 1):
                rhs = f
            else:
                rhs = as_coface(as_degeneracy(f, j), i - 1)
            assert lhs == rhs


@pytest.mark.parametrize("k", [1, 2, 3])
def test_cyclic_identities(k):
    rng = random.Random(30 + k)
    f = random_as(rng, k - 1)
    for i in range(1, k + 1):
        lhs = as_cyclic_t(as_coface(f, i), signed=False)
        assert lhs == as_coface(as_cyclic_t(f, signed=False), i - 1)
        # with the sign (-1)^k carried by t the two sides differ by exactly -1
        assert as_cyclic_t(as_coface(f, i)) == -as_coface(as_cyclic_t(f), i - 1)
    g = random_as(rng, k + 1)
    for i in range(1, k + 1):
        assert as_cyclic_t(as_degeneracy(g, i), signed=False) == \
            as_degeneracy(as_cyclic_t(g, signed=False), i - 1)
    h = random_as(rng, k)
    x = h
    for _ in range(k + 1):
        x = as_cyclic_t(x)
    assert x == h


def test_cyclic_operator_examples():
    assert as_cyclic_t(T(x1, x2)) == -T(x2, x1)
    assert not as_B(T(x1 + one))
    f = as_N(T(x1, x2, x1 * x2))
    assert is_cyclic(f)


def test_B_as_squares_to_zero_and_anticommutes():
    rng = random.Random(5)
    for k in (2, 3):
        f = random_as(rng, k)
        assert not as_B(as_B(f))


# antisymmetrization -----------------------------------------------------------------

def test_antisymmetrization_examples():
    f = x1 + x2 * x2
    assert not antisymmetrize(T(f, f))
    g = T(x1, x2)
    assert antisymmetrize(g) == (T(x1, x2) - T(x2, x1)).scale(Fraction(1, 2))


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_antisymmetrization_is_idempotent_chain_map(k):
    rng = random.Random(40 + k)
    for _ in range(3):
        f = random_as(rng, k)
        e = antisymmetrize(f)
        assert antisymmetrize(e) == e
        assert antisymmetrize(as_delta(f)) == as_delta(antisymmetrize(f))


# lambda into forms ------------------------------------------------------------------

def test_form_d_examples():
    W = forms()
    w = W.lift(x1) * dx(1)
    assert form_d(w) == dx(0) * dx(1)
    rng = random.Random(1)
    for _ in range(3):
        f, g = random_base_poly(rng, R, 3), random_base_poly(rng, R, 3)
        F, G = W.lift(f), W.lift(g)
        assert not form_d(form_d(F * dx(0) + G))
        assert form_d(W.lift(f * g)) == form_d(F) * G + F * form_d(G)


def test_lambda_examples():
    W = forms()
    f0, f1 = x1 * x2, x2 + one
    df0, df1 = form_d(W.lift(f0)), form_d(W.lift(f1))
    expect = (W.lift(f0) * df1 - W.lift(f1) * df0).scale(Fraction(1, 2))
    assert lambda_map(T(f0, f1), 0) == expect
    g = x1 * x1 + x2
    assert lambda_map(as_delta(T(g)), 0) == form_d(W.lift(g))
    assert not lambda_map(T(x1, one, one), 0)
    with pytest.raises(DegreeError):
        lambda_map(T(x1, x2), 1)


def _lambda_defects(f):
    lam, lam1 = lambda_total(f), lambda_total(as_delta(f))
    bad = []
    for d, w in lam1.items():
        rhs = form_d(lam[d - 1]) if d - 1 in lam else forms().zero()
        if w != rhs:
            bad.append(d)
    return bad


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_lambda_chain_map_on_antisymmetric_cochains(k):
    rng = random.Random(50 + k)
    for _ in range(5):
        assert _lambda_defects(antisymmetrize(random_as(rng, k))) == []


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_lambda_chain_map_top_component_on_all_cochains(k):
    rng = random.Random(60 + k)
    for _ in range(5):
        f = random_as(rng, k)
        assert lambda_map(as_delta(f), 0) == form_d(lambda_map(f, 0))


def test_lambda_lower_component_counterexample():
    # the r = 1 part of lambda on delta(f0 (x) f1) is f0 f1 / 6, not 0
    f0, f1 = x1, x2
    assert lambda_map(as_delta(T(f0, f1)), 1) == forms().lift(f0 * f1).scale(Fraction(1, 6))


@pytest.mark.xfail(strict=True, reason="lower lambda components need antisymmetric input; see the decision ledger")
@pytest.mark.parametrize("kind", ["generic", "cyclic"])
def test_lambda_chain_map_literal(kind):
    rng = random.Random(70)
    for k in range(4):
        for _ in range(5):
            f = random_as(rng, k)
            if kind == "cyclic":
                f = as_N(f)
            assert _lambda_defects(f) == []


# the map X into cyclic cochains -----------------------------------------------------

A = matrix_test_algebra(M, 2)
E11 = {(0, 0, ((0, 0), ())): ONE}


def skew_test_algebra():
    """M_2(Q[x1, x2]) where x_j acts by left multiplication with x_j D_j, D_j diagonal,
    and the trace is the matrix trace evaluated at x = (1, 1).

    The action is not central, so this is not an algebra over the functions.
    """
    base = matrix_test_algebra(M, 2)
    diag = ((1, 2), (3, -1))

    def act(e, vec):
        out = {}
        for (i, j, (ex, f)), c in vec.items():
            d = 1
            for D, power in zip(diag, e):
                d *= D[i] ** power
            if d:
                key = (i, j, (tuple(a + b for a, b in zip(ex, e)), f))
                out[key] = out.get(key, ZERO) + c * d
        return {k: v for k, v in out.items() if v}

    def trace(vec):
        acc = ZERO
        for (i, j, _), c in vec.items():
            if i == j:
                acc = acc + c
        return acc

    return type(base)(base.ctx, M, act, trace)


SKEW = skew_test_algebra()


def random_elem(rng):
    out = {}
    for i in range(2):
        for j in range(2):
            for e, v in random_base_poly(rng, R, 1).terms.items():
                out[(i, j, (e, ()))] = out.get((i, j, (e, ())), ZERO) + v
    return {k: v for k, v in out.items() if v}


def test_chi_examples():
    rng = random.Random(0)
    a0, a1 = random_elem(rng), random_elem(rng)
    c = Chain.tensor(A.ctx, [a0, a1])
    assert chi_X(A, T(one, one), c) == A.trace(A.ctx.mul(a0, a1))
    assert chi_X(A, T(x1, one), Chain.tensor(A.ctx, [E11, E11])).is_zero()
    assert chi_X(A, T(one), Chain.tensor(A.ctx, [a0])) == A.trace(a0)
    with pytest.raises(DegreeError):
        chi_X(A, T(one), c)


def test_trace_property_of_test_algebra():
    rng = random.Random(1)
    for _ in range(5):
        a, b = random_elem(rng), random_elem(rng)
        assert A.trace(A.ctx.mul(a, b)) == A.trace(A.ctx.mul(b, a))


@pytest.mark.parametrize("k", [0, 1, 2])
def test_chi_intertwines_differentials(k):
    rng = random.Random(80 + k)
    nonzero = 0
    for _ in range(7):
        f = random_as(rng, k, 1)
        c = Chain.tensor(A.ctx, [random_elem(rng) for _ in range(k + 2)])
        lhs = cochain_b(chi_cochain(A, f))(c)
        assert lhs == chi_cochain(A, as_delta(f))(c)
        nonzero += bool(lhs)
    # a central action makes X(f) depend only on f_0 ... f_k, so both sides vanish in even degree
    assert nonzero or k % 2 == 0


@pytest.mark.parametrize("k", [1, 2])
def test_B_kills_chi_of_cyclic_cochains(k):
    rng = random.Random(90 + k)
    for _ in range(7):
        f = as_N(random_as(rng, k, 1))
        c = Chain.tensor(A.ctx, [random_elem(rng) for _ in range(k)])
        assert cochain_B(chi_cochain(A, f))(c).is_zero()


def test_B_of_chi_detects_non_cyclic_cochains():
    rng = random.Random(3)
    hits = 0
    for _ in range(5):
        f = random_as(rng, 1, 1)
        c = Chain.tensor(A.ctx, [random_elem(rng)])
        hits += bool(cochain_B(chi_cochain(A, f))(c))
    assert hits


def test_chi_intertwining_needs_a_central_action():
    rng = random.Random(81)
    misses = 0
    for _ in range(5):
        f = random_as(rng, 1, 1)
        c = Chain.tensor(SKEW.ctx, [random_elem(rng) for _ in range(3)])
        misses += cochain_b(chi_cochain(SKEW, f))(c) != chi_cochain(SKEW, as_delta(f))(c)
    assert misses
