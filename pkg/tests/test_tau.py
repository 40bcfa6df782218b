import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

import weylcyc.tau as tau_mod
from weylcyc import ONE, ZERO, I, HBAR, FiniteTwist, Scalar
from weylcyc.algebras import MatrixAlgebra, WeylAlgebra
from weylcyc.errors import CayleySingular, ContextMismatch, DegreeError
from weylcyc.homalg import Chain, cochain_B, cochain_b, cochain_iota, cochain_L
from weylcyc.sampling import random_chain
from weylcyc.tau import (SharpTraceCochain, TauCochain, TauMatrixCochain, TwistedTrace, tau_even, tau_matrix,
                         tau_odd, tau_sharp_trace, twisted_trace, weyl_algebra)
from weylcyc.weyl import WeylContext

import oracles
from strategies import weyl_elements

W1, A1 = WeylContext(1), weyl_algebra(1)
p, q = W1.p(1), W1.q(1)
one = W1.one()


def T(*slots, ctx=A1):
    return Chain.tensor(ctx, [ctx.to_vec(s) for s in slots])


def hb(c, e=1):
    return Scalar.const(c, 0, e)


# values -----------------------------------------------------------------------------

def test_tau0_is_evaluation_at_zero():
    assert tau_even(0, T(p * p + W1.const(3))) == Scalar.const(3)


def test_tau2_golden_value():
    assert tau_even(1, T(one, p, q)) == hb(Fraction(-1, 2))


def test_tau_vanishes_on_scalar_slots():
    assert tau_even(1, T(p * q, one, q * q)).is_zero()
    assert tau_odd(1, T(one, p)).is_zero()


def test_tau1_values():
    assert tau_odd(1, T(p, q)) == HBAR
    assert tau_odd(1, T(q, p)) == -HBAR


def test_tau_degree_and_context_errors():
    with pytest.raises(DegreeError):
        tau_even(1, T(p, q))
    with pytest.raises(DegreeError):
        TauCochain(1, 0, odd=True)
    with pytest.raises(ContextMismatch):
        tau_even(0, Chain(WeylAlgebra(W1.zero(), m=2), {((((0, 0), ()),)): ONE}))


def _dense(rng, W, count, max_degree=2):
    mons = [e for e in W.monomials_up_to(max_degree) if sum(e) > 0]
    return [W.monomial(rng.choice(mons), rng.randint(1, 3)) + W.monomial(rng.choice(mons), rng.randint(-2, 2))
            for _ in range(count)]


@pytest.mark.parametrize("n,degree,odd,max_degree", [(1, 1, True, 2), (1, 2, False, 2), (2, 2, False, 2),
                                                     (2, 1, True, 1)])
def test_tau_matches_symbolic_integral(n, degree, odd, max_degree):
    rng = random.Random(7 * n + degree)
    W, A = WeylContext(n), weyl_algebra(n)
    nonzero = 0
    for _ in range(6):
        elems = _dense(rng, W, degree + 1, max_degree)
        c = T(*elems, ctx=A)
        k = (degree + 1) // 2 if odd else degree // 2
        v = tau_odd(k, c) if odd else tau_even(k, c)
        assert v == oracles.tau_sympy(elems, n, odd)
        nonzero += bool(v)
    assert nonzero


# chain identities -------------------------------------------------------------------

def _monomial_chains(W, slots, max_total):
    mons = W.monomials_up_to(max_total)
    for es in itertools.product(mons, repeat=slots):
        if sum(map(sum, es)) <= max_total:
            yield T(*[W.monomial(e) for e in es], ctx=weyl_algebra(W.n))


def test_tau_chain_identity_exhaustive_n1():
    te, t0, to = TauCochain(1, 1), TauCochain(1, 0), TauCochain(1, 1, odd=True)
    count = 0
    for c in _monomial_chains(W1, 2, 3):
        assert -cochain_B(te)(c) == to(c) == cochain_b(t0)(c)
        count += 1
    assert count == 35


@pytest.mark.parametrize("k", [1, 2])
def test_tau_chain_identity_n2(k):
    rng = random.Random(k)
    W, A = WeylContext(2), weyl_algebra(2)
    te, tlo, to = TauCochain(2, k), TauCochain(2, k - 1), TauCochain(2, k, odd=True)
    for _ in range(6):
        c = random_chain(rng, A, W, 2 * k - 1, 2)
        assert -cochain_B(te)(c) == to(c) == cochain_b(tlo)(c)


@pytest.mark.parametrize("n", [1, 2])
def test_top_cochain_is_hochschild_cocycle(n):
    rng = random.Random(n)
    W, A = WeylContext(n), weyl_algebra(n)
    top = TauCochain(n, n)
    for _ in range(5 if n == 1 else 2):
        assert cochain_b(top)(random_chain(rng, A, W, 2 * n + 1, 2)).is_zero()


def test_n1_remark_identity_on_monomial_pairs():
    t2, t0 = TauCochain(1, 1), TauCochain(1, 0)
    for a0, a1 in itertools.product(W1.monomials_up_to(4), repeat=2):
        c = T(W1.monomial(a0), W1.monomial(a1))
        assert cochain_B(t2)(c) == -cochain_b(t0)(c)


def test_B_tau2_on_generators():
    assert cochain_B(TauCochain(1, 1))(T(p, q)) == -HBAR


@settings(max_examples=25)
@given(weyl_elements(1, 3), weyl_elements(1, 3))
def test_tau1_equals_b_tau0(a, b):
    c = T(a, b)
    assert tau_odd(1, c) == cochain_b(TauCochain(1, 0))(c)


@pytest.mark.parametrize("k", [0, 1])
def test_tau_is_invariant_and_basic(k):
    rng = random.Random(k)
    quads = [W1.monomial(e) for e in W1.monomials_up_to(2) if sum(e) == 2]
    tau = TauCochain(1, k)
    for a in quads:
        for _ in range(3):
            assert cochain_L(a, tau)(random_chain(rng, A1, W1, 2 * k, 3)).is_zero()
            if k:
                assert cochain_iota(a, tau)(random_chain(rng, A1, W1, 2 * k - 1, 3)).is_zero()


def test_lie_derivative_by_non_quadratic_is_not_zero():
    # sanity: the invariance above is specific to sp-elements
    tau = TauCochain(1, 0)
    assert cochain_L(p * p * p, tau)(T(q * q * q)) != ZERO


# matrix extension -------------------------------------------------------------------

def test_tau_matrix_degree_zero_is_trace():
    M = MatrixAlgebra(A1, 2)
    a0 = p * p + W1.const(5)
    ident = {**M.embed(0, 0, a0), **M.embed(1, 1, a0)}
    assert tau_matrix(2, 0, Chain.tensor(M, [ident])) == Scalar.const(10)


def test_tau_matrix_top_cocycle():
    rng = random.Random(4)
    M = MatrixAlgebra(A1, 2)
    top = TauMatrixCochain(1, 1, 2)
    for _ in range(3):
        slots = []
        for _ in range(4):
            vec = {}
            for _ in range(2):
                i, j = rng.randrange(2), rng.randrange(2)
                x = _dense(rng, W1, 1)[0]
                for kk, vv in M.embed(i, j, x).items():
                    vec[kk] = vec.get(kk, ZERO) + vv
            slots.append({kk: vv for kk, vv in vec.items() if vv})
        assert cochain_b(top)(Chain.tensor(M, slots)).is_zero()


# twisted trace ----------------------------------------------------------------------

GAMMA_I = FiniteTwist(["i"])


def test_twisted_trace_of_one():
    assert twisted_trace(GAMMA_I, one) == Scalar.const(Fraction(1, 2), Fraction(-1, 2))
    assert twisted_trace(FiniteTwist(["-i"]), one) == Scalar.const(Fraction(1, 2), Fraction(1, 2))


def test_twisted_trace_rejects_singular_cayley_transform():
    with pytest.raises(CayleySingular):
        TwistedTrace(FiniteTwist(["-1"]))


def test_twisted_trace_kills_odd_elements():
    assert twisted_trace(GAMMA_I, p).is_zero()
    assert twisted_trace(GAMMA_I, p * q * q).is_zero()


def test_twisted_trace_needs_transversal_twist():
    with pytest.raises(ValueError):
        TwistedTrace(FiniteTwist(["1"]))


@pytest.mark.parametrize("eigen", [["i"], ["-i"], ["i", "-i"], ["i", "i"]])
def test_twisted_trace_property(eigen):
    twist = FiniteTwist(eigen)
    W = WeylContext(len(eigen))
    tr = TwistedTrace(twist)
    mons = [W.monomial(e) for e in W.monomials_up_to(4 if len(eigen) == 1 else 2)]
    for a in mons:
        for b in mons:
            assert tr(a * b) == tr(twist.act(b) * a)


@pytest.mark.parametrize("phase", [I, ONE, -ONE])
def test_only_one_phase_gives_a_twisted_trace(monkeypatch, phase):
    monkeypatch.setattr(tau_mod, "TRACE_PHASE", phase)
    tr = TwistedTrace(GAMMA_I)
    mons = [W1.monomial(e) for e in W1.monomials_up_to(2)]
    assert any(tr(a * b) != tr(GAMMA_I.act(b) * a) for a in mons for b in mons)


def test_twisted_trace_is_closed_under_twisted_b():
    A = weyl_algebra(1, GAMMA_I)
    tr0 = SharpTraceCochain(GAMMA_I, 0)
    rng = random.Random(2)
    for _ in range(10):
        assert cochain_b(tr0, twisted=True)(random_chain(rng, A, W1, 1, 3)).is_zero()


# sharp product cocycle --------------------------------------------------------------

MIXED = FiniteTwist(["1", "i"])


def test_sharp_trace_limits():
    W2 = WeylContext(2)
    A = weyl_algebra(2, MIXED)
    f, g = W2.p(1) * W2.p(1) + W2.const(2), W2.q(2) * W2.q(2) + W2.p(2) * W2.q(2)
    tr = TwistedTrace(FiniteTwist(["i"]))
    g1 = W1.q(1) * W1.q(1) + W1.p(1) * W1.q(1)
    assert tau_sharp_trace(MIXED, 0, Chain.tensor(A, [f * g])) == Scalar.const(2) * tr(g1)
    # no twist: plain tau
    assert tau_sharp_trace(FiniteTwist(["1"]), 1, T(one, p, q)) == tau_even(1, T(one, p, q))
    # pure transversal, degree 0: the twisted trace
    assert tau_sharp_trace(GAMMA_I, 0, T(p * q)) == twisted_trace(GAMMA_I, p * q)
    with pytest.raises(DegreeError):
        SharpTraceCochain(MIXED, 2)


def test_sharp_trace_pair_is_twisted_cocycle():
    W2 = WeylContext(2)
    A = weyl_algebra(2, MIXED)
    phi0, phi2 = SharpTraceCochain(MIXED, 0), SharpTraceCochain(MIXED, 1)
    rng = random.Random(11)
    for _ in range(4):
        c1 = random_chain(rng, A, W2, 1, 2)
        assert (cochain_b(phi0, twisted=True)(c1) + cochain_B(phi2, twisted=True)(c1)).is_zero()
    for _ in range(2):
        assert cochain_b(phi2, twisted=True)(random_chain(rng, A, W2, 3, 2)).is_zero()


def test_sharp_trace_wrong_degree():
    with pytest.raises(DegreeError):
        tau_sharp_trace(GAMMA_I, 0, T(p, q))
