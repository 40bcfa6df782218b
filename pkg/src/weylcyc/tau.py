"""The cyclic cochains tau_i on the Weyl algebra, their matrix extension,
the twisted trace, and the #-product twisted cocycles.

Evaluation strategy.  Every operator in the defining integrand is a
constant-coefficient polynomial differential operator in the slot variables,
and mu evaluates at 0.  So on a tensor of monomials y^{e_0} (x) ... (x) y^{e_m}
the value is e! times the coefficient of d^{e} in

    Pf(hbar alpha)  *  prod_{i<j} exp(hbar lambda_ij alpha_ij),

with lambda_ij = u_i - u_j + 1/2 (u_0 = 0).  The Pfaffian runs over slots
1..m for even cochains and over all slots for odd ones.  We expand this
product with exponents truncated at e, remember how many alpha_ij each term
used, and integrate the matching product of lambda powers over the simplex.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .algebras import MatrixAlgebra, WeylAlgebra
from .errors import CayleySingular, DegreeError, DetSingular, ContextMismatch
from .homalg import Chain, Cochain
from .matrix import Matrix
from .scalar import Scalar, ONE, ZERO, I
from .simplex import lambda_product_integral
from .weyl import FiniteTwist, WeylContext, WeylElement, cayley


def _pfaffian_matchings(slots):
    """Perfect matchings of ``slots`` with Pfaffian signs."""
    if not slots:
        return [(1, ())]
    first, rest = slots[0], slots[1:]
    out = []
    for j, other in enumerate(rest):
        sign = 1 if j % 2 == 0 else -1
        remaining = rest[:j] + rest[j + 1:]
        for s, m in _pfaffian_matchings(remaining):
            out.append((sign * s, ((first, other),) + m))
    return out


def _alpha_terms(i, j, n):
    """alpha_ij as (flat index in slot i, flat index in slot j, sign) over 2n components per slot."""
    V = 2 * n
    out = []
    for s in range(n):
        ip, iq = 2 * s, 2 * s + 1
        out.append((i * V + ip, j * V + iq, 1))
        out.append((i * V + iq, j * V + ip, -1))
    return out


def _apply_alpha(state, terms):
    """Multiply by alpha: deficits shrink by one in both touched positions."""
    nxt = {}
    for (deficit, marks), c in state.items():
        for a, b, sign in terms:
            if deficit[a] and deficit[b]:
                d = list(deficit)
                d[a] -= 1
                d[b] -= 1
                key = (tuple(d), marks)
                v = c if sign > 0 else -c
                nxt[key] = nxt.get(key, 0) + v
    return {k: v for k, v in nxt.items() if v}


@lru_cache(maxsize=None)
def tau_monomial(n: int, odd: bool, slots: tuple) -> Scalar:
    """tau on y^{slots[0]} (x) ... (x) y^{slots[m]} in W_{2n}.

    Even case: m = 2k and the sign is (-1)^k.  Odd case: m = 2k - 1 and the
    sign is (-1)^{k-1}.
    """
    m = len(slots) - 1
    V = 2 * n
    degs = [sum(e) for e in slots]
    D = sum(degs)
    if D % 2:
        return ZERO
    pf_slots = tuple(range(0 if odd else 1, m + 1))
    if len(pf_slots) % 2:
        return ZERO
    k = len(pf_slots) // 2
    if any(degs[s] == 0 for s in pf_slots):
        return ZERO
    target = tuple(x for e in slots for x in e)
    state = {}
    for sign, matching in _pfaffian_matchings(pf_slots):
        st = {(target, ()): Fraction(sign)}
        for (i, j) in matching:
            st = _apply_alpha(st, _alpha_terms(i, j, n))
            if not st:
                break
        for key, v in st.items():
            state[key] = state.get(key, 0) + v
    state = {key: v for key, v in state.items() if v}
    pairs = tuple((i, j) for i in range(m + 1) for j in range(i + 1, m + 1))
    last_pair_of_slot = {}
    for idx, (i, j) in enumerate(pairs):
        last_pair_of_slot[i] = idx
        last_pair_of_slot[j] = idx
    done_after = {}
    for s, idx in last_pair_of_slot.items():
        done_after.setdefault(idx, []).append(s)
    for idx, (i, j) in enumerate(pairs):
        terms = _alpha_terms(i, j, n)
        new = {}
        cur = state
        t = 0
        while cur:
            for (deficit, marks), v in cur.items():
                key = (deficit, marks + (t,))
                new[key] = new.get(key, 0) + v
            t += 1
            cur = _apply_alpha(cur, terms)
            if cur:
                cur = {key: v / t for key, v in cur.items()}
        for s in done_after.get(idx, ()):
            lo, hi = s * V, (s + 1) * V
            new = {key: v for key, v in new.items() if not any(key[0][lo:hi])}
        state = {key: v for key, v in new.items() if v}
        if not state:
            return ZERO
    total = Fraction(0)
    for (deficit, marks), v in state.items():
        if not any(deficit):
            total += v * lambda_product_integral(m, pairs, marks)
    for x in target:
        total *= factorial(x)
    if not total:
        return ZERO
    if odd:
        total = total if (k - 1) % 2 == 0 else -total
    else:
        total = total if k % 2 == 0 else -total
    return Scalar.const(total, 0, D // 2)


class TauCochain(Cochain):
    """tau_{2k} (parity even) or tau_{2k-1} (parity odd) on W_{2n}."""

    def __init__(self, n: int, k: int, odd: bool = False):
        self.n = n
        self.k = k
        self.odd = odd
        degree = 2 * k - 1 if odd else 2 * k
        if degree < 0:
            raise DegreeError("tau degree must be nonnegative")
        super().__init__(degree, self._eval_key, normalized=True)

    def _eval_key(self, key):
        return tau_monomial(self.n, self.odd, tuple(k[0] for k in key))

    @property
    def algebra(self) -> WeylAlgebra:
        return weyl_algebra(self.n)

    def __repr__(self):
        return f"tau_{self.degree}(n={self.n})"


def _check_chain(c, deg, n):
    if c.terms and c.degree != deg:
        raise DegreeError(f"expected a degree {deg} chain, got degree {c.degree}")
    ctx = c.ctx
    if not isinstance(ctx, WeylAlgebra) or ctx.m or len(ctx.pairs) != n or len(ctx.gens) != 2 * n:
        raise ContextMismatch("tau needs chains over the plain Weyl algebra")


def tau_even(k: int, c: Chain) -> Scalar:
    n = len(c.ctx.pairs)
    _check_chain(c, 2 * k, n)
    return TauCochain(n, k)(c)


def tau_odd(k: int, c: Chain) -> Scalar:
    n = len(c.ctx.pairs)
    _check_chain(c, 2 * k - 1, n)
    return TauCochain(n, k, odd=True)(c)


def weyl_algebra(n: int, twist: FiniteTwist | None = None) -> WeylAlgebra:
    W = WeylContext(n)
    return WeylAlgebra(W.zero(), twist=twist.act if twist is not None else None)


# matrix extension ---------------------------------------------------------

def matrix_unit_trace(idx) -> int:
    """tr(E_{i0 j0} E_{i1 j1} ...) for a tuple of (i, j) index pairs."""
    for (a, b), (c, d) in zip(idx, idx[1:] + idx[:1]):
        if b != c:
            return 0
    return 1


class TauMatrixCochain(Cochain):
    """tau^V: tau on the Weyl parts times the trace of the matrix parts."""

    def __init__(self, n, k, dimV, odd=False):
        self.inner = TauCochain(n, k, odd)
        self.dimV = dimV
        super().__init__(self.inner.degree, self._eval_key, normalized=False)

    def _eval_key(self, key):
        if not matrix_unit_trace(tuple((a, b) for a, b, _ in key)):
            return ZERO
        return self.inner.fn(tuple(x for _, _, x in key))


def tau_matrix(dimV: int, k: int, c: Chain) -> Scalar:
    ctx = c.ctx
    if not isinstance(ctx, MatrixAlgebra) or ctx.N != dimV:
        raise ContextMismatch(f"expected chains over M_{dimV}(W)")
    n = len(ctx.base.pairs)
    return TauMatrixCochain(n, k, dimV)(c)


# twisted trace ------------------------------------------------------------

# Unit relating the printed Gaussian operator to our normalization of the
# Moyal product, fixed by the twisted-trace identity.
TRACE_PHASE = -I


class TwistedTrace:
    """tr_gamma on W_{2l} for a twist with no eigenvalue 1 (l = number of lines).

    tr(a) = mu( det^{-1}(1 - gamma^{-1}) exp(phase * hbar * C^{ij} d_{z_i} d_{zbar_j}) a )
    with C the inverse of c(gamma^{-1}), z = q + i p.
    """

    def __init__(self, twist: FiniteTwist):
        if twist.fixed:
            raise ValueError("twisted trace needs a twist without fixed lines")
        self.twist = twist
        self.l = twist.n
        g_inv = twist.inverse().complex_matrix()
        one = Matrix.identity(self.l)
        det = (one - g_inv).det()
        if not det:
            raise DetSingular("1 - gamma^{-1} is singular")
        self.prefactor = det.inv()
        c = cayley(g_inv)
        try:
            C = c.inverse()
        except DetSingular:
            raise CayleySingular("c(gamma^{-1}) is not invertible") from None
        # second-order operator sum_{a,b} K[a][b] d_a d_b in y-order
        K = {}
        quarter = Fraction(1, 4)

        def add(a, b, v):
            key = (min(a, b), max(a, b))
            K[key] = K.get(key, ZERO) + v

        for i in range(self.l):
            for j in range(self.l):
                cij = C[i, j] * TRACE_PHASE * quarter
                if not cij:
                    continue
                pi_, qi = 2 * i, 2 * i + 1
                pj, qj = 2 * j, 2 * j + 1
                # (d_q_i - i d_p_i)(d_q_j + i d_p_j)
                add(qi, qj, cij)
                add(qi, pj, cij * I)
                add(pi_, qj, -(cij * I))
                add(pi_, pj, cij)
        self.K = {k: v for k, v in K.items() if v}
        self._cache = {}

    def monomial(self, exp) -> Scalar:
        exp = tuple(exp)
        r = self._cache.get(exp)
        if r is not None:
            return r
        D = sum(exp)
        if D % 2:
            r = ZERO
        else:
            t = D // 2
            state = {exp: ONE}
            for _ in range(t):
                nxt = {}
                for deficit, c in state.items():
                    for (a, b), kv in self.K.items():
                        d = list(deficit)
                        if d[a] == 0:
                            continue
                        d[a] -= 1
                        if d[b] == 0:
                            continue
                        d[b] -= 1
                        key = tuple(d)
                        nxt[key] = nxt.get(key, ZERO) + c * kv
                state = {k: v for k, v in nxt.items() if v}
            val = state.get((0,) * len(exp), ZERO)
            mult = Fraction(1, factorial(t))
            for x in exp:
                mult *= factorial(x)
            r = val.shift(t) * mult * self.prefactor
        self._cache[exp] = r
        return r

    def __call__(self, a: WeylElement) -> Scalar:
        if len(a.pairs) != self.l:
            raise ContextMismatch("element does not live on the transversal Weyl algebra")
        acc = ZERO
        for e, c in a.terms.items():
            acc = acc + c * self.monomial(e)
        return acc


def twisted_trace(twist: FiniteTwist, a: WeylElement) -> Scalar:
    return TwistedTrace(twist)(a)


# #-product with the twisted trace ---------------------------------------

class SharpTraceCochain(Cochain):
    """(tau_{2k} # tr_gamma) on W_{2n} = W_{2(n-l)} (x) W_{2l}.

    Each basis monomial splits into its fixed-line part and its transversal
    part.  The value is tau_{2k} of the fixed parts times tr_gamma of the
    star product of the transversal parts, taken in slot order.
    """

    def __init__(self, twist: FiniteTwist, k: int):
        self.twist = twist
        self.k = k
        self.fixed = twist.fixed
        self.trans = twist.transversal
        self.nf = len(self.fixed)
        self.nt = len(self.trans)
        if 2 * k > 2 * self.nf and k > 0:
            raise DegreeError("degree exceeds twice the fixed dimension")
        self.trace = TwistedTrace(FiniteTwist([twist.eigen[j] for j in self.trans])) if self.nt else None
        self.Wt = WeylContext(self.nt) if self.nt else None
        super().__init__(2 * k, self._eval_key, normalized=False)

    def _split(self, e):
        f = tuple(x for j in self.fixed for x in e[2 * j:2 * j + 2])
        t = tuple(x for j in self.trans for x in e[2 * j:2 * j + 2])
        return f, t

    def _eval_key(self, key):
        fixed_parts, trans_parts = zip(*(self._split(k[0]) for k in key))
        if self.nf:
            tv = tau_monomial(self.nf, False, tuple(fixed_parts))
        else:
            if self.k:
                return ZERO
            tv = ONE
        if not tv:
            return ZERO
        if not self.nt:
            return tv
        prod = self.Wt.one()
        for t in trans_parts:
            prod = prod.star(self.Wt.monomial(t))
        return tv * self.trace(prod)


def tau_sharp_trace(twist: FiniteTwist, k: int, c: Chain) -> Scalar:
    if c.terms and c.degree != 2 * k:
        raise DegreeError(f"expected a degree {2 * k} chain")
    return SharpTraceCochain(twist, k)(c)
