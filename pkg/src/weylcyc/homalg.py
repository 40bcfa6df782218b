"""Hochschild and cyclic chain operators, plain, graded and twisted.

Chains are sparse Scalar combinations of key tuples over an
``AlgebraContext``.  Cochains act by precomposition with these operators.
Graded signs follow the Koszul rule on form degrees; on ungraded algebras
every formula reduces to the classical one.
"""

from __future__ import annotations

from itertools import combinations

from .algebras import AlgebraContext, vec_add
from .errors import ContextMismatch, DegreeError
from .scalar import Scalar, ONE, ZERO


class Chain:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms=None):
        self.ctx = ctx
        self.terms = {k: v for k, v in (terms or {}).items() if v}
        lens = {len(k) for k in self.terms}
        if len(lens) > 1:
            raise DegreeError("chain mixes tensor lengths")

    @classmethod
    def tensor(cls, ctx, slots, coef=ONE):
        """Elementary tensor of algebra elements (or vectors) expanded into basis keys."""
        acc = {(): Scalar.coerce(coef)}
        for x in slots:
            vec = x if isinstance(x, dict) else ctx.to_vec(x)
            nxt = {}
            for key, c in acc.items():
                for k, v in vec.items():
                    nxt[key + (k,)] = c * v
            acc = nxt
        return cls(ctx, acc)

    @property
    def degree(self):
        if not self.terms:
            return None
        return len(next(iter(self.terms))) - 1

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ContextMismatch("chains over different algebras")
        out = dict(self.terms)
        vec_add(out, other.terms)
        return Chain(self.ctx, out)

    def __neg__(self):
        return Chain(self.ctx, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = Scalar.coerce(s)
        return Chain(self.ctx, {k: v * s for k, v in self.terms.items()})

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, Chain) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def __repr__(self):
        return f"Chain(deg={self.degree}, {len(self.terms)} terms)"


def _acc(out, ctx, prefix, vec, suffix, coef):
    for k, v in vec.items():
        key = prefix + (k,) + suffix
        w = v * coef
        if key in out:
            s = out[key] + w
            if s:
                out[key] = s
            else:
                del out[key]
        elif w:
            out[key] = w


def _deg(ctx, k):
    return ctx.degree_key(k) if ctx.graded else 0


def hoch_b(c: Chain, twisted=False) -> Chain:
    ctx = c.ctx
    out = {}
    for key, coef in c.terms.items():
        k = len(key) - 1
        if k < 1:
            raise DegreeError("b needs chains of degree >= 1")
        for i in range(k):
            prod = ctx.mul_keys(key[i], key[i + 1])
            _acc(out, ctx, key[:i], prod, key[i + 2:], coef if i % 2 == 0 else -coef)
        last = key[k]
        s = k
        if ctx.graded:
            s += _deg(ctx, last) * sum(_deg(ctx, x) for x in key[:k])
        lastvec = ctx.gamma_key(last) if twisted else {last: ONE}
        for lk, lc in lastvec.items():
            prod = ctx.mul_keys(lk, key[0])
            _acc(out, ctx, (), prod, key[1:k], coef * lc if s % 2 == 0 else -coef * lc)
    return Chain(ctx, out)


def hoch_b_twisted(c: Chain) -> Chain:
    return hoch_b(c, twisted=True)


def cyclic_t(c: Chain, twisted=False) -> Chain:
    """t(a_0..a_k) = +-(gamma)(a_k) (x) a_0 (x) ... (x) a_{k-1}."""
    ctx = c.ctx
    out = {}
    for key, coef in c.terms.items():
        k = len(key) - 1
        last = key[k]
        s = k
        if ctx.graded:
            s += _deg(ctx, last) * sum(_deg(ctx, x) for x in key[:k])
        lastvec = ctx.gamma_key(last) if twisted else {last: ONE}
        for lk, lc in lastvec.items():
            _acc(out, ctx, (), {lk: lc}, key[:k], coef if s % 2 == 0 else -coef)
    return Chain(ctx, out)


def conn_B(c: Chain, twisted=False) -> Chain:
    """B-bar = s o N with N = sum_j t^j and s inserting the unit in front."""
    ctx = c.ctx
    out = {}
    for key, coef in c.terms.items():
        k = len(key) - 1
        cur = Chain(ctx, {key: coef})
        for _ in range(k + 1):
            for kk, cc in cur.terms.items():
                for uk, uc in ctx.unit.items():
                    _acc(out, ctx, (), {uk: uc}, kk, cc)
            cur = cyclic_t(cur, twisted)
    return Chain(ctx, out)


def twisted_ops(c: Chain, which: str) -> Chain:
    if which in ("b", "b_gamma"):
        return hoch_b(c, twisted=True)
    if which in ("t", "t_gamma"):
        return cyclic_t(c, twisted=True)
    if which in ("B", "B_gamma"):
        return conn_B(c, twisted=True)
    raise ValueError(f"unknown twisted operator {which!r}")


# Lie action -------------------------------------------------------------

def lie_L(a, c: Chain) -> Chain:
    """L_a inserts the graded commutator [a, -] in each slot."""
    ctx = c.ctx
    avec = a if isinstance(a, dict) else ctx.to_vec(a)
    out = {}
    for key, coef in c.terms.items():
        for i, x in enumerate(key):
            br = ctx.graded_commutator(avec, {x: ONE})
            if ctx.graded:
                da = max((ctx.degree_key(k) for k in avec), default=0)
                if (da * sum(_deg(ctx, y) for y in key[:i])) % 2:
                    br = {k: -v for k, v in br.items()}
            _acc(out, ctx, key[:i], br, key[i + 1:], coef)
    return Chain(ctx, out)


def lie_iota(a, c: Chain) -> Chain:
    """iota_a(a_0..a_k) = sum_i (-1)^{i+1} a_0 .. a_i (x) a (x) a_{i+1} .."""
    ctx = c.ctx
    avec = a if isinstance(a, dict) else ctx.to_vec(a)
    out = {}
    for key, coef in c.terms.items():
        for i in range(len(key)):
            _acc(out, ctx, key[:i + 1], avec, key[i + 1:], -coef if i % 2 == 0 else coef)
    return Chain(ctx, out)


# shuffle product ----------------------------------------------------------

def _shuffles(p, q):
    """(p, q)-shuffles as position sets of the first block inside 1..p+q."""
    return combinations(range(p + q), p)


def shuffle(x: Chain, y: Chain) -> Chain:
    """(a_0..a_p) x (b_0..b_q) = (-1)^{|b_0| sum_{j>=1} |a_j|} Sh(a_0 b_0, a_1..a_p, b_1..b_q).

    Each shuffle contributes sgn(sigma) times the Koszul sign of moving the
    form-degree-graded entries past each other.
    """
    if x.ctx != y.ctx:
        raise ContextMismatch("shuffle of chains over different algebras")
    ctx = x.ctx
    out = {}
    for ka, ca in x.terms.items():
        p = len(ka) - 1
        da = [_deg(ctx, t) for t in ka]
        for kb, cb in y.terms.items():
            q = len(kb) - 1
            db = [_deg(ctx, t) for t in kb]
            pre = (db[0] * sum(da[1:])) % 2
            head = ctx.mul_keys(ka[0], kb[0])
            if not head:
                continue
            for pos in _shuffles(p, q):
                posset = set(pos)
                seq = []
                ai = bi = 1
                inv = 0
                kos = 0
                a_left = p
                for slot in range(p + q):
                    if slot in posset:
                        seq.append(ka[ai])
                        ai += 1
                        a_left -= 1
                    else:
                        seq.append(kb[bi])
                        # b_bi jumps over the remaining a's
                        inv += a_left
                        kos += db[bi] * sum(da[ai:])
                        bi += 1
                sign = (pre + inv + kos) % 2
                _acc(out, ctx, (), head, tuple(seq), -(ca * cb) if sign else ca * cb)
    return Chain(ctx, out)


def omega_power(omega, k: int, ctx: AlgebraContext) -> Chain:
    """(omega)_k = 1 (x) omega (x) ... (x) omega (k copies)."""
    vec = omega if isinstance(omega, dict) else ctx.to_vec(omega)
    if ctx.graded and any(ctx.degree_key(t) != 1 for t in vec):
        raise DegreeError("omega must be homogeneous of degree 1")
    return Chain.tensor(ctx, [ctx.unit] + [vec] * k)


def omega_insertions(omega, c: Chain) -> Chain:
    """sum_i (a_0 .. [omega, a_i] .. a_p), each term signed (-1)^{|a_i| + ... + |a_p|}.

    The Koszul factor is what makes the shuffle identity for b hold on
    form-valued entries; it is 1 when every entry has form degree 0.
    """
    ctx = c.ctx
    wvec = omega if isinstance(omega, dict) else ctx.to_vec(omega)
    out = {}
    for key, coef in c.terms.items():
        degs = [_deg(ctx, x) for x in key]
        for i, x in enumerate(key):
            br = ctx.graded_commutator(wvec, {x: ONE})
            _acc(out, ctx, key[:i], br, key[i + 1:], -coef if sum(degs[i:]) % 2 else coef)
    return Chain(ctx, out)


def nabla_chain(c: Chain) -> Chain:
    """Derivation extended to chains by the graded Leibniz rule."""
    ctx = c.ctx
    out = {}
    for key, coef in c.terms.items():
        before = 0
        for i, x in enumerate(key):
            d = ctx.nabla_key(x)
            _acc(out, ctx, key[:i], d, key[i + 1:], -coef if before % 2 else coef)
            before += _deg(ctx, x)
    return Chain(ctx, out)


# cochains -----------------------------------------------------------------

class Cochain:
    """Linear functional on degree-k chains given by its values on key tuples.

    ``fn`` returns a Scalar (or any value with ``+`` and Scalar scaling).  When
    ``normalized`` is set, tuples with the unit in a slot >= 1 evaluate to 0.
    """

    def __init__(self, degree, fn, normalized=False, zero=ZERO, memo=True):
        self.degree = degree
        self.fn = fn
        self.normalized = normalized
        self.zero = zero
        self._memo = {} if memo else None

    def value(self, ctx, key):
        if self._memo is not None and key in self._memo:
            return self._memo[key]
        if self.normalized and any(ctx.is_unit_key(k) for k in key[1:]):
            v = self.zero
        else:
            v = self.fn(key)
        if self._memo is not None:
            self._memo[key] = v
        return v

    def __call__(self, c: Chain):
        acc = self.zero
        for key, coef in c.terms.items():
            if self.degree is not None and len(key) - 1 != self.degree:
                raise DegreeError(f"cochain of degree {self.degree} on a degree {len(key) - 1} chain")
            v = self.value(c.ctx, key)
            if v:
                acc = acc + _scale(v, coef)
        return acc


def _scale(v, coef):
    if isinstance(v, Scalar):
        return v * coef
    return v.scale(coef)


class SumCochain(Cochain):
    def __init__(self, a, b):
        super().__init__(a.degree, None, zero=a.zero, memo=False)
        self.a, self.b = a, b

    def __call__(self, c):
        return self.a(c) + self.b(c)

    def value(self, ctx, key):
        return self(Chain(ctx, {key: ONE}))


class PrecomposedCochain(Cochain):
    """phi o op, where op maps chains to chains."""

    def __init__(self, phi, op, degree):
        super().__init__(degree, None, zero=phi.zero, memo=False)
        self.phi, self.op = phi, op

    def __call__(self, c):
        return self.phi(self.op(c))

    def value(self, ctx, key):
        return self(Chain(ctx, {key: ONE}))


class MatrixTraceCochain(Cochain):
    """phi # tr on M_N(A): phi on the A-legs times tr(M_0 M_1 ... M_k)."""

    def __init__(self, inner: Cochain, N: int):
        self.inner = inner
        self.N = N
        super().__init__(inner.degree, None, zero=inner.zero, memo=False)

    def value(self, ctx, key):
        for (_, b, _), (c, _, _) in zip(key, key[1:] + key[:1]):
            if b != c:
                return self.zero
        return self.inner.value(ctx.base, tuple(x for _, _, x in key))


def cochain_b(phi, twisted=False):
    return PrecomposedCochain(phi, lambda c: hoch_b(c, twisted), None if phi.degree is None else phi.degree + 1)


def cochain_B(phi, twisted=False):
    return PrecomposedCochain(phi, lambda c: conn_B(c, twisted), None if phi.degree is None else phi.degree - 1)


def cochain_L(a, phi):
    return PrecomposedCochain(phi, lambda c: lie_L(a, c), phi.degree)


def cochain_iota(a, phi):
    return PrecomposedCochain(phi, lambda c: lie_iota(a, c), None if phi.degree is None else phi.degree - 1)
