"""Verification suites behind ``weylcyc verify``.

Each suite samples with a seeded generator and returns CheckResults; a
failing check carries the first counterexample found.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .expr import from_section, from_weyl, print_expr
from .homalg import (Chain, cochain_B, cochain_L, cochain_b, cochain_iota, conn_B, hoch_b, nabla_chain,
                     omega_power)
from .matrix import Matrix
from .sampling import random_base_poly, random_chain, random_section, random_weyl
from .scalar import Scalar, ONE
from .tau import TauCochain, TwistedTrace, weyl_algebra
from .weyl import FiniteTwist, WeylContext


@dataclass
class SuiteConfig:
    n: int = 1
    k: int | None = None
    seed: int = 0
    max_degree: int = 2
    samples: int = 10
    gamma: str = "i"
    order: int = 3


@dataclass
class CheckResult:
    name: str
    passed: bool
    samples: int
    counterexample: dict | None = None

    def as_json(self):
        out = {"name": self.name, "status": "pass" if self.passed else "fail", "samples": self.samples}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class _Tally:
    name: str
    samples: int = 0
    counterexample: dict | None = field(default=None)

    def record(self, ok, witness=None):
        self.samples += 1
        if not ok and self.counterexample is None:
            self.counterexample = witness() if callable(witness) else (witness or {})

    def result(self):
        return CheckResult(self.name, self.counterexample is None, self.samples, self.counterexample)


def _chain_text(c: Chain, n):
    """Slots of a single-term chain; sums of tensors print term by term."""
    W = WeylContext(n)
    out = []
    for key, coef in c.terms.items():
        slots = [print_expr(from_weyl(W.monomial(k[0]))) for k in key]
        out.append({"coef": str(coef), "slots": slots})
    return out


def _witness(c, n, **values):
    return lambda: {"chain": _chain_text(c, n), **{k: str(v) for k, v in values.items()}}


def _ks(cfg, lo=1):
    return [cfg.k] if cfg.k is not None else list(range(lo, cfg.n + 1))


# Weyl algebra and tau ------------------------------------------------------------

def suite_moyal(cfg: SuiteConfig):
    rng = random.Random(cfg.seed)
    W = WeylContext(cfg.n)
    t = _Tally("moyal-associativity")
    for _ in range(cfg.samples):
        a, b, c = (random_weyl(rng, W, cfg.max_degree, 3) for _ in range(3))
        lhs, rhs = (a * b) * c, a * (b * c)
        t.record(lhs == rhs, lambda: {"a": print_expr(from_weyl(a)), "b": print_expr(from_weyl(b)),
                                      "c": print_expr(from_weyl(c))})
    return [t.result()]


def suite_tau_chain(cfg: SuiteConfig):
    """-B tau_{2k} = tau_{2k-1} = b tau_{2k-2}."""
    rng = random.Random(cfg.seed)
    W = WeylContext(cfg.n)
    A = weyl_algebra(cfg.n)
    out = []
    for k in _ks(cfg):
        te, tlo, to = TauCochain(cfg.n, k), TauCochain(cfg.n, k - 1), TauCochain(cfg.n, k, odd=True)
        t = _Tally(f"tau-chain-identity-k{k}")
        for _ in range(cfg.samples):
            c = random_chain(rng, A, W, 2 * k - 1, cfg.max_degree)
            x, y, z = -cochain_B(te)(c), to(c), cochain_b(tlo)(c)
            t.record(x == y == z, _witness(c, cfg.n, minus_B_tau=x, tau_odd=y, b_tau=z))
        out.append(t.result())
    return out


def suite_tau_top_cocycle(cfg: SuiteConfig):
    rng = random.Random(cfg.seed)
    W = WeylContext(cfg.n)
    A = weyl_algebra(cfg.n)
    top = TauCochain(cfg.n, cfg.n)
    t = _Tally("b-tau-top-vanishes")
    for _ in range(cfg.samples):
        c = random_chain(rng, A, W, 2 * cfg.n + 1, cfg.max_degree)
        v = cochain_b(top)(c)
        t.record(not v, _witness(c, cfg.n, value=v))
    return [t.result()]


def suite_tau_invariance(cfg: SuiteConfig):
    rng = random.Random(cfg.seed)
    W = WeylContext(cfg.n)
    A = weyl_algebra(cfg.n)
    quads = [W.monomial(e) for e in W.monomials_up_to(2) if sum(e) == 2]
    tL, ti = _Tally("lie-derivative-vanishes"), _Tally("contraction-vanishes")
    for a in quads:
        for k in range(0, cfg.n + 1):
            tau = TauCochain(cfg.n, k)
            for _ in range(max(1, cfg.samples // len(quads))):
                c = random_chain(rng, A, W, 2 * k, cfg.max_degree)
                v = cochain_L(a, tau)(c)
                tL.record(not v, _witness(c, cfg.n, a=print_expr(from_weyl(a)), value=v))
                if k:
                    c = random_chain(rng, A, W, 2 * k - 1, cfg.max_degree)
                    v = cochain_iota(a, tau)(c)
                    ti.record(not v, _witness(c, cfg.n, a=print_expr(from_weyl(a)), value=v))
    return [tL.result(), ti.result()]


def parse_gamma(text: str, n: int) -> FiniteTwist:
    """'i' applies to every line; 'i,-1' lists one eigenvalue per pair; 'id' is the identity."""
    names = {"id": "1", "1": "1", "-1": "-1", "i": "i", "-i": "-i"}
    parts = [p.strip() for p in text.split(",")]
    if any(p not in names for p in parts):
        raise ValueError(f"unknown twist {text!r}; use id, -1, i, -i")
    if len(parts) == 1:
        parts = parts * n
    if len(parts) != n:
        raise ValueError(f"twist lists {len(parts)} eigenvalues for n={n}")
    return FiniteTwist([names[p] for p in parts])


def suite_twisted_trace(cfg: SuiteConfig):
    twist = parse_gamma(cfg.gamma, cfg.n)
    tr = TwistedTrace(twist)
    W = WeylContext(cfg.n)
    mons = [W.monomial(e) for e in W.monomials_up_to(cfg.max_degree)]
    t = _Tally("twisted-trace-property")
    for a in mons:
        for b in mons:
            lhs, rhs = tr(a * b), tr(twist.act(b) * a)
            t.record(lhs == rhs, lambda: {"a": print_expr(from_weyl(a)), "b": print_expr(from_weyl(b)),
                                          "lhs": str(lhs), "rhs": str(rhs)})
    return [t.result()]


# flat Weyl bundle ----------------------------------------------------------------

def suite_fedosov(cfg: SuiteConfig):
    from .fedosov import WeylBundle, psi_theta_bridge
    from .poly import Polynomial
    from .weyl import WeylElement

    rng = random.Random(cfg.seed)
    B = WeylBundle(cfg.n)
    R = B.base_ring
    out = []
    t = _Tally("D-squared-vanishes")
    for _ in range(cfg.samples):
        s = random_section(rng, B, cfg.max_degree)
        v = B.fedosov_D(B.fedosov_D(s))
        t.record(not v, lambda: {"section": print_expr(from_section(s, B))})
    out.append(t.result())

    star_x = WeylElement(B.xnames, pairs=tuple((2 * j, 2 * j + 1) for j in range(cfg.n)))
    t = _Tally("lift-multiplicative")
    for _ in range(cfg.samples):
        f, g = random_base_poly(rng, R, cfg.max_degree), random_base_poly(rng, R, cfg.max_degree)
        fg = star_x._new(dict(f.terms)) * star_x._new(dict(g.terms))
        ok = B.star(B.lift(f), B.lift(g)) == B.lift(Polynomial(B.xnames, fg.terms)) and not B.fedosov_D(B.lift(f))
        t.record(ok, lambda: {"f": str(f), "g": str(g)})
    out.append(t.result())

    t = _Tally("curvature-central-scalar")
    Om = B.weyl_curvature()
    for _ in range(cfg.samples):
        s = random_section(rng, B, cfg.max_degree)
        t.record(not B.commutator(Om, s), lambda: {"section": print_expr(from_section(s, B))})
    ok = all(k[0] == (0,) * (4 * cfg.n) and len(k[1]) == 2 and v.is_constant() for k, v in Om.items())
    t.record(ok, {"omega": print_expr(from_section(Om, B))})
    out.append(t.result())

    t = _Tally("psi-differential")
    for k in range(0, cfg.n + 1):
        for i in range(0, 2 * k + 1):
            for _ in range(max(1, cfg.samples // 4)):
                m = 2 * k - i
                c = B.chain([B.lift(random_base_poly(rng, R, cfg.max_degree)) for _ in range(m + 1)])
                lhs = B.form_d(B.psi(i, k, c))
                if i % 2 == 0:
                    lhs = -lhs
                rhs = B.forms.zero()
                if m >= 1 and i + 1 <= 2 * k:
                    rhs = rhs + B.psi(i + 1, k, hoch_b(c))
                if k + 1 <= cfg.n:
                    rhs = rhs + B.psi(i + 1, k + 1, conn_B(c))
                t.record(lhs == rhs, {"i": i, "k": k})
    out.append(t.result())

    t = _Tally("b-of-connection-powers")
    A = B.connection_form()
    h = Scalar.hbar(1)
    for k in range(1, 4):
        lhs = hoch_b(omega_power(A, k, B.ctx))
        rhs = nabla_chain(omega_power(A, k - 1, B.ctx)).scale(h)
        for j in range(1, k):
            slots = [B.unit] + [A] * (k - 1)
            slots[j] = Om
            rhs = rhs + Chain.tensor(B.ctx, slots, h * Scalar.const((-1) ** j))
        t.record(lhs == rhs, {"k": k})
    out.append(t.result())

    if cfg.n == 1:
        t = _Tally("psi-theta-bridge")
        lhs, rhs = psi_theta_bridge(B, 1)
        t.record(lhs == rhs, {"psi": str(lhs), "theta": str(rhs)})
        out.append(t.result())
    return out


# Alexander-Spanier -----------------------------------------------------------------

def _random_as(rng, m, k, deg):
    from .aspanier import ASCochain, coordinate_ring

    R = coordinate_ring(m)
    f = ASCochain(m, k, {})
    for _ in range(2):
        f = f + ASCochain.tensor([random_base_poly(rng, R, deg) for _ in range(k + 1)])
    return f


def suite_alexander_spanier(cfg: SuiteConfig):
    from .aspanier import (antisymmetrize, as_delta, as_delta_prime, as_epsilon, as_extra_degeneracy_at,
                           as_extra_degeneracy_wrap, as_iota, form_d, lambda_total)

    rng = random.Random(cfg.seed)
    m = 2
    tdd, tc, tl = _Tally("delta-squared-vanishes"), _Tally("contractions"), _Tally("lambda-chain-map")
    for _ in range(cfg.samples):
        k = rng.randint(0, 3)
        f = _random_as(rng, m, k, cfg.max_degree)
        tdd.record(not as_delta(as_delta(f)) and not as_delta_prime(as_delta_prime(f)), {"k": k})
        df = as_delta(f)
        lhs = as_extra_degeneracy_at(df) + (as_delta(as_extra_degeneracy_at(f)) if k else
                                            as_iota(as_epsilon(f), m))
        ok = lhs == f
        dpf = as_delta_prime(f)
        lhs = as_extra_degeneracy_wrap(dpf) + (as_delta_prime(as_extra_degeneracy_wrap(f)) if k else
                                               f._like(0, {}))
        ok = ok and lhs == f
        tc.record(ok, {"k": k})
        g = antisymmetrize(f)
        lam, lam1 = lambda_total(g), lambda_total(as_delta(g))
        ok = all(lam1.get(d + 1) == form_d(w) for d, w in lam.items() if d + 1 in lam1)
        tl.record(ok, {"k": k})
    return [tdd.result(), tc.result(), tl.result()]


# pairing -------------------------------------------------------------------------

def suite_pairing(cfg: SuiteConfig):
    from .ktheory import Idempotent, pair, tau_cocycle

    rng = random.Random(cfg.seed)
    phi = tau_cocycle(cfg.n)
    t = _Tally("pairing-unit")
    v = pair(phi, Idempotent(Matrix([[1]])))
    t.record(v == ONE, {"value": str(v)})
    tr = _Tally("pairing-rank")
    for _ in range(cfg.samples):
        N = rng.randint(1, 3)
        diag = [rng.randint(0, 1) for _ in range(N)]
        e = Idempotent(Matrix([[diag[i] if i == j else 0 for j in range(N)] for i in range(N)]))
        v = pair(phi, e)
        tr.record(v == Scalar.const(sum(diag)), {"diag": diag, "value": str(v)})
    return [t.result(), tr.result()]


SUITES = {
    "moyal-assoc": suite_moyal,
    "tau-chain": suite_tau_chain,
    "tau-top-cocycle": suite_tau_top_cocycle,
    "tau-invariance": suite_tau_invariance,
    "twisted-trace": suite_twisted_trace,
    "fedosov-flat": suite_fedosov,
    "alexander-spanier": suite_alexander_spanier,
    "pairing": suite_pairing,
}


def run_suite(name: str, cfg: SuiteConfig):
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(run_suite(key, cfg))
        return out
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](cfg)
