"""Command-line driver: ``weylcyc <command> [flags]``.

Every command prints one JSON object with ``"schema": "weylcyc/1"``.  Exit
status is 0 on success, 1 when a verification fails, 2 on usage or input
errors.  Output contains exact values only and is byte-identical for the
same argv.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .errors import ParseError, WeylcycError
from .expr import (from_form, from_section, from_weyl, parse, parse_chain, parse_matrix, print_expr, to_base,
                   to_section, to_weyl, split_chain)
from .scalar import Scalar, fmt_q

SCHEMA = "weylcyc/1"


class UsageError(Exception):
    pass


# JSON encoding ---------------------------------------------------------------------

def scalar_json(s: Scalar):
    """Term list [{"hbar_exp", "re", "im"}] in increasing hbar order."""
    return [{"hbar_exp": e, "re": fmt_q(re), "im": fmt_q(im)} for e, (re, im) in s.items()]


def canon_json(c):
    terms = []
    for (mono, f), s in sorted(c.terms.items(), key=lambda t: (t[0][0], t[0][1])):
        terms.append({"gens": {g: e for g, e in mono}, "dx": list(f), "coeff": scalar_json(s)})
    return {"text": print_expr(c), "terms": terms}


def _emit(obj, out):
    out.write(json.dumps({"schema": SCHEMA, **obj}, sort_keys=True, ensure_ascii=False))
    out.write("\n")


# argument parsing ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="weylcyc", description="Exact cyclic cocycles on the Weyl algebra.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, n=True):
        if n:
            sp.add_argument("--n", type=int, default=1, help="number of symplectic pairs")
        sp.add_argument("--seed", type=int, default=0)
        return sp

    sp = common(sub.add_parser("eval-moyal", help="star product a * b"))
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)

    sp = common(sub.add_parser("eval-tau", help="tau_{2k} (or tau_{2k-1}) on a chain"))
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--chain", required=True, help="slots separated by ⊗ or |")
    sp.add_argument("--odd", action="store_true")

    sp = common(sub.add_parser("eval-theta", help="Theta_{V,N,2k}(1) on Weyl arguments"))
    sp.add_argument("--k", type=int, default=None, help="defaults to n")
    sp.add_argument("--N", type=int, default=1)
    sp.add_argument("--dimV", type=int, default=1)
    sp.add_argument("--args", default=None, help="arguments separated by ⊗ or |; default p1,q1,...")

    sp = common(sub.add_parser("eval-twisted-trace", help="tr_gamma(a)"))
    sp.add_argument("--gamma", default="i", help="id, -1, i, -i, or one per pair separated by commas")
    sp.add_argument("--a", required=True)

    sp = common(sub.add_parser("pair", help="pairing of a cocycle with an idempotent"))
    sp.add_argument("--phi", choices=("tau", "tau0"), default="tau")
    sp.add_argument("--e", required=True, help="matrix: rows separated by ';', entries by ','")

    sp = common(sub.add_parser("verify", help="run a verification suite"))
    from .suites import SUITES
    sp.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--gamma", default="i")
    sp.add_argument("--max-degree", type=int, default=2)
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--order", type=int, default=3)
    sp.add_argument("--timing", action="store_true", help="include wall-clock seconds (not reproducible)")

    sp = common(sub.add_parser("lift", help="Taylor lift f(x) -> f(x + y)"))
    sp.add_argument("--f", required=True)
    sp.add_argument("--order", type=int, default=None, help="keep fiber degree <= order")

    sp = common(sub.add_parser("psi", help="Psi^i_{2k} on a chain of sections"))
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--chain", required=True)
    sp.add_argument("--lift", action="store_true", help="lift each slot from the base first")
    sp.add_argument("--at", default=None, help="evaluate at a point, coordinates separated by ','")
    return p


def _check_n(n):
    if n < 1:
        raise UsageError("--n must be positive")


# commands --------------------------------------------------------------------------

def cmd_eval_moyal(a):
    from .weyl import moyal_mul

    f, g = to_weyl(parse(a.a), a.n), to_weyl(parse(a.b), a.n)
    return {"command": "eval-moyal", "n": a.n, "a": print_expr(from_weyl(f)), "b": print_expr(from_weyl(g)),
            "result": canon_json(from_weyl(moyal_mul(f, g)))}


def _weyl_chain(text, n):
    from .homalg import Chain
    from .tau import weyl_algebra

    A = weyl_algebra(n)
    slots = [A.to_vec(to_weyl(c, n)) for c in parse_chain(text)]
    return Chain.tensor(A, slots), slots


def cmd_eval_tau(a):
    from .tau import tau_even, tau_odd

    c, slots = _weyl_chain(a.chain, a.n)
    v = tau_odd(a.k, c) if a.odd else tau_even(a.k, c)
    name = f"tau_{2 * a.k - 1 if a.odd else 2 * a.k}"
    return {"command": "eval-tau", "n": a.n, "k": a.k, "cochain": name, "degree": len(slots) - 1,
            "result": scalar_json(v), "text": str(v)}


def cmd_eval_theta(a):
    from .liecw import GlW, theta_eval
    from .weyl import WeylContext

    k = a.n if a.k is None else a.k
    g = GlW(a.n, a.N, a.dimV)
    W = WeylContext(a.n)
    if a.args is None:
        if k > a.n:
            raise UsageError("default arguments need k <= n")
        elems = [gen for s in range(1, k + 1) for gen in (W.p(s), W.q(s))]
    else:
        elems = [to_weyl(parse(piece), a.n) for piece, _ in split_chain(a.args)]
    if len(elems) != 2 * k:
        raise UsageError(f"Theta_{2 * k} takes {2 * k} arguments, got {len(elems)}")
    v = theta_eval(g, k, [g.weyl_element(x) for x in elems])
    return {"command": "eval-theta", "n": a.n, "k": k, "N": a.N, "dimV": a.dimV,
            "args": [print_expr(from_weyl(x)) for x in elems], "result": scalar_json(v), "text": str(v)}


def cmd_eval_twisted_trace(a):
    from .suites import parse_gamma
    from .tau import TwistedTrace

    try:
        twist = parse_gamma(a.gamma, a.n)
    except ValueError as err:
        raise UsageError(str(err)) from None
    el = to_weyl(parse(a.a), a.n)
    v = TwistedTrace(twist)(el)
    return {"command": "eval-twisted-trace", "n": a.n, "gamma": a.gamma, "a": print_expr(from_weyl(el)),
            "result": scalar_json(v), "text": str(v)}


def cmd_pair(a):
    from .ktheory import Idempotent, TotCocycle, pair, tau_cocycle
    from .matrix import Matrix
    from .tau import TauCochain

    rows = parse_matrix(a.e)
    weyl = any(c.generators() for r in rows for c in r)
    if weyl:
        M = Matrix([[to_weyl(c, a.n) for c in r] for r in rows])
    else:
        M = Matrix([[c.constant() for c in r] for r in rows])
    phi = tau_cocycle(a.n) if a.phi == "tau" else TotCocycle((TauCochain(a.n, 0),))
    v = pair(phi, Idempotent(M))
    return {"command": "pair", "n": a.n, "phi": a.phi, "size": len(rows), "result": scalar_json(v), "text": str(v)}


def cmd_verify(a):
    from .suites import SuiteConfig, run_suite

    cfg = SuiteConfig(n=a.n, k=a.k, seed=a.seed, max_degree=a.max_degree, samples=a.samples, gamma=a.gamma,
                      order=a.order)
    t0 = time.perf_counter()
    try:
        results = run_suite(a.suite, cfg)
    except ValueError as err:
        raise UsageError(str(err)) from None
    report = {"command": "verify", "suite": a.suite, "n": a.n, "seed": a.seed,
              "passed": all(r.passed for r in results), "checks": [r.as_json() for r in results]}
    if a.timing:
        report["seconds"] = round(time.perf_counter() - t0, 3)
    return report


def cmd_lift(a):
    from .fedosov import WeylBundle

    B = WeylBundle(a.n)
    f = to_base(parse(a.f), B)
    s = B.lift(f)
    if a.order is not None:
        V = 2 * a.n
        s = {k: v for k, v in s.items() if sum(k[0][V:]) <= a.order}
    return {"command": "lift", "n": a.n, "f": str(f), "result": canon_json(from_section(s, B))}


def cmd_psi(a):
    from .fedosov import WeylBundle
    from .homalg import Chain

    B = WeylBundle(a.n)
    parts = parse_chain(a.chain)
    slots = [B.lift(to_base(c, B)) if a.lift else to_section(c, B) for c in parts]
    x0 = None
    if a.at is not None:
        x0 = [parse(t).constant() for t in a.at.split(",")]
        if any(v is None for v in x0):
            raise UsageError("--at takes constants")
    w = B.psi(a.i, a.k, Chain.tensor(B.ctx, slots), x0=x0)
    return {"command": "psi", "n": a.n, "i": a.i, "k": a.k, "result": canon_json(from_form(w))}


COMMANDS = {
    "eval-moyal": cmd_eval_moyal,
    "eval-tau": cmd_eval_tau,
    "eval-theta": cmd_eval_theta,
    "eval-twisted-trace": cmd_eval_twisted_trace,
    "pair": cmd_pair,
    "verify": cmd_verify,
    "lift": cmd_lift,
    "psi": cmd_psi,
}


def run_command(argv, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_n(args.n)
        result = COMMANDS[args.command](args)
    except UsageError as err:
        _emit({"error": {"kind": "usage", "message": str(err)}}, out)
        return 2
    except ParseError as err:
        _emit({"error": {"kind": type(err).__name__, "message": err.reason, "position": err.pos,
                         "line": err.line, "column": err.col}}, out)
        return 2
    except (WeylcycError, ValueError, ZeroDivisionError) as err:
        _emit({"error": {"kind": type(err).__name__, "message": str(err)}}, out)
        return 2
    _emit(result, out)
    if args.command == "verify" and not result["passed"]:
        return 1
    return 0


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
