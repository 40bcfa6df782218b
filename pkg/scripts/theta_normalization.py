"""Print the top Lie cocycle on the generators p1, q1, ..., pn, qn.

Shows that the value is N * dimV * (-hbar)^n for each (n, N, dimV) given, and
times each evaluation.  Usage: python scripts/theta_normalization.py [n N dimV ...]
"""

import sys
import time

from weylcyc import HBAR, Scalar
from weylcyc.liecw import GlW, theta_eval

DEFAULT = [(1, 1, 1), (1, 2, 2), (2, 1, 1), (1, 3, 1)]


def main(argv):
    nums = [int(a) for a in argv]
    cases = [tuple(nums[i:i + 3]) for i in range(0, len(nums), 3)] if nums else DEFAULT
    for n, N, dimV in cases:
        g = GlW(n, N, dimV)
        W = g.weyl
        gens = [g.weyl_element(x) for s in range(1, n + 1) for x in (W.p(s), W.q(s))]
        t0 = time.perf_counter()
        v = theta_eval(g, n, gens)
        dt = time.perf_counter() - t0
        expect = Scalar.const(N * dimV) * (-HBAR) ** n
        print(f"n={n} N={N} dimV={dimV}: {v}  (N dimV (-hbar)^n = {expect}, match={v == expect}, {dt:.2f}s)")


if __name__ == "__main__":
    main(sys.argv[1:])
