"""Rewrite the CLI golden fixtures in tests/golden from the current build.

Run only after checking the new values by hand; the tests compare against
these files byte for byte.
"""

import io
import os

from weylcyc.cli import run_command

GOLDEN = os.path.join(os.path.dirname(__file__), os.pardir, "tests", "golden")

FIXTURES = {
    "eval_tau_2.json": ["eval-tau", "--n", "1", "--k", "1", "--chain", "1 ⊗ p1 ⊗ q1"],
    "twisted_trace_i.json": ["eval-twisted-trace", "--n", "1", "--gamma", "i", "--a", "1"],
    "theta_1_1_2.json": ["eval-theta", "--n", "1", "--N", "1", "--dimV", "1"],
}


def main():
    for name, argv in FIXTURES.items():
        buf = io.StringIO()
        code = run_command(argv, buf)
        if code:
            raise SystemExit(f"{name}: exit {code}")
        with open(os.path.join(GOLDEN, name), "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
        print(name, buf.getvalue().strip())


if __name__ == "__main__":
    main()
