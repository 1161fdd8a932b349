#!/usr/bin/env python3
"""Show the failure of O-regular variation on the block construction.

The counting function of cubes plus doubly-exponential successor blocks has
s(2a_k)/s(a_k) exploding like 2^(2^k)/k, so no O-regularly varying function
can match it.  The closed-form counter evaluates anchors far beyond any
bitmap (a_6 = 2^192) without enumerating.
"""

import sys

from addbasis.cli import ExperimentConfig, run
from addbasis.sequences import CounterexampleSpec, counterexample_count


def main() -> int:
    status = run(ExperimentConfig(
        kind="counterexample", depth=4, horizon=100_000,
        out_dir="out/counterexample",
    ))
    spec = CounterexampleSpec(depth=6)
    print(f"{'k':>2} {'a_k':>24} {'s(a_k)':>14} {'s(2a_k)':>16} {'ratio':>12}")
    for k in range(1, 7):
        a = spec.anchor(k)
        s_a = counterexample_count(spec, a)
        s_2a = counterexample_count(spec, 2 * a)
        print(f"{k:>2} {a:>24} {s_a:>14} {s_2a:>16} {s_2a / s_a:>12.1f}")
    return status


if __name__ == "__main__":
    sys.exit(main())
