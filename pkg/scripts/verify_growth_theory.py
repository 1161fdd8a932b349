#!/usr/bin/env python3
"""Run the full section-2 verification battery over the standard sequences.

Writes one report directory per (claim, sequence, d) under out/growth_theory/
and prints a one-line verdict for each.  Everything is deterministic; there
is no sampling here.
"""

import sys
from pathlib import Path

from addbasis.cli import ExperimentConfig, run

OUT = Path("out/growth_theory")

BATTERY = [
    # claim, seq, d, xmin, xmax, extra
    ("sandwich", "primes", 2, 10, 10_000, {}),
    ("sandwich", "primes", 3, 10, 10_000, {}),
    ("sandwich", "kth_powers(2)", 4, 10, 10_000, {}),
    ("sandwich", "evens", 4, 10, 10_000, {}),
    ("ordering", "primes", 2, 30, 10_000, {}),
    ("ordering", "naturals", 3, 10, 2_000, {}),
    ("ordering", "stoehr_counterexample", 2, 20, 10_000, {}),
    ("shift", "primes", 2, 100, 10_000, {"shift_exponent": 0.5}),
    ("shift", "kth_powers(2)", 2, 100, 100_000, {"shift_exponent": 0.3}),
    ("integral", "naturals", 2, 100, 10_000, {"f": "x"}),
    ("integral", "kth_powers(2)", 2, 1_000, 100_000, {"f": "x^0.5"}),
    ("integral", "primes", 2, 1_000, 100_000,
     {"f": "x^1*log(x)^-1", "eps": "x^1*log(x)^-2"}),
    ("second-moment", "naturals", 2, 10, 2_000, {}),
    ("second-moment", "primes", 2, 10, 10_000, {}),
    ("exponent", "primes", 2, 100, 1_000_000, {"grid_points": 50}),
    ("exponent", "kth_powers(2)", 2, 100, 1_000_000, {"grid_points": 50}),
]


def main() -> int:
    worst = 0
    for claim, seq, d, xmin, xmax, extra in BATTERY:
        tag = f"{claim}_{seq.replace('(', '').replace(')', '')}_d{d}"
        config = ExperimentConfig(
            kind="verify", claim=claim, seq=seq, d=d, xmin=xmin, xmax=xmax,
            out_dir=str(OUT / tag), **extra,
        )
        status = run(config)
        print(f"{'ok ' if status == 0 else 'FAIL'}  {tag}")
        worst = max(worst, status)
    return worst


if __name__ == "__main__":
    sys.exit(main())
