#!/usr/bin/env python3
"""Goldbach survey: inequality scan, desk-scale verification, and the
conjecture comparison around n = 1e5.

Prints the largest n satisfying pi(2n) - omega(2n) > phi(2n)/2, confirms
g(n) > 0 up to 1e6, and reports the measured means of r_2(2n)/predA and
r_2(2n)/predB.  Note the first ratio sits near 1.20 at this scale: the
N/log^2 N normalization lags the integral form of the prediction by a
slowly vanishing factor, so only the B-ratio band is a sharp check here.
Artifacts land in out/goldbach/.
"""

import sys
from pathlib import Path

import numpy as np

from addbasis import goldbach as gb
from addbasis.cli import ExperimentConfig, run

OUT = Path("out/goldbach")


def main() -> int:
    status = run(ExperimentConfig(
        kind="goldbach", mode="scan", limit=200_000, out_dir=str(OUT / "scan"),
    ))
    print(f"{'ok ' if status == 0 else 'FAIL'}  scan (see out/goldbach/scan)")

    tables = gb.ArithTables(2_200_000)
    zeros = gb.g_zero_exceptions(10**6, tables)
    print(f"{'ok ' if not zeros else 'FAIL'}  g(n) > 0 for 2 <= n <= 1e6 "
          f"({len(zeros)} exceptions)")

    status2 = run(ExperimentConfig(
        kind="goldbach", mode="records", nmin=100_000, nmax=110_000,
        c2_limit=1_000_000, out_dir=str(OUT / "records"),
    ))
    c2 = gb.c2_constant(10**6, tables)
    ns = np.arange(100_000, 110_001)
    gs = gb.g_many(ns, tables)
    ra, rb = [], []
    for n, g in zip(ns, gs):
        r2 = 2 * int(g) - int(tables.is_prime[n])
        predA, predB = gb.predictions(int(n), tables, c2)
        ra.append(r2 / predA)
        rb.append(r2 / predB)
    print(f"      mean r2/predA = {np.mean(ra):.4f} (slow-log excess expected)")
    print(f"      mean r2/predB = {np.mean(rb):.4f} (band [0.55, 0.95])")
    ok_b = 0.55 <= np.mean(rb) <= 0.95
    print(f"{'ok ' if status2 == 0 and ok_b else 'FAIL'}  conjecture comparison")
    return max(status, status2, 0 if ok_b and not zeros else 1)


if __name__ == "__main__":
    sys.exit(main())
