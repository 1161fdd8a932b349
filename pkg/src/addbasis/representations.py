"""Exact representation counts r_d and their prefix sums s_d.

r_d(n) counts ordered d-tuples of members summing to n; s_d(x) accumulates
r_d up to x.  Tables are exact integer vectors: the ``fast`` builder raises
the indicator polynomial to the d-th power under the NTT/CRT engine, the
``direct`` builder applies the level-by-level recursion r_d = r_{d-1} * r_1
and serves as the independent oracle.  Floating point never enters; when a
table could outgrow int64 the vectors switch to Python integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import accumulate
from pathlib import Path

import numpy as np

from .ntt import NTT_PRIMES, convolution_power
from .sequences import Sequence

__all__ = [
    "ReprTable",
    "RecursionReport",
    "BudgetError",
    "build_table",
    "r_direct",
    "recursion_check",
    "distinct_representation_bounds",
    "save_table_csv",
]

_INT64_MAX = 2**63 - 1


class BudgetError(RuntimeError):
    """An enumeration or campaign would exceed its configured work budget."""


@dataclass(frozen=True, eq=False)
class ReprTable:
    """Exact r_d(0..horizon) and s_d(0..horizon) for one sequence and order."""

    d: int
    horizon: int
    counts: np.ndarray
    prefix: np.ndarray
    label: str = ""
    method: str = "direct"

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        self.counts.setflags(write=False)
        self.prefix.setflags(write=False)

    def r(self, n: int) -> int:
        if not 0 <= n <= self.horizon:
            raise ValueError(f"n={n} outside [0, {self.horizon}]")
        return int(self.counts[n])

    def s(self, x) -> int:
        """s_d(x) = prefix at floor(x)."""
        if x < 0:
            raise ValueError("x must be nonnegative")
        if x > self.horizon:
            raise ValueError(f"x={x} exceeds table horizon {self.horizon}")
        return int(self.prefix[math.floor(x)])

    def mean_value(self, n: int) -> float:
        """s_d(n)/n; undefined at n = 0."""
        if n < 1:
            raise ValueError("mean value starts at n = 1")
        return self.s(n) / n


def _count_bound(seq_size: int, d: int, horizon: int) -> int:
    """Proven bound on r_d(n): at most C(n+d-1, d-1) tuples even for naturals."""
    del seq_size
    return math.comb(horizon + d - 1, d - 1)


def _prefix_bound(seq_size: int, d: int) -> int:
    """s_d(N) <= s(N)^d."""
    return max(seq_size, 1) ** d


def _build_prefix(counts: np.ndarray, prefix_bound: int) -> np.ndarray:
    if prefix_bound <= _INT64_MAX and counts.dtype == np.int64:
        return np.cumsum(counts, dtype=np.int64)
    return np.array(list(accumulate(int(c) for c in counts)), dtype=object)


def _direct_counts(indicator: np.ndarray, d: int, n_len: int, bound: int) -> np.ndarray:
    """Level-by-level recursion; int64 when the bound allows, else Python ints."""
    members = np.flatnonzero(indicator[:n_len])
    if bound <= _INT64_MAX:
        level = indicator[:n_len].astype(np.int64)
        for _ in range(d - 1):
            nxt = np.zeros(n_len, dtype=np.int64)
            for a in members:
                nxt[a:] += level[: n_len - a]
            level = nxt
        return level
    level = [int(v) for v in indicator[:n_len]]
    for _ in range(d - 1):
        nxt = [0] * n_len
        for a in members:
            a = int(a)
            for i in range(a, n_len):
                nxt[i] += level[i - a]
        level = nxt
    return np.array(level, dtype=object)


def build_table(
    seq: Sequence, d: int, horizon: int | None = None, method: str = "fast"
) -> ReprTable:
    """Exact table of r_d(n) for n <= horizon.

    ``fast`` squares the indicator polynomial under the NTT modulo the three
    CRT primes; ``direct`` runs the d-1 convolution levels of the recursion.
    Both are exact; ``direct`` is the oracle in tests.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if seq.size == 0:
        raise ValueError("empty truncation; representation tables need members")
    if horizon is None:
        horizon = seq.horizon
    if horizon > seq.horizon:
        raise ValueError(f"horizon {horizon} exceeds sequence horizon {seq.horizon}")
    n_len = horizon + 1
    indicator = seq.members[:n_len].astype(np.int64)
    bound = _count_bound(seq.size, d, horizon)

    if method == "fast":
        counts = convolution_power(indicator, d, n_len, bound)
    elif method == "direct":
        counts = _direct_counts(indicator, d, n_len, bound)
    else:
        raise ValueError(f"unknown method {method!r}")

    prefix = _build_prefix(counts, _prefix_bound(seq.count_upto(horizon), d))
    return ReprTable(
        d=d, horizon=horizon, counts=counts, prefix=prefix,
        label=seq.label, method=method,
    )


def r_direct(seq: Sequence, d: int, n: int) -> int:
    """Definitional count of ordered d-tuples summing to n, by depth-d recursion."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if n > seq.horizon:
        raise ValueError(f"n={n} exceeds horizon {seq.horizon}")
    if n < 0:
        return 0
    members = seq.elements()

    def rec(depth: int, target: int) -> int:
        if target < 0:
            return 0
        if depth == 1:
            return 1 if seq.members[target] else 0
        total = 0
        for a in members:
            if a > target:
                break
            total += rec(depth - 1, target - int(a))
        return total

    return rec(d, n)


@dataclass(frozen=True)
class RecursionReport:
    """Exact verification of the three convolution identities at sampled n."""

    d: int
    l: int
    sample_ns: tuple
    max_discrepancy: int
    failures: tuple

    @property
    def ok(self) -> bool:
        return self.max_discrepancy == 0


def recursion_check(
    seq: Sequence, d: int, l: int, sample_ns, method: str = "fast"
) -> RecursionReport:
    """Check r_d = r_{d-l} * r_l and both prefix variants exactly at sample_ns.

    Identities checked, all as exact integers:
        (i)   r_d(n) = sum_k r_{d-l}(k) r_l(n-k)
        (ii)  s_d(n) = sum_k r_{d-l}(k) s_l(n-k)
        (iii) s_d(n) = sum_k s_{d-l}(k) r_l(n-k)
    """
    if not 1 <= l < d:
        raise ValueError("need 1 <= l < d")
    sample_ns = tuple(int(n) for n in sample_ns)
    top = max(sample_ns)
    t_d = build_table(seq, d, top, method)
    t_dl = build_table(seq, d - l, top, method)
    t_l = build_table(seq, l, top, method)

    # the checker itself must not overflow: bound one summand times the
    # term count, and fall back to Python ints when int64 cannot hold it
    size = seq.count_upto(top)
    summand_bound = _count_bound(size, d - l, top) * _prefix_bound(size, l)
    as_obj = summand_bound * (top + 1) > _INT64_MAX

    worst = 0
    failures = []
    for n in sample_ns:
        r_dl = t_dl.counts[: n + 1]
        r_l_rev = t_l.counts[n::-1]
        s_l_rev = t_l.prefix[n::-1]
        s_dl = t_dl.prefix[: n + 1]
        if as_obj:
            r_dl = r_dl.astype(object)
            s_dl = s_dl.astype(object)
        lhs_r = int(t_d.counts[n])
        lhs_s = int(t_d.prefix[n])
        checks = (
            lhs_r - int(np.dot(r_dl, r_l_rev)),
            lhs_s - int(np.dot(r_dl, s_l_rev)),
            lhs_s - int(np.dot(s_dl, r_l_rev)),
        )
        disc = max(abs(c) for c in checks)
        if disc:
            failures.append((n, checks))
        worst = max(worst, disc)
    return RecursionReport(
        d=d, l=l, sample_ns=sample_ns, max_discrepancy=worst, failures=tuple(failures)
    )


def distinct_representation_bounds(
    seq: Sequence, d: int, n: int, budget: int = 50_000_000
) -> tuple[int, int]:
    """(r_d, r_d_star): ordered count and unordered-multiset count at n.

    The multiset count comes from direct enumeration of nondecreasing tuples;
    the pair must satisfy r_d/d! <= r_d_star <= r_d, which is asserted here.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    members = seq.elements()
    members = members[members <= n]
    work = (n + 1) * max(int(members.size), 1) ** (d - 1)
    if work > budget:
        raise BudgetError(
            f"multiset enumeration needs ~{work} steps, over budget {budget}"
        )

    def count_multisets(depth: int, target: int, start_idx: int) -> int:
        # nondecreasing tuples: each level picks a member index >= start_idx
        if depth == 0:
            return 1 if target == 0 else 0
        total = 0
        for i in range(start_idx, members.size):
            a = int(members[i])
            if a > target:
                break
            total += count_multisets(depth - 1, target - a, i)
        return total

    r_star = count_multisets(d, n, 0)
    r_ord = r_direct(seq, d, n)
    assert r_ord <= math.factorial(d) * r_star, (
        f"sandwich violated below: r_d={r_ord}, d!*r*={math.factorial(d) * r_star}"
    )
    assert r_star <= r_ord, f"sandwich violated above: r*={r_star}, r_d={r_ord}"
    return r_ord, r_star


def save_table_csv(table: ReprTable, path) -> None:
    """Dump ``n,r_d,s_d`` rows with a provenance header comment."""
    primes = ",".join(str(p) for p, _ in NTT_PRIMES) if table.method == "fast" else "-"
    path = Path(path)
    with path.open("w", newline="\n") as fh:
        fh.write(
            f"# label={table.label} d={table.d} method={table.method} primes={primes}\n"
        )
        fh.write("n,r_d,s_d\n")
        for n in range(table.horizon + 1):
            fh.write(f"{n},{int(table.counts[n])},{int(table.prefix[n])}\n")
