"""Finite truncations of integer sequences and their counting functions.

A truncation stores a membership bitmap over [0, N] together with cached
prefix counts, so s(x) = |A ∩ [0, x]| is an O(1) lookup.  Generators cover
the standard test sequences (naturals, primes, k-th powers, evens) plus the
doubly-exponential block construction whose counting function fails to be
O-regularly varying.  That construction also gets a closed-form counter that
works far beyond any bitmap horizon.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Sequence",
    "CounterexampleSpec",
    "from_elements",
    "generate",
    "min_pairwise_gcd",
    "counterexample_count",
    "integer_kth_root",
    "save_sequence",
    "load_sequence",
]


@dataclass(frozen=True, eq=False)
class Sequence:
    """Immutable truncation of an integer sequence to [0, horizon].

    ``members[n]`` is True iff n belongs to the sequence; ``prefix[x]``
    caches |A ∩ [0, x]|.  Instances are safe to share across threads.
    """

    horizon: int
    members: np.ndarray
    prefix: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError("horizon must be nonnegative")
        if self.members.shape != (self.horizon + 1,):
            raise ValueError("membership bitmap must cover [0, horizon]")
        self.members.setflags(write=False)
        self.prefix.setflags(write=False)

    @property
    def size(self) -> int:
        """Number of members in the truncation."""
        return int(self.prefix[-1])

    def __contains__(self, n: int) -> bool:
        return 0 <= n <= self.horizon and bool(self.members[n])

    def elements(self) -> np.ndarray:
        """Members in increasing order."""
        return np.flatnonzero(self.members)

    def count_upto(self, x) -> int:
        """s(x) = |A ∩ [0, x]| for real 0 <= x <= horizon."""
        if x < 0:
            raise ValueError(f"x={x} is negative")
        if x > self.horizon:
            raise ValueError(
                f"x={x} exceeds horizon {self.horizon}; the truncation cannot answer"
            )
        return int(self.prefix[math.floor(x)])

    def indicator(self) -> np.ndarray:
        """Membership bitmap as an int64 0/1 vector (a copy; callers may mutate)."""
        return self.members.astype(np.int64)


def _build(members: np.ndarray, horizon: int, label: str) -> Sequence:
    prefix = np.cumsum(members, dtype=np.int64)
    return Sequence(horizon=horizon, members=members, prefix=prefix, label=label)


def from_elements(elements, horizon: int, label: str = "") -> Sequence:
    """Build a truncation from explicit elements.  Duplicates collapse."""
    members = np.zeros(horizon + 1, dtype=bool)
    for e in elements:
        e = int(e)
        if e < 0:
            raise ValueError(f"element {e} is negative")
        if e > horizon:
            raise ValueError(f"element {e} exceeds horizon {horizon}")
        members[e] = True
    return _build(members, horizon, label)


def _sieve_mask(limit: int) -> np.ndarray:
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if mask[i]:
            mask[i * i :: i] = False
    return mask


def integer_kth_root(x: int, k: int) -> int:
    """Exact floor(x**(1/k)) for nonnegative integers of any size."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return 0
    r = int(round(x ** (1.0 / k)))
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


@dataclass(frozen=True)
class CounterexampleSpec:
    """Doubly-exponential block construction on top of the perfect cubes.

    Block k (k = 1..depth) anchors at a_k = (2^(2^k))^3 and appends the
    (2^(2^k))^2 successors of the anchor cube.  Consecutive anchor cubes are
    separated by more than the block length, so blocks never collide.
    """

    depth: int

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")

    def anchor(self, k: int) -> int:
        return (2 ** (2**k)) ** 3

    def block_length(self, k: int) -> int:
        return (2 ** (2**k)) ** 2


def counterexample_count(spec: CounterexampleSpec, x: int) -> int:
    """Exact s(x) for the block construction, in closed form.

    Counts floor(x^(1/3)) + 1 cubes (0 is a cube) plus, for each block with
    anchor a_k <= x, min(block_length, x - a_k) extra elements.  The anchor
    cube itself is not double counted.  Works for x up to arbitrary size
    without enumerating.
    """
    x = int(x)
    if x < 0:
        raise ValueError("x must be nonnegative")
    total = integer_kth_root(x, 3) + 1
    for k in range(1, spec.depth + 1):
        a = spec.anchor(k)
        if a > x:
            break
        total += min(spec.block_length(k), x - a)
    return total


def _stoehr_members(horizon: int, depth: int | None) -> np.ndarray:
    members = np.zeros(horizon + 1, dtype=bool)
    cubes = np.arange(integer_kth_root(horizon, 3) + 1) ** 3
    members[cubes] = True
    k = 1
    while True:
        if depth is not None and k > depth:
            break
        a = (2 ** (2**k)) ** 3
        if a > horizon:
            break
        top = min(horizon, a + (2 ** (2**k)) ** 2)
        members[a : top + 1] = True
        k += 1
    return members


_KIND_RE = re.compile(r"^([a-z_]+)(?:\((\d+)\))?$")


def generate(kind: str, horizon: int, label: str | None = None) -> Sequence:
    """Generate a standard truncation.

    ``kind`` is one of ``naturals``, ``primes``, ``evens``, ``kth_powers(k)``,
    ``stoehr_counterexample`` or ``stoehr_counterexample(depth)``.  The k-th
    powers include 0 (so that s_2 for squares is asymptotic to (pi/4) x).
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    m = _KIND_RE.match(kind.strip())
    if not m:
        raise ValueError(f"unknown sequence kind {kind!r}")
    name, arg = m.group(1), m.group(2)

    if name == "naturals" and arg is None:
        members = np.ones(horizon + 1, dtype=bool)
    elif name == "primes" and arg is None:
        members = _sieve_mask(horizon)
    elif name == "evens" and arg is None:
        members = np.zeros(horizon + 1, dtype=bool)
        members[0::2] = True
    elif name == "kth_powers":
        k = int(arg) if arg is not None else 2
        if k < 1:
            raise ValueError("kth_powers needs k >= 1")
        members = np.zeros(horizon + 1, dtype=bool)
        members[np.arange(integer_kth_root(horizon, k) + 1) ** k] = True
    elif name == "stoehr_counterexample":
        members = _stoehr_members(horizon, int(arg) if arg is not None else None)
    else:
        raise ValueError(f"unknown sequence kind {kind!r}")

    return _build(members, horizon, label if label is not None else kind)


def min_pairwise_gcd(seq: Sequence, cap: int) -> int:
    """Minimum of gcd(a, b) over distinct member pairs with a, b <= cap.

    Returns the literal pairwise minimum, which can exceed the gcd of the
    whole set: {6, 10, 15} has no common divisor yet every pair shares one,
    so the result is 2.  A result of 1 certifies nondegeneracy; the scan
    exits early once a coprime pair is found.
    """
    elems = seq.elements()
    elems = elems[elems <= cap]
    if elems.size < 2:
        raise ValueError("need at least 2 elements within cap")
    best = None
    for i in range(elems.size - 1):
        g = int(np.gcd(elems[i], elems[i + 1 :]).min())
        if best is None or g < best:
            best = g
        if best == 1:
            return 1
    return best


def save_sequence(seq: Sequence, path) -> None:
    """Write newline-delimited members with a ``# horizon=N label=...`` header."""
    path = Path(path)
    with path.open("w", newline="\n") as fh:
        fh.write(f"# horizon={seq.horizon} label={seq.label}\n")
        for e in seq.elements():
            fh.write(f"{int(e)}\n")


def load_sequence(path) -> Sequence:
    """Read a sequence file written by :func:`save_sequence`."""
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip()
        m = re.match(r"^#\s*horizon=(\d+)\s+label=(.*)$", header)
        if not m:
            raise ValueError(f"malformed sequence header: {header!r}")
        horizon = int(m.group(1))
        label = m.group(2)
        members = np.zeros(horizon + 1, dtype=bool)
        prev = -1
        for line in fh:
            line = line.strip()
            if not line:
                continue
            e = int(line)
            if e <= prev:
                raise ValueError("sequence file must be strictly increasing")
            if e > horizon:
                raise ValueError(f"element {e} exceeds declared horizon {horizon}")
            members[e] = True
            prev = e
    return _build(members, horizon, label)
