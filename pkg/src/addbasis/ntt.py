"""Exact integer convolution via number-theoretic transforms.

Polynomial products are computed modulo three fixed transform-friendly primes
and recombined with the Chinese Remainder Theorem, so coefficients are exact
integers as long as they stay below the prime product (~2^91.9).  All modular
arithmetic runs in numpy int64: each prime is below 2^31.5, so residue
products never overflow.

The d-fold power of an indicator polynomial uses binary exponentiation with
truncation to the target degree after every multiply; truncation commutes
with multiplication on the kept coefficients, so the result is exact.
"""

from __future__ import annotations

import numpy as np

__all__ = ["NTT_PRIMES", "CapacityError", "convolution_power", "crt_capacity"]

# (prime, primitive root); p - 1 divisible by 2^23 at least, so transforms up
# to 2^23 points are available for every prime.
NTT_PRIMES = ((998244353, 3), (2013265921, 31), (2281701377, 3))

_MAX_TRANSFORM = 1 << 23


class CapacityError(ValueError):
    """Counts could exceed the CRT prime-product bound; more primes needed."""


def crt_capacity() -> int:
    """Product of the transform primes = largest exactly representable count + 1."""
    cap = 1
    for p, _ in NTT_PRIMES:
        cap *= p
    return cap


_plan_cache: dict = {}


def _plan(p: int, g: int, n: int):
    """Bit-reversal permutation, per-level twiddles (forward and inverse) and
    1/n mod p for a size-n transform over GF(p)."""
    key = (p, n)
    plan = _plan_cache.get(key)
    if plan is not None:
        return plan

    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)

    def _power_table(root: int, length: int) -> np.ndarray:
        table = np.ones(max(length, 1), dtype=np.int64)
        filled, cur = 1, root % p
        while filled < length:
            take = min(filled, length - filled)
            table[filled : filled + take] = table[:take] * cur % p
            cur = cur * cur % p
            filled *= 2
        return table

    r = pow(g, (p - 1) // n, p)
    r_inv = pow(r, p - 2, p)
    half = n // 2
    fwd_master = _power_table(r, half)
    inv_master = _power_table(r_inv, half)
    fwd_levels, inv_levels = [], []
    m = 1
    while m < n:
        stride = half // m
        fwd_levels.append(np.ascontiguousarray(fwd_master[::stride][:m]))
        inv_levels.append(np.ascontiguousarray(inv_master[::stride][:m]))
        m *= 2
    n_inv = pow(n, p - 2, p)
    plan = (rev, fwd_levels, inv_levels, n_inv)
    _plan_cache[key] = plan
    return plan


def _ntt(values: np.ndarray, p: int, g: int, inverse: bool) -> np.ndarray:
    n = values.shape[0]
    rev, fwd_levels, inv_levels, n_inv = _plan(p, g, n)
    levels = inv_levels if inverse else fwd_levels
    a = values[rev]
    m = 1
    level = 0
    while m < n:
        w = levels[level]
        b = a.reshape(-1, 2, m)
        u = b[:, 0, :]
        if m == 1:
            v = b[:, 1, :] % p
        else:
            v = b[:, 1, :] * w % p
        s = u + v
        d = u - v + p
        np.subtract(s, p, out=s, where=s >= p)
        np.subtract(d, p, out=d, where=d >= p)
        b[:, 0, :] = s
        b[:, 1, :] = d
        m *= 2
        level += 1
    if inverse:
        a = a * n_inv % p
    return a


def _mul_mod(x: np.ndarray, y: np.ndarray, p: int, g: int, keep: int) -> np.ndarray:
    """Product of two coefficient vectors mod p, truncated to ``keep`` coeffs."""
    X = _ntt(x, p, g, inverse=False)
    if y is x:
        Y = X
    else:
        Y = _ntt(y, p, g, inverse=False)
    Z = X * Y % p
    z = _ntt(Z, p, g, inverse=True)
    z[keep:] = 0
    return z


def _power_mod(base: np.ndarray, d: int, p: int, g: int, keep: int) -> np.ndarray:
    acc = None
    cur = base
    e = d
    while e:
        if e & 1:
            acc = cur.copy() if acc is None else _mul_mod(acc, cur, p, g, keep)
        e >>= 1
        if e:
            cur = _mul_mod(cur, cur, p, g, keep)
    return acc


def _crt3(residues, bound: int):
    """Garner reconstruction for the three fixed primes.

    When the coefficient bound fits int64 the combination stays in numpy;
    otherwise the final combination runs over Python ints (object array).
    """
    (p1, _), (p2, _), (p3, _) = NTT_PRIMES
    a1, a2, a3 = residues
    inv_p1_p2 = pow(p1, p2 - 2, p2)
    inv_p1p2_p3 = pow(p1 * p2 % p3, p3 - 2, p3)

    t1 = a1
    t2 = (a2 - t1) % p2 * inv_p1_p2 % p2
    r12 = (t1 % p3 + (t2 % p3) * (p1 % p3)) % p3
    t3 = (a3 - r12) % p3 * inv_p1p2_p3 % p3

    if bound < 2**63:
        # each Garner term is <= the true value < 2^63, so int64 is safe
        return t1 + t2 * p1 + t3 * (p1 * p2)
    p1p2 = p1 * p2
    out = np.empty(t1.shape[0], dtype=object)
    for i in range(t1.shape[0]):
        out[i] = int(t1[i]) + int(t2[i]) * p1 + int(t3[i]) * p1p2
    return out


def convolution_power(indicator: np.ndarray, d: int, out_len: int, bound: int):
    """Exact coefficients 0..out_len-1 of (sum_{a in A} z^a)^d.

    ``indicator`` is the 0/1 membership vector, ``bound`` a proven upper
    bound on every output coefficient (used for the capacity check and for
    choosing the reconstruction dtype).  Raises CapacityError when the bound
    reaches the prime-product capacity.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if bound >= crt_capacity():
        raise CapacityError(
            f"coefficient bound {bound} exceeds CRT capacity {crt_capacity()}; "
            "extend NTT_PRIMES with further CRT-independent primes"
        )
    size = 1
    while size < 2 * out_len:
        size *= 2
    if size > _MAX_TRANSFORM:
        raise CapacityError(
            f"transform size {size} exceeds the supported maximum {_MAX_TRANSFORM}"
        )
    base = np.zeros(size, dtype=np.int64)
    src = indicator[:out_len]
    base[: src.shape[0]] = src
    residues = [_power_mod(base % p, d, p, g, out_len)[:out_len] for p, g in NTT_PRIMES]
    return _crt3(residues, bound)
