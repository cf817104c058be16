"""Small integer-arithmetic utilities shared across modules."""

from __future__ import annotations

import numpy as np


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def smallest_prime_factor(n: int) -> np.ndarray:
    """spf[i] = least prime factor of i, spf[1] = 1."""
    spf = np.arange(n + 1, dtype=np.int64)
    for p in range(2, int(n ** 0.5) + 1):
        if spf[p] == p:
            block = spf[p * p::p]
            block[block == np.arange(p * p, n + 1, p)] = p
    return spf


def divisor_counts(n: int) -> np.ndarray:
    """d(i) for i = 0..n (d(0) set to 0)."""
    d = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        d[i::i] += 1
    return d


def prime_powers_up_to(n: int) -> list[tuple[int, int, int]]:
    """All (p, m, p^m) with p prime, m >= 1, p^m <= n, sorted by p^m."""
    out = []
    for p in primes_up_to(n):
        q, m = p, 1
        while q <= n:
            out.append((p, m, q))
            q *= p
            m += 1
    out.sort(key=lambda t: t[2])
    return out


def factor_into_prime_powers(n: int, spf: np.ndarray) -> list[tuple[int, int]]:
    """n = prod p^e as a list of (p, p^e); requires n <= len(spf) - 1."""
    out = []
    while n > 1:
        p = int(spf[n])
        q = 1
        while n % p == 0:
            n //= p
            q *= p
        out.append((p, q))
    return out
