"""Hot float kernels: numba-compiled with a numpy fallback.

Set HECKESIGN_DISABLE_NUMBA=1 to select the pure-numpy/python path (the
same functions, no compilation).  benchmarks/bench_kernels.py compares the
two backends.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("HECKESIGN_DISABLE_NUMBA", "") not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

__all__ = ["USE_NUMBA", "lambda_fill", "hecke_relation_defect",
           "deligne_defect", "expansion_tensor_sum"]


def _lambda_fill_impl(spf, pp_lambda):
    """Multiplicative fill: lam[n] = lam[q] * lam[n/q], q = spf-power of n.

    pp_lambda must hold lambda at every prime power index <= N (0 elsewhere).
    """
    N = spf.shape[0] - 1
    lam = np.zeros(N + 1)
    lam[1] = 1.0
    for n in range(2, N + 1):
        p = spf[n]
        q = 1
        m = n
        while m % p == 0:
            m //= p
            q *= p
        if m == 1:
            lam[n] = pp_lambda[n]
        else:
            lam[n] = pp_lambda[q] * lam[m]
    return lam


def _hecke_relation_defect_impl(lam):
    """max over mn <= N of |lam(m)lam(n) - sum_{d | (m,n)} lam(mn/d^2)|."""
    N = lam.shape[0] - 1
    worst = 0.0
    for m in range(1, N + 1):
        for n in range(1, N // m + 1):
            a, b = m, n
            while b:
                a, b = b, a % b
            g = a
            total = 0.0
            for d in range(1, g + 1):
                if g % d == 0:
                    total += lam[(m * n) // (d * d)]
            defect = abs(lam[m] * lam[n] - total)
            if defect > worst:
                worst = defect
    return worst


if USE_NUMBA:
    lambda_fill = njit(cache=True)(_lambda_fill_impl)
    hecke_relation_defect = njit(cache=True)(_hecke_relation_defect_impl)
else:
    lambda_fill = _lambda_fill_impl

    def hecke_relation_defect(lam):
        # vectorized over n for each m; divisors of gcd(m, n) come from
        # divisors of m intersected with divisibility of n
        N = lam.shape[0] - 1
        worst = 0.0
        for m in range(1, N + 1):
            n = np.arange(1, N // m + 1)
            g = np.gcd(m, n)
            total = np.zeros(n.shape[0])
            for d in range(1, m + 1):
                if m % d == 0:
                    mask = g % d == 0
                    total[mask] += lam[(m * n[mask]) // (d * d)]
            worst = max(worst, float(np.max(np.abs(lam[m] * lam[n] - total))))
        return worst


def deligne_defect(lam: np.ndarray, dcount: np.ndarray) -> float:
    """max over n of |lam(n)| - d(n) (negative when the bound holds)."""
    n = lam.shape[0] - 1
    return float(np.max(np.abs(lam[1:n + 1]) - dcount[1:n + 1]))


def _expansion_tensor_sum_impl(t):
    """Sum over all tuples (l_1..l_J) of prod_j t[j, l_j], term by term."""
    J, M = t.shape
    idx = np.zeros(J, dtype=np.int64)
    total = 0.0
    count = M ** J
    for _ in range(count):
        prod = 1.0
        for j in range(J):
            prod *= t[j, idx[j]]
        total += prod
        for j in range(J - 1, -1, -1):
            idx[j] += 1
            if idx[j] < M:
                break
            idx[j] = 0
    return total


if USE_NUMBA:
    expansion_tensor_sum = njit(cache=True)(_expansion_tensor_sum_impl)
else:
    def expansion_tensor_sum(t):
        J = t.shape[0]
        full = t[0]
        for j in range(1, J):
            full = np.multiply.outer(full, t[j])
        return float(np.sum(full))
