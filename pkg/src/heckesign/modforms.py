"""Exact level-1 modular forms engine.

Pipeline per weight k: integer Miller basis from Delta/E4/E6 monomials,
exact Hecke matrix for T_2 (fallback T_3 on eigenvalue collision), exact
integer characteristic polynomial, certified real roots, high-precision
eigenvectors, and finally normalized eigenvalues at every prime power up
to n_max.  Exact arithmetic ends at the characteristic polynomial; the
root finding and eigenvector solves carry recorded residuals and working
precision instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpfr, mpz

from . import _kernels
from .arith import (factor_into_prime_powers, primes_up_to,
                    prime_powers_up_to, smallest_prime_factor)
from .qseries import QSeries, delta_form, eisenstein
from .sato_tate import cheb_X

SIGN_TOL = 1e-9  # an eigenvalue this close to 0 is ambiguous, not negative


class ModformError(Exception):
    pass


class DegenerateEigenvalues(ModformError):
    """Two Hecke eigenvalues of the diagonalizing operator coincide within
    the root-separation tolerance."""


def dim_cusp_forms(k: int) -> int:
    """dim S_k for the full modular group (exact classical formula)."""
    if k % 2:
        raise ValueError(f"weight must be even, got {k}")
    if k < 12 or k == 14:
        return 0
    return k // 12 - 1 if k % 12 == 2 else k // 12


class PowerCache:
    """Cached powers of E4, E6, Delta at a fixed truncation."""

    def __init__(self, n_max: int):
        self.n_max = n_max
        self._pows = {
            "e4": [QSeries.from_ints(0, [1], n_max), eisenstein(4, n_max)],
            "e6": [QSeries.from_ints(0, [1], n_max), eisenstein(6, n_max)],
            "delta": [QSeries.from_ints(0, [1], n_max), delta_form(n_max)],
        }

    def get(self, name: str, exp: int) -> QSeries:
        pows = self._pows[name]
        while len(pows) <= exp:
            pows.append(pows[-1] * pows[1])
        return pows[exp]


_caches: dict[int, PowerCache] = {}


def get_power_cache(n_max: int) -> PowerCache:
    if n_max not in _caches:
        _caches[n_max] = PowerCache(n_max)
    return _caches[n_max]


def _monomial(k: int, j: int, cache: PowerCache) -> QSeries:
    """Delta^j E4^a E6^b of weight k, leading term q^j."""
    w = k - 12 * j
    if w % 4 == 0:
        a, b = w // 4, 0
    else:
        a, b = (w - 6) // 4, 1
    s = cache.get("delta", j) * cache.get("e4", a)
    if b:
        s = s * cache.get("e6", b)
    return QSeries(k, s.coeffs, s.n_max)


def miller_basis(k: int, n_max: int, cache: PowerCache | None = None) -> list[QSeries]:
    """Echelonized integral basis g_1..g_d of S_k, g_i = q^i + O(q^{d+1})."""
    d = dim_cusp_forms(k)
    if d < 1:
        raise ValueError(f"S_{k} is trivial")
    if n_max < d + 1:
        raise ValueError(f"n_max={n_max} too small for dim {d}")
    cache = cache or get_power_cache(n_max)
    mono = {j: _monomial(k, j, cache) for j in range(1, d + 1)}
    g: dict[int, QSeries] = {}
    for j in range(d, 0, -1):
        s = mono[j]
        if s[j] != 1:
            raise ModformError(f"rank deficiency at weight {k}: monomial "
                               f"{j} has leading coefficient {s[j]}")
        for i in range(j + 1, d + 1):
            if s[i]:
                s = s - g[i].scale(s[i])
        g[j] = s
    return [g[j] for j in range(1, d + 1)]


def hecke_matrix(k: int, p: int, basis: list[QSeries]) -> list[list]:
    """Exact integer matrix of T_p in the Miller basis: column j holds the
    basis coordinates of T_p g_j, read off the echelon structure."""
    d = len(basis)
    if basis[0].n_max < p * d:
        raise ValueError(f"basis known to q^{basis[0].n_max}, need q^{p * d}")
    pk = mpz(p) ** (k - 1)
    A = [[mpz(0)] * d for _ in range(d)]
    for j in range(d):
        gj = basis[j]
        for i in range(1, d + 1):
            val = gj[p * i]
            if i % p == 0:
                val = val + pk * gj[i // p]
            A[i - 1][j] = mpz(val)
    return A


def charpoly(A: list[list]) -> list:
    """Characteristic polynomial of an exact integer matrix, descending
    coefficients, monic; division-free (Berkowitz)."""
    n = len(A)
    p = [mpz(1), -A[0][0]]
    for i in range(1, n):
        R = A[i][:i]
        S = [A[r][i] for r in range(i)]
        col = [mpz(1), -A[i][i]]
        v = S
        for j in range(i):
            col.append(-sum(R[x] * v[x] for x in range(i)))
            if j < i - 1:
                v = [sum(A[r][c] * v[c] for c in range(i)) for r in range(i)]
        pn = [mpz(0)] * (i + 2)
        for m in range(i + 2):
            for t in range(max(0, m - i), min(m, i + 1) + 1):
                pn[m] += col[t] * p[m - t]
        p = pn
    return p


def _sign_at_dyadic(cp: list, m: int, t: int) -> int:
    """Sign of P(m / 2^t) from exact integer arithmetic (cp descending)."""
    acc = mpz(cp[0])
    mm = mpz(m)
    for i in range(1, len(cp)):
        acc = acc * mm + (mpz(cp[i]) << (t * i))
    return (acc > 0) - (acc < 0)


def _durand_kerner(cp: list, radius, prec: int, iters: int = 500):
    """All roots of the monic integer polynomial cp (descending), as mpc.

    The iteration runs on the rescaled variable y = x / radius so every
    quantity stays O(1); a Newton polish on the original polynomial then
    pushes each root to full working precision.
    """
    d = len(cp) - 1
    with gmpy2.context(precision=prec):
        rad = mpfr(radius)
        # monic rescale: q(y) = p(radius * y) / radius^d
        q = [mpfr(cp[i]) / rad ** i for i in range(d + 1)]

        def qeval(y):
            acc = gmpy2.mpc(q[0])
            for c in q[1:]:
                acc = acc * y + c
            return acc

        base = gmpy2.mpc(mpfr("0.4"), mpfr("0.9"))
        roots = [base ** (j + 1) for j in range(d)]
        coarse = mpfr(2) ** (-64)
        for _ in range(iters):
            moved = mpfr(0)
            for j in range(d):
                num = qeval(roots[j])
                den = gmpy2.mpc(1)
                for i in range(d):
                    if i != j:
                        den *= roots[j] - roots[i]
                step = num / den
                roots[j] = roots[j] - step
                moved = max(moved, abs(step))
            if moved < coarse:
                break
        else:
            raise DegenerateEigenvalues("root iteration did not converge")

        # Newton polish at full precision on the original polynomial
        coeffs = [mpfr(c) for c in cp]
        dcoeffs = [(d - i) * coeffs[i] for i in range(d)]

        def horner(cs, x):
            acc = gmpy2.mpc(cs[0])
            for c in cs[1:]:
                acc = acc * x + c
            return acc

        polished = []
        for y in roots:
            x = y * rad
            for _ in range(1 + prec.bit_length()):
                dp = horner(dcoeffs, x)
                if dp == 0:
                    raise DegenerateEigenvalues("critical point hit in polish")
                x = x - horner(coeffs, x) / dp
            polished.append(x)
        return polished


def certified_real_roots(cp: list, k: int, prec: int):
    """Distinct real roots of cp, certified by exact-sign brackets.

    Brackets of half-width 1e-20 * 2^((k-1)/2) around each numeric root must
    be pairwise disjoint and each show a sign change; otherwise the roots
    are considered degenerate (caller switches the Hecke prime).
    Non-real roots are fatal: eigenvalues of T_p are totally real.
    """
    d = len(cp) - 1
    with gmpy2.context(precision=prec):
        scale = gmpy2.exp2(mpfr(k - 1) / 2)
        if d == 1:
            return [mpfr(-cp[1])]
        if d >= 3:
            roots_c = _durand_kerner(cp, radius=2.5 * scale, prec=prec)
        else:
            b, c = mpfr(cp[1]), mpfr(cp[2])
            disc = b * b - 4 * c
            if disc < 0:
                raise ModformError("complex pair of Hecke eigenvalues")
            r = gmpy2.sqrt(disc)
            roots_c = [gmpy2.mpc((-b - r) / 2), gmpy2.mpc((-b + r) / 2)]
        imag_tol = scale * mpfr(2) ** (-40)
        if any(abs(r.imag) > imag_tol for r in roots_c):
            raise ModformError(
                f"non-real root of characteristic polynomial "
                f"(worst imag {max(abs(r.imag) for r in roots_c)})")
        reals = sorted(r.real for r in roots_c)
        half = mpfr(1e-20) * scale
        if any(b - a < 4 * half for a, b in zip(reals, reals[1:])):
            raise DegenerateEigenvalues(
                "eigenvalues closer than the 1e-20 separation tolerance")
        # exact-sign certification at dyadic brackets
        t = max(8, int(-gmpy2.log2(half)) + 4) if half < 1 else 8
        certified = []
        for r in reals:
            lo = gmpy2.floor((r - half) * 2 ** t)
            hi = gmpy2.ceil((r + half) * 2 ** t)
            s_lo = _sign_at_dyadic(cp, int(lo), t)
            s_hi = _sign_at_dyadic(cp, int(hi), t)
            if s_lo == 0 or s_hi == 0:
                certified.append(r)  # exact hit
                continue
            if s_lo == s_hi:
                raise DegenerateEigenvalues(
                    f"no sign change in certification bracket around "
                    f"{float(r):.6e}")
            certified.append(r)
        return certified


def _solve_eigenvector(A, alpha, d: int, prec: int):
    """v with (A - alpha I) v = 0, v_1 = 1, by mpfr Gaussian elimination."""
    with gmpy2.context(precision=prec):
        if d == 1:
            return [mpfr(1)]
        M = [[mpfr(A[r][c]) - (alpha if r == c else 0) for c in range(1, d)]
             for r in range(d - 1)]
        rhs = [-(mpfr(A[r][0]) - (alpha if r == 0 else 0)) for r in range(d - 1)]
        n = d - 1
        for col in range(n):
            piv = max(range(col, n), key=lambda r: abs(M[r][col]))
            if M[piv][col] == 0:
                raise ModformError("singular eigenvector system")
            if piv != col:
                M[col], M[piv] = M[piv], M[col]
                rhs[col], rhs[piv] = rhs[piv], rhs[col]
            for r in range(col + 1, n):
                f = M[r][col] / M[col][col]
                if f:
                    for c in range(col, n):
                        M[r][c] -= f * M[col][c]
                    rhs[r] -= f * rhs[col]
        x = [mpfr(0)] * n
        for r in range(n - 1, -1, -1):
            s = rhs[r]
            for c in range(r + 1, n):
                s -= M[r][c] * x[c]
            x[r] = s / M[r][r]
        return [mpfr(1)] + x


@dataclass(frozen=True)
class Eigenform:
    """One Hecke eigenform: normalized eigenvalues at prime powers <= n_max."""
    weight_k: int
    index: int
    n_max: int
    lambda_pp: dict  # prime power -> lambda_f(p^m), float
    eigen_residual: float
    precision_bits: int
    hecke_prime: int  # operator used to diagonalize (2, or 3 on collision)
    eq25_crosscheck: float  # max |angle formula - direct normalization|

    def lambda_at_prime(self, p: int) -> float:
        return self.lambda_pp[p]

    def lambda_array(self, n_max: int | None = None,
                     spf: np.ndarray | None = None) -> np.ndarray:
        """lambda_f(n) for n = 0..n_max as float64, multiplicative fill."""
        N = n_max or self.n_max
        if N > self.n_max:
            raise ValueError(f"eigenvalues known only up to {self.n_max}")
        if spf is None:
            spf = smallest_prime_factor(N)
        pp = np.zeros(N + 1)
        for q, lam in self.lambda_pp.items():
            if q <= N:
                pp[q] = lam
        return _kernels.lambda_fill(spf, pp)

    def lambda_at(self, n: int, spf: np.ndarray | None = None) -> float:
        if n == 1:
            return 1.0
        if n in self.lambda_pp:
            return self.lambda_pp[n]
        if spf is None:
            spf = smallest_prime_factor(n)
        out = 1.0
        for _, q in factor_into_prime_powers(n, spf):
            out *= self.lambda_pp[q]
        return out


def theta_angle(f: Eigenform, p: int) -> float:
    """Angle in [0, pi] with lambda_f(p) = 2 cos(theta)."""
    lam = f.lambda_pp[p]
    if abs(lam) > 2.0 + 1e-9:
        raise ModformError(
            f"|lambda({p})| = {abs(lam)} violates the prime bound at "
            f"weight {f.weight_k} (bug)")
    return math.acos(min(1.0, max(-1.0, lam / 2.0)))


def eigenforms(k: int, n_max: int, cache: PowerCache | None = None) -> list[Eigenform]:
    """All eigenforms of weight k with eigenvalues at prime powers <= n_max."""
    d = dim_cusp_forms(k)
    if d == 0:
        return []
    need = max(n_max, 3 * d)
    basis = miller_basis(k, need, cache)
    prec = max(192, k + 8 * d + 128)
    used_p = 2
    A = hecke_matrix(k, 2, basis)
    try:
        roots = certified_real_roots(charpoly(A), k, prec)
    except DegenerateEigenvalues:
        used_p = 3
        A = hecke_matrix(k, 3, basis)
        roots = certified_real_roots(charpoly(A), k, prec)
    pps = prime_powers_up_to(n_max)
    forms = []
    with gmpy2.context(precision=prec):
        s_exp = mpfr(k - 1) / 2
        # mpz -> mpfr conversion of the needed basis coefficients, shared
        coeff = {q: [mpfr(basis[j][q]) for j in range(d)] for _, _, q in pps}
        norm_A = max(sum(abs(x) for x in row) for row in A)
        for idx, alpha in enumerate(roots):
            v = _solve_eigenvector(A, alpha, d, prec)
            resid = max(abs(sum(mpfr(A[r][c]) * v[c] for c in range(d))
                            - alpha * v[r]) for r in range(d))
            rel_resid = float(resid / (mpfr(norm_A) * max(abs(x) for x in v)))
            lam_direct = {}
            for _, _, q in pps:
                a_val = sum(v[j] * coeff[q][j] for j in range(d))
                lam_direct[q] = float(a_val / gmpy2.exp(s_exp * gmpy2.log(mpfr(q))))
            # primary fill via the angle formula, cross-checked against the
            # direct normalization
            lam_pp = {}
            crosscheck = 0.0
            for p_, m_, q in pps:
                if m_ == 1:
                    lam_pp[q] = lam_direct[q]
                else:
                    lam_p = lam_direct[p_]
                    th = math.acos(min(1.0, max(-1.0, lam_p / 2.0)))
                    lam_pp[q] = float(cheb_X(m_, th))
                    crosscheck = max(crosscheck, abs(lam_pp[q] - lam_direct[q]))
            forms.append(Eigenform(k, idx, n_max, lam_pp, rel_resid, prec,
                                   used_p, crosscheck))
    return forms


@dataclass(frozen=True)
class SignRecord:
    n_f: int | None
    p_f: int | None
    ambiguous: bool
    exceeds_n_max: bool


@dataclass(frozen=True)
class SignStatistics:
    weight_k: int
    records: tuple


def least_negative(f: Eigenform, n_max: int | None = None,
                   spf: np.ndarray | None = None) -> SignRecord:
    """Least n (and least prime p) with lambda_f < 0, with ambiguity flag.

    Values within SIGN_TOL of zero encountered before the first clear
    negative set the ambiguous flag.  If no negative value appears up to
    n_max, returns the exceeds sentinel rather than raising.
    """
    N = n_max or f.n_max
    lam = f.lambda_array(N, spf)
    ambiguous = False
    n_f = None
    for n in range(2, N + 1):
        if abs(lam[n]) <= SIGN_TOL:
            ambiguous = True
        elif lam[n] < -SIGN_TOL:
            n_f = n
            break
    if n_f is None:
        return SignRecord(None, None, ambiguous, True)
    p_f = None
    for p in primes_up_to(N):
        if lam[p] < -SIGN_TOL:
            p_f = p
            break
    if p_f is None:
        return SignRecord(n_f, None, ambiguous, True)
    sp = spf if spf is not None else smallest_prime_factor(n_f)
    parts = factor_into_prime_powers(n_f, sp)
    if len(parts) != 1:
        raise ModformError(f"n_f = {n_f} is not a prime power (bug)")
    if n_f > p_f:
        raise ModformError(f"n_f = {n_f} > p_f = {p_f} (bug)")
    return SignRecord(n_f, p_f, ambiguous, False)


def sign_statistics(k: int, n_max: int, cache: PowerCache | None = None) -> SignStatistics:
    forms = eigenforms(k, n_max, cache)
    spf = smallest_prime_factor(n_max)
    return SignStatistics(k, tuple(least_negative(f, n_max, spf) for f in forms))
