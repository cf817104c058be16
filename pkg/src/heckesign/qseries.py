"""Exact rational q-expansions truncated at n_max.

Integer series (the common case: Eisenstein series, Delta, their products)
multiply through Kronecker substitution: pack the coefficient vector into a
single big integer, do one GMP multiply, unpack.  The schoolbook fallback
only runs for genuinely rational series, which stay short in practice.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpq, mpz


class IntegralityError(Exception):
    """A series that must have integer coefficients does not."""


def _kronecker_mul(a: list, b: list, n_max: int) -> list:
    """Multiply integer coefficient lists, truncated at n_max."""
    bits_a = max(int(x).bit_length() for x in a) if a else 0
    bits_b = max(int(x).bit_length() for x in b) if b else 0
    slot = bits_a + bits_b + (n_max + 1).bit_length() + 2
    ap = [mpz(x) if x > 0 else mpz(0) for x in a]
    an = [mpz(-x) if x < 0 else mpz(0) for x in a]
    bp = [mpz(x) if x > 0 else mpz(0) for x in b]
    bn = [mpz(-x) if x < 0 else mpz(0) for x in b]
    pos = neg = mpz(0)
    if any(ap) and any(bp):
        pos += gmpy2.pack(ap, slot) * gmpy2.pack(bp, slot)
    if any(an) and any(bn):
        pos += gmpy2.pack(an, slot) * gmpy2.pack(bn, slot)
    if any(ap) and any(bn):
        neg += gmpy2.pack(ap, slot) * gmpy2.pack(bn, slot)
    if any(an) and any(bp):
        neg += gmpy2.pack(an, slot) * gmpy2.pack(bp, slot)
    p = gmpy2.unpack(pos, slot)[:n_max + 1] if pos else []
    n = gmpy2.unpack(neg, slot)[:n_max + 1] if neg else []
    p += [mpz(0)] * (n_max + 1 - len(p))
    n += [mpz(0)] * (n_max + 1 - len(n))
    return [x - y for x, y in zip(p, n)]


@dataclass(frozen=True)
class QSeries:
    """Truncated q-expansion sum a(n) q^n with exact rational coefficients."""
    weight: int
    coeffs: tuple
    n_max: int

    @classmethod
    def from_ints(cls, weight: int, coeffs, n_max: int | None = None) -> "QSeries":
        coeffs = [mpz(c) for c in coeffs]
        if n_max is None:
            n_max = len(coeffs) - 1
        coeffs += [mpz(0)] * (n_max + 1 - len(coeffs))
        return cls(weight, tuple(coeffs[:n_max + 1]), n_max)

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def _check_weight(self, other: "QSeries") -> None:
        if self.weight != other.weight:
            raise ValueError(
                f"cannot add weight {self.weight} to weight {other.weight}")

    def __add__(self, other: "QSeries") -> "QSeries":
        self._check_weight(other)
        n = min(self.n_max, other.n_max)
        return QSeries(self.weight, tuple(x + y for x, y in
                                          zip(self.coeffs[:n + 1], other.coeffs[:n + 1])), n)

    def __sub__(self, other: "QSeries") -> "QSeries":
        self._check_weight(other)
        n = min(self.n_max, other.n_max)
        return QSeries(self.weight, tuple(x - y for x, y in
                                          zip(self.coeffs[:n + 1], other.coeffs[:n + 1])), n)

    def scale(self, c) -> "QSeries":
        c = mpq(c)
        if c.denominator == 1:
            c = c.numerator
        return QSeries(self.weight, tuple(c * x for x in self.coeffs), self.n_max)

    def __mul__(self, other: "QSeries") -> "QSeries":
        n = min(self.n_max, other.n_max)
        a, b = self.coeffs[:n + 1], other.coeffs[:n + 1]
        w = self.weight + other.weight
        if self.is_integral() and other.is_integral():
            return QSeries(w, tuple(_kronecker_mul([mpz(x) for x in a],
                                                   [mpz(x) for x in b], n)), n)
        out = [mpq(0)] * (n + 1)
        for i, ai in enumerate(a):
            if ai:
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] += mpq(ai) * b[j]
        return QSeries(w, tuple(out), n)

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            raise ValueError("negative powers not supported")
        result = QSeries.from_ints(0, [1], self.n_max)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def exact_divide(self, c: int) -> "QSeries":
        """Divide by an integer, requiring exact divisibility (integrality check)."""
        out = []
        for n, x in enumerate(self.coeffs):
            q, r = divmod(mpz(x), c)
            if r:
                raise IntegralityError(
                    f"coefficient of q^{n} ({x}) not divisible by {c}")
            out.append(q)
        return QSeries(self.weight, tuple(out), self.n_max)


def _sigma_list(power: int, n_max: int) -> list:
    sig = [mpz(0)] * (n_max + 1)
    for d in range(1, n_max + 1):
        dp = mpz(d) ** power
        for m in range(d, n_max + 1, d):
            sig[m] += dp
    return sig


def eisenstein(weight: int, n_max: int) -> QSeries:
    """E4 = 1 + 240 sum sigma_3(n) q^n, E6 = 1 - 504 sum sigma_5(n) q^n."""
    if weight == 4:
        sig = _sigma_list(3, n_max)
        coeffs = [mpz(1)] + [240 * s for s in sig[1:]]
    elif weight == 6:
        sig = _sigma_list(5, n_max)
        coeffs = [mpz(1)] + [-504 * s for s in sig[1:]]
    else:
        raise ValueError(f"weight must be 4 or 6, got {weight}")
    return QSeries(weight, tuple(coeffs), n_max)


def delta_form(n_max: int) -> QSeries:
    """Delta = (E4^3 - E6^2)/1728; integral, a(1) = 1."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    e4 = eisenstein(4, n_max)
    e6 = eisenstein(6, n_max)
    num = e4 * e4 * e4 - e6 * e6
    delta = num.exact_divide(1728)
    return QSeries(12, delta.coeffs, n_max)


def eta_product_delta(n_max: int) -> QSeries:
    """Independent route to Delta: q * prod_{n>=1} (1 - q^n)^24.

    The Euler factor is expanded by the sparse pentagonal-number recurrence,
    then raised to the 24th power.
    """
    euler = [mpz(0)] * (n_max + 1)
    euler[0] = mpz(1)
    j = 1
    while True:
        g1 = j * (3 * j - 1) // 2
        g2 = j * (3 * j + 1) // 2
        if g1 > n_max and g2 > n_max:
            break
        sign = 1 if j % 2 == 0 else -1
        if g1 <= n_max:
            euler[g1] += sign
        if g2 <= n_max:
            euler[g2] += sign
        j += 1
    e = QSeries(0, tuple(euler), n_max)
    e24 = e ** 24
    shifted = [mpz(0)] + list(e24.coeffs[:n_max])
    return QSeries(12, tuple(shifted), n_max)
