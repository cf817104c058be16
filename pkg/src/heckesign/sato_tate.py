"""Expansion of g(theta) = |f(theta/2pi)|^2 in the X_n basis.

Two independent routes produce the basis coefficients a_l: a telescoping
recurrence on the Fourier coefficients b_l, and direct quadrature against
the measure (2/pi) sin^2(theta) d theta on [0, pi].  They must agree; the
agreement is itself one of the required checks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .minorant import MinorantPolynomial, minorant_coeffs, minorant_eval
from .quadrature import gauss_legendre


@dataclass(frozen=True)
class SatoTateMeasure:
    """Marker for the weight (2/pi) sin^2(theta) d theta on [0, pi]."""

    @staticmethod
    def weight(theta):
        return (2.0 / math.pi) * np.sin(np.asarray(theta, dtype=float)) ** 2

    @staticmethod
    def total_mass(quad_nodes: int = 64) -> float:
        return gauss_legendre(SatoTateMeasure.weight, 0.0, math.pi,
                              nodes=quad_nodes, tol=1e-13)


def g_eval(poly: MinorantPolynomial, theta) -> float | np.ndarray:
    """g(theta) = |f(theta / 2 pi)|^2; even, 2 pi-periodic, values in [0, 1]."""
    t = np.asarray(theta, dtype=float) / (2.0 * math.pi)
    vals = np.abs(minorant_eval(poly.degree_L, poly.delta, t)) ** 2
    return vals if vals.ndim else float(vals)


def fourier_coeffs_b(poly: MinorantPolynomial) -> np.ndarray:
    """b_l = sum_{l2 - l1 = l} c_{l1} conj(c_{l2}) for l = 0..L.

    The conjugation is kept in the formula even though the c_l come out
    real; realness of b is asserted rather than assumed.
    """
    c = np.asarray(poly.coeffs, dtype=complex)
    L = poly.degree_L
    corr = np.correlate(np.conj(c), c, mode="full")  # index L+l holds b_l
    b = corr[L:]
    assert np.max(np.abs(b.imag)) < 1e-12, "b coefficients must be real"
    return b.real.copy()


def cheb_X(n: int, theta) -> float | np.ndarray:
    """X_n(theta) = sin((n+1) theta)/sin(theta) with removable singularities.

    Below |sin theta| = 1e-6 the quotient is replaced by the exact finite
    cosine sum X_n = sum_{j=0..n} cos((n-2j) theta), which has no 0/0.
    """
    th = np.asarray(theta, dtype=float)
    s = np.sin(th)
    near = np.abs(s) < 1e-6
    out = np.empty_like(th)
    with np.errstate(divide="ignore", invalid="ignore"):
        out[~near] = np.sin((n + 1) * th[~near]) / s[~near]
    if np.any(near):
        j = np.arange(n + 1)
        out[near] = np.cos(np.outer(th[near], n - 2 * j)).sum(axis=1)
    return out if out.ndim else float(out)


def a_coeffs_recurrence(b) -> np.ndarray:
    """a_l = b_l - b_{l+2}, indices past L read as zero."""
    b = np.asarray(b, dtype=float)
    padded = np.concatenate([b, [0.0, 0.0]])
    return padded[:-2] - padded[2:]


def a_coeffs_quadrature(poly: MinorantPolynomial, ell: int,
                        quad_nodes: int = 64) -> float:
    """a_l = (2/pi) int_0^pi g(theta) X_l(theta) sin^2(theta) d theta."""

    def integrand(th):
        return (2.0 / math.pi) * g_eval(poly, th) * cheb_X(ell, th) * np.sin(th) ** 2

    return gauss_legendre(integrand, 0.0, math.pi, nodes=quad_nodes)


@dataclass(frozen=True)
class ChebyshevExpansion:
    degree_L: int
    fourier_b: tuple
    sato_tate_a: tuple

    @classmethod
    def from_minorant(cls, poly: MinorantPolynomial) -> "ChebyshevExpansion":
        b = fourier_coeffs_b(poly)
        a = a_coeffs_recurrence(b)
        return cls(poly.degree_L, tuple(float(x) for x in b),
                   tuple(float(x) for x in a))

    @property
    def a0(self) -> float:
        return self.sato_tate_a[0]

    def reconstruct_g(self, theta) -> np.ndarray:
        """Evaluate sum a_l X_l(theta); must match g_eval on a grid."""
        th = np.asarray(theta, dtype=float)
        total = np.zeros_like(th)
        for ell, a in enumerate(self.sato_tate_a):
            total += a * cheb_X(ell, th)
        return total


def gram_matrix(n_max: int = 12, quad_nodes: int = 128) -> np.ndarray:
    """Gram matrix of X_0..X_n under the angle measure; identity if all is well."""
    G = np.empty((n_max + 1, n_max + 1))
    for m in range(n_max + 1):
        for n in range(m, n_max + 1):
            val = gauss_legendre(
                lambda th: SatoTateMeasure.weight(th) * cheb_X(m, th) * cheb_X(n, th),
                0.0, math.pi, nodes=quad_nodes)
            G[m, n] = G[n, m] = val
    return G


def expansion_dump(poly: MinorantPolynomial, quad_nodes: int = 64,
                   tail_terms: int = 5, grid_points: int = 512) -> dict:
    """JSON-ready dump of the expansion plus its consistency defects."""
    exp = ChebyshevExpansion.from_minorant(poly)
    L = poly.degree_L
    two_route = max(
        abs(exp.sato_tate_a[ell] - a_coeffs_quadrature(poly, ell, quad_nodes))
        for ell in range(L + 1))
    tail = max(abs(a_coeffs_quadrature(poly, L + 1 + i, quad_nodes))
               for i in range(tail_terms))
    theta = np.linspace(0.0, math.pi, grid_points)
    recon = float(np.max(np.abs(exp.reconstruct_g(theta) - g_eval(poly, theta))))
    gram = gram_matrix(12, quad_nodes)
    gram_defect = float(np.max(np.abs(gram - np.eye(13))))
    return {
        "L": L,
        "delta": poly.delta,
        "b": list(exp.fourier_b),
        "a": list(exp.sato_tate_a),
        "a0": exp.a0,
        "checks": {
            "two_route_defect": two_route,
            "tail_max": tail,
            "reconstruction_defect": recon,
            "gram_defect": gram_defect,
        },
    }


def dump_expansion_json(poly: MinorantPolynomial, **kw) -> str:
    return json.dumps(expansion_dump(poly, **kw), indent=2, sort_keys=True)
