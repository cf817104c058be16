"""Sharply peaked trigonometric polynomial built from Chebyshev growth.

The polynomial f(theta) = sum_{l=0..L} c_l e(-l theta) equals 1 at theta = 0
and decays below 2*exp(-pi*L*delta) on [delta, 1-delta].  Everything here is
pure and operates on immutable values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .quadrature import gauss_legendre


class MinorantError(ValueError):
    pass


def cheb_T(L: int, x) -> float | np.ndarray:
    """Chebyshev polynomial of the first kind, evaluated stably.

    cos(L*arccos x) on [-1, 1], cosh(L*arccosh |x|) with sign handling
    outside.  Never expands monomial coefficients, so large L is safe
    (up to float overflow of the true value itself).
    """
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) <= 1.0
    out = np.empty_like(x)
    out[inside] = np.cos(L * np.arccos(x[inside]))
    xo = x[~inside]
    sign = np.where(xo < 0, (-1.0) ** L, 1.0)
    out[~inside] = sign * np.cosh(L * np.arccosh(np.abs(xo)))
    return out if out.ndim else float(out)


def _log_cheb_T(L: int, y: float) -> float:
    # log T_L(y) for y >= 1:  T_L(y) = cosh(L*arccosh y)
    u = math.acosh(y)
    return L * u + math.log1p(math.exp(-2.0 * L * u)) - math.log(2.0)


def _cheb_ratio(L: int, x: np.ndarray, log_den: float) -> np.ndarray:
    """T_L(x) / exp(log_den), stable for arguments up to ~1/cos(pi/2)."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    inside = np.abs(x) <= 1.0
    out[inside] = np.cos(L * np.arccos(x[inside])) * math.exp(-log_den)
    xo = np.abs(x[~inside])
    u = np.arccosh(xo)
    lognum = L * u + np.log1p(np.exp(-2.0 * L * u)) - math.log(2.0)
    sign = np.where(x[~inside] < 0, (-1.0) ** L, 1.0)
    out[~inside] = sign * np.exp(lognum - log_den)
    return out


def minorant_eval(L: int, delta: float, theta) -> complex | np.ndarray:
    """f(theta) = e^{-i pi L theta} T_L(cos(pi theta)/cos(pi delta)) / T_L(1/cos(pi delta)).

    1-periodic; f(0) = 1 exactly.  The Chebyshev ratio is computed in log
    scale so that delta near 1/2 (cos(pi delta) ~ 1e-16) stays finite.
    """
    if not (0.0 < delta <= 0.5):
        raise MinorantError(f"delta must lie in (0, 1/2], got {delta}")
    if L < 1:
        raise MinorantError(f"L must be a positive integer, got {L}")
    theta_arr = np.asarray(theta, dtype=float)
    cd = math.cos(math.pi * delta)
    log_den = _log_cheb_T(L, 1.0 / cd)
    ratio = _cheb_ratio(L, np.cos(np.pi * theta_arr) / cd, log_den)
    vals = np.exp(-1j * math.pi * L * theta_arr) * ratio
    return vals if vals.ndim else complex(vals)


@dataclass(frozen=True)
class MinorantPolynomial:
    """Fourier data of the peak polynomial: f = sum c_l e(-l theta)."""
    degree_L: int
    delta: float
    coeffs: tuple  # c_0..c_L, real

    def eval(self, theta) -> complex | np.ndarray:
        theta_arr = np.asarray(theta, dtype=float)
        ell = np.arange(self.degree_L + 1)
        phases = np.exp(-2j * np.pi * np.outer(theta_arr.ravel(), ell))
        vals = phases @ np.asarray(self.coeffs)
        vals = vals.reshape(theta_arr.shape)
        return vals if vals.ndim else complex(vals)

    def coeff_sum(self) -> float:
        return float(np.sum(self.coeffs))


def minorant_coeffs(L: int, delta: float) -> MinorantPolynomial:
    """Recover c_0..c_L by exact-degree DFT sampling at theta_j = j/(L+1).

    Exact for a polynomial of this degree; the imaginary parts of the
    recovered coefficients are a self-check on the evaluation code.
    """
    theta = np.arange(L + 1) / (L + 1)
    samples = minorant_eval(L, delta, theta)
    c = np.fft.ifft(samples)
    worst = float(np.max(np.abs(c.imag)))
    if worst > 1e-9:
        raise MinorantError(
            f"coefficient imaginary part {worst:.3e} exceeds 1e-9 "
            f"(L={L}, delta={delta}); evaluation bug")
    return MinorantPolynomial(L, delta, tuple(float(v) for v in c.real))


@dataclass(frozen=True)
class PeakDecayReport:
    degree_L: int
    delta: float
    bound: float
    max_on_tail: float
    symmetry_defect: float
    grid_slack: float
    passed: bool


def verify_peak_decay(poly: MinorantPolynomial, grid_points: int) -> PeakDecayReport:
    """Certify |f| <= 2 exp(-pi L delta) on a uniform grid of [delta, 1-delta].

    grid_slack is the derivative-bound term |f'| <= 2 pi L max|f| times half
    the grid spacing; it quantifies what can hide between grid points.
    """
    L, delta = poly.degree_L, poly.delta
    if grid_points < 10 * L:
        raise MinorantError(f"grid_points must be >= 10*L = {10 * L}")
    bound = 2.0 * math.exp(-math.pi * L * delta)
    # closed-form evaluation: stays accurate in log scale where the decayed
    # values sit far below float resolution of the coefficient sum
    theta = np.linspace(delta, 1.0 - delta, grid_points)
    vals = np.abs(minorant_eval(L, delta, theta))
    max_tail = float(np.max(vals))
    sym = float(np.max(np.abs(vals - np.abs(minorant_eval(L, delta, -theta)))))
    h = (1.0 - 2.0 * delta) / max(grid_points - 1, 1)
    slack = 2.0 * math.pi * L * max(max_tail, 1e-30) * (h / 2.0)
    return PeakDecayReport(L, delta, bound, max_tail, sym, slack,
                           passed=(max_tail <= bound and sym <= 1e-10))


@dataclass(frozen=True)
class L2Report:
    plain_l2: float
    weighted_l2: float
    weighted_constant: float  # weighted_l2 * L^3, tracked empirically


def l2_lower_bounds(poly: MinorantPolynomial, quad_nodes: int = 64) -> L2Report:
    """Integrals of |f|^2 (plain over [0,1], sin(2 pi theta)^2-weighted over
    [0,1/2]) by adaptive Gauss-Legendre; raises if the stated lower bounds
    fail.

    Uses the closed-form evaluation, not the coefficients, so the Parseval
    comparison against sum c_l^2 stays a two-route check.
    """
    L, delta = poly.degree_L, poly.delta

    def f2(t):
        return np.abs(minorant_eval(L, delta, t)) ** 2

    plain = gauss_legendre(f2, 0.0, 1.0, nodes=quad_nodes)
    weighted = gauss_legendre(lambda t: f2(t) * np.sin(2 * np.pi * t) ** 2,
                              0.0, 0.5, nodes=quad_nodes)
    # 1e-12 slack: L=1 attains equality in the plain bound
    if plain < 1.0 / (L + 1) - 1e-12:
        raise MinorantError(
            f"plain L2 {plain:.12e} < 1/(L+1) = {1.0 / (L + 1):.12e}")
    if weighted <= 0.0:
        raise MinorantError(f"weighted L2 not positive: {weighted:.3e}")
    return L2Report(plain, weighted, weighted * L ** 3)


def certification_report(L: int, delta: float, grid_points: int | None = None,
                         quad_nodes: int = 64) -> dict:
    """Full JSON-ready certificate for one (L, delta) pair."""
    poly = minorant_coeffs(L, delta)
    decay = verify_peak_decay(poly, grid_points or max(1000, 10 * L))
    l2 = l2_lower_bounds(poly, quad_nodes)
    parseval = abs(l2.plain_l2 - float(np.sum(np.square(poly.coeffs))))
    sum_defect = abs(poly.coeff_sum() - 1.0)
    ok = (decay.passed and parseval <= 1e-9 and sum_defect <= 1e-12
          and l2.plain_l2 >= 1.0 / (L + 1) - 1e-12)
    return {
        "L": L,
        "delta": delta,
        "bound": decay.bound,
        "max_on_tail": decay.max_on_tail,
        "plain_l2": l2.plain_l2,
        "weighted_l2": l2.weighted_l2,
        "weighted_constant": l2.weighted_constant,
        "parseval_defect": parseval,
        "symmetry_defect": decay.symmetry_defect,
        "pass": bool(ok),
    }


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


# default certification matrix used by the CLI and the acceptance suite
DEFAULT_L_VALUES = (1, 2, 4, 8, 16, 32, 64)
DEFAULT_DELTAS = (0.02, 0.05, 0.1, 0.25, 0.5)
