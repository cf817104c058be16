"""Sign detector for Hecke eigenvalues at small primes.

The detector is built from the squared Chebyshev minorant g: for a set of
primes p <= z and a coupling (delta, L, epsilon),

    G(f) = prod_{p <= z} g(theta_f(p))
           - epsilon * sum_{q <= z} prod_{p != q} g(theta_f(p)).

G(f) is positive only when every angle theta_f(p) lies below 2*pi*delta,
which forces lambda_f(p^m) > 0 for all prime powers p^m <= z once the
coupling keeps (m+1) * 2*pi*delta below pi. The module houses the
parameter coupling, the membership test, the brute-force expansion
identity behind the detector's weighted average, and that final
sign-propagation step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .arith import primes_up_to
from .minorant import minorant_eval
from .modforms import Eigenform, theta_angle
from .sato_tate import ChebyshevExpansion

EXPANSION_BUDGET = 10 ** 6


def _g(theta: float, L: int, delta: float) -> float:
    """g(theta) = |f(theta / 2 pi)|^2 from the closed Chebyshev form."""
    return float(abs(minorant_eval(L, delta, theta / (2.0 * math.pi)))) ** 2


class DetectorError(Exception):
    pass


@dataclass(frozen=True)
class DetectorParams:
    """Detector coupling: threshold delta, degree L, penalty epsilon, cutoff z."""

    delta: float
    L: int
    epsilon: float
    z: float
    primes: tuple
    source: str

    @property
    def J(self) -> int:
        return len(self.primes)


def manual_params(delta: float, L: int, z: float,
                  epsilon: float | None = None) -> DetectorParams:
    """Directly chosen parameters; epsilon defaults to 4*exp(-2*pi*L*delta)."""
    if not (0 < delta <= 0.5):
        raise DetectorError(f"delta must lie in (0, 1/2], got {delta}")
    if L < 1 or z < 2:
        raise DetectorError("need L >= 1 and z >= 2")
    if epsilon is None:
        epsilon = 4.0 * math.exp(-2.0 * math.pi * L * delta)
    return DetectorParams(delta=float(delta), L=int(L), epsilon=float(epsilon),
                          z=float(z), primes=tuple(primes_up_to(int(z))),
                          source="manual")


def params_from_weight(k: int) -> DetectorParams:
    """Couple all parameters to the weight k:

    delta = 1/(16 loglog k), L = floor(4 (loglog k)^2),
    epsilon = 4 exp(-2 pi L delta), z = max(2, log k / (2 (loglog k)^2)).
    """
    if k < 16:
        raise DetectorError(
            f"k={k} has log log k <= 1; the coupling degenerates below 16")
    llk = math.log(math.log(k))
    delta = 1.0 / (16.0 * llk)
    L = int(4.0 * llk * llk)
    epsilon = 4.0 * math.exp(-2.0 * math.pi * L * delta)
    z = max(2.0, math.log(k) / (2.0 * llk * llk))
    return DetectorParams(delta=delta, L=L, epsilon=epsilon, z=z,
                          primes=tuple(primes_up_to(int(z))),
                          source="paper_coupling")


def _angles(f: Eigenform, params: DetectorParams) -> list:
    out = []
    for p in params.primes:
        if p not in f.lambda_pp:
            raise DetectorError(
                f"eigenvalue at prime {p} unavailable (n_max={f.n_max})")
        out.append(theta_angle(f, p))
    return out


def detector_G(f: Eigenform, params: DetectorParams) -> float:
    """G(f) by direct evaluation of the closed-form g at each angle."""
    gs = [_g(t, params.L, params.delta) for t in _angles(f, params)]
    full = float(np.prod(gs))
    penalty = 0.0
    for q in range(len(gs)):
        sub = 1.0
        for i, g in enumerate(gs):
            if i != q:
                sub *= g
        penalty += sub
    return full - params.epsilon * penalty


def in_set_A(f: Eigenform, params: DetectorParams) -> bool:
    """True iff every angle at p <= z lies strictly below 2*pi*delta."""
    bound = 2.0 * math.pi * params.delta
    return all(t < bound for t in _angles(f, params))


def expansion_identity_check(f: Eigenform, params: DetectorParams,
                             expansion: ChebyshevExpansion) -> float:
    """|detector_G(f) - its brute-force multilinear expansion|.

    Expands every product of g values into the full (L+1)^J sum over
    exponent tuples, with each term built from a_l coefficients and
    eigenvalues at the corresponding prime powers. Agreement validates
    the basis expansion of g, the angle-to-eigenvalue dictionary, and
    multiplicativity across distinct primes in one shot.
    """
    L, J = params.L, params.J
    if expansion.degree_L != L:
        raise DetectorError(
            f"expansion degree {expansion.degree_L} != params L {L}")
    if (L + 1) ** J > EXPANSION_BUDGET:
        raise DetectorError(
            f"brute force refused: (L+1)^J = {(L + 1) ** J} exceeds "
            f"{EXPANSION_BUDGET}")
    a = np.asarray(expansion.sato_tate_a, dtype=np.float64)
    t = np.empty((J, L + 1))
    for j, p in enumerate(params.primes):
        for ell in range(L + 1):
            q = p ** ell
            if q > 1 and q not in f.lambda_pp:
                raise DetectorError(
                    f"eigenvalue at {p}^{ell} unavailable (n_max={f.n_max})")
            t[j, ell] = a[ell] * (1.0 if q == 1 else f.lambda_pp[q])
    full = _kernels.expansion_tensor_sum(t)
    penalty = 0.0
    for q in range(J):
        rows = np.delete(t, q, axis=0)
        penalty += _kernels.expansion_tensor_sum(rows) if len(rows) else 1.0
    brute = full - params.epsilon * penalty
    return abs(brute - detector_G(f, params))


@dataclass(frozen=True)
class SignPropagation:
    ok: bool
    min_margin: float
    witness: tuple | None  # (theta, m) where the product turns non-positive


def sign_propagation_check(delta: float, z: float,
                           grid: int = 20001) -> SignPropagation:
    """Check sin((m+1)theta)/sin(theta) > 0 on theta in (0, 2*pi*delta)
    for every m with 2^m <= z, i.e. every prime power p^m <= z."""
    m_max = int(math.log(z) / math.log(2.0)) if z >= 2 else 0
    thetas = np.linspace(0.0, 2.0 * math.pi * delta, grid + 2)[1:-1]
    sin_t = np.sin(thetas)
    min_margin = math.inf
    for m in range(m_max + 1):
        vals = np.sin((m + 1) * thetas) / sin_t
        worst = int(np.argmin(vals))
        if vals[worst] <= 0.0:
            return SignPropagation(ok=False, min_margin=float(vals[worst]),
                                   witness=(float(thetas[worst]), m))
        min_margin = min(min_margin, float(vals[worst]))
    return SignPropagation(ok=True, min_margin=min_margin, witness=None)


def weighted_average_report(k: int, forms: list, weights, params: DetectorParams,
                            expansion: ChebyshevExpansion) -> dict:
    """Descriptive report: sum_f w_f G(f) against a_0^J, plus |A| and the
    asymptotic lower-bound expression for the detected proportion. No
    closeness is asserted; the asymptotic regime is far beyond desk scale."""
    g_vals = [detector_G(f, params) for f in forms]
    member = [in_set_A(f, params) for f in forms]
    weighted_g = float(sum(w * g for w, g in zip(weights.w, g_vals)))
    weighted_a = float(sum(w * int(m) for w, m in zip(weights.w, member)))
    a0j = float(expansion.a0 ** params.J)
    lk = math.log(k)
    llk = math.log(lk) if lk > 1 else float("nan")
    lllk = math.log(llk) if llk > 1 else float("nan")
    bound = math.exp(-5.0 * lk * lllk / llk ** 3) if llk > 1 else float("nan")
    return {
        "k": k,
        "params": {
            "delta": params.delta, "L": params.L, "epsilon": params.epsilon,
            "z": params.z, "J": params.J, "primes": list(params.primes),
            "source": params.source,
        },
        "G_values": g_vals,
        "in_A": member,
        "weighted_G": weighted_g,
        "weighted_indicator": weighted_a,
        "a0_pow_J": a0j,
        "ratio": weighted_g / a0j if a0j else float("nan"),
        "count_A": int(sum(member)),
        "theorem_bound": bound,
    }
