"""Harmonic weights for Hecke eigenforms and a Petersson-norm oracle.

Two independent routes to the weights w_f = Gamma(k-1) / ((4 pi)^{k-1} <f,f>):

* a linear solve pinning sum_f w_f lambda_f(m) = 1_{m=1} for m = 1..d,
  which is cheap and works for every weight in the desk range;
* direct quadrature of the Petersson norm <f,f> over the fundamental
  domain, used as a small-weight oracle so the first route is not circular.

The decay scan measures |sum_f w_f lambda_f(m)| on held-out m and reports
the fitted power-law exponent of the worst defect against k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .modforms import Eigenform, dim_cusp_forms, eigenforms, get_power_cache
from .qseries import QSeries

CONDITION_LIMIT = 1e12
QUADRATURE_MAX_WEIGHT = 60


class PeterssonError(Exception):
    pass


@dataclass(frozen=True)
class HarmonicWeights:
    """Positive weights w_f indexed like the eigenform list they came from."""

    weight_k: int
    w: tuple
    method: str
    condition_number: float

    def total(self) -> float:
        return float(sum(self.w))


def weights_by_linear_solve(forms: list) -> HarmonicWeights:
    """Solve sum_f w_f lambda_f(m) = 1_{m=1} for m = 1..d.

    Distinct eigenforms have distinct eigenvalue systems, so the d x d
    matrix is invertible in exact arithmetic; a blow-up of the condition
    number or a non-positive weight signals numerical failure and raises.
    """
    if not forms:
        raise PeterssonError("empty eigenform list")
    k = forms[0].weight_k
    d = len(forms)
    mat = np.empty((d, d))
    for m in range(1, d + 1):
        for i, f in enumerate(forms):
            mat[m - 1, i] = f.lambda_at(m)
    cond = float(np.linalg.cond(mat))
    if cond > CONDITION_LIMIT:
        raise PeterssonError(
            f"weight system at k={k} is ill-conditioned (cond={cond:.3e})")
    rhs = np.zeros(d)
    rhs[0] = 1.0
    w = np.linalg.solve(mat, rhs)
    if np.any(w <= 0):
        raise PeterssonError(
            f"non-positive harmonic weight at k={k}: {w.tolist()}")
    return HarmonicWeights(weight_k=k, w=tuple(float(x) for x in w),
                           method="linear_solve", condition_number=cond)


def _f_abs2(coeffs, x, y, n_terms):
    """|f(x+iy)|^2 for f = sum a_n q^n with real coefficients."""
    z = mpmath.mpc(x, y)
    q = mpmath.exp(2j * mpmath.pi * z)
    acc = mpmath.mpc(0)
    qn = mpmath.mpc(1)
    for n in range(1, n_terms + 1):
        qn *= q
        acc += coeffs[n] * qn
    return (acc.real ** 2 + acc.imag ** 2)


def petersson_norm_quadrature(f_series: QSeries, k: int, truncation: int,
                              y_cut: float = 1.0) -> float:
    """Petersson norm of f by quadrature over the fundamental domain.

    Splits the domain at height y_cut >= 1: below, 2D quadrature over the
    arc-bounded strip plus a 1D quadrature of the exact Fourier x-integral;
    above, the analytic tail sum a_n^2 Gamma(k-1, 4 pi n y_cut)/(4 pi n)^{k-1}.
    Small-weight oracle only.
    """
    if k > QUADRATURE_MAX_WEIGHT:
        raise PeterssonError(
            f"quadrature norm is a small-weight oracle (k={k} > "
            f"{QUADRATURE_MAX_WEIGHT}); use the linear-solve route")
    if y_cut < 1.0:
        raise PeterssonError("y_cut must be >= 1 (above the domain arc)")
    n_terms = min(truncation, f_series.n_max)
    if n_terms < 1:
        raise PeterssonError("need at least one Fourier coefficient")

    with mpmath.workdps(50):
        coeffs = [mpmath.mpf(0)] * (n_terms + 1)
        for n in range(1, n_terms + 1):
            coeffs[n] = mpmath.mpf(int(f_series[n])) if isinstance(
                f_series[n], int) else mpmath.mpf(str(f_series[n]))
        y0 = mpmath.sqrt(3) / 2

        # truncation audit: the dropped terms must be negligible at y = y0
        half_k = mpmath.mpf(k - 1) / 2
        main_scale = sum(c * c * mpmath.exp(-4 * mpmath.pi * n * y0)
                         for n, c in enumerate(coeffs[1:], start=1))
        n_next = n_terms + 1
        tail_term = (mpmath.mpf(n_next) ** (2 * half_k) * (n_next ** 2)
                     * mpmath.exp(-4 * mpmath.pi * n_next * y0))
        if main_scale > 0 and tail_term / main_scale > mpmath.mpf("1e-12"):
            raise PeterssonError(
                f"truncation {n_terms} too small: first dropped term is "
                f"{float(tail_term / main_scale):.2e} of the main term")

        def strip_integrand(y):
            x0 = mpmath.sqrt(max(mpmath.mpf(0), 1 - y * y))
            inner = mpmath.quad(
                lambda x: _f_abs2(coeffs, x, y, n_terms),
                [x0, mpmath.mpf(1) / 2])
            return 2 * inner * y ** (k - 2)

        arc_part = mpmath.quad(strip_integrand, [y0, mpmath.mpf(1)])

        def fourier_integrand(y):
            s = sum(c * c * mpmath.exp(-4 * mpmath.pi * n * y)
                    for n, c in enumerate(coeffs[1:], start=1))
            return s * y ** (k - 2)

        mid_part = mpmath.mpf(0)
        if y_cut > 1:
            mid_part = mpmath.quad(fourier_integrand,
                                   [mpmath.mpf(1), mpmath.mpf(str(y_cut))])

        yc = mpmath.mpf(str(y_cut))
        tail = mpmath.mpf(0)
        for n in range(1, n_terms + 1):
            a2 = coeffs[n] * coeffs[n]
            if a2 == 0:
                continue
            tail += a2 * mpmath.gammainc(k - 1, 4 * mpmath.pi * n * yc) \
                / (4 * mpmath.pi * n) ** (k - 1)

        return float(arc_part + mid_part + tail)


def harmonic_weight_from_norm(k: int, norm: float) -> float:
    """w = Gamma(k-1) / ((4 pi)^{k-1} * norm)."""
    with mpmath.workdps(50):
        return float(mpmath.gamma(k - 1)
                     / (4 * mpmath.pi) ** (k - 1) / mpmath.mpf(str(norm)))


def default_heldout_m(k: int, count: int = 20) -> list:
    """Squarefree integers above the solving set {1..d}, d = dim S_k."""
    d = dim_cusp_forms(k)
    out = []
    m = d + 1
    while len(out) < count:
        mm, sf = m, True
        for p in range(2, int(math.isqrt(mm)) + 1):
            if mm % (p * p) == 0:
                sf = False
                break
        if sf:
            out.append(m)
        m += 1
    return out


def lemma22_decay_scan(k_values, m_list=None, n_max=None):
    """Defect table D(k, m) = |sum_f w_f lambda_f(m) - 1_{m=1}| on held-out m.

    Returns {"rows": [{k, m, D}], "beta": fitted exponent, "weights": {...}}.
    The exponent comes from a log-log fit of max_m D(k, m) against k and is
    reported, not asserted.
    """
    rows = []
    weights_info = {}
    per_k_max = []
    for k in sorted(set(int(k) for k in k_values)):
        d = dim_cusp_forms(k)
        if d == 0:
            continue
        held = list(m_list) if m_list is not None else default_heldout_m(k)
        if any(m <= d for m in held):
            raise PeterssonError(
                f"held-out m overlaps the solving set 1..{d} at k={k}")
        need = max(max(held), 3 * d + 1, 8)
        cache = get_power_cache(n_max if n_max else need)
        forms = eigenforms(k, n_max if n_max else need, cache)
        hw = weights_by_linear_solve(forms)
        weights_info[k] = {
            "weights": list(hw.w),
            "condition_number": hw.condition_number,
            "max_w_scaled": max(hw.w) * k / math.log(k) ** 2,
        }
        worst = 0.0
        for m in held:
            avg = sum(w * f.lambda_at(m) for w, f in zip(hw.w, forms))
            defect = abs(avg)
            rows.append({"k": k, "m": m, "D": defect})
            worst = max(worst, defect)
        per_k_max.append((k, worst))
    beta = float("nan")
    pts = [(k, v) for k, v in per_k_max if v > 0]
    if len(pts) >= 2:
        lk = np.log([p[0] for p in pts])
        lv = np.log([p[1] for p in pts])
        slope, _ = np.polyfit(lk, lv, 1)
        beta = float(-slope)
    return {"rows": rows, "beta": beta, "weights": weights_info}
