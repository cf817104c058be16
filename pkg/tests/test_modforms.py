import math

import numpy as np
import pytest

from heckesign import _kernels
from heckesign.arith import smallest_prime_factor
from heckesign.modforms import (Eigenform, ModformError, dim_cusp_forms,
                                eigenforms, get_power_cache, hecke_matrix,
                                miller_basis, sign_statistics, theta_angle)

CACHE = get_power_cache(600)

# dimensions of the space of level-1 cusp forms for small even weights
KNOWN_DIMS = {0: 0, 2: 0, 4: 0, 6: 0, 8: 0, 10: 0, 12: 1, 14: 0, 16: 1,
              18: 1, 20: 1, 22: 1, 24: 2, 26: 1, 28: 2, 30: 2, 32: 2,
              34: 2, 36: 3, 38: 2, 68: 5}


def test_dimension_formula():
    for k, d in KNOWN_DIMS.items():
        assert dim_cusp_forms(k) == d, k


def test_miller_basis_is_echelon():
    for k in (12, 24, 36, 48):
        d = dim_cusp_forms(k)
        basis = miller_basis(k, 3 * d + 2, CACHE)
        assert len(basis) == d
        for i, g in enumerate(basis, start=1):
            for j in range(1, d + 1):
                assert int(g[j]) == (1 if j == i else 0)


def test_hecke_matrix_weight_12():
    basis = miller_basis(12, 40, CACHE)
    assert int(hecke_matrix(12, 2, basis)[0][0]) == -24
    assert int(hecke_matrix(12, 5, basis)[0][0]) == 4830


def test_delta_eigenvalues():
    f = eigenforms(12, 200, CACHE)[0]
    assert f.lambda_at(2) == pytest.approx(-24 / 2 ** 5.5, abs=1e-12)
    assert f.lambda_at(4) == pytest.approx(f.lambda_at(2) ** 2 - 1, abs=1e-12)
    assert f.lambda_at(6) == pytest.approx(
        f.lambda_at(2) * f.lambda_at(3), abs=1e-12)
    assert f.eigen_residual < 1e-30
    assert f.eq25_crosscheck < 1e-10


def test_weight_24_pair():
    forms = eigenforms(24, 200, CACHE)
    assert len(forms) == 2
    lams = sorted(f.lambda_at(2) for f in forms)
    # a(2) = 540 +- 12 sqrt(144169), normalized by 2^{23/2}
    lo = (540 - 12 * math.sqrt(144169)) / 2 ** 11.5
    hi = (540 + 12 * math.sqrt(144169)) / 2 ** 11.5
    assert lams[0] == pytest.approx(lo, abs=1e-10)
    assert lams[1] == pytest.approx(hi, abs=1e-10)


def test_eigenform_count_matches_dimension():
    for k in (12, 14, 26, 36, 60):
        assert len(eigenforms(k, 30, CACHE)) == dim_cusp_forms(k)


def test_theta_angle_dictionary():
    f = eigenforms(12, 100, CACHE)[0]
    th = theta_angle(f, 2)
    assert f.lambda_at(2) == pytest.approx(2 * math.cos(th), abs=1e-12)
    # synthetic extremes
    fake = Eigenform(weight_k=12, index=0, n_max=10,
                     lambda_pp={2: 2.0, 3: -2.0}, eigen_residual=0.0,
                     precision_bits=0, hecke_prime=2, eq25_crosscheck=0.0)
    assert theta_angle(fake, 2) == pytest.approx(0.0)
    assert theta_angle(fake, 3) == pytest.approx(math.pi)
    bad = Eigenform(weight_k=12, index=0, n_max=10, lambda_pp={2: 2.5},
                    eigen_residual=0.0, precision_bits=0, hecke_prime=2,
                    eq25_crosscheck=0.0)
    with pytest.raises(ModformError):
        theta_angle(bad, 2)


def test_lambda_array_agrees_with_lambda_at():
    f = eigenforms(36, 500, CACHE)[0]
    lam = f.lambda_array(500)
    spf = smallest_prime_factor(500)
    for n in (1, 2, 12, 97, 360, 499):
        assert lam[n] == pytest.approx(f.lambda_at(n, spf), abs=1e-12)


def test_kernel_backends_agree():
    f = eigenforms(24, 300, CACHE)[0]
    spf = smallest_prime_factor(300)
    pp = np.zeros(301)
    for q, v in f.lambda_pp.items():
        if q <= 300:
            pp[q] = v
    fast = _kernels.lambda_fill(spf, pp)
    slow = _kernels._lambda_fill_impl(spf, pp)
    assert np.allclose(fast, slow, atol=0)


def test_sign_statistics_weight_12():
    stats = sign_statistics(12, 100, CACHE)
    rec = stats.records[0]
    assert rec.n_f == 2 and rec.p_f == 2 and not rec.ambiguous


def test_sign_statistics_prime_power_law():
    for k in (24, 40, 68, 120):
        for rec in sign_statistics(k, 200, CACHE).records:
            assert rec.n_f is not None
            assert rec.n_f <= rec.p_f
            # n_f must be a prime power
            m = rec.n_f
            p = min(q for q in range(2, m + 1) if m % q == 0)
            while m % p == 0:
                m //= p
            assert m == 1


def test_high_weight_well_conditioned():
    forms = eigenforms(300, 60, CACHE)
    assert len(forms) == dim_cusp_forms(300)
    assert max(f.eigen_residual for f in forms) < 1e-40
    for f in forms:
        assert abs(f.lambda_at(2)) <= 2.0 + 1e-9
