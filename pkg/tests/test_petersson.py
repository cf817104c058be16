import pytest

from heckesign.modforms import eigenforms, get_power_cache, miller_basis
from heckesign.petersson import (PeterssonError, default_heldout_m,
                                 harmonic_weight_from_norm,
                                 lemma22_decay_scan,
                                 petersson_norm_quadrature,
                                 weights_by_linear_solve)
from heckesign.qseries import delta_form

CACHE = get_power_cache(200)

# independently certified by fundamental-domain quadrature; agrees with the
# classical value of the norm of the discriminant form
DELTA_NORM = 1.035362e-06


def test_weight_12_solve_is_exact():
    hw = weights_by_linear_solve(eigenforms(12, 60, CACHE))
    assert hw.w == (1.0,)
    assert hw.condition_number == pytest.approx(1.0)


def test_weight_24_solve():
    hw = weights_by_linear_solve(eigenforms(24, 60, CACHE))
    assert len(hw.w) == 2
    assert all(x > 0 for x in hw.w)
    assert sum(hw.w) == pytest.approx(1.0, abs=1e-12)


def test_quadrature_norm_of_discriminant():
    norm = petersson_norm_quadrature(delta_form(60), 12, 60)
    assert norm == pytest.approx(DELTA_NORM, rel=1e-4)


def test_quadrature_scaling():
    f = delta_form(40)
    base = petersson_norm_quadrature(f, 12, 40)
    doubled = petersson_norm_quadrature(f.scale(2), 12, 40)
    assert doubled == pytest.approx(4 * base, rel=1e-12)


def test_quadrature_guard_rails():
    with pytest.raises(PeterssonError):
        petersson_norm_quadrature(delta_form(40), 100, 40)  # weight too big
    with pytest.raises(PeterssonError):
        petersson_norm_quadrature(delta_form(3), 12, 3)  # truncation audit


def test_two_route_weight_at_18():
    f = miller_basis(18, 70, CACHE)[0]
    w_quad = harmonic_weight_from_norm(
        18, petersson_norm_quadrature(f, 18, 70))
    assert abs(w_quad - 1.0) <= 0.25


def test_heldout_defaults_are_squarefree_and_disjoint():
    held = default_heldout_m(24)
    assert min(held) > 2 and len(held) == 20
    assert all(all(m % (p * p) for p in range(2, int(m ** 0.5) + 1))
               for m in held)


def test_overlap_with_solving_set_raises():
    with pytest.raises(PeterssonError):
        lemma22_decay_scan([24], m_list=[2, 30])


def test_decay_scan_small_weight_value():
    rep = lemma22_decay_scan([12])
    d12_2 = [r for r in rep["rows"] if r["k"] == 12 and r["m"] == 2]
    assert d12_2[0]["D"] == pytest.approx(24 / 2 ** 5.5, abs=1e-12)


def test_decay_emerges_at_large_weight():
    rep = lemma22_decay_scan([12, 160])
    worst = {}
    for r in rep["rows"]:
        worst[r["k"]] = max(worst.get(r["k"], 0.0), r["D"])
    assert worst[12] > 0.1          # O(1) at desk scale
    assert worst[160] < 1e-8        # collapses once k outruns the argument
    assert rep["beta"] > 0


def test_tracked_weight_scale():
    rep = lemma22_decay_scan([12, 50, 120, 200])
    assert all(w["max_w_scaled"] < 3.0 for w in rep["weights"].values())
