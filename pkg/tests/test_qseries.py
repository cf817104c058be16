import pytest

from heckesign.qseries import (IntegralityError, QSeries, delta_form,
                               eisenstein, eta_product_delta)

TAU = {1: 1, 2: -24, 3: 252, 4: -1472, 5: 4830, 6: -6048, 7: -16744,
       8: 84480, 9: -113643, 10: -115920}


def test_eisenstein_leading_coefficients():
    e4 = eisenstein(4, 5)
    assert [int(e4[n]) for n in range(4)] == [1, 240, 2160, 6720]
    e6 = eisenstein(6, 5)
    assert [int(e6[n]) for n in range(4)] == [1, -504, -16632, -122976]


def test_delta_small_tau_values():
    d = delta_form(12)
    for n, t in TAU.items():
        assert int(d[n]) == t
    assert int(d[0]) == 0


def test_delta_matches_eta_product():
    n_max = 300
    a = delta_form(n_max)
    b = eta_product_delta(n_max)
    for n in range(n_max + 1):
        assert int(a[n]) == int(b[n])


def test_tau_multiplicativity():
    d = delta_form(100)
    assert int(d[6]) == int(d[2]) * int(d[3])
    assert int(d[10]) == int(d[2]) * int(d[5])
    # Hecke recursion at p = 2: tau(4) = tau(2)^2 - 2^11
    assert int(d[4]) == int(d[2]) ** 2 - 2 ** 11


def test_ring_operations():
    e4 = eisenstein(4, 30)
    e6 = eisenstein(6, 30)
    s = e4 + e4
    assert int(s[1]) == 480 and s.weight == 4
    z = e4 - e4
    assert all(int(z[n]) == 0 for n in range(31))
    sq = e4 * e4
    assert sq.weight == 8
    assert int(sq[1]) == 480  # (1 + 240q + ...)^2
    assert (e4 ** 2)[2] == sq[2]
    assert (e4 ** 3)[3] == (sq * e4)[3]
    with pytest.raises(ValueError):
        _ = e4 + e6  # mixed weights


def test_pow_matches_repeated_multiplication():
    e4 = eisenstein(4, 40)
    by_pow = e4 ** 5
    by_mul = e4 * e4 * e4 * e4 * e4
    for n in range(41):
        assert int(by_pow[n]) == int(by_mul[n])


def test_exact_divide():
    e4 = eisenstein(4, 20)
    doubled = e4.scale(2)
    back = doubled.exact_divide(2)
    assert all(int(back[n]) == int(e4[n]) for n in range(21))
    with pytest.raises(IntegralityError):
        e4.exact_divide(7)  # 240/7 is not integral


def test_kronecker_multiplication_with_negatives():
    # mixed-sign series exercise the positive/negative split
    a = QSeries.from_ints(0, [3, -7, 0, 11, -2], n_max=8)
    b = QSeries.from_ints(0, [-5, 2, 9], n_max=8)
    prod = a * b
    want = [0] * 9
    for i, x in enumerate([3, -7, 0, 11, -2]):
        for j, y in enumerate([-5, 2, 9]):
            if i + j <= 8:
                want[i + j] += x * y
    assert [int(prod[n]) for n in range(9)] == want


def test_kronecker_matches_schoolbook_randomized():
    from hypothesis import given, settings, strategies as st

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(-10 ** 12, 10 ** 12), min_size=1, max_size=12),
           st.lists(st.integers(-10 ** 12, 10 ** 12), min_size=1, max_size=12))
    def check(xs, ys):
        n = len(xs) + len(ys) - 2
        prod = QSeries.from_ints(0, xs, n) * QSeries.from_ints(0, ys, n)
        want = [0] * (n + 1)
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                want[i + j] += x * y
        assert [int(prod[m]) for m in range(n + 1)] == want

    check()


def test_scaling_by_rational_loses_integrality():
    from fractions import Fraction
    e4 = eisenstein(4, 10)
    half = e4.scale(Fraction(1, 2))
    assert not half.is_integral()
    assert (half + half).is_integral()
