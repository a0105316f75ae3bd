import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from specdyn import cheb
from specdyn.cheb import BandError, ScaledValue

small = st.floats(-4, 4, allow_nan=False)
cplx = st.builds(complex, small, small)


def test_T_iter():
    assert cheb.T_iter(1, 17) == 1
    assert cheb.T_iter(0, 1) == -1 and cheb.T_iter(0, 2) == 1
    assert abs(cheb.T_iter(math.cos(math.pi / 5), 2) - math.cos(4 * math.pi / 5)) < 1e-15
    assert cheb.T_iter(3, 20) == cheb.COMPLEX_INF
    with pytest.raises(ValueError):
        cheb.T_iter(0.5, -1)


@given(cplx, st.integers(0, 12))
def test_U_properties(x, n):
    assert cheb.U(0, x) == 1
    assert abs(cheb.U(2, x) - (4 * x * x - 1)) <= 1e-12 * (1 + abs(x) ** 2)
    assert cheb.U(n, 1) == n + 1
    # explicit factorial sum agrees on small n
    assert abs(cheb.U(n, x) - cheb.P_sum(n, 2 * x, 1)) <= 1e-9 * max(1.0, abs(cheb.U_array(n, np.array(abs(x) + 1.0))))


def test_U_zeros():
    assert cheb.U_zeros(1) == [0.0]
    assert np.allclose(cheb.U_zeros(2), [-0.5, 0.5], atol=1e-16)
    assert np.allclose(cheb.U_zeros(3), [-math.sqrt(2) / 2, 0, math.sqrt(2) / 2], atol=1e-16)
    assert np.allclose(cheb.U_zeros(5), [math.cos(k * math.pi / 6) for k in range(5, 0, -1)], atol=1e-15)
    for n in (4, 9, 50):
        z = cheb.U_zeros(n)
        assert z == sorted(z) and z == [-v for v in reversed(z)]


def test_ratio_limit():
    assert abs(cheb.ratio_limit(2) - (2 - math.sqrt(3))) < 1e-15
    with pytest.raises(BandError):
        cheb.ratio_limit(0.3)
    for x in (3j, -5, 1 + 1j):
        assert abs(cheb.ratio_limit(x)) < 1


def test_scaled_value_arithmetic():
    a = ScaledValue.make(3.0)
    assert 0.5 <= abs(a.mantissa) < 2 and abs(a.value() - 3) < 1e-15
    big = a**2000
    assert abs(big.log_abs() - 2000 * math.log(3)) < 1e-9
    assert abs(((big * a) / big).value() - 3) < 1e-12
    assert (a - a).is_zero
    assert abs((a + 1).value() - 4) < 1e-15
    assert abs((2 - a).value() + 1) < 1e-15
    with pytest.raises(ZeroDivisionError):
        a / 0
    with pytest.raises(OverflowError):
        ScaledValue.make(complex(math.inf, 0))


@given(cplx, cplx, st.integers(0, 30))
def test_alpha_beta_identity(a, b, n):
    # (a^{n+1} - b^{n+1}) / (a - b) written as the cancellation-free geometric sum
    terms = [a**k * b ** (n - k) for k in range(n + 1)]
    got = cheb.P(n, a + b, a * b).value()
    assert abs(got - sum(terms)) <= 1e-12 * max(sum(abs(t) for t in terms), 1e-300) * (n + 1)
    if abs(a - b) > 0.5:
        ref = (a ** (n + 1) - b ** (n + 1)) / (a - b)
        assert abs(got - ref) <= 1e-10 * max(abs(a), abs(b), 1) ** n * (n + 1)


def test_G_sequence_matches_G():
    z = (2 + 1j, 0.5, -1j, 0.3)
    seq = cheb.G_sequence(30, z)
    for k in (0, 1, 7, 30):
        assert cheb.rel_deviation(seq[k], cheb.G(k, z)) < 1e-14
    # G_n = (z0 - z1) s^n when z2 z3 = 0
    s = 2.5 + 1j
    assert abs(cheb.G(5, (2 + 1j, 0.5, 0, 3)).value() - (1.5 + 1j) * s**5) < 1e-12 * abs(s) ** 5


def test_G_survives_huge_degree():
    g = cheb.G(5000, (3, 1, 1, 1))
    assert math.isfinite(g.log_abs()) and g.log_abs() > 700


def test_band_helpers():
    assert cheb.on_band(1 + 1e-10) and not cheb.on_band(1 + 1e-8)
    assert cheb.band_distance(0.5j) == 0.5
    assert cheb.band_distance(cmath.inf) == math.inf
