import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from focksobolev.gamma import GammaDomainError, dcoeff, gamma_ratio, icoeff, log_gamma_ratio


@given(st.floats(0.5, 60.0), st.floats(-3.0, 3.0))
def test_ratio_matches_mpmath(a, d):
    b = a + d
    if b <= 0:
        return
    ref = float(mpmath.gamma(a) / mpmath.gamma(b))
    assert gamma_ratio(a, b) == pytest.approx(ref, rel=1e-13)


def test_log_ratio_large_arguments():
    with mpmath.workdps(40):
        ref = float(mpmath.loggamma(1e6 + 0.5) - mpmath.loggamma(1e6))
    assert log_gamma_ratio(1e6 + 0.5, 1e6) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("s", [0.5, 1.0, 2.5, -0.5, -2.5])
def test_coefficients_are_inverse(n, s):
    for k in range(int(abs(s)) + 1, 30):
        assert dcoeff(n, s, k) * icoeff(n, s, k) == pytest.approx(1.0, rel=1e-14)


def test_example_value():
    # D^{1/2} z at n = 1: Gamma(2.5)/Gamma(2)
    assert dcoeff(1, 0.5, 1) == pytest.approx(math.gamma(2.5), rel=1e-15)


def test_excluded_index():
    with pytest.raises(GammaDomainError):
        dcoeff(1, -1.5, 1)
