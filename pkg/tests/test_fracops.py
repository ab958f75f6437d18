import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from focksobolev.core import Polynomial, polynomial_ensemble, random_polynomial, tail_split
from focksobolev.fracops import (dfrac, dfrac_series, ifrac, ifrac_series, rop, rop_tilde,
                                 truncated_exp, truncated_exp_ratio_integral)


def test_half_derivative_of_z():
    f = Polynomial.variable(1, 0)
    assert dfrac(f, 0.5, [1.0]) == pytest.approx(1.3293403882, rel=1e-10)
    assert dfrac(f, 0.5, [1.0], method="integral") == pytest.approx(1.3293403882, rel=1e-10)


@pytest.mark.parametrize("s", [0.5, -0.5, 1.0, -1.0, 2.5, -2.5])
def test_inversion(s):
    for f in polynomial_ensemble(11, 9, max_degree=12, density=0.3):
        g = ifrac_series(dfrac_series(f, s), s)
        target = f if s >= 0 else tail_split(f, s)[0]
        assert set(g.terms) == set(target.terms)
        for gam, c in target.items():
            assert abs(g.coefficient(gam) - c) <= 1e-12 * abs(c)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("s", [0.3, 1.0, 1.5, 2.0, 2.7])
@pytest.mark.parametrize("op", [dfrac, ifrac])
@pytest.mark.parametrize("sign", [1, -1])
def test_series_matches_integral(n, s, op, sign):
    rng = np.random.default_rng(n)
    f = random_polynomial(n, 8, rng, density=0.5)
    for z in (rng.standard_normal(n) + 1j * rng.standard_normal(n), np.zeros(n)):
        a = op(f, sign * s, z, method="series")
        b = op(f, sign * s, z, method="integral")
        assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


def test_negative_order_kills_low_degrees():
    f = Polynomial(1, {(0,): 1.0, (1,): 2.0})
    assert dfrac_series(f, -1.5).is_zero()
    assert ifrac(f, -1.5, [0.7], method="integral") == 0


def test_radial_operators_rescale():
    f = Polynomial.variable(1, 0)
    z = [2.0]
    assert rop(f, 1.0, z) == pytest.approx(dfrac(f, 1.0, z) / 3.0)
    assert rop_tilde(f, 1.0, z) == pytest.approx(ifrac(f, -1.0, z) / 3.0)


@given(st.integers(0, 8), st.floats(0.5, 20.0), st.floats(-math.pi, math.pi))
@settings(max_examples=80)
def test_truncated_exp_identity(k, radius, angle):
    lam = radius * np.exp(1j * angle)
    lhs = truncated_exp(k, lam) / lam ** (k + 1)
    assert abs(lhs - truncated_exp_ratio_integral(k, lam)) <= 1e-10 * abs(lhs)


@pytest.mark.parametrize("k", range(9))
def test_truncated_exp_small_argument(k):
    lam = 1e-8
    assert truncated_exp(k, lam) / lam ** (k + 1) == pytest.approx(1 / math.factorial(k + 1), rel=1e-6)


@given(st.integers(0, 8), st.floats(0.01, 20.0), st.floats(-1.5, 1.5))
def test_truncated_exp_inequalities(k, x, angle):
    q = truncated_exp(k, x).real / x ** (k + 1)
    assert 0 < q <= math.exp(x) * (1 + 1e-12)
    lam = x * np.exp(1j * angle)
    bound = (abs(lam) / lam.real) ** (k + 1) * truncated_exp(k, lam.real).real
    assert abs(truncated_exp(k, lam)) <= bound * (1 + 1e-12)
