import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from focksobolev.kernels import (ConeParams, KernelParams, error_series, error_term, fock_kernel,
                                 ifrac_kernel_series, kernel_alpha, kernel_series, lambda_bound,
                                 check_kernel_bound, pair_grid, truncated_kernel_plus)

coord = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)


def test_alpha_zero_is_exponential():
    assert kernel_alpha(KernelParams(1, 0.0), [1.0], [1.0]) == pytest.approx(math.e, rel=1e-14)


def test_orthogonal_points_give_one():
    assert kernel_alpha(KernelParams(2, 0.0), [1 + 2j, 0], [0, 3 - 1j]) == 1


@given(coord, coord)
@settings(max_examples=60)
def test_alpha_minus_two_closed_form(z, w):
    lam = z * np.conj(w)
    if abs(lam) < 1e-6:
        return
    ref = np.expm1(lam) / lam
    assert abs(kernel_alpha(KernelParams(1, -2.0), [z], [w]) - ref) <= 1e-12 * abs(ref)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("shift", ["neg", "mid", "edge", "above"])
def test_decomposition(n, shift):
    alpha = {"neg": -3.0, "mid": 1.5, "edge": 2.0 * n, "above": 2 * n + 2.5}[shift]
    p = KernelParams(n, alpha)
    for lam in (0.3, 2.0 - 1j, -6.0, 4j, 9.0 + 3j):
        direct = kernel_series(p).evaluate(lam)
        split = ifrac_kernel_series(n, -alpha / 2).evaluate(lam) + error_series(p).evaluate(lam)
        assert abs(direct - split) <= 1e-12 * max(1.0, abs(direct))


@given(st.lists(coord, min_size=4, max_size=4), st.sampled_from([-3.0, 1.5, 4.0, 6.5]))
@settings(max_examples=40)
def test_hermitian_symmetry(c, alpha):
    z, w = c[:2], c[2:]
    p = KernelParams(2, alpha)
    a, b = kernel_alpha(p, z, w), kernel_alpha(p, w, z)
    assert abs(a - np.conj(b)) <= 1e-13 * abs(a)


def test_truncated_plus_error_is_kernel():
    p = KernelParams(1, 3.0)
    z, w = [1.2 - 0.4j], [0.7 + 2j]
    total = truncated_kernel_plus(p, z, w) + error_term(p, z, w)
    assert abs(kernel_alpha(p, z, w) - total) <= 1e-13 * abs(total)


def test_fock_kernel():
    assert fock_kernel([1j], [1j]) == pytest.approx(math.e)


def test_lambda_bound_inside_and_outside_cone():
    c = ConeParams(0.5)
    inside = lambda_bound(c, [2.0], [2.0])
    outside = lambda_bound(c, [2.0], [-2.0])
    assert inside == pytest.approx(math.exp(4.0) + math.exp(2.0))
    assert outside == pytest.approx(math.exp(2.0))


def test_dsk_order_zero_is_bounded_by_one():
    # inside the cone the ratio is e^{|lam|} / (e^{|lam|} + e^{eps |lam|}) < 1
    grid = pair_grid(1, 4.0, 9)
    c_hat = check_kernel_bound("DsK", 0.0, ConeParams(0.5), grid)
    assert 0.99 <= c_hat <= 1.0 + 1e-12
