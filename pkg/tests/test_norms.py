import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from focksobolev.core import Polynomial, polynomial_ensemble, random_polynomial
from focksobolev.norms import (IntegrabilityError, MixedPolynomial, embed, fock_norm_estimate,
                               fock_norm_inf, fock_norm_p, monomial_norm_p, monomial_norm_sq,
                               pairing, project, raw_monomial_integral, reproduce_check,
                               sobolev_norm)


def test_constant_has_unit_norm():
    assert fock_norm_p(Polynomial.constant(2, 1.0), 2.0, 0.0) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("gamma", [(0,), (3,), (1, 2), (2, 0, 1), (4, 4)])
def test_monomial_norm_is_factorial(gamma):
    fact = math.prod(math.factorial(g) for g in gamma)
    assert monomial_norm_sq(0.0, gamma) == pytest.approx(fact, rel=1e-12)
    assert monomial_norm_p(gamma, 2.0, 0.0) ** 2 == pytest.approx(fact, rel=1e-10)


def test_sup_norm_of_z():
    assert fock_norm_inf(Polynomial.variable(1, 0), 0.0) == pytest.approx(math.exp(-0.5), rel=1e-9)


def test_nonintegrable_weight():
    with pytest.raises(IntegrabilityError):
        raw_monomial_integral(6.0, (1,))


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
@pytest.mark.parametrize("alpha", [-1.0, 0.0, 2.0])
def test_circle_method_matches_orthogonal_and_monomial(p, alpha):
    f = random_polynomial(1, 6, np.random.default_rng(4))
    circle = fock_norm_estimate(f, p, alpha, method="circle").value
    if p == 2.0:
        assert circle == pytest.approx(fock_norm_estimate(f, p, alpha, method="orthogonal").value, rel=1e-9)
    g = Polynomial.monomial((5,), 2 - 1j)
    assert fock_norm_estimate(g, p, alpha, method="circle").value == pytest.approx(
        monomial_norm_p((5,), p, alpha, 2 - 1j), rel=1e-9)


def test_montecarlo_within_error():
    f = random_polynomial(2, 4, np.random.default_rng(2))
    exact = fock_norm_estimate(f, 2.0, 0.5, method="orthogonal").value
    mc = fock_norm_estimate(f, 2.0, 0.5, method="montecarlo")
    assert abs(mc.value - exact) <= 5 * mc.rel_error * exact


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("alpha", [-3.0, -1.0, 0.5, "2n", "2n+1.5"])
def test_reproducing_identity(n, alpha):
    alpha = {"2n": 2.0 * n, "2n+1.5": 2 * n + 1.5}.get(alpha, alpha)
    rng = np.random.default_rng(n)
    for f in polynomial_ensemble(n, 2, dims=(n,), max_degree=10, density=0.5):
        for _ in range(6):
            z = 2.0 * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2 * n)
            assert reproduce_check(f, alpha, z) <= 1e-11 * (1 + abs(f(z)))


@given(st.floats(-3.0, 1.9))
@settings(max_examples=20, deadline=None)
def test_pairing_is_hermitian(alpha):
    f = random_polynomial(1, 5, np.random.default_rng(1))
    g = random_polynomial(1, 5, np.random.default_rng(2))
    assert pairing(f, g, alpha) == pytest.approx(np.conj(pairing(g, f, alpha)), rel=1e-12)


@pytest.mark.parametrize("alpha", [-1.0, 0.5, 3.9])
def test_project_fixes_holomorphic(alpha):
    f = random_polynomial(2, 4, np.random.default_rng(3))
    g = project(embed(f), alpha)
    assert set(g.terms) == set(f.terms)
    for gam, c in f.items():
        assert g.coefficient(gam) == pytest.approx(c, rel=1e-12)


def test_truncated_projection_keeps_tail():
    # alpha >= 2n pairs against the truncated kernel: degrees <= alpha/2 drop out
    f = random_polynomial(2, 4, np.random.default_rng(3))
    g = project(embed(f), 5.0)
    assert set(g.terms) == {gam for gam in f.terms if sum(gam) > 2.5}
    for gam in g.terms:
        assert g.coefficient(gam) == pytest.approx(f.coefficient(gam), rel=1e-12)


def test_project_of_z_zbar():
    psi = MixedPolynomial(1, {((1,), (1,)): 1.0})
    g = project(psi, 0.0)
    assert g.coefficient((0,)) == pytest.approx(1.0, rel=1e-12)
    assert len(g) == 1


@pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
def test_sobolev_order_zero_is_fock_norm(p):
    f = random_polynomial(1, 6, np.random.default_rng(5))
    for flavor in ("D", "I"):
        assert sobolev_norm(f, p, 1.0, 0.0, flavor) == pytest.approx(fock_norm_p(f, p, 1.0), rel=1e-9)
