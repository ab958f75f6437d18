
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from focksobolev.carleson import (MeasureFormatError, ParametricMeasure, PointMeasure, ball_mass,
                                  ball_volume, carleson_scan, classify_maxima, embedding_check,
                                  lattice_measure, read_measure_csv, write_measure_csv)
from focksobolev.core import Polynomial, polynomial_ensemble
from focksobolev.norms import fock_norm_p

monomials = [Polynomial.monomial((k,)) for k in range(8)]


def test_single_mass():
    mu = PointMeasure.from_points([[0.3 + 0.1j]], [1.0])
    assert ball_mass(mu, [0.3 + 0.1j], 0.01) == 1.0
    assert ball_mass(mu, [0.3 + 0.11j], 0.01) == 1.0  # closed ball: boundary counts
    assert ball_mass(mu, [2.0], 0.5) == 0.0


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("radius", [0.0, 0.4, 1.0, 3.0])
def test_volume_ball_mass_is_translation_invariant(n, radius):
    mu = ParametricMeasure(0.0, n)
    z = [radius] + [0.0] * (n - 1)
    assert ball_mass(mu, z, 1.0) == pytest.approx(ball_volume(n, 1.0), rel=1e-9)
    assert ball_mass(mu, z, 0.5) == pytest.approx(ball_volume(n, 0.5), rel=1e-9)


def test_unit_disk_has_unit_mass():
    assert ball_mass(ParametricMeasure(0.0, 1), [7.0j], 1.0) == pytest.approx(1.0, rel=1e-12)


@given(st.floats(0.0, 8.0), st.floats(0.1, 2.0), st.floats(0.1, 2.0))
@settings(max_examples=40, deadline=None)
def test_ball_mass_monotone_in_radius(x, r1, r2):
    lo, hi = sorted((r1, r2))
    mu = ParametricMeasure(1.5, 1)
    assert ball_mass(mu, [x], lo) <= ball_mass(mu, [x], hi) * (1 + 1e-12)


def test_hash_grid_matches_brute_force():
    rng = np.random.default_rng(0)
    pts = rng.standard_normal((500, 2)) + 1j * rng.standard_normal((500, 2))
    w = rng.random(500) + 0.1
    mu = PointMeasure(pts, w)
    for _ in range(20):
        z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        r = rng.uniform(0.2, 1.5)
        brute = w[np.linalg.norm(pts - z, axis=1) <= r].sum()
        assert ball_mass(mu, z, r) == pytest.approx(brute, rel=1e-14)


def test_canonical_verdicts():
    assert carleson_scan(ParametricMeasure(0.0), 1.0, 0.0, 10.0).verdict == "carleson"
    assert carleson_scan(ParametricMeasure(0.0), 1.0, 1.0, 10.0).verdict == "not_carleson"
    v = carleson_scan(ParametricMeasure(2.0), 1.0, 2.0, 10.0)
    assert v.verdict == "carleson" and v.extrapolated


def test_vanishing_verdict():
    assert carleson_scan(ParametricMeasure(3.0), 1.0, 1.0, 10.0).verdict == "vanishing"


@pytest.mark.parametrize("maxima,verdict", [
    ([1, 1, 1, 1, 1], "carleson"),
    ([1, 2, 3, 4, 5, 6], "not_carleson"),
    ([1, 0.5, 0.2, 0.1, 0.05], "vanishing"),
    ([1, 2, 1, 3, 1.5, 2.5], "inconclusive"),
    ([1, 1], "inconclusive"),
])
def test_classification(maxima, verdict):
    assert classify_maxima(maxima) == verdict


def test_embedding_origin_mass():
    mu = PointMeasure.from_points([[0.0]], [1.0])
    assert embedding_check(mu, 2.0, 0.0, monomials) == pytest.approx(1.0)
    one = fock_norm_p(Polynomial.constant(1, 1.0), 1.0, 1.0)
    assert embedding_check(mu, 1.0, 1.0, monomials) == pytest.approx(1.0 / one)


def test_embedding_empty_measure():
    assert embedding_check(PointMeasure.empty(1), 2.0, 0.0, monomials) == 0.0


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        embedding_check(PointMeasure.empty(1), 2.0, 0.0, [Polynomial.zero(1)])


def test_weight_scaling_is_exact():
    mu = lattice_measure(1, 1.0, 6.0, 1.0)
    ens = polynomial_ensemble(2, 4, dims=(1,), max_degree=8)
    for c in (0.25, 4.0):
        assert ball_mass(mu.scaled(c), [0.5], 2.0) == c * ball_mass(mu, [0.5], 2.0)
        assert embedding_check(mu.scaled(c), 2.0, 1.0, ens) == c * embedding_check(mu, 2.0, 1.0, ens)
    s1 = carleson_scan(mu, 1.0, 1.0, 5.0)
    s4 = carleson_scan(mu.scaled(4.0), 1.0, 1.0, 5.0)
    assert s4.annulus_maxima == tuple(4.0 * m for m in s1.annulus_maxima)


def test_lattice_embedding_stable_under_degree_doubling():
    mu = lattice_measure(1, 1.0, 10.0, 1.0)
    c10, c20 = (embedding_check(mu, 2.0, 1.0, polynomial_ensemble(7, 10, dims=(1,), max_degree=d,
                                                                  min_degree=d // 2))
                for d in (10, 20))
    assert c20 / c10 - 1 < 0.25


def test_scan_invariant_under_density_doubling():
    for beta, alpha in ((0.0, 0.0), (0.0, 1.0), (2.0, 2.0)):
        mu = ParametricMeasure(beta)
        assert carleson_scan(mu, 1.0, alpha, 8.0, 16).verdict == carleson_scan(mu, 1.0, alpha, 8.0, 32).verdict


def test_csv_round_trip(tmp_path):
    mu = PointMeasure(np.array([[1 + 2j, -0.5j], [0.25, 3.0]]), np.array([0.5, 2.0]))
    path = tmp_path / "mu.csv"
    write_measure_csv(mu, str(path))
    assert path.read_text().splitlines()[0] == "re_1,im_1,re_2,im_2,weight"
    back = read_measure_csv(str(path))
    np.testing.assert_array_equal(back.points, mu.points)
    np.testing.assert_array_equal(back.weights, mu.weights)


@pytest.mark.parametrize("text,where", [
    ("1,2,3\n", "line 1"),
    ("re_1,im_1,weight\n1,2\n", "line 2"),
    ("re_1,im_1,weight\n1,2,x\n", "line 2"),
    ("re_1,im_1,weight\n0,0,1\n1,2,-1\n", "line 3"),
])
def test_csv_errors_report_line(tmp_path, text, where):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(MeasureFormatError, match=where):
        read_measure_csv(str(path))
