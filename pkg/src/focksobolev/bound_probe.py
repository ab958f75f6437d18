"""Fitted constants for growth and integral inequalities.

Each registered inequality reads ``LHS <= C * shape``; ``probe`` evaluates
log LHS and log shape on scrambled-Sobol samples and reports
C_hat = max exp(log LHS - log shape), together with the relative change of
C_hat when the sample count is quadrupled. Everything is computed in log
space because both sides carry factors such as e^{|z|^2/2}.

Unless stated otherwise samples live in C (n = 1) with |z|, |w| <= 6.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate, optimize, special, stats
from scipy.stats import qmc

from .core import Polynomial
from .kernels import (ConeParams, KernelParams, RadialSeries, kernel_bound_terms,
                      kernel_series)
from .norms import fock_norm_p, monomial_norm_p

BOX = 6.0
MIN_SAMPLES = 16


class ProbeError(ValueError):
    """The bound shape was not strictly positive at a sample."""


@dataclass(frozen=True)
class InequalitySpec:
    """One inequality LHS <= C * shape sampled over a box.

    ``evaluate(u, scale)`` maps an (N, dim) array of points of [0, 1)^dim to
    (log LHS, log shape). ``scale`` multiplies the test function for
    inequalities that are homogeneous in it.
    """

    id: str
    statement: str
    dim: int
    evaluate: Callable[[np.ndarray, float], tuple[np.ndarray, np.ndarray]]
    homogeneous: bool = False
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ProbeResult:
    id: str
    c_hat: float
    drift: float
    samples: int
    seed: int

    def as_dict(self) -> dict:
        return {"id": self.id, "C_hat": self.c_hat, "drift": self.drift,
                "samples": self.samples, "seed": self.seed}


# -- sampling helpers ---------------------------------------------------------------

def sobol_points(dim: int, count: int, seed: int) -> np.ndarray:
    """First ``count`` points of a scrambled Sobol sequence (a prefix of any longer run)."""
    engine = qmc.Sobol(dim, scramble=True, seed=seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # balance warning for non powers of two
        return engine.random(count)


def _disk(u_r, u_phi, radius=BOX):
    return radius * u_r * np.exp(2j * np.pi * u_phi)


def _normals(u):
    return stats.norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))


def _poly_coefficients(U: np.ndarray, degree: int) -> np.ndarray:
    """Rows of complex Gaussian coefficients c_k / sqrt(2 k!) from 2(degree+1) columns."""
    g = _normals(U[:, 0::2]) + 1j * _normals(U[:, 1::2])
    fact = np.sqrt(2.0 * special.factorial(np.arange(degree + 1)))
    return g / fact


def _poly_values(coefs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Row-wise evaluation of one-variable polynomials; z broadcasts against rows."""
    out = np.zeros(np.broadcast_shapes(coefs.shape[:1] + (1,) * (np.ndim(z) - 1), np.shape(z)),
                   dtype=complex)
    shape = (-1,) + (1,) * (np.ndim(z) - 1)
    for k in range(coefs.shape[1] - 1, -1, -1):
        out = out * z + coefs[:, k].reshape(shape)
    return out


def _log(x):
    with np.errstate(divide="ignore"):
        return np.log(x)


def _panel_rule(upper: float, panels: int, order: int = 16):
    x, w = leggauss(order)
    edges = np.linspace(0.0, upper, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return ((mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel())


# -- Gaussian integrals over C -----------------------------------------------------

def _radial_window(r, p, a):
    """Radial range holding the mass of e^{p r rho - a rho^2}."""
    return p * r / (2 * a) + 9.0 / math.sqrt(a) + 1.0


def log_shifted_gaussian_integral(r: float, p: float, a: float, alpha: float) -> float:
    """log int_C e^{p Re(z conj w) - a|w|^2} dV_alpha(w) at |z| = r (n = 1).

    The angular average is a Bessel I_0, used in scaled form so the
    exponent p r rho - a rho^2 is handled analytically.
    """
    shift = p * r / (2 * a)
    peak = p * p * r * r / (4 * a)

    def f(rho):
        x = p * r * rho
        return (2 * rho * special.i0e(x) * math.exp(-a * (rho - shift) ** 2)
                * (1 + rho) ** (-alpha))

    upper = _radial_window(r, p, a)
    pts = [shift] if 0 < shift < upper else None
    val, _ = integrate.quad(f, 0.0, upper, points=pts, epsabs=0.0, epsrel=1e-12, limit=200)
    tail, _ = integrate.quad(f, upper, np.inf, epsabs=0.0, epsrel=1e-10, limit=200)
    return math.log(val + tail) + peak


def log_radial_exp_integral(r: float, p: float, a: float, eps: float, alpha: float) -> float:
    """log int_C e^{p eps |z||w| - a|w|^2} dV_alpha(w) at |z| = r (n = 1)."""
    c = p * eps * r
    shift = c / (2 * a)
    peak = c * c / (4 * a)

    def f(rho):
        return 2 * rho * math.exp(-a * (rho - shift) ** 2) * (1 + rho) ** (-alpha)

    upper = _radial_window(r, p * eps, a)
    pts = [shift] if 0 < shift < upper else None
    val, _ = integrate.quad(f, 0.0, upper, points=pts, epsabs=0.0, epsrel=1e-12, limit=200)
    tail, _ = integrate.quad(f, upper, np.inf, epsabs=0.0, epsrel=1e-10, limit=200)
    return math.log(val + tail) + peak


def _angular_grid(count: int):
    return 2 * np.pi * np.arange(count) / count - np.pi


def log_lambda_integral(r: float, p: float, a: float, eps: float, alpha: float) -> float:
    """log int_C Lambda(z, w)^p e^{-a|w|^2} dV_alpha(w) at |z| = r (n = 1).

    The cone |phi| < delta is integrated with Gauss-Legendre in the angle, so
    the indicator's jump sits on a panel edge; outside it Lambda^p = e^{p eps r rho}.
    """
    delta = ConeParams(eps).delta
    peak = p * p * r * r / (4 * a)
    rho, w_rho = _panel_rule(_radial_window(r, p, a), 24)
    x, w = leggauss(64)
    phi = 0.5 * delta * (x + 1.0)  # [0, delta], doubled by symmetry
    w_phi = 0.5 * delta * w
    base = -a * rho ** 2 - alpha * np.log1p(rho) + np.log(np.maximum(rho, 1e-300)) - peak
    lam_re = r * rho[:, None] * np.cos(phi)[None, :]
    log_in = p * np.logaddexp(lam_re, eps * r * rho[:, None])
    inside = (np.exp(log_in + base[:, None]) @ w_phi) * 2
    outside = (2 * np.pi - 2 * delta) * np.exp(p * eps * r * rho + base)
    total = (inside + outside) @ w_rho / np.pi
    return math.log(total) + peak


def log_kernel_integral(r: float, beta: float, p: float, a: float, alpha: float,
                        angles: int = 256) -> float:
    """log int_C |K^beta(z, w)|^p e^{-a|w|^2} dV_alpha(w) at |z| = r (n = 1).

    Trapezoid rule in the angle (periodic, one FFT per circle), Gauss-Legendre
    panels in the radius.
    """
    series = kernel_series(KernelParams(1, beta))
    peak = p * p * r * r / (4 * a)
    rho, w_rho = _panel_rule(_radial_window(r, p, a), 24)
    vals = series.ring_values(r * rho, angles)
    log_k = _log(np.abs(vals))
    base = -a * rho ** 2 - alpha * np.log1p(rho) + np.log(np.maximum(rho, 1e-300)) - peak
    ang_mean = np.mean(np.exp(p * log_k + base[:, None]), axis=1)
    return math.log(2 * ang_mean @ w_rho) + peak


def log_kernel_sup(r: float, beta: float, alpha: float) -> float:
    """log sup_z |K^beta(z, w)| e^{-|z|^2/2} (1+|z|)^{-alpha} at |w| = r (n = 1)."""
    series = kernel_series(KernelParams(1, beta))
    rho = np.linspace(0.0, r + 8.0 + math.sqrt(2 * abs(alpha) + 2 * abs(beta)), 801)
    angles = 512
    vals = series.ring_values(rho * r, angles)
    obj = _log(np.abs(vals)) - (rho ** 2 / 2 + alpha * np.log1p(rho))[:, None]
    i, j = np.unravel_index(np.argmax(obj), obj.shape)
    phase = np.exp(2j * np.pi * j / angles)

    def neg(x):
        v = abs(series.evaluate(x * r * phase, rtol=1e-10))
        return -(math.log(v) - x * x / 2 - alpha * math.log1p(x)) if v > 0 else 1e300

    # bounded scalar search in the radius around the best grid point
    lo, hi = rho[max(i - 1, 0)], rho[min(i + 1, len(rho) - 1)]
    best = float(obj.max())
    if hi > lo:
        res = optimize.minimize_scalar(neg, bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-10})
        best = max(best, -float(res.fun))
    return best


def disk_integral_values(coefs: np.ndarray, z: np.ndarray, t: float, p: float, a: float,
                         alpha: float) -> np.ndarray:
    """int_{|w-z|<t} |f(w)|^p e^{-a|w|^2} dV_alpha(w), one polynomial per row (n = 1)."""
    rho, w_rho = _panel_rule(t, 4)
    phi = _angular_grid(64)
    offs = (rho[:, None] * np.exp(1j * phi)[None, :]).ravel()
    w = z[:, None] + offs[None, :]
    fv = _poly_values(coefs, w)
    aw = np.abs(w)
    dens = np.abs(fv) ** p * np.exp(-a * aw ** 2) * (1 + aw) ** (-alpha)
    dens = dens.reshape(len(z), len(rho), len(phi)).mean(axis=2)
    return 2.0 * dens @ (w_rho * rho)


# -- registry --------------------------------------------------------------------

def _mean_value_probe(p=1.0, a=0.5, t=1.0, alpha=1.0, degree=6):
    """Point value against the local integral over the disk B(z, t) (n = 1).

    Random polynomials seldom come close to the extremal shape, which moves
    the Gaussian bump of |f|^p e^{-a|w|^2} onto z. Each sample therefore also
    tries the degree-`degree` truncation of e^{(2a/p) conj(z) w}. The ratio
    is largest at z = 0, so the radius is drawn as BOX u^2.
    """
    k = np.arange(degree + 1)
    fact = special.factorial(k)

    def ratio_terms(coefs, z):
        fz = np.abs(_poly_values(coefs, z[:, None])[:, 0])
        lhs = p * _log(fz) - a * np.abs(z) ** 2 - alpha * np.log1p(np.abs(z))
        rhs = _log(disk_integral_values(coefs, z, t, p, a, alpha))
        return lhs, rhs

    def evaluate(U, scale):
        z = _disk(U[:, 0] ** 2, U[:, 1])
        lhs, rhs = ratio_terms(scale * _poly_coefficients(U[:, 2:], degree), z)
        shift = (2 * a / p) * np.conj(z)
        lhs_s, rhs_s = ratio_terms(scale * shift[:, None] ** k[None, :] / fact[None, :], z)
        take = (lhs_s - rhs_s) > (lhs - rhs)
        return np.where(take, lhs_s, lhs), np.where(take, rhs_s, rhs)

    return InequalitySpec(
        "lemma-2.1",
        "|f(z)|^p e^{-a|z|^2} (1+|z|)^{-alpha} <= C int_{|w-z|<t} |f|^p e^{-a|w|^2} dV_alpha",
        2 + 2 * (degree + 1), evaluate, homogeneous=True,
        params={"p": p, "a": a, "t": t, "alpha": alpha, "degree": degree})


def _pointwise_probe(derivative: bool, p=2.0, alpha=1.0, degree=8):
    """Point evaluation against the F^2_alpha norm over all polynomials of degree <= 8.

    For p = 2 the monomials are orthogonal with squared norms m_k, so at each
    sampled z the worst polynomial is f_z(w) = sum_k conj(phi_k(z)) w^k / m_k,
    where phi_k(z) is z^k (or k z^{k-1} for the derivative). That f_z is the
    test function; the probe then samples the sup over the whole space.
    The ratio is largest at z = 0, so the radius is drawn as BOX u^2.
    """
    m = np.array([monomial_norm_p((k,), p, alpha) ** 2 for k in range(degree + 1)])
    k = np.arange(degree + 1)

    def evaluate(U, scale):
        z = _disk(U[:, 0] ** 2, U[:, 1])
        if derivative:
            phi = k[None, :] * z[:, None] ** np.maximum(k - 1, 0)[None, :]
        else:
            phi = z[:, None] ** k[None, :]
        coefs = scale * np.conj(phi) / m[None, :]
        val = np.sum(coefs * phi, axis=1)
        norm = np.sqrt(np.sum(np.abs(coefs) ** 2 * m[None, :], axis=1))
        g = 1 if derivative else 0
        lhs = _log(np.abs(val))
        rhs = np.abs(z) ** 2 / 2 + (alpha / p + g) * np.log1p(np.abs(z)) + _log(norm)
        return lhs, rhs

    ident = "prop-2.2-grad" if derivative else "prop-2.2"
    order = "|f'(z)|" if derivative else "|f(z)|"
    return InequalitySpec(
        ident, f"{order} <= C e^{{|z|^2/2}} (1+|z|)^{{alpha/p+|gamma|}} ||f||_(F^p_alpha)",
        2, evaluate, homogeneous=True,
        params={"p": p, "alpha": alpha, "degree": degree, "gamma": 1 if derivative else 0})


def _kernel_pair_probe(ident: str, which: str, order: float, eps=0.5):
    """Kernel growth against the cone comparison function (n = 1).

    The shape drops when w leaves the cone, so its exterior supremum sits on
    the cone edge, possibly in the limit lam -> 0. Besides a random pair
    (z, w) each sample therefore carries two points just outside the edge, one
    with |lam| log-uniform in [1e-6, BOX^2] (limits lam -> 0) and one with |lam|
    uniform in [0, BOX^2]; the largest of the three ratios is kept.
    """
    cone = ConeParams(eps)
    edge = cone.delta * (1 + 1e-9)
    lo, hi = math.log(1e-6), math.log(BOX * BOX)

    def evaluate(U, scale):
        z = _disk(U[:, 0], U[:, 1])
        w = _disk(U[:, 2], U[:, 3])
        lhs, rhs = kernel_bound_terms(which, 1, order, cone, z * np.conj(w), np.abs(z), np.abs(w))
        side = np.exp(1j * edge * np.where(U[:, 5] < 0.5, -1.0, 1.0))
        for mod in (np.exp(lo + (hi - lo) * U[:, 4]), BOX * BOX * U[:, 6]):
            root = np.sqrt(mod)
            lhs_e, rhs_e = kernel_bound_terms(which, 1, order, cone, mod * side, root, root)
            take = (lhs_e - rhs_e) > (lhs - rhs)
            lhs, rhs = np.where(take, lhs_e, lhs), np.where(take, rhs_e, rhs)
        return lhs, rhs

    label = {"DsK": "|D^s K_w(z)|", "IsK": "|I^s K_w(z)|", "Kalpha": "|K^alpha(w, z)|"}[which]
    return InequalitySpec(ident, f"{label} <= C * growth shape * Lambda_(eps,delta)(z, w)",
                          7, evaluate, params={"order": order, "eps": eps})


def _truncated_exp_derivative_series(a: float, m: int) -> RadialSeries:
    """sum_i falling(a+m+1+i, m+1) i!/(m+1+i)! u^i / i!: the t-derivative ratio."""

    def falling(x, cnt):
        return math.prod(x - j for j in range(cnt))

    def ratio(i):
        return falling(a + m + 1 + i, m + 1) * math.exp(math.lgamma(i + 1) - math.lgamma(m + 2 + i))

    def mp_ratio(i):
        fall = mpmath.fprod([mpmath.mpf(a + m + 1 + i) - j for j in range(m + 1)])
        return fall * mpmath.factorial(i) / mpmath.factorial(m + 1 + i)

    return RadialSeries(ratio, mp_ratio, growth=0.0, label="d^(m+1) t^a e_m")


def _truncated_exp_probe(a=0.5, m=2, radius=30.0):
    series = _truncated_exp_derivative_series(a, m)

    def evaluate(U, scale):
        # u = t lam in the right half plane; the ratio peaks at u -> 0
        u = radius * U[:, 0] ** 2 * np.exp(1j * np.pi * (U[:, 1] - 0.5))
        u = np.where(u.real > 0, u, np.abs(u) * 1e-9 + 1j * u.imag)
        vals = series.evaluate(u, rtol=1e-8)
        # d_t^{m+1}[t^a e_m(t lam)] = t^a lam^{m+1} * series(t lam); divide out t^a |lam|^{m+1}
        return _log(np.abs(vals)), u.real

    return InequalitySpec(
        "lemma-3.4", "|d_t^{m+1}[t^a e_m(t lam)]| <= C t^a |lam|^{m+1} e^{t Re lam}, Re lam > 0",
        2, evaluate, params={"a": a, "m": m, "radius": radius})


def _shifted_gaussian_probe(ident, p, a, alpha):
    def evaluate(U, scale):
        r = BOX * U[:, 0]
        lhs = np.array([log_shifted_gaussian_integral(x, p, a, alpha) for x in r])
        rhs = p * p * r * r / (4 * a) - alpha * np.log1p(r) - 1 * math.log(a)
        return lhs, rhs
    return InequalitySpec(
        ident, "int e^{p Re(z conj w) - a|w|^2} dV_alpha(w) <= C a^{-n} e^{p^2|z|^2/(4a)} (1+|z|)^{-alpha}",
        1, evaluate, params={"p": p, "a": a, "alpha": alpha})


def _radial_exp_probe(p=1.0, a=1.0, eps=0.5, alpha=1.0):
    n = 1

    def evaluate(U, scale):
        r = BOX * U[:, 0]
        lhs = np.array([log_radial_exp_integral(x, p, a, eps, alpha) for x in r])
        if alpha == 2 * n:
            shape = np.log1p(np.log1p(r))
        else:
            shape = np.logaddexp(0.0, (2 * n - alpha) * _log(r))
        return lhs, p * p * eps * eps * r * r / (4 * a) + shape

    return InequalitySpec(
        "lemma-3.7", "int e^{p eps |z||w| - a|w|^2} dV_alpha(w) <= C e^{p^2 eps^2 |z|^2/(4a)} (1 + |z|^{2n-alpha})",
        1, evaluate, params={"p": p, "a": a, "eps": eps, "alpha": alpha})


def _lambda_integral_probe(p=1.0, a=1.0, eps=0.5, alpha=1.0):
    def evaluate(U, scale):
        r = BOX * U[:, 0]
        lhs = np.array([log_lambda_integral(x, p, a, eps, alpha) for x in r])
        return lhs, p * p * r * r / (4 * a) - alpha * np.log1p(r)
    return InequalitySpec(
        "prop-3.8", "int Lambda(z, w)^p e^{-a|w|^2} dV_alpha(w) <= C e^{p^2|z|^2/(4a)} (1+|z|)^{-alpha}",
        1, evaluate, params={"p": p, "a": a, "eps": eps, "alpha": alpha})


def _small_exponent_probe(p=0.5, alpha=1.0, degree=4):
    # with a = 1/2 both sides are Fock norms: ||f||_{F^1_alpha}^p vs ||f||_{F^p_{p alpha}}^p
    def evaluate(U, scale):
        coefs = scale * _poly_coefficients(U, degree)
        lhs, rhs = [], []
        for row in coefs:
            f = Polynomial(1, {(k,): c for k, c in enumerate(row)})
            lhs.append(p * math.log(fock_norm_p(f, 1.0, alpha)))
            rhs.append(p * math.log(fock_norm_p(f, p, p * alpha)))
        return np.array(lhs), np.array(rhs)
    return InequalitySpec(
        "prop-3.10", "(int |f| e^{-|z|^2/2} dV_alpha)^p <= C int |f e^{-|z|^2/2}|^p dV_(p alpha), 0 < p <= 1",
        2 * (degree + 1), evaluate, homogeneous=True,
        params={"p": p, "a": 0.5, "alpha": alpha, "degree": degree})


def _beta_integral_probe(a=1.5, b=0.5, alpha=1.0):
    def log_lhs(r):
        def g(t):
            return math.exp((t * t - 1) * r * r / 2) * (1 + t * r) ** alpha
        val, _ = integrate.quad(g, 0.0, 1.0, weight="alg", wvar=(a - 1, b - 1),
                                epsabs=0.0, epsrel=1e-11, limit=200)
        return math.log(val) + r * r / 2

    def evaluate(U, scale):
        r = BOX * U[:, 0]
        lhs = np.array([log_lhs(x) for x in r])
        return lhs, r * r / 2 + (alpha - 2 * b) * np.log1p(r)

    return InequalitySpec(
        "lemma-3.12", "int_0^1 t^{a-1}(1-t)^{b-1} e^{|tz|^2/2}(1+|tz|)^alpha dt <= C e^{|z|^2/2}(1+|z|)^{alpha-2b}",
        1, evaluate, params={"a": a, "b": b, "alpha": alpha})


def _kernel_integral_probe(p=1.0, a=1.0, alpha=1.0, beta=1.0):
    def evaluate(U, scale):
        r = BOX * U[:, 0]
        lhs = np.array([log_kernel_integral(x, beta, p, a, alpha) for x in r])
        return lhs, p * p * r * r / (4 * a) - (alpha - beta * p) * np.log1p(r)
    return InequalitySpec(
        "eq-4.11", "int |K^beta(z, w)|^p e^{-a|w|^2} dV_alpha(w) <= C e^{p^2|z|^2/(4a)} (1+|z|)^{beta p - alpha}",
        1, evaluate, params={"p": p, "a": a, "alpha": alpha, "beta": beta})


def _kernel_norm_probe(alpha=1.0, beta=1.0):
    p = 2.0

    def evaluate(U, scale):
        r = BOX * U[:, 0]
        # ||K^beta_w||_{F^2_alpha}^2 = int |K^beta(z, w)|^2 e^{-|z|^2} dV_alpha(z)
        lhs = np.array([0.5 * log_kernel_integral(x, beta, 2.0, 1.0, alpha) for x in r])
        return lhs, r * r / 2 + (beta - alpha / p) * np.log1p(r)
    return InequalitySpec(
        "prop-4.8-p2", "||K^beta_w||_(F^2_alpha) <= C e^{|w|^2/2} (1+|w|)^{beta - alpha/2}",
        1, evaluate, params={"p": p, "alpha": alpha, "beta": beta})


def _kernel_sup_probe(alpha=1.0, beta=1.0):
    def evaluate(U, scale):
        r = BOX * U[:, 0]
        lhs = np.array([log_kernel_sup(x, beta, alpha) for x in r])
        return lhs, r * r / 2 + (beta - alpha) * np.log1p(r)
    return InequalitySpec(
        "prop-4.8-inf", "||K^beta_w||_(F^inf_alpha) <= C e^{|w|^2/2} (1+|w|)^{beta - alpha}",
        1, evaluate, params={"alpha": alpha, "beta": beta})


def _kernel_gradient_probe(alpha=1.5):
    """n = 1: d/dz K^alpha(z, w) = conj(w) K'(z conj w).

    The ratio depends on lam and |z||w| only and peaks for aligned points
    (lam = |z||w| > 0, with the supremum in the limit lam -> 0), which random
    pairs rarely hit; every sample also carries two aligned pairs, with |lam|
    log-uniform in [1e-6, BOX^2] and uniform in [0, BOX^2].
    """
    deriv = kernel_series(KernelParams(1, alpha)).derivative()

    def terms(lam, zw, wn):
        shape_log = np.log(np.maximum(wn, 1e-300)) + alpha / 2 * np.log1p(zw) + zw
        vals = deriv.evaluate(lam, rtol=1e-8, atol=1e-8 * np.exp(zw))
        return _log(wn * np.abs(vals)), shape_log

    def evaluate(U, scale):
        z = _disk(U[:, 0], U[:, 1])
        w = _disk(U[:, 2], U[:, 3])
        lhs, rhs = terms(z * np.conj(w), np.abs(z) * np.abs(w), np.abs(w))
        lo, hi = math.log(1e-6), math.log(BOX * BOX)
        for mod in (np.exp(lo + (hi - lo) * U[:, 4]), BOX * BOX * U[:, 5]):
            lhs_a, rhs_a = terms(mod.astype(complex), mod, np.ones_like(mod))
            take = (lhs_a - rhs_a) > (lhs - rhs)
            lhs, rhs = np.where(take, lhs_a, lhs), np.where(take, rhs_a, rhs)
        return lhs, rhs

    return InequalitySpec(
        "cor-4.7", "|d_z K^alpha(z, w)| <= C |w| (1+|z||w|)^{alpha/2} e^{|z||w|}",
        6, evaluate, params={"alpha": alpha, "gamma": 1})


def _build_registry() -> dict[str, InequalitySpec]:
    specs = [
        _mean_value_probe(),
        _pointwise_probe(False),
        _pointwise_probe(True),
        _kernel_pair_probe("prop-3.2-pos", "DsK", 1.5),
        _kernel_pair_probe("prop-3.2-neg", "DsK", -1.5),
        _kernel_pair_probe("prop-3.5-pos", "IsK", 1.5),
        _kernel_pair_probe("prop-3.5-neg", "IsK", -1.5),
        _truncated_exp_probe(),
        _shifted_gaussian_probe("lemma-3.6", 2.0, 1.0, 1.5),
        _shifted_gaussian_probe("lemma-3.6-alpha0", 1.0, 1.0, 0.0),
        _radial_exp_probe(),
        _lambda_integral_probe(),
        _small_exponent_probe(),
        _beta_integral_probe(),
        _kernel_integral_probe(),
        _kernel_pair_probe("cor-4.6-pos", "Kalpha", 3.0),
        _kernel_pair_probe("cor-4.6-neg", "Kalpha", -2.0),
        _kernel_gradient_probe(),
        _kernel_norm_probe(),
        _kernel_sup_probe(),
    ]
    return {s.id: s for s in specs}


REGISTRY = _build_registry()


def registry_list() -> list[str]:
    return list(REGISTRY)


def get_spec(ident: str) -> InequalitySpec:
    try:
        return REGISTRY[ident]
    except KeyError:
        raise KeyError(f"unknown inequality id {ident!r}; known: {', '.join(REGISTRY)}") from None


def fitted_constant(spec: InequalitySpec, samples: int, seed: int, scale: float = 1.0) -> float:
    U = sobol_points(spec.dim, samples, seed)
    log_lhs, log_rhs = spec.evaluate(U, scale)
    if not np.all(np.isfinite(log_rhs)):
        bad = int(np.nonzero(~np.isfinite(log_rhs))[0][0])
        raise ProbeError(f"{spec.id}: bound shape is not positive at sample {bad}")
    diff = log_lhs - log_rhs
    return float(np.exp(np.max(diff)))


def probe(spec: InequalitySpec | str, samples: int = 64, seed: int = 7,
          scale: float = 1.0) -> ProbeResult:
    """Fitted constant on ``samples`` points and its drift when the count is quadrupled."""
    if isinstance(spec, str):
        spec = get_spec(spec)
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    c1 = fitted_constant(spec, samples, seed, scale)
    c4 = fitted_constant(spec, 4 * samples, seed, scale)
    drift = abs(c4 - c1) / c1 if c1 > 0 else (0.0 if c4 == 0 else math.inf)
    return ProbeResult(spec.id, c1, drift, samples, seed)


__all__ = [
    "InequalitySpec", "ProbeError", "ProbeResult", "REGISTRY", "fitted_constant", "get_spec",
    "log_kernel_integral", "log_lambda_integral", "log_radial_exp_integral",
    "log_shifted_gaussian_integral", "probe", "registry_list", "sobol_points",
]
