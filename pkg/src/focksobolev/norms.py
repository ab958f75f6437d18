"""Weighted Fock norms, Hilbert pairings, Sobolev norms and the reproducing operator.

Conventions: dV is normalized so that int e^{-|z|^2} dV = 1, which in polar
form reads dV = (2 / Gamma(n)) t^{2n-1} dt dsigma with dsigma the normalized
surface measure of the unit sphere.

    ||f||_{F^p_alpha}^p = int |f(z)|^p e^{-p|z|^2/2} (1+|z|)^{-alpha} dV(z)
    ||f||_{F^inf_alpha} = sup |f(z)| e^{-|z|^2/2} (1+|z|)^{-alpha}
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import optimize

from .core import (DimensionError, MultiIndex, Polynomial, as_multi_index, as_point,
                   mi_factorial, tail_split)
from .fracops import dfrac_series, ifrac_series
from .gamma import GammaDomainError, gamma_ratio, log_gamma_ratio
from .kernels import KernelParams, kernel_ratio
from .quadrature import QuadratureError, log_radial_integral

DEFAULT_MC_SEED = 20130709
DEFAULT_MC_SAMPLES = 2048


class IntegrabilityError(ValueError):
    """A Gamma argument n + |gamma| - alpha/2 is nonpositive."""


# -- Hilbert-space pairings -----------------------------------------------------

def _split_regime(n: int, alpha: float) -> bool:
    return alpha >= 2 * n


def raw_monomial_integral(alpha: float, gamma: MultiIndex) -> float:
    """int |z^gamma|^2 e^{-|z|^2} |z|^{-alpha} dV = gamma! Gamma(n+|gamma|-alpha/2)/Gamma(n+|gamma|)."""
    gamma = as_multi_index(gamma)
    n, k = len(gamma), sum(gamma)
    if not n + k - alpha / 2 > 0:
        raise IntegrabilityError(
            f"|z|^(-{alpha}) is not integrable against z^{gamma}: n+|gamma|-alpha/2 = {n + k - alpha / 2}")
    return mi_factorial(gamma) * gamma_ratio(n + k - alpha / 2, n + k)


def monomial_norm_sq(alpha: float, gamma: Iterable[int]) -> float:
    """<z^gamma, z^gamma>_alpha; degrees |gamma| <= alpha/2 use gamma! when alpha >= 2n."""
    gamma = as_multi_index(gamma)
    if _split_regime(len(gamma), alpha) and sum(gamma) <= alpha / 2:
        return float(mi_factorial(gamma))
    return raw_monomial_integral(alpha, gamma)


def _check_dims(f: Polynomial, g: Polynomial):
    if f.n != g.n:
        raise DimensionError(f"polynomials on C^{f.n} and C^{g.n}")


def pairing(f: Polynomial, g: Polynomial, alpha: float) -> complex:
    """Adjusted inner product <f, g>_alpha as an exact finite sum over shared monomials."""
    _check_dims(f, g)
    gt = g.terms
    return complex(sum(c * gt[gam].conjugate() * monomial_norm_sq(alpha, gam)
                       for gam, c in f.items() if gam in gt))


def pairing_raw(f: Polynomial, g: Polynomial, alpha: float) -> complex:
    """Integral pairing int f conj(g) e^{-|z|^2} |z|^{-alpha} dV; raises when it diverges."""
    _check_dims(f, g)
    gt = g.terms
    return complex(sum(c * gt[gam].conjugate() * raw_monomial_integral(alpha, gam)
                       for gam, c in f.items() if gam in gt))


# -- reproducing kernel as a polynomial ------------------------------------------

def kernel_polynomial(alpha: float, z, degree: int, truncated: bool = False) -> Polynomial:
    """K^alpha_z(w) = K^alpha(w, z) expanded in w up to the given degree.

    (w . conj z)^k / k! = sum_{|gamma|=k} w^gamma conj(z)^gamma / gamma!, so the
    coefficient of w^gamma is a_{|gamma|} conj(z^gamma) / gamma!. With
    ``truncated`` only degrees k > alpha/2 are kept.
    """
    z = as_point(z)
    n = z.n
    p = KernelParams(n, alpha)
    zc = np.conj(z.array())
    terms = {}
    from .core import multi_indices  # local: only needed here
    for k in range(degree + 1):
        if truncated and k <= alpha / 2:
            continue
        a = kernel_ratio(p, k)
        for gam in multi_indices(n, k):
            terms[gam] = a * complex(np.prod(zc ** np.array(gam))) / mi_factorial(gam)
    return Polynomial(n, terms)


def reproduce_check(f: Polynomial, alpha: float, z) -> float:
    """|f(z) - <f, K^alpha_z>_alpha|; the kernel is cut at deg f (orthogonality)."""
    z = as_point(z)
    if z.n != f.n:
        raise DimensionError(f"point in C^{z.n} for a polynomial on C^{f.n}")
    kz = kernel_polynomial(alpha, z, max(f.degree, 0))
    return abs(f(z) - pairing(f, kz, alpha))


# -- mixed polynomials and the reproducing operator ---------------------------------

class MixedPolynomial:
    """sum c_{a,b} z^a conj(z)^b on C^n."""

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, terms: Mapping[tuple, complex] | None = None):
        clean: dict[tuple[MultiIndex, MultiIndex], complex] = {}
        for (a, b), c in (terms or {}).items():
            a, b = as_multi_index(a), as_multi_index(b)
            if len(a) != n or len(b) != n:
                raise DimensionError(f"multi-indices {a}, {b} do not have length {n}")
            c = complex(c)
            if c != 0:
                key = (a, b)
                clean[key] = clean.get(key, 0j) + c
                if clean[key] == 0:
                    del clean[key]
        self._n = n
        self._terms = dict(sorted(clean.items()))

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_holomorphic(self) -> bool:
        return all(sum(b) == 0 for a, b in self._terms)

    def conjugate(self) -> "MixedPolynomial":
        return MixedPolynomial(self._n, {(b, a): c.conjugate() for (a, b), c in self._terms.items()})

    def __add__(self, other: "MixedPolynomial") -> "MixedPolynomial":
        out = dict(self._terms)
        for key, c in other.items():
            out[key] = out.get(key, 0j) + c
        return MixedPolynomial(self._n, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, MixedPolynomial) and self._n == other._n and self._terms == other._terms

    def __call__(self, z) -> complex:
        z = as_point(z).array()
        total = 0j
        for (a, b), c in self._terms.items():
            total += c * np.prod(z ** np.array(a)) * np.prod(np.conj(z) ** np.array(b))
        return complex(total)

    def __repr__(self) -> str:
        return f"MixedPolynomial(n={self._n}, terms={len(self._terms)})"


def embed(f: Polynomial) -> MixedPolynomial:
    zero = (0,) * f.n
    return MixedPolynomial(f.n, {(g, zero): c for g, c in f.items()})


def project(psi: MixedPolynomial, alpha: float) -> Polynomial:
    """Reproducing operator applied to psi: z -> (psi, K^alpha_z)_alpha.

    For alpha >= 2n the truncated kernel (degrees > alpha/2) is used. Only
    terms with a >= b survive; z^a conj(z)^b maps to
    raw(alpha, a) / <z^{a-b}, z^{a-b}>_alpha times z^{a-b}.
    """
    n = psi.n
    split = _split_regime(n, alpha)
    out: dict[MultiIndex, complex] = {}
    for (a, b), c in psi.items():
        if any(x < y for x, y in zip(a, b)):
            continue
        gam = tuple(x - y for x, y in zip(a, b))
        if split and sum(gam) <= alpha / 2:
            continue
        factor = raw_monomial_integral(alpha, a) / monomial_norm_sq(alpha, gam)
        out[gam] = out.get(gam, 0j) + c * factor
    return Polynomial(n, out)


# -- F^p_alpha norms ---------------------------------------------------------------

@dataclass(frozen=True)
class NormEstimate:
    """A norm value with its method and an error estimate (relative, for the norm)."""

    value: float
    method: str
    rel_error: float


def sphere_monomial_integral(nu: Iterable[int], p: float) -> float:
    """int_S |zeta^nu|^p dsigma = Gamma(n) prod Gamma(p nu_j/2 + 1) / Gamma(p|nu|/2 + n)."""
    nu = as_multi_index(nu)
    n = len(nu)
    log_num = sum(math.lgamma(p * v / 2 + 1) for v in nu)
    return math.exp(math.lgamma(n) + log_num - math.lgamma(p * sum(nu) / 2 + n))


def _log_radial(power: float, gauss: float, alpha: float) -> float:
    return log_radial_integral(power, gauss, alpha, rtol=1e-13)


def monomial_norm_p(nu: Iterable[int], p: float, alpha: float, coefficient: complex = 1.0) -> float:
    """||c z^nu||_{F^p_alpha} from the sphere formula and one radial integral."""
    nu = as_multi_index(nu)
    n, k = len(nu), sum(nu)
    log_val = (math.log(2.0) - math.lgamma(n) + math.log(sphere_monomial_integral(nu, p))
               + _log_radial(p * k + 2 * n - 1, p / 2.0, alpha))
    return abs(coefficient) * math.exp(log_val / p)


def _orthogonal_norm_pp(g: Polynomial, gauss: float, alpha: float) -> float:
    """int |g|^2 e^{-2 gauss |z|^2} (1+|z|)^{-alpha} dV by sphere orthogonality."""
    n = g.n
    radial: dict[int, float] = {}
    total = 0.0
    for gam, c in g.items():
        k = sum(gam)
        if k not in radial:
            radial[k] = _log_radial(2 * k + 2 * n - 1, gauss, alpha)
        log_sphere = math.lgamma(n) + math.log(mi_factorial(gam)) - math.lgamma(k + n)
        total += abs(c) ** 2 * 2.0 / math.gamma(n) * math.exp(log_sphere + radial[k])
    return total


def _radial_cutoff(degree: int, n: int, p: float, alpha: float) -> float:
    peak = math.sqrt(max(degree, 0) + (2 * n - 1) / p)
    return peak + math.sqrt(2.0 * (45.0 + abs(alpha)) / p) + 2.0


def _ray_integrals(f: Polynomial, directions: np.ndarray, p: float, alpha: float,
                   rtol: float = 1e-9) -> np.ndarray:
    """For each unit direction zeta: (2/Gamma(n)) int_0^T |f(t zeta)|^p e^{-p t^2/2} (1+t)^{-alpha} t^{2n-1} dt.

    Composite Gauss-Legendre panels, halved until the totals settle to ``rtol``.
    For odd or fractional p, |f|^p has near-kinks where a ray passes close to
    a zero of f, so convergence is algebraic there; 1e-9 is the default.
    """
    n = f.n
    deg = max(f.degree, 0)
    # homogeneous parts at each direction: H[j, k] = f_k(zeta_j)
    vals = f.term_matrix(directions)  # (terms, M)
    H = np.zeros((directions.shape[0], deg + 1), dtype=complex)
    coefs = np.array([c for _, c in f.items()])
    degs = np.array([sum(g) for g, _ in f.items()])
    for k in range(deg + 1):
        mask = degs == k
        if mask.any():
            H[:, k] = coefs[mask] @ vals[mask]
    T = _radial_cutoff(deg, n, p, alpha)
    x16, w16 = leggauss(16)
    previous = None
    panels = max(8, int(math.ceil(2 * T)))
    change = math.inf
    for _ in range(7):
        edges = np.linspace(0.0, T, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        t = (mid[:, None] + half[:, None] * x16[None, :]).ravel()
        w = (half[:, None] * w16[None, :]).ravel()
        powers = t[None, :] ** np.arange(deg + 1)[:, None]  # (deg+1, Q)
        fv = H @ powers  # (M, Q)
        with np.errstate(divide="ignore"):
            logw = -p * t * t / 2 - alpha * np.log1p(t) + (2 * n - 1) * np.log(t)
        integrand = np.abs(fv) ** p * np.exp(logw)[None, :]
        current = integrand @ w * (2.0 / math.gamma(n))
        if previous is not None:
            # the norm only needs the direction average to settle
            change = abs(current.sum() - previous.sum()) / max(current.sum(), 1e-300)
            if change < rtol:
                return current
        previous = current
        panels *= 2
    if change < 1e-6:
        return current
    raise QuadratureError("panel refinement of the radial integral did not settle", float(change))


def sphere_directions(n: int, count: int, seed: int) -> np.ndarray:
    """Fixed-seed uniform points on the unit sphere of C^n, shape (count, n)."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def fock_norm_estimate(f: Polynomial, p: float, alpha: float, method: str = "auto",
                       seed: int = DEFAULT_MC_SEED, samples: int = DEFAULT_MC_SAMPLES) -> NormEstimate:
    """||f||_{F^p_alpha} for 0 < p < inf.

    Methods: ``monomial`` (sphere formula), ``orthogonal`` (even p: expands
    |f^{p/2}|^2 by monomial orthogonality), ``circle`` (n = 1 trapezoid rule in
    the angle) and ``montecarlo`` (n >= 2, fixed-seed sphere sampling).
    """
    if not 0 < p < math.inf:
        raise ValueError(f"exponent must be in (0, inf), got {p}")
    if f.is_zero():
        return NormEstimate(0.0, "zero", 0.0)
    if method == "auto":
        if len(f) == 1:
            method = "monomial"
        elif float(p).is_integer() and int(p) % 2 == 0:
            method = "orthogonal"
        elif f.n == 1:
            method = "circle"
        else:
            method = "montecarlo"
    if method == "monomial":
        if len(f) != 1:
            raise ValueError("monomial method needs a single-term polynomial")
        (nu, c), = f.items()
        return NormEstimate(monomial_norm_p(nu, p, alpha, c), method, 1e-12)
    if method == "orthogonal":
        if not (float(p).is_integer() and int(p) % 2 == 0):
            raise ValueError("orthogonal method needs an even integer exponent")
        g = f.power(int(p) // 2)
        return NormEstimate(_orthogonal_norm_pp(g, p / 2.0, alpha) ** (1.0 / p), method, 1e-12)
    if method == "circle":
        if f.n != 1:
            raise ValueError("circle method is for n = 1")
        nodes = 4 * max(f.degree, 0) + 16
        if not float(p).is_integer() or int(p) % 2:
            nodes *= 4  # |f|^p is not a trigonometric polynomial
        theta = 2 * np.pi * np.arange(nodes) / nodes
        dirs = np.exp(1j * theta)[:, None]
        value = float(np.mean(_ray_integrals(f, dirs, p, alpha)))
        return NormEstimate(value ** (1.0 / p), method, 1e-6)
    if method == "montecarlo":
        dirs = sphere_directions(f.n, samples, seed)
        ints = _ray_integrals(f, dirs, p, alpha)
        mean = float(np.mean(ints))
        stderr = float(np.std(ints, ddof=1) / math.sqrt(len(ints)))
        return NormEstimate(mean ** (1.0 / p), method, stderr / mean / p)
    raise ValueError(f"unknown norm method {method!r}")


def fock_norm_p(f: Polynomial, p: float, alpha: float, method: str = "auto",
                seed: int = DEFAULT_MC_SEED) -> float:
    return fock_norm_estimate(f, p, alpha, method, seed).value


def sup_radius(f: Polynomial, alpha: float) -> float:
    """Radius beyond which the Gaussian factor has beaten |f| (1+|z|)^{-alpha}."""
    return max(f.degree, 0) + math.sqrt(2.0 * abs(alpha)) + 6.0


def _log_sup_objective(f: Polynomial, alpha: float, Z: np.ndarray) -> np.ndarray:
    r = np.linalg.norm(Z, axis=1)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(f.evaluate_many(Z))) - r * r / 2 - alpha * np.log1p(r)


def fock_norm_inf(f: Polynomial, alpha: float, seed: int = DEFAULT_MC_SEED) -> float:
    """sup |f(z)| e^{-|z|^2/2} (1+|z|)^{-alpha} by grid search with local refinement."""
    if f.is_zero():
        return 0.0
    R = sup_radius(f, alpha)
    if f.n == 1:
        nr, na = 400, 4 * max(f.degree, 0) + 64
        dr, da = R / (nr - 1), 2 * np.pi / na
        r0, a0 = 0.5 * R, np.pi
        hr, ha = 0.5 * R, np.pi
        best = -np.inf
        for level in range(3):
            rs = np.clip(np.linspace(r0 - hr, r0 + hr, nr), 0.0, R)
            ang = np.linspace(a0 - ha, a0 + ha, na, endpoint=(level > 0))
            Rg, Ag = np.meshgrid(rs, ang, indexing="ij")
            Z = (Rg * np.exp(1j * Ag)).reshape(-1, 1)
            vals = _log_sup_objective(f, alpha, Z)
            i = int(np.argmax(vals))
            best = max(best, float(vals[i]))
            r0, a0 = float(np.abs(Z[i, 0])), float(np.angle(Z[i, 0]))
            hr, ha = 2 * dr, 2 * da
            dr, da = 2 * hr / (nr - 1), 2 * ha / (na - 1)
        return math.exp(best)
    # n >= 2: sphere directions times radii, then local optimisation of the best
    dirs = np.vstack([np.eye(f.n, dtype=complex), sphere_directions(f.n, 512, seed)])
    rs = np.linspace(0.0, R, 200)
    Z = (rs[None, :, None] * dirs[:, None, :]).reshape(-1, f.n)
    vals = _log_sup_objective(f, alpha, Z)
    best = float(np.max(vals))
    for i in np.argsort(vals)[-5:]:
        x0 = np.concatenate([Z[i].real, Z[i].imag])

        def neg(x):
            z = (x[:f.n] + 1j * x[f.n:])[None, :]
            v = _log_sup_objective(f, alpha, z)[0]
            return -v if np.isfinite(v) else 1e300

        res = optimize.minimize(neg, x0, method="Nelder-Mead",
                                options={"xatol": 1e-9, "fatol": 1e-13, "maxiter": 4000})
        best = max(best, -float(res.fun))
    return math.exp(best)


# -- Fock-Sobolev norms -----------------------------------------------------------

def sobolev_norm(f: Polynomial, p: float, alpha: float, s: float, flavor: str = "D",
                 method: str = "auto", seed: int = DEFAULT_MC_SEED) -> float:
    """Fock-Sobolev norm of order s.

    flavor D: ||(1+|z|)^{-s} D^s f||_{L^p_alpha}, plus ||f_s^-||_{F^p_alpha} when s < 0.
    flavor I: ||(1+|z|)^{-s} I^{-s} f||_{L^p_alpha}, plus ||f_s^-||_{F^p_alpha} when s > 0.
    The radial factor is folded into the weight: alpha + s p (alpha + s for p = inf).
    """
    if flavor == "D":
        g = dfrac_series(f, s)
        needs_head = s < 0
    elif flavor == "I":
        g = ifrac_series(f, -s)
        needs_head = s > 0
    else:
        raise ValueError(f"flavor must be 'D' or 'I', got {flavor!r}")

    if p == math.inf:
        main = fock_norm_inf(g, alpha + s, seed)
    else:
        main = fock_norm_p(g, p, alpha + s * p, method, seed)
    if needs_head:
        _, head = tail_split(f, s)
        extra = fock_norm_inf(head, alpha, seed) if p == math.inf else fock_norm_p(head, p, alpha, method, seed)
        main += extra
    return main


__all__ = [
    "DEFAULT_MC_SAMPLES", "DEFAULT_MC_SEED", "GammaDomainError", "IntegrabilityError",
    "MixedPolynomial", "NormEstimate", "embed", "fock_norm_estimate", "fock_norm_inf",
    "fock_norm_p", "kernel_polynomial", "log_gamma_ratio", "monomial_norm_p",
    "monomial_norm_sq", "pairing", "pairing_raw", "project", "raw_monomial_integral",
    "reproduce_check", "sobolev_norm", "sphere_directions", "sphere_monomial_integral",
]
