"""Fractional differentiation D^s and integration I^s of polynomials.

Two independent routes are provided for each operator:

* series: the degree-k homogeneous part is multiplied by a Gamma ratio;
* integral: a one-dimensional Beta-type integral over t in (0, 1) of the
  radial restriction t -> f(tz), with the t-derivatives taken exactly on
  powers of t and the remaining (1-t)^a t^b weight handled by Gauss-Jacobi.

The integral route never touches ``dcoeff``/``icoeff``, so agreement between
the two is a genuine check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CPoint, Polynomial, as_point, homogeneous_values, tail_split
from .gamma import dcoeff, icoeff, in_range
from .quadrature import integrate_power_series, jacobi_rule


@dataclass(frozen=True)
class FracParams:
    """Split of a positive order s = m + r with integer m >= 0 and 0 <= r < 1."""

    s: float
    m: int
    r: float

    @classmethod
    def of(cls, s: float) -> "FracParams":
        if s <= 0:
            raise ValueError(f"order must be positive, got {s}")
        m = math.floor(s)
        return cls(s, m, s - m)


def _falling(x: float, count: int) -> float:
    """x (x-1) ... (x-count+1)."""
    out = 1.0
    for j in range(count):
        out *= x - j
    return out


def _quad_order(f: Polynomial, m: int) -> int:
    return max(20, f.degree + m + 5)


# -- series route ---------------------------------------------------------

def dfrac_series(f: Polynomial, s: float) -> Polynomial:
    """D^s f: degree-k part times Gamma(n+s+k)/Gamma(n+k); k <= |s| dropped for s < 0."""
    n = f.n
    return f.map_by_degree(lambda k: dcoeff(n, s, k) if in_range(s, k) else None)


def ifrac_series(f: Polynomial, s: float) -> Polynomial:
    """I^s f: degree-k part times Gamma(n+k)/Gamma(n+s+k); k <= |s| dropped for s < 0."""
    n = f.n
    return f.map_by_degree(lambda k: icoeff(n, s, k) if in_range(s, k) else None)


# -- integral route ---------------------------------------------------------

def dfrac_integral(f: Polynomial, s: float, z) -> complex:
    """D^s f(z) for s > 0 from its (1-t)^{-r} integral representation.

    For n = 1 and integer s the representation degenerates (pole of
    Gamma(1-r) combined with t^{-1}); there the value is
    m! f(0) + int_0^1 d_t^{m+1}[t^m f(tz)] dt.
    """
    z = as_point(z)
    p = FracParams.of(s)
    n, m, r = f.n, p.m, p.r
    parts = homogeneous_values(f, z)
    if not parts:
        return 0j
    order = _quad_order(f, m)

    if n == 1 and r == 0:
        # d_t^{m+1} t^{m+k} = (m+k)!/(k-1)! t^{k-1}; the k = 0 term vanishes
        coefs = {k - 1: v * _falling(m + k, m + 1) for k, v in parts.items() if k >= 1}
        const = math.factorial(m) * parts.get(0, 0j)
        if not coefs:
            return const
        kmin = min(coefs)
        shifted = {j - kmin: c for j, c in coefs.items()}
        return const + integrate_power_series(shifted, 0.0, float(kmin), order)

    # d_t^{m+1} t^{n+s-1+k} = falling(n+s-1+k, m+1) t^{n+r-2+k}
    coefs = {k: v * _falling(n + s - 1 + k, m + 1) for k, v in parts.items()}
    kmin = min(coefs)
    shifted = {k - kmin: c for k, c in coefs.items()}
    integral = integrate_power_series(shifted, -r, n + r - 2 + kmin, order)
    return integral / math.gamma(1.0 - r)


def dfrac_neg_integral(f: Polynomial, s: float, z) -> complex:
    """D^{-s} f(z) for s > 0: (1/Gamma(s)) int t^{n-s-1} (1-t)^{s-1} f_s^+(tz) dt."""
    z = as_point(z)
    p = FracParams.of(s)
    plus, _ = tail_split(f, s)
    parts = homogeneous_values(plus, z)
    if not parts:
        return 0j
    kmin = min(parts)
    shifted = {k - kmin: v for k, v in parts.items()}
    integral = integrate_power_series(shifted, s - 1.0, f.n - s - 1.0 + kmin,
                                      _quad_order(f, p.m))
    return integral / math.gamma(s)


def ifrac_integral(f: Polynomial, s: float, z) -> complex:
    """I^s f(z) for s > 0: (1/Gamma(s)) int t^{n-1} (1-t)^{s-1} f(tz) dt."""
    z = as_point(z)
    p = FracParams.of(s)
    parts = homogeneous_values(f, z)
    if not parts:
        return 0j
    kmin = min(parts)
    shifted = {k - kmin: v for k, v in parts.items()}
    integral = integrate_power_series(shifted, s - 1.0, f.n - 1.0 + kmin, _quad_order(f, p.m))
    return integral / math.gamma(s)


def ifrac_neg_integral(f: Polynomial, s: float, z) -> complex:
    """I^{-s} f(z) for s > 0 from its (1-t)^{-r} integral representation.

    t^s d_t^{m+1}[t^{n-r+k}] = falling(n-r+k, m+1) t^{n+k-1}; every tail
    degree has k >= m+1, so all factors are positive, including n = 1, r = 0.
    """
    z = as_point(z)
    p = FracParams.of(s)
    n, m, r = f.n, p.m, p.r
    plus, _ = tail_split(f, s)
    parts = homogeneous_values(plus, z)
    if not parts:
        return 0j
    coefs = {k: v * _falling(n - r + k, m + 1) for k, v in parts.items()}
    kmin = min(coefs)
    shifted = {k - kmin: c for k, c in coefs.items()}
    integral = integrate_power_series(shifted, -r, n - 1.0 + kmin, _quad_order(f, m))
    return integral / math.gamma(1.0 - r)


# -- truncated exponential ----------------------------------------------------

def _exp_partial(k: int, lam: complex) -> tuple[complex, float]:
    """sum_{j<=k} lam^j/j! and the sum of the moduli of its terms."""
    term = 1.0 + 0j
    total = term
    mag = 1.0
    for j in range(1, k + 1):
        term = term * lam / j
        total += term
        mag += abs(term)
    return total, mag


def truncated_exp_direct(k: int, lam: complex) -> complex:
    """e^lam minus its degree-k Taylor polynomial, by subtraction."""
    partial, _ = _exp_partial(k, lam)
    return complex(np.exp(lam)) - partial


def truncated_exp_tail(k: int, lam: complex) -> complex:
    """sum_{l>=0} lam^{k+1+l}/(k+1+l)!, summed until the terms are negligible."""
    lam = complex(lam)
    term = 1.0 + 0j
    for j in range(1, k + 2):
        term = term * lam / j
    total = term
    j = k + 1
    while True:
        j += 1
        term = term * lam / j
        total += term
        if j > abs(lam) and abs(term) <= 1e-17 * abs(total):
            break
        if term == 0:
            break
    return total


def truncated_exp(k: int, lam: complex) -> complex:
    """e_k(lam) = e^lam - sum_{j<=k} lam^j/j!.

    The tail series is used for |lam| < 1 and whenever its rounding bound
    (e_k(|lam|)) is below that of direct subtraction (e^{Re lam} plus the
    partial-sum moduli); otherwise e^lam minus the partial sum.
    """
    if k < 0:
        raise ValueError("truncation index must be >= 0")
    lam = complex(lam)
    if abs(lam) < 1:
        return truncated_exp_tail(k, lam)
    _, partial_mag = _exp_partial(k, abs(lam))
    tail_mag = math.exp(abs(lam)) - partial_mag
    if tail_mag <= math.exp(lam.real) + partial_mag:
        return truncated_exp_tail(k, lam)
    return truncated_exp_direct(k, lam)


def truncated_exp_ratio_integral(k: int, lam: complex, order: int = 60) -> complex:
    """(1/k!) int_0^1 (1-t)^k e^{t lam} dt by Gauss-Jacobi (weight (1-t)^k)."""
    rule = jacobi_rule(order, float(k), 0.0)
    return rule.integrate(np.exp(rule.nodes * complex(lam))) / math.factorial(k)


# -- radial operators -------------------------------------------------------------

def rop(f: Polynomial, s: float, z) -> complex:
    """R^s f(z) = (1+|z|)^{-s} D^s f(z)."""
    z = as_point(z)
    return (1.0 + z.norm()) ** (-s) * dfrac_series(f, s)(z)


def rop_tilde(f: Polynomial, s: float, z) -> complex:
    """R~^s f(z) = (1+|z|)^{-s} I^{-s} f(z)."""
    z = as_point(z)
    return (1.0 + z.norm()) ** (-s) * ifrac_series(f, -s)(z)


def dfrac(f: Polynomial, s: float, z, method: str = "series") -> complex:
    """D^s f(z) for any real s by the chosen route."""
    if method == "series":
        return dfrac_series(f, s)(as_point(z))
    if s == 0:
        return f(as_point(z))
    return dfrac_integral(f, s, z) if s > 0 else dfrac_neg_integral(f, -s, z)


def ifrac(f: Polynomial, s: float, z, method: str = "series") -> complex:
    """I^s f(z) for any real s by the chosen route."""
    if method == "series":
        return ifrac_series(f, s)(as_point(z))
    if s == 0:
        return f(as_point(z))
    return ifrac_integral(f, s, z) if s > 0 else ifrac_neg_integral(f, -s, z)


__all__ = [
    "CPoint", "FracParams", "dfrac", "dfrac_integral", "dfrac_neg_integral", "dfrac_series",
    "ifrac", "ifrac_integral", "ifrac_neg_integral", "ifrac_series", "rop", "rop_tilde",
    "truncated_exp", "truncated_exp_direct", "truncated_exp_ratio_integral",
    "truncated_exp_tail",
]
