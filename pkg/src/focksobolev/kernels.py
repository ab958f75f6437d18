"""Fock kernel, weighted reproducing kernels and their growth checks.

Every kernel here is a power series in the single variable lam = z . conj(w)
with coefficients a_k / k!, where a_k is a Gamma ratio (or 1). Evaluation is
by adaptive truncation in double precision; when the float sum is dominated
by cancellation (e.g. large |lam| with Re lam < 0) it is redone in mpmath at
the precision the cancellation calls for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath
import numpy as np

from .core import CPoint, DimensionError, as_point
from .gamma import gamma_ratio

K_MAX = 100_000
_EPS = np.finfo(float).eps


class SeriesError(RuntimeError):
    """Truncation cap exceeded or overflow: |lam| too large for the tolerance."""


@dataclass(frozen=True)
class RadialSeries:
    """sum_{start <= k <= stop} a_k lam^k / k!.

    ``ratio(k)`` gives a_k as a float, ``mp_ratio(k)`` the same in mpmath.
    ``growth`` is a q with |a_k| <= C k^q, used by the stop rule.
    """

    ratio: Callable[[int], float]
    mp_ratio: Callable[[int], "mpmath.mpf"]
    start: int = 0
    stop: float = math.inf
    growth: float = 0.0
    label: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def coefficient_ratio(self, k: int) -> float:
        if k < self.start or k > self.stop:
            return 0.0
        c = self._cache.get(k)
        if c is None:
            c = self._cache[k] = float(self.ratio(k))
        return c

    def coefficient(self, k: int) -> float:
        """a_k / k! (underflows to 0 for very large k)."""
        r = self.coefficient_ratio(k)
        return 0.0 if r == 0 else math.exp(math.log(abs(r)) - math.lgamma(k + 1)) * math.copysign(1, r)

    def is_polynomial(self) -> bool:
        return math.isfinite(self.stop)

    def _min_terms(self, lam_abs):
        return 2.0 * lam_abs + abs(self.growth) + 10.0

    def evaluate_float(self, lam, max_terms: int | None = None):
        """Float-path value, sum of term moduli and terms used (array inputs allowed)."""
        lam = np.asarray(lam, dtype=complex)
        shape = lam.shape
        lam = lam.ravel()
        lam_abs = np.abs(lam)
        if np.any(lam_abs > 650):
            raise SeriesError(f"|lam| = {lam_abs.max():.1f} overflows double-precision terms")
        total = np.zeros_like(lam)
        mags = np.zeros(lam.shape)
        power = np.ones_like(lam)  # lam^k / k!
        small = np.zeros(lam.shape, dtype=int)
        active = np.ones(lam.shape, dtype=bool)
        min_terms = self._min_terms(lam_abs)
        last = math.floor(self.stop) if self.is_polynomial() else K_MAX
        if max_terms is not None:
            last = min(last, max_terms - 1)
        k = 0
        used = 0
        while True:
            if k > 0:
                power = power * lam / k
            a = self.coefficient_ratio(k)
            if a != 0.0:
                term = a * power
                total = np.where(active, total + term, total)
                mags = np.where(active, mags + np.abs(term), mags)
                negligible = np.abs(term) <= 1e-15 * np.abs(total)
            else:
                negligible = np.ones(lam.shape, dtype=bool) if k >= self.start else np.zeros(lam.shape, dtype=bool)
            small = np.where(negligible, small + 1, 0)
            used = k + 1
            if max_terms is None and not self.is_polynomial():
                active &= ~((k > min_terms) & (small >= 3))
                if not active.any():
                    break
            if k >= last:
                if max_terms is None and not self.is_polynomial() and active.any():
                    raise SeriesError(f"series '{self.label}' needs more than {K_MAX} terms")
                break
            k += 1
        return total.reshape(shape), mags.reshape(shape), used

    def evaluate_mp(self, lam: complex, digits: int) -> complex:
        with mpmath.workdps(digits):
            lam_mp = mpmath.mpc(lam)
            total = mpmath.mpc(0)
            power = mpmath.mpc(1)
            tol = mpmath.mpf(10) ** (-digits)
            k = 0
            small = 0
            min_terms = self._min_terms(abs(lam))
            while True:
                if k > 0:
                    power = power * lam_mp / k
                if self.start <= k <= self.stop:
                    key = ("mp", k, digits)
                    if key not in self._cache:
                        self._cache[key] = self.mp_ratio(k)
                    term = self._cache[key] * power
                    total += term
                    small = small + 1 if abs(term) <= tol * abs(total) else 0
                elif k > self.stop:
                    break
                if k > min_terms and small >= 3:
                    break
                if k >= K_MAX:
                    raise SeriesError(f"series '{self.label}' needs more than {K_MAX} terms")
                k += 1
            return complex(total)

    def evaluate(self, lam, rtol: float = 1e-13, atol=0.0):
        """Value at lam (scalar or array) with error about max(rtol |value|, atol).

        ``atol`` may be an array matching ``lam``; it lets callers that only
        compare against a larger quantity skip the high-precision fallback.
        """
        values, mags, used = self.evaluate_float(lam)
        shape = np.shape(values)
        scalar = np.ndim(values) == 0
        values = np.ravel(values).astype(complex)
        mags = np.ravel(mags)
        lam_arr = np.ravel(np.asarray(lam, dtype=complex))
        bound = 4.0 * _EPS * mags * max(1.0, math.sqrt(used))
        allowed = np.maximum(rtol * np.abs(values), np.ravel(np.broadcast_to(atol, shape)))
        bad = np.nonzero(bound > allowed)[0]
        for i in bad:
            if mags[i] == 0:
                continue
            cond = mags[i] / max(abs(values[i]), 1e-300 * mags[i])
            digits = int(min(20 + math.log10(cond) + max(0.0, -math.log10(rtol) - 13), 600))
            values[i] = self.evaluate_mp(complex(lam_arr[i]), digits)
        return complex(values[0]) if scalar else values.reshape(shape)

    def ring_values(self, radii, angles: int = 256) -> np.ndarray:
        """Values at lam = radius * e^{2 pi i j / angles}, shape (len(radii), angles).

        On a circle the series is a Fourier series in the angle, so one FFT per
        radius replaces term-by-term summation. The transform length is a
        power of two above the number of significant terms (no aliasing).
        Plain double precision: accurate relative to sum |a_k| |lam|^k / k!,
        which is what integrals and suprema need.
        """
        radii = np.asarray(radii, dtype=float)
        terms = int(2 * radii.max() + abs(self.growth) + 40)
        if self.is_polynomial():
            terms = min(terms, int(math.floor(self.stop)) + 1)
        size = max(angles, 1 << terms.bit_length())
        if size % angles:
            raise ValueError(f"angle count {angles} must be a power of two")
        k = np.arange(terms)
        a = np.array([self.coefficient_ratio(int(j)) for j in k])
        log_fact = np.array([math.lgamma(j + 1) for j in k])
        with np.errstate(divide="ignore", invalid="ignore"):
            log_mag = np.log(np.abs(a))[None, :] + k[None, :] * np.log(radii)[:, None] - log_fact
        log_mag[:, 0] = math.log(abs(a[0])) if a[0] != 0 else -np.inf  # 0^0 = 1
        coefs = np.zeros((len(radii), size), dtype=complex)
        coefs[:, :terms] = np.sign(a)[None, :] * np.exp(log_mag)
        vals = np.fft.ifft(coefs, axis=1) * size
        return vals[:, :: size // angles]

    def derivative(self) -> "RadialSeries":
        """d/dlam: sum_j a_{j+1} lam^j / j!."""
        parent = self
        return RadialSeries(
            ratio=lambda j: parent.ratio(j + 1),
            mp_ratio=lambda j: parent.mp_ratio(j + 1),
            start=max(parent.start - 1, 0),
            stop=parent.stop - 1,
            growth=parent.growth,
            label=f"d/dlam {parent.label}",
        )


# -- series factories ---------------------------------------------------------

def _mp_gamma_ratio(a: float, b: float):
    return mpmath.exp(mpmath.loggamma(mpmath.mpf(a)) - mpmath.loggamma(mpmath.mpf(b)))


def gamma_ratio_series(n: int, shift_num: float, shift_den: float, start: int = 0,
                       stop: float = math.inf, unit_upto: float = -1.0,
                       label: str = "") -> RadialSeries:
    """a_k = Gamma(n+k+shift_num)/Gamma(n+k+shift_den), or 1 for k <= unit_upto."""

    def ratio(k: int) -> float:
        if k <= unit_upto:
            return 1.0
        return gamma_ratio(n + k + shift_num, n + k + shift_den)

    def mp_ratio(k: int):
        if k <= unit_upto:
            return mpmath.mpf(1)
        return _mp_gamma_ratio(n + k + shift_num, n + k + shift_den)

    return RadialSeries(ratio, mp_ratio, start=start, stop=stop,
                        growth=abs(shift_num - shift_den), label=label)


def _first_tail_index(s: float) -> int:
    """Smallest k with k > |s|."""
    return math.floor(abs(s)) + 1


def fock_series() -> RadialSeries:
    return gamma_ratio_series(1, 0.0, 0.0, label="exp")


def dfrac_kernel_series(n: int, s: float) -> RadialSeries:
    """D^s K_w(z) as a series in lam."""
    start = 0 if s >= 0 else _first_tail_index(s)
    return gamma_ratio_series(n, s, 0.0, start=start, label=f"D^{s} K")


def ifrac_kernel_series(n: int, s: float) -> RadialSeries:
    """I^s K_w(z) as a series in lam."""
    start = 0 if s >= 0 else _first_tail_index(s)
    return gamma_ratio_series(n, 0.0, s, start=start, label=f"I^{s} K")


@dataclass(frozen=True)
class KernelParams:
    n: int
    alpha: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")

    @property
    def split(self) -> bool:
        """alpha >= 2n: low degrees use the unweighted pairing."""
        return self.alpha >= 2 * self.n


def kernel_series(p: KernelParams) -> RadialSeries:
    """K^alpha(z, w) = sum_k a_k lam^k / k! with a_k = Gamma(n+k)/Gamma(n+k-alpha/2).

    For alpha >= 2n the degrees k <= alpha/2 carry a_k = 1 instead.
    """
    half = p.alpha / 2.0
    return gamma_ratio_series(p.n, 0.0, -half, unit_upto=half if p.split else -1.0,
                              label=f"K^{p.alpha}")


def error_series(p: KernelParams) -> RadialSeries:
    """The polynomial E^alpha(z, w) in lam."""
    half = p.alpha / 2.0
    if p.alpha <= 0:
        return gamma_ratio_series(p.n, 0.0, 0.0, start=1, stop=0, label="E=0")
    if not p.split:
        return gamma_ratio_series(p.n, 0.0, -half, stop=half, label=f"E^{p.alpha}")
    return gamma_ratio_series(p.n, 0.0, -half, stop=half, unit_upto=half, label=f"E^{p.alpha}")


def truncated_kernel_series(p: KernelParams) -> RadialSeries:
    """K^{alpha,+}: the degrees k > alpha/2 of K^alpha (alpha >= 2n)."""
    if not p.split:
        raise ValueError(f"truncated kernel needs alpha >= 2n = {2 * p.n}, got {p.alpha}")
    half = p.alpha / 2.0
    return gamma_ratio_series(p.n, 0.0, -half, start=_first_tail_index(half),
                              label=f"K^{p.alpha},+")


def kernel_ratio(p: KernelParams, k: int) -> float:
    """a_k of K^alpha, i.e. k! times the coefficient of lam^k."""
    return kernel_series(p).coefficient_ratio(k)


# -- point-level API ---------------------------------------------------------

def _lam(z, w) -> complex:
    z, w = as_point(z), as_point(w)
    if z.n != w.n:
        raise DimensionError(f"points in C^{z.n} and C^{w.n}")
    return z.inner(w)


def fock_kernel(z, w) -> complex:
    return complex(np.exp(_lam(z, w)))


def kernel_alpha(p: KernelParams, z, w, rtol: float = 1e-13) -> complex:
    z = as_point(z)
    if z.n != p.n:
        raise DimensionError(f"point in C^{z.n} for kernel on C^{p.n}")
    return kernel_series(p).evaluate(_lam(z, w), rtol)


def error_term(p: KernelParams, z, w) -> complex:
    return error_series(p).evaluate(_lam(z, w))


def truncated_kernel_plus(p: KernelParams, z, w, rtol: float = 1e-13) -> complex:
    return truncated_kernel_series(p).evaluate(_lam(z, w), rtol)


# -- comparison function and bound checks ---------------------------------------

@dataclass(frozen=True)
class ConeParams:
    """eps in (0, 1) and the cone half-angle delta with 2 cos(delta) = eps."""

    eps: float

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")

    @property
    def delta(self) -> float:
        return math.acos(self.eps / 2.0)


def _in_cone(re_lam, zw, delta):
    with np.errstate(invalid="ignore", divide="ignore"):
        cos_theta = np.where(zw > 0, re_lam / np.where(zw > 0, zw, 1.0), 1.0)
    theta = np.arccos(np.clip(cos_theta, -1.0, 1.0))
    return theta < delta


def log_lambda_bound_values(c: ConeParams, lam, zw):
    """log of e^{Re lam} chi_cone + e^{eps |z||w|}, vectorised over lam and |z||w|."""
    lam = np.asarray(lam, dtype=complex)
    zw = np.asarray(zw, dtype=float)
    inside = _in_cone(lam.real, zw, c.delta)
    second = c.eps * zw
    first = np.where(inside, lam.real, -np.inf)
    return np.logaddexp(first, second)


def lambda_bound(c: ConeParams, z, w) -> float:
    """Lambda_{eps,delta}(z, w); the origin counts as inside every cone."""
    z, w = as_point(z), as_point(w)
    lam = _lam(z, w)
    return float(np.exp(log_lambda_bound_values(c, lam, z.norm() * w.norm())))


def pair_grid(n: int, radius: float, per_axis: int) -> list[tuple[CPoint, CPoint]]:
    """Pairs (z, w) with |z|, |w| <= radius covering every lam-geometry.

    Coordinates: |z|, |w| on [0, radius], phase psi of lam on [0, 2pi) and,
    for n >= 2, the angle phi in [0, pi/2] between the complex lines, giving
    lam = |z||w| cos(phi) e^{-i psi}.
    """
    radii = np.linspace(0.0, radius, per_axis)
    psis = np.linspace(0.0, 2 * np.pi, per_axis, endpoint=False)
    phis = np.linspace(0.0, np.pi / 2, per_axis) if n >= 2 else np.array([0.0])
    pairs = []
    for rz in radii:
        for rw in radii:
            for phi in phis:
                for psi in psis:
                    z = np.zeros(n, dtype=complex)
                    w = np.zeros(n, dtype=complex)
                    z[0] = rz
                    w[0] = rw * math.cos(phi) * np.exp(1j * psi)
                    if n >= 2:
                        w[1] = rw * math.sin(phi)
                    pairs.append((CPoint(z), CPoint(w)))
    return pairs


BOUND_KINDS = ("DsK", "IsK", "Kalpha")


def kernel_bound_terms(which: str, n: int, order: float, c: ConeParams, lam, zn, wn):
    """log|LHS| and log(RHS shape) arrays for one of the kernel growth bounds."""
    lam = np.asarray(lam, dtype=complex)
    zw = np.asarray(zn, dtype=float) * np.asarray(wn, dtype=float)
    log_lam_abs = np.log(np.maximum(np.abs(lam), 1e-300))
    log_cone = log_lambda_bound_values(c, lam, zw)
    if which == "DsK":
        series = dfrac_kernel_series(n, order)
        if order > 0:
            log_shape = order * np.log1p(np.abs(lam))
        else:
            log_shape = order * np.log1p(zw)
    elif which == "IsK":
        series = ifrac_kernel_series(n, order)
        if order > 0:
            log_shape = -order * np.log1p(zw)
        elif order < 0:
            log_shape = -order * log_lam_abs
        else:
            log_shape = np.zeros_like(zw)
    elif which == "Kalpha":
        series = kernel_series(KernelParams(n, order))
        if order > 0:
            # 1 + |lam|^{alpha/2} Lambda
            log_shape = np.logaddexp(0.0, 0.5 * order * log_lam_abs + log_cone) - log_cone
        else:
            log_shape = 0.5 * order * np.log1p(zw)
    else:
        raise ValueError(f"unknown bound kind {which!r}; expected one of {BOUND_KINDS}")
    # K^alpha(w, z) is evaluated at conj(lam); moduli agree for real coefficients
    # float rounding far below the bound cannot move the fitted constant
    values = series.evaluate(lam, rtol=1e-8, atol=1e-6 * np.exp(log_shape + log_cone))
    log_lhs = np.log(np.maximum(np.abs(values), 1e-300))
    log_lhs = np.where(np.abs(values) == 0, -np.inf, log_lhs)
    return log_lhs, log_shape + log_cone


def check_kernel_bound(which: str, order: float, c: ConeParams,
                       grid: Sequence[tuple[CPoint, CPoint]]) -> float:
    """Fitted constant max |LHS| / (bound shape without C) over the grid.

    Pairs where the shape vanishes (|lam|^{|s|} factor at lam = 0) are skipped;
    the left side vanishes to higher order there.
    """
    if not grid:
        raise ValueError("empty grid")
    n = grid[0][0].n
    lam = np.array([z.inner(w) for z, w in grid])
    zn = np.array([z.norm() for z, _ in grid])
    wn = np.array([w.norm() for _, w in grid])
    log_lhs, log_rhs = kernel_bound_terms(which, n, order, c, lam, zn, wn)
    ok = np.isfinite(log_rhs)
    ratios = np.where(np.isfinite(log_lhs[ok]), log_lhs[ok] - log_rhs[ok], -np.inf)
    return float(np.exp(ratios.max())) if ratios.size else 0.0
