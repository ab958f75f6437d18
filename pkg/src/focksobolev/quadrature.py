"""Gauss-Jacobi rules on (0, 1) and a radial integrator for Gaussian weights."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special


class QuadratureError(RuntimeError):
    """Quadrature failed to reach its tolerance; carries the achieved estimate."""

    def __init__(self, message: str, error_estimate: float = float("nan")):
        super().__init__(f"{message} (achieved error estimate {error_estimate:.3e})")
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Jacobi rule for  int_0^1 g(t) (1-t)^exp_one t^exp_zero dt.

    Exact for polynomial g of degree <= 2*order - 1.
    """

    exp_one: float
    exp_zero: float
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> complex:
        return complex(np.dot(self.weights, values))


@lru_cache(maxsize=512)
def _jacobi_rule(order: int, exp_one: float, exp_zero: float) -> tuple[np.ndarray, np.ndarray]:
    with np.errstate(invalid="ignore", divide="ignore"):  # scipy's 0/0 in an unused branch
        x, w = special.roots_jacobi(order, exp_one, exp_zero)
    # t = (1 + x) / 2 maps (1-x)^a (1+x)^b dx onto 2^{a+b+1} (1-t)^a t^b dt
    t = 0.5 * (1.0 + x)
    w = w * 2.0 ** (-(exp_one + exp_zero + 1.0))
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def jacobi_rule(order: int, exp_one: float, exp_zero: float) -> QuadratureRule:
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    if exp_one <= -1 or exp_zero <= -1:
        raise ValueError(f"Jacobi exponents must exceed -1, got ({exp_one}, {exp_zero})")
    t, w = _jacobi_rule(int(order), float(exp_one), float(exp_zero))
    return QuadratureRule(float(exp_one), float(exp_zero), int(order), t, w)


def integrate_power_series(coefs: dict[int, complex], exp_one: float, exp_zero: float,
                           order: int, rtol: float = 1e-12) -> complex:
    """int_0^1 sum_j coefs[j] t^j (1-t)^exp_one t^exp_zero dt by Gauss-Jacobi.

    The rule is applied at ``order`` and ``order + 5`` nodes; disagreement
    beyond ``rtol`` raises QuadratureError.
    """
    if not coefs:
        return 0j
    degree = max(coefs)
    order = max(order, degree // 2 + 1)
    results = []
    for m in (order, order + 5):
        rule = jacobi_rule(m, exp_one, exp_zero)
        vals = np.zeros_like(rule.nodes, dtype=complex)
        for j, c in coefs.items():
            vals += c * rule.nodes ** j
        results.append(rule.integrate(vals))
    scale = max(abs(results[1]), sum(abs(c) for c in coefs.values()) * 1e-300)
    err = abs(results[0] - results[1])
    if err > rtol * scale and err > 0:
        raise QuadratureError("Gauss-Jacobi rule did not converge", err / scale if scale else err)
    return results[1]


def log_radial_integral(power: float, gauss: float, weight_exp: float = 0.0,
                        rtol: float = 1e-12) -> float:
    """log of  int_0^inf t^power exp(-gauss t^2) (1+t)^(-weight_exp) dt.

    Near the origin the t^power factor is an algebraic endpoint weight
    (QUADPACK qaws); the rest of the half-line is integrated directly.
    Everything is scaled by the integrand's peak so large powers do not overflow.
    """
    if power <= -1:
        raise ValueError(f"radial integral diverges at 0 for power {power}")
    if gauss <= 0:
        raise ValueError("Gaussian rate must be positive")

    def log_f(t):
        return power * np.log(t) - gauss * t * t - weight_exp * np.log1p(t)

    # peak of the full integrand (for scaling) and a cut-off where it is negligible
    peak_t = max(math.sqrt(max(power, 0.0) / (2.0 * gauss)), 1e-3)
    log_peak = float(log_f(peak_t))
    T = peak_t + 1.0 + math.sqrt((40.0 + abs(weight_exp)) / gauss)

    # algebraic weight only near the origin, where t^power may be singular
    t0 = min(1.0, 0.5 * peak_t) if power > 1 else min(1.0, T)

    def smooth(t):
        return math.exp(-gauss * t * t - weight_exp * math.log1p(t) - log_peak)

    def full(t):
        return math.exp(float(log_f(t)) - log_peak)

    head, err_head = integrate.quad(smooth, 0.0, t0, weight="alg", wvar=(power, 0.0),
                                    epsabs=0.0, epsrel=rtol, limit=200)
    mid, err_mid = integrate.quad(full, t0, T, points=[peak_t] if t0 < peak_t < T else None,
                                  epsabs=0.0, epsrel=rtol, limit=200)
    tail, err_tail = integrate.quad(full, T, np.inf, epsabs=0.0, epsrel=rtol, limit=200)
    head += mid
    err_head += err_mid
    total = head + tail
    err = err_head + err_tail
    if not total > 0 or err > 1e3 * rtol * total:
        raise QuadratureError("radial integral did not converge", err / total if total else err)
    return math.log(total) + log_peak


def radial_integral(power: float, gauss: float, weight_exp: float = 0.0,
                    rtol: float = 1e-12) -> float:
    return math.exp(log_radial_integral(power, gauss, weight_exp, rtol))
