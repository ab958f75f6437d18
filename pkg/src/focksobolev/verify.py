"""Full oracle and property suite behind ``focksobolev verify``.

Each check returns a :class:`CheckResult`; :func:`run_verification` runs them
in a fixed order and assembles a deterministic report. Wall-clock timings are
left out unless requested, so that reports with the same seed are identical.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bound_probe
from .carleson import (ParametricMeasure, ball_mass, carleson_scan, embedding_check,
                       embedding_ratios, lattice_measure)
from .core import Polynomial, as_point, polynomial_ensemble, tail_split
from .fracops import (dfrac, dfrac_series, ifrac, ifrac_series, truncated_exp,
                      truncated_exp_ratio_integral)
from .kernels import (KernelParams, error_series, fock_kernel, ifrac_kernel_series,
                      kernel_alpha, kernel_series)
from .norms import (fock_norm_estimate, fock_norm_p, monomial_norm_p, raw_monomial_integral,
                    reproduce_check, sobolev_norm, sphere_monomial_integral)
from .quadrature import log_radial_integral

STATUSES = ("pass", "fail", "fitted")


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 7
    probe_samples: int = 64
    inversion_count: int = 200
    band_count: int = 10
    tolerances: dict = field(default_factory=lambda: {
        "inversion_rel": 1e-12,
        "dual_path_rel": 1e-8,
        "truncated_identity_rel": 1e-10,
        "truncated_small_rel": 1e-6,
        "kernel_rel": 1e-12,
        "hermitian_rel": 1e-13,
        "reproduce_abs": 1e-11,
        "monomial_rel": 1e-10,
        "band_growth": 0.25,
        "probe_drift": 0.10,
        "probe_unit_abs": 1e-6,
        "carleson_margin": 0.05,
    })

    def as_dict(self) -> dict:
        return {"seed": self.seed, "probe_samples": self.probe_samples,
                "inversion_count": self.inversion_count, "band_count": self.band_count,
                "tolerances": dict(self.tolerances),
                "grids": {"dual_path_radius": 5.0, "dual_path_degree": 12,
                          "truncated_k": 8, "truncated_radius": 20.0,
                          "reproduce_points": 50, "reproduce_degree": 12,
                          "band_degrees": [10, 20], "carleson_r": 1.0,
                          "carleson_R_max": 12.0, "carleson_density": [16, 32]}}


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    value: float
    threshold: float
    drift: float | None = None
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def as_dict(self) -> dict:
        out = {"name": self.name, "status": self.status, "value": _fmt(self.value),
               "threshold": _fmt(self.threshold)}
        if self.drift is not None:
            out["drift"] = _fmt(self.drift)
        if self.detail:
            out["detail"] = self.detail
        if self.extra:
            out["extra"] = {k: v if isinstance(v, (str, bool, int)) else _fmt(v)
                            for k, v in self.extra.items()}
        return out


def _fmt(x) -> str:
    if x is None:
        return "-"
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.10e}"


def _bounded(name, value, threshold, detail="", drift=None) -> CheckResult:
    ok = bool(np.isfinite(value)) and value <= threshold
    return CheckResult(name, "pass" if ok else "fail", float(value), float(threshold), drift, detail)


def _rng(cfg: VerifyConfig, salt: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, salt])


def _points(rng, n, count, radius):
    """Uniform points in the ball of the given radius in C^n."""
    g = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * radius * rng.random((count, 1)) ** (1.0 / (2 * n))


# -- inversion and dual paths ---------------------------------------------------

INVERSION_ORDERS = (0.5, -0.5, 1.0, -1.0, 2.5, -2.5)


def _coefficient_error(g: Polynomial, target: Polynomial) -> float:
    worst = 0.0
    keys = set(g.terms) | set(target.terms)
    for gam in keys:
        a, b = g.coefficient(gam), target.coefficient(gam)
        worst = max(worst, abs(a - b) / abs(b) if b != 0 else (math.inf if a != 0 else 0.0))
    return worst


def check_inversion(cfg: VerifyConfig) -> CheckResult:
    ens = polynomial_ensemble(cfg.seed, cfg.inversion_count, dims=(1, 2, 3), max_degree=20,
                              density=0.2)
    worst = 0.0
    for f in ens:
        for s in INVERSION_ORDERS:
            g = ifrac_series(dfrac_series(f, s), s)
            target = f if s >= 0 else tail_split(f, s)[0]
            worst = max(worst, _coefficient_error(g, target))
    return _bounded("inversion", worst, cfg.tolerances["inversion_rel"],
                    f"{len(ens)} polynomials x {len(INVERSION_ORDERS)} orders")


DUAL_ORDERS = (0.5, 1.0, 1.7, 2.0, 2.5)


def check_dual_path(cfg: VerifyConfig) -> CheckResult:
    rng = _rng(cfg, 2)
    ens = polynomial_ensemble(cfg.seed + 1, 12, dims=(1, 2, 3), max_degree=12, density=0.5)
    # degenerate tails: every degree <= |s|, so f_s^+ = 0
    ens += [Polynomial.constant(1, 1.0), Polynomial.variable(1, 0),
            Polynomial(2, {(1, 1): 1.0, (0, 1): 0.5j})]
    worst = 0.0
    count = 0
    for f in ens:
        zs = list(_points(rng, f.n, 3, 5.0)) + [np.zeros(f.n)]
        for z in zs:
            z = as_point(z)
            for s in DUAL_ORDERS:
                for op, order in ((dfrac, s), (dfrac, -s), (ifrac, s), (ifrac, -s)):
                    a = op(f, order, z, method="series")
                    b = op(f, order, z, method="integral")
                    scale = max(abs(a), _magnitude(op, f, order, z))
                    err = abs(a - b) / scale if scale > 0 else abs(b)
                    worst = max(worst, err)
                    count += 1
    return _bounded("dual-path operators", worst, cfg.tolerances["dual_path_rel"],
                    f"{count} series/integral pairs")


def _magnitude(op, f, order, z) -> float:
    """Value of the operator on |coefficients| at |z|: the cancellation-free scale."""
    absf = Polynomial(f.n, {g: abs(c) for g, c in f.items()})
    zabs = as_point([abs(c) for c in z.coords])
    return abs(op(absf, order, zabs, method="series"))


# -- truncated exponential --------------------------------------------------------

def check_truncated_exp(cfg: VerifyConfig) -> CheckResult:
    rng = _rng(cfg, 3)
    lams = np.concatenate([_points(rng, 1, 60, 20.0)[:, 0], [20.0, -20.0, 20j, 0.5]])
    worst_id = 0.0
    for k in range(9):
        for lam in lams:
            lhs = truncated_exp(k, lam) / lam ** (k + 1)
            rhs = truncated_exp_ratio_integral(k, lam)
            worst_id = max(worst_id, abs(lhs - rhs) / abs(rhs))
    worst_small = 0.0
    for k in range(9):
        for phase in (1, -1, 1j, np.exp(2j)):
            lam = 1e-8 * phase
            val = truncated_exp(k, lam) / lam ** (k + 1)
            ref = 1.0 / math.factorial(k + 1)
            worst_small = max(worst_small, abs(val - ref) / ref)
    violations = 0
    for k in range(9):
        for lam in lams:
            if lam.real > 0:
                bound = (abs(lam) / lam.real) ** (k + 1) * truncated_exp(k, lam.real).real
                if abs(truncated_exp(k, lam)) > bound * (1 + 1e-12):
                    violations += 1
        for x in np.linspace(0.05, 20.0, 40):
            q = truncated_exp(k, x).real / x ** (k + 1)
            if not 0 < q <= math.exp(x) * (1 + 1e-12):
                violations += 1
    tol = cfg.tolerances["truncated_identity_rel"]
    ok = worst_id <= tol and worst_small <= cfg.tolerances["truncated_small_rel"] and violations == 0
    return CheckResult("truncated exponential", "pass" if ok else "fail", worst_id, tol, None,
                       f"small-argument error {_fmt(worst_small)}; inequality violations {violations}",
                       {"identity": worst_id, "small_argument": worst_small,
                        "inequality_violations": violations})


# -- kernels -------------------------------------------------------------------------

def _kernel_alphas(n):
    return (-3.0, 1.5, float(2 * n), 2 * n + 2.5)


def check_kernel_oracles(cfg: VerifyConfig) -> CheckResult:
    rng = _rng(cfg, 4)
    worst = {"fock": 0.0, "alpha-2": 0.0, "decomposition": 0.0, "hermitian": 0.0}
    for n in (1, 2, 3):
        zs, ws = _points(rng, n, 25, 4.0), _points(rng, n, 25, 4.0)
        for z, w in zip(zs, ws):
            lam = complex(np.vdot(w, z))
            k0 = kernel_alpha(KernelParams(n, 0.0), z, w)
            ref = fock_kernel(z, w)
            worst["fock"] = max(worst["fock"], abs(k0 - ref) / abs(ref))
            if n == 1 and lam != 0:
                val = kernel_alpha(KernelParams(1, -2.0), z, w)
                ref = np.expm1(lam) / lam
                worst["alpha-2"] = max(worst["alpha-2"], abs(val - ref) / abs(ref))
            for alpha in _kernel_alphas(n):
                p = KernelParams(n, alpha)
                direct = kernel_series(p).evaluate(lam)
                split = ifrac_kernel_series(n, -alpha / 2).evaluate(lam) + error_series(p).evaluate(lam)
                scale = max(abs(direct), 1.0)
                worst["decomposition"] = max(worst["decomposition"], abs(direct - split) / scale)
                back = kernel_alpha(p, w, z)
                worst["hermitian"] = max(worst["hermitian"],
                                         abs(kernel_alpha(p, z, w) - np.conj(back)) / max(abs(back), 1e-300))
    tol, htol = cfg.tolerances["kernel_rel"], cfg.tolerances["hermitian_rel"]
    ok = (worst["fock"] <= tol and worst["alpha-2"] <= tol and worst["decomposition"] <= tol
          and worst["hermitian"] <= htol)
    value = max(worst["fock"], worst["alpha-2"], worst["decomposition"])
    detail = "; ".join(f"{k} {_fmt(v)}" for k, v in worst.items())
    return CheckResult("kernel oracles", "pass" if ok else "fail", value, tol, None, detail, worst)


def check_reproducing(cfg: VerifyConfig) -> CheckResult:
    rng = _rng(cfg, 5)
    worst = 0.0
    count = 0
    for n in (1, 2):
        ens = polynomial_ensemble(cfg.seed + 5 + n, 2, dims=(n,), max_degree=12, density=0.5)
        alphas = (-3.0, -1.0, 0.5, float(2 * n), 2 * n + 1.5)
        zs = _points(rng, n, 50, 3.0)
        for alpha in alphas:
            for f in ens:
                for z in zs:
                    res = reproduce_check(f, alpha, z)
                    worst = max(worst, res / (1.0 + abs(f(as_point(z)))))
                    count += 1
    return _bounded("reproducing identity", worst, cfg.tolerances["reproduce_abs"],
                    f"{count} evaluations; residual relative to 1+|f(z)|")


def check_monomial_norms(cfg: VerifyConfig) -> CheckResult:
    tol = cfg.tolerances["monomial_rel"]
    worst = {"closed-form": 0.0, "factorial": 0.0, "sphere": 0.0}
    for n in (1, 2, 3):
        for gam in ([(0,) * n, (3,) + (0,) * (n - 1), tuple(range(1, n + 1)), (5,) * n]):
            k = sum(gam)
            for alpha in (-2.0, 0.0, 1.5, 3.0):
                if n + k - alpha / 2 <= 0:
                    continue
                closed = raw_monomial_integral(alpha, gam)
                sphere = math.factorial(n - 1) * math.prod(math.factorial(g) for g in gam) / math.factorial(n - 1 + k)
                quad = 2.0 / math.gamma(n) * sphere * math.exp(
                    log_radial_integral(2 * k + 2 * n - 1 - alpha, 1.0, 0.0, rtol=1e-13))
                worst["closed-form"] = max(worst["closed-form"], abs(closed - quad) / closed)
            fact = math.prod(math.factorial(g) for g in gam)
            val = monomial_norm_p(gam, 2.0, 0.0) ** 2
            worst["factorial"] = max(worst["factorial"], abs(val - fact) / fact)
    # sphere-integral formula against trapezoid quadrature on the circle (n = 1)
    # and on the torus-parametrized sphere of C^2
    for k in (0, 1, 4, 9):
        for p in (1.0, 2.0, 3.5):
            for alpha in (0.0, 2.0):
                a = monomial_norm_p((k,), p, alpha)
                b = fock_norm_estimate(Polynomial.monomial((k,)), p, alpha, method="circle").value
                worst["sphere"] = max(worst["sphere"], abs(a - b) / a)
    x, wts = np.polynomial.legendre.leggauss(80)
    theta = (x + 1) * np.pi / 4
    wts = wts * np.pi / 4
    for nu in ((1, 2), (3, 0), (4, 5)):
        for p in (1.0, 2.0, 3.5):
            # |zeta_1| = cos t, |zeta_2| = sin t, dsigma = 2 cos t sin t dt (n = 2)
            vals = np.cos(theta) ** (p * nu[0]) * np.sin(theta) ** (p * nu[1]) * 2 * np.cos(theta) * np.sin(theta)
            quad = float(np.sum(wts * vals))
            exact = sphere_monomial_integral(nu, p)
            worst["sphere"] = max(worst["sphere"], abs(quad - exact) / exact)
    ok = all(v <= tol for v in worst.values())
    detail = "; ".join(f"{k} {_fmt(v)}" for k, v in worst.items())
    return CheckResult("monomial norms", "pass" if ok else "fail", max(worst.values()), tol, None,
                       detail, worst)


# -- norm equivalence ---------------------------------------------------------------

BAND_EXPONENTS = (1.0, 2.0, 4.0)
BAND_ORDERS = ((0.0, 1.0), (2.0, -1.5), (-1.0, 0.5))


def _band(values: np.ndarray) -> float:
    return float(values.max() / values.min())


def check_norm_equivalence(cfg: VerifyConfig) -> CheckResult:
    ens = {d: polynomial_ensemble(cfg.seed, cfg.band_count, dims=(1, 2), max_degree=d,
                                  min_degree=d // 2, density=0.5) for d in (10, 20)}
    worst = 0.0
    finite = True
    cases = {}
    for p in BAND_EXPONENTS:
        for alpha, s in BAND_ORDERS:
            bands = {}
            for d, fs in ens.items():
                plain = np.array([fock_norm_p(f, p, alpha - s * p) for f in fs])
                dn = np.array([sobolev_norm(f, p, alpha, s, "D") for f in fs])
                inn = np.array([sobolev_norm(f, p, alpha, s, "I") for f in fs])
                bands[d] = (_band(dn / plain), _band(inn / plain), _band(dn / inn))
            for j, label in enumerate(("D", "I", "D/I")):
                lo, hi = bands[10][j], bands[20][j]
                finite &= bool(np.isfinite(lo) and np.isfinite(hi))
                growth = hi / lo - 1.0
                worst = max(worst, growth)
                key = f"p={p:g} alpha={alpha:g} s={s:g} {label}"
                cases[f"{key} band"] = hi
                cases[f"{key} growth"] = growth
    tol = cfg.tolerances["band_growth"]
    ok = finite and worst < tol
    return CheckResult("norm equivalence", "pass" if ok else "fail", worst, tol, None,
                       f"{len(cases) // 2} bands; largest growth of max/min when degree doubles",
                       cases)


# -- bound probes -------------------------------------------------------------------

def probe_checks(cfg: VerifyConfig) -> list[CheckResult]:
    out = []
    for ident in bound_probe.registry_list():
        res = bound_probe.probe(ident, samples=cfg.probe_samples, seed=cfg.seed)
        ok = math.isfinite(res.c_hat) and res.c_hat > 0 and res.drift < cfg.tolerances["probe_drift"]
        if ident == "lemma-3.6-alpha0":
            ok = ok and abs(res.c_hat - 1.0) <= cfg.tolerances["probe_unit_abs"]
        out.append(CheckResult(f"probe {ident}", "fitted" if ok else "fail", res.c_hat,
                               cfg.tolerances["probe_drift"], res.drift,
                               bound_probe.get_spec(ident).statement))
    return out


# -- Carleson measures ----------------------------------------------------------------

CANONICAL = (("dV, alpha 0", 0.0, 0.0, "carleson"),
             ("dV, alpha 1", 0.0, 1.0, "not_carleson"),
             ("dV_2, alpha 2", 2.0, 2.0, "carleson"))


def check_carleson(cfg: VerifyConfig) -> CheckResult:
    r, R_max = 1.0, 12.0
    problems = []
    extra = {}
    mono = {d: [Polynomial.monomial((k,)) for k in range(d + 1)] for d in (10, 20)}
    growths = []
    for label, beta, alpha, expected in CANONICAL:
        mu = ParametricMeasure(beta, 1)
        verdicts = set()
        for dens in (16, 32):
            v = carleson_scan(mu, r, alpha, R_max, dens).verdict
            verdicts.add(v)
            extra[f"{label} verdict density {dens}"] = v
        if verdicts != {expected}:
            problems.append(f"{label}: {sorted(verdicts)}")
        lattice = lattice_measure(1, 0.5, 14.0, beta, volume_weights=True)
        c10, c20 = (embedding_check(lattice, 2.0, alpha, mono[d]) for d in (10, 20))
        growth = c20 / c10 - 1.0
        growths.append(growth)
        extra[f"{label} embedding growth"] = growth
        bounded = growth < cfg.tolerances["band_growth"]
        if bounded != (expected == "carleson"):
            problems.append(f"{label}: embedding growth {growth:.3f}")
    # weight scaling by a power of two is exact in floating point
    c = 4.0
    lattice = lattice_measure(1, 1.0, 10.0, 1.0)
    scaled = lattice.scaled(c)
    ens = polynomial_ensemble(cfg.seed, 6, dims=(1,), max_degree=10)
    z = as_point(0.3 + 0.2j)
    exact = (ball_mass(scaled, z, 2.0) == c * ball_mass(lattice, z, 2.0)
             and np.array_equal(embedding_ratios(scaled, 2.0, 1.0, ens),
                                c * embedding_ratios(lattice, 2.0, 1.0, ens)))
    extra["weight scaling exact"] = bool(exact)
    extra["extrapolated"] = True
    if not exact:
        problems.append("weight scaling not exact")
    bounded_growth = max(g for g, case in zip(growths, CANONICAL) if case[3] == "carleson")
    summary = ", ".join(f"{case[0]} {g:+.3f}" for g, case in zip(growths, CANONICAL))
    detail = "; ".join(problems) if problems else (
        f"verdicts carleson/not_carleson/carleson (extrapolated); embedding growth {summary}")
    return CheckResult("carleson verdicts", "fail" if problems else "pass", bounded_growth,
                       cfg.tolerances["band_growth"], None, detail, extra)


# -- determinism ------------------------------------------------------------------------

def check_determinism(cfg: VerifyConfig) -> CheckResult:
    def digest():
        ens = polynomial_ensemble(cfg.seed, 20, dims=(1, 2, 3), max_degree=12, density=0.3)
        h = hashlib.sha256()
        for f in ens:
            g = ifrac_series(dfrac_series(f, 0.5), 1.5)
            h.update(repr(sorted(g.items())).encode())
        res = bound_probe.probe("lemma-2.1", samples=16, seed=cfg.seed)
        h.update(repr(res.as_dict()).encode())
        return h.hexdigest()
    a, b = digest(), digest()
    return CheckResult("determinism", "pass" if a == b else "fail", 0.0 if a == b else 1.0, 0.0,
                       None, f"sha256 {a[:16]}")


# -- orchestration ----------------------------------------------------------------------

CHECKS: list[tuple[str, Callable]] = [
    ("inversion", check_inversion),
    ("dual-path operators", check_dual_path),
    ("truncated exponential", check_truncated_exp),
    ("kernel oracles", check_kernel_oracles),
    ("reproducing identity", check_reproducing),
    ("monomial norms", check_monomial_norms),
    ("norm equivalence", check_norm_equivalence),
    ("probes", probe_checks),
    ("carleson verdicts", check_carleson),
    ("determinism", check_determinism),
]

DESCRIPTIONS = {
    "inversion": "I^s D^s f recovers f (s >= 0) or its tail f_s^+ (s < 0) coefficientwise",
    "dual-path operators": "series and integral-representation values of D^{+-s}, I^{+-s} agree",
    "truncated exponential": "integral identity, small-argument limit and growth inequalities of e_k",
    "kernel oracles": "K^0 = exp, n=1 alpha=-2 closed form, I^{-alpha/2}K + E = K^alpha, Hermitian symmetry",
    "reproducing identity": "f(z) = <f, K^alpha_z>_alpha on polynomials, split pairing for alpha >= 2n",
    "monomial norms": "Gamma closed forms of monomial norms against radial and sphere quadrature",
    "norm equivalence": "Fock-Sobolev norm of order s against the F^p_{alpha-sp} norm: bounded ratio band",
    "carleson verdicts": "ball-mass scans of dV, dV and dV_alpha, embedding constants, weight scaling",
    "determinism": "repeated seeded computations give identical digests",
}


def run_verification(cfg: VerifyConfig, timings: bool = False, progress=None) -> dict:
    checks = []
    for label, fn in CHECKS:
        start = time.perf_counter()
        results = fn(cfg)
        elapsed = 1000.0 * (time.perf_counter() - start)
        results = results if isinstance(results, list) else [results]
        for res in results:
            entry = res.as_dict()
            if timings:
                entry["runtime_ms"] = round(elapsed / len(results), 1)
            checks.append(entry)
            if progress is not None:
                progress(entry)
    footer = dict(DESCRIPTIONS)
    for ident in bound_probe.registry_list():
        footer[f"probe {ident}"] = bound_probe.get_spec(ident).statement
    passed = all(c["status"] != "fail" for c in checks)
    return {"config": cfg.as_dict(), "checks": checks, "passed": passed, "footer": footer}


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def report_table(report: dict) -> str:
    rows = [("check", "status", "value", "threshold", "drift")]
    for c in report["checks"]:
        rows.append((c["name"], c["status"], c["value"], c["threshold"], c.get("drift", "-")))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    lines.append("")
    lines.append("overall: " + ("pass" if report["passed"] else "fail"))
    lines.append("carleson verdicts are extrapolations over a finite scan window")
    lines.append("")
    lines.append("checks:")
    for name, desc in report["footer"].items():
        lines.append(f"  {name}: {desc}")
    return "\n".join(lines) + "\n"
