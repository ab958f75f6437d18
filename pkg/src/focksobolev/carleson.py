"""Carleson-measure tests: ball masses, annulus scans and embedding constants.

A measure mu is Carleson for F^p_alpha when

    int |f(z) e^{-|z|^2/2}|^p dmu(z) <= C ||f||^p_{F^p_alpha}

for every entire f; equivalently mu[B(z, r)] (1+|z|)^alpha stays bounded.
Scans here only see a finite window, so every verdict is an extrapolation.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate, special

from .core import Polynomial, as_point
from .norms import fock_norm_p, sphere_directions

BOUNDARY_TOL = 1e-12
DEFAULT_DENSITY = 16
DIRECTION_SEED = 5


class MeasureFormatError(ValueError):
    """Malformed measure file; the message names the offending line."""


@dataclass(frozen=True, eq=False)
class PointMeasure:
    """Finite sum of weighted point masses in C^n."""

    points: np.ndarray
    weights: np.ndarray
    _grids: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        if pts.ndim != 2:
            raise ValueError("points must have shape (count, n)")
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(w) != len(pts):
            raise ValueError(f"{len(pts)} points but {len(w)} weights")
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("weights must be finite and positive")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_points(cls, points: Iterable, weights: Iterable[float]) -> "PointMeasure":
        pts = [as_point(p).array() for p in points]
        ws = list(weights)
        n = len(pts[0]) if pts else 1
        return cls(np.array(pts, dtype=complex).reshape(len(pts), n), np.array(ws, dtype=float))

    @classmethod
    def empty(cls, n: int) -> "PointMeasure":
        return cls(np.zeros((0, n), dtype=complex), np.zeros(0))

    @property
    def n(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def scaled(self, c: float) -> "PointMeasure":
        return PointMeasure(self.points, c * self.weights)

    def _real_coords(self) -> np.ndarray:
        return np.concatenate([self.points.real, self.points.imag], axis=1)

    def _grid(self, r: float) -> dict:
        grid = self._grids.get(r)
        if grid is None:
            grid = {}
            cells = np.floor(self._real_coords() / r).astype(np.int64)
            for i, cell in enumerate(map(tuple, cells)):
                grid.setdefault(cell, []).append(i)
            grid = {k: np.array(v) for k, v in grid.items()}
            self._grids[r] = grid
        return grid

    def ball_mass(self, z, r: float) -> float:
        z = as_point(z)
        if z.n != self.n:
            raise ValueError(f"point has n = {z.n}, measure has n = {self.n}")
        if len(self) == 0:
            return 0.0
        grid = self._grid(r)
        x = np.concatenate([z.array().real, z.array().imag])
        home = np.floor(x / r).astype(np.int64)
        hits = [grid[c] for off in itertools.product((-1, 0, 1), repeat=2 * self.n)
                if (c := tuple(home + np.array(off))) in grid]
        if not hits:
            return 0.0
        idx = np.sort(np.concatenate(hits))
        d = np.linalg.norm(self.points[idx] - z.array(), axis=1)
        inside = d <= r * (1 + BOUNDARY_TOL)
        return float(np.sum(self.weights[idx][inside]))

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class ParametricMeasure:
    """(1+|z|)^{-beta} dV(z) on C^n, with dV the Gaussian-normalized volume.

    The measure is radial, so ball masses depend on |z| only and are cached.
    """

    beta: float
    n: int = 1
    _masses: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if not math.isfinite(self.beta):
            raise ValueError("beta must be finite")

    def density(self, t) -> np.ndarray:
        return (1.0 + np.asarray(t, dtype=float)) ** (-self.beta)

    def _cap_fraction(self, t: np.ndarray, rz: float, r: float) -> np.ndarray:
        # share of the sphere |w| = t inside B(z, r): Re<w/t, z/|z|> >= c
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            c = (t * t + rz * rz - r * r) / (2.0 * t * rz)
        c = np.clip(np.nan_to_num(c, nan=-1.0), -1.0, 1.0)
        a = self.n - 0.5
        return special.betainc(a, a, (1.0 - c) / 2.0)

    def ball_mass(self, z, r: float) -> float:
        z = as_point(z)
        if z.n != self.n:
            raise ValueError(f"point has n = {z.n}, measure has n = {self.n}")
        if r <= 0:
            raise ValueError("radius must be positive")
        key = (round(z.norm(), 12), r)
        if key not in self._masses:
            self._masses[key] = self._ball_mass(key[0], r)
        return self._masses[key]

    def _ball_mass(self, rz: float, r: float) -> float:
        n = self.n
        scale = 2.0 / math.gamma(n)
        if rz <= BOUNDARY_TOL * r:
            fn = lambda t: scale * t ** (2 * n - 1) * self.density(t)
            return float(integrate.quad(fn, 0.0, r, epsabs=0.0, epsrel=1e-10, limit=200)[0])
        fn = lambda t: scale * t ** (2 * n - 1) * self.density(t) * self._cap_fraction(t, rz, r)
        cuts = sorted({0.0, abs(rz - r), rz + r})
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            if rz >= r and b <= rz - r:
                continue  # shells entirely outside the ball
            total += integrate.quad(fn, a, b, epsabs=0.0, epsrel=1e-10, limit=200)[0]
        return float(total)


def ball_mass(mu: PointMeasure | ParametricMeasure, z, r: float) -> float:
    """mu of the closed Euclidean ball B(z, r)."""
    if not r > 0:
        raise ValueError("radius must be positive")
    return mu.ball_mass(z, r)


def ball_volume(n: int, r: float) -> float:
    """dV-volume of any ball of radius r."""
    return r ** (2 * n) / math.factorial(n)


@dataclass(frozen=True)
class CarlesonVerdict:
    verdict: str
    supremum: float
    radii: tuple
    annulus_maxima: tuple
    r: float
    alpha: float
    extrapolated: bool = True

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "supremum": self.supremum,
                "radii": list(self.radii), "annulus_maxima": list(self.annulus_maxima),
                "r": self.r, "alpha": self.alpha, "extrapolated": self.extrapolated}


def classify_maxima(maxima: Sequence[float]) -> str:
    """Verdict from a series of annulus maxima ordered by radius."""
    m = np.asarray(maxima, dtype=float)
    if len(m) < 4:
        return "inconclusive"
    peak = float(m.max())
    at = int(np.argmax(m))
    tail = m[at:]
    if peak > 0 and np.all(np.diff(tail) <= 1e-12 * peak) and m[-1] < 0.1 * peak:
        return "vanishing"
    interior = float(m[:-3].max())
    last = m[-3:]
    if float(last.max()) <= 1.05 * interior:
        return "carleson"
    if np.all(np.diff(last) > 0) and float(last.max()) > 1.05 * interior:
        return "not_carleson"
    return "inconclusive"


def scan_points(n: int, radius: float, density: int) -> np.ndarray:
    """`density` points on the sphere |z| = radius, shape (density, n)."""
    if radius == 0:
        return np.zeros((1, n), dtype=complex)
    if n == 1:
        theta = 2 * np.pi * (np.arange(density) + 0.5) / density
        return radius * np.exp(1j * theta)[:, None]
    return radius * sphere_directions(n, density, DIRECTION_SEED)


def carleson_scan(mu: PointMeasure | ParametricMeasure, r: float, alpha: float,
                  R_max: float, density: int = DEFAULT_DENSITY) -> CarlesonVerdict:
    """Scan q(z) = mu[B(z, r)] (1+|z|)^alpha over spheres of radius 0, r, 2r, ... R_max."""
    if not r > 0:
        raise ValueError("radius must be positive")
    if not R_max > r:
        raise ValueError("R_max must exceed r")
    if density < 1:
        raise ValueError("density must be positive")
    count = int(math.ceil(R_max / r - 1e-9))
    radii = np.linspace(0.0, R_max, count + 1)
    maxima = []
    for rad in radii:
        q = [mu.ball_mass(z, r) for z in scan_points(mu.n, rad, density)]
        maxima.append(max(q) * (1.0 + rad) ** alpha)
    return CarlesonVerdict(classify_maxima(maxima), float(max(maxima)),
                           tuple(float(x) for x in radii), tuple(float(x) for x in maxima),
                           float(r), float(alpha))


def embedding_ratios(mu: PointMeasure, p: float, alpha: float,
                     ensemble: Sequence[Polynomial]) -> np.ndarray:
    """Per member: sum over mu of |f e^{-|z|^2/2}|^p divided by ||f||^p_{F^p_alpha}."""
    out = []
    gauss = np.exp(-0.5 * np.sum(np.abs(mu.points) ** 2, axis=1)) if len(mu) else np.zeros(0)
    for f in ensemble:
        if f.n != mu.n:
            raise ValueError(f"polynomial has n = {f.n}, measure has n = {mu.n}")
        norm = fock_norm_p(f, p, alpha)
        if norm == 0:
            raise ValueError("ensemble contains a zero polynomial")
        if len(mu) == 0:
            out.append(0.0)
            continue
        vals = np.abs(f.evaluate_many(mu.points) * gauss) ** p
        out.append(mu.integrate(vals) / norm ** p)
    return np.array(out)


def embedding_check(mu: PointMeasure, p: float, alpha: float,
                    ensemble: Sequence[Polynomial]) -> float:
    """Fitted embedding constant: the largest ratio over the ensemble."""
    if len(ensemble) == 0:
        raise ValueError("empty ensemble")
    return float(np.max(embedding_ratios(mu, p, alpha, ensemble)))


def lattice_measure(n: int, spacing: float, radius: float, beta: float = 0.0,
                    volume_weights: bool = False) -> PointMeasure:
    """Lattice points of the given spacing inside |z| <= radius.

    Weights are (1+|z|)^{-beta}; with ``volume_weights`` each also carries the
    dV-volume of its lattice cell, so the measure discretizes (1+|z|)^{-beta} dV.
    """
    k = int(math.floor(radius / spacing))
    axis = spacing * np.arange(-k, k + 1)
    grid = np.array(np.meshgrid(*([axis] * (2 * n)), indexing="ij")).reshape(2 * n, -1).T
    pts = grid[:, :n] + 1j * grid[:, n:]
    norms = np.linalg.norm(pts, axis=1)
    keep = norms <= radius * (1 + BOUNDARY_TOL)
    pts, norms = pts[keep], norms[keep]
    w = (1.0 + norms) ** (-beta)
    if volume_weights:
        w = w * spacing ** (2 * n) / math.pi ** n
    return PointMeasure(pts, w)


def read_measure_csv(path: str) -> PointMeasure:
    """Read `re_1,im_1,...,re_n,im_n,weight` rows (header required)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise MeasureFormatError(f"{path}: line 1: missing header")
    header = [h.strip() for h in rows[0]]
    if len(header) < 3 or len(header) % 2 == 0 or header[-1] != "weight":
        raise MeasureFormatError(f"{path}: line 1: header must be re_1,im_1,...,weight")
    n = (len(header) - 1) // 2
    expected = [f"{part}_{j}" for j in range(1, n + 1) for part in ("re", "im")] + ["weight"]
    if header != expected:
        raise MeasureFormatError(f"{path}: line 1: expected header {','.join(expected)}")
    pts, ws = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise MeasureFormatError(f"{path}: line {lineno}: expected {len(header)} columns, got {len(row)}")
        try:
            vals = [float(c) for c in row]
        except ValueError as exc:
            raise MeasureFormatError(f"{path}: line {lineno}: {exc}") from None
        if not vals[-1] > 0:
            raise MeasureFormatError(f"{path}: line {lineno}: weight must be positive")
        pts.append([complex(vals[2 * j], vals[2 * j + 1]) for j in range(n)])
        ws.append(vals[-1])
    return PointMeasure(np.array(pts, dtype=complex).reshape(len(pts), n), np.array(ws))


def write_measure_csv(mu: PointMeasure, path: str) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow([f"{part}_{j}" for j in range(1, mu.n + 1) for part in ("re", "im")] + ["weight"])
        for z, w in zip(mu.points, mu.weights):
            out.writerow([repr(float(x)) for c in z for x in (c.real, c.imag)] + [repr(float(w))])
