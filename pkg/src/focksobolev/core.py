"""Multi-indices, points of C^n and sparse holomorphic polynomials.

Polynomials are the finite Taylor data standing in for entire functions.
They are immutable values; arithmetic returns new objects.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

MultiIndex = tuple[int, ...]


class DimensionError(ValueError):
    """Raised when objects living in different C^n are combined."""


def as_multi_index(gamma: Iterable[int]) -> MultiIndex:
    out = tuple(int(g) for g in gamma)
    if not out:
        raise ValueError("multi-index must have length >= 1")
    if any(g < 0 for g in out):
        raise ValueError(f"negative exponent in multi-index {out}")
    return out


def order(gamma: MultiIndex) -> int:
    return sum(gamma)


def mi_factorial(gamma: MultiIndex) -> int:
    return math.prod(math.factorial(g) for g in gamma)


def multi_indices(n: int, k: int) -> list[MultiIndex]:
    """All multi-indices of length ``n`` and order exactly ``k``, lexicographic."""
    if n == 1:
        return [(k,)]
    out = []
    for first in range(k, -1, -1):
        for rest in multi_indices(n - 1, k - first):
            out.append((first,) + rest)
    return out


@dataclass(frozen=True)
class CPoint:
    """A point of C^n."""

    coords: tuple[complex, ...]

    def __init__(self, coords):
        if isinstance(coords, (int, float, complex, np.number)):
            coords = (coords,)
        object.__setattr__(self, "coords", tuple(complex(c) for c in coords))
        if not self.coords:
            raise ValueError("a point needs at least one coordinate")

    @property
    def n(self) -> int:
        return len(self.coords)

    def norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for c in self.coords))

    def inner(self, other: "CPoint") -> complex:
        """Hermitian product z . conj(w)."""
        if other.n != self.n:
            raise DimensionError(f"points in C^{self.n} and C^{other.n}")
        return sum(a * b.conjugate() for a, b in zip(self.coords, other.coords))

    def scaled(self, t: complex) -> "CPoint":
        return CPoint([t * c for c in self.coords])

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)


def as_point(z) -> CPoint:
    return z if isinstance(z, CPoint) else CPoint(z)


class Polynomial:
    """Sparse polynomial sum_gamma c_gamma z^gamma on C^n.

    Zero coefficients are dropped on construction (exact zeros only), so two
    polynomials compare equal iff their stored coefficient maps are equal.
    """

    __slots__ = ("_n", "_terms", "_exps", "_coefs")

    def __init__(self, n: int, terms: Mapping[Iterable[int], complex] | None = None):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        clean: dict[MultiIndex, complex] = {}
        for gamma, c in (terms or {}).items():
            g = as_multi_index(gamma)
            if len(g) != n:
                raise DimensionError(f"multi-index {g} does not have length {n}")
            c = complex(c)
            if c != 0:
                clean[g] = clean.get(g, 0j) + c
                if clean[g] == 0:
                    del clean[g]
        self._n = n
        self._terms = dict(sorted(clean.items(), key=lambda kv: (sum(kv[0]), kv[0])))
        self._exps = None
        self._coefs = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n)

    @classmethod
    def constant(cls, n: int, c: complex) -> "Polynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, gamma: Iterable[int], c: complex = 1.0) -> "Polynomial":
        g = as_multi_index(gamma)
        return cls(len(g), {g: c})

    @classmethod
    def variable(cls, n: int, j: int) -> "Polynomial":
        gamma = [0] * n
        gamma[j] = 1
        return cls(n, {tuple(gamma): 1.0})

    # -- structure --------------------------------------------------------
    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> dict[MultiIndex, complex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, gamma: Iterable[int]) -> complex:
        return self._terms.get(tuple(gamma), 0j)

    @property
    def degree(self) -> int:
        """Largest order with a nonzero coefficient; -1 for the zero polynomial."""
        return max((sum(g) for g in self._terms), default=-1)

    @property
    def min_degree(self) -> int:
        return min((sum(g) for g in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> list[int]:
        return sorted({sum(g) for g in self._terms})

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    def __hash__(self):
        return hash((self._n, tuple(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"Polynomial(n={self._n}, 0)"
        body = " + ".join(f"({c:.6g})*z^{list(g)}" for g, c in self._terms.items())
        return f"Polynomial(n={self._n}, {body})"

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.n != self.n:
            raise DimensionError(f"polynomials on C^{self.n} and C^{other.n}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self._terms)
        for g, c in other._terms.items():
            out[g] = out.get(g, 0j) + c
        return Polynomial(self.n, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.n, {g: -c for g, c in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, a: complex) -> "Polynomial":
        return Polynomial(self.n, {g: a * c for g, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            out: dict[MultiIndex, complex] = {}
            for g1, c1 in self._terms.items():
                for g2, c2 in other._terms.items():
                    g = tuple(a + b for a, b in zip(g1, g2))
                    out[g] = out.get(g, 0j) + c1 * c2
            return Polynomial(self.n, out)
        return self.scale(other)

    __rmul__ = __mul__

    def power(self, k: int) -> "Polynomial":
        out = Polynomial.constant(self.n, 1.0)
        for _ in range(k):
            out = out * self
        return out

    def map_by_degree(self, factor) -> "Polynomial":
        """Scale each homogeneous part f_k by ``factor(k)``; ``None`` drops it."""
        out = {}
        cache: dict[int, float | None] = {}
        for g, c in self._terms.items():
            k = sum(g)
            if k not in cache:
                cache[k] = factor(k)
            if cache[k] is not None:
                out[g] = c * cache[k]
        return Polynomial(self.n, out)

    # -- evaluation -------------------------------------------------------
    def _arrays(self):
        if self._exps is None:
            if self._terms:
                self._exps = np.array(list(self._terms), dtype=np.int64).reshape(-1, self._n)
            else:
                self._exps = np.zeros((0, self._n), dtype=np.int64)
            self._coefs = np.array(list(self._terms.values()), dtype=complex)
        return self._exps, self._coefs

    def __call__(self, z) -> complex:
        return evaluate(self, z)

    def _as_rows(self, Z) -> np.ndarray:
        Z = np.asarray(Z, dtype=complex)
        if Z.ndim == 1:
            Z = Z.reshape(-1, 1) if self._n == 1 else Z.reshape(1, -1)
        if Z.shape[1] != self._n:
            raise DimensionError(f"points in C^{Z.shape[1]} for a polynomial on C^{self._n}")
        return Z

    def term_matrix(self, Z) -> np.ndarray:
        """Matrix of monomial values z^gamma, shape (terms, points)."""
        Z = self._as_rows(Z)
        exps, _ = self._arrays()
        if not len(exps):
            return np.zeros((0, Z.shape[0]), dtype=complex)
        deg = int(exps.max())
        # power tables by repeated multiplication, shape (n, deg+1, M)
        powers = np.ones((self._n, deg + 1, Z.shape[0]), dtype=complex)
        for k in range(1, deg + 1):
            powers[:, k, :] = powers[:, k - 1, :] * Z.T
        prod = np.ones((len(exps), Z.shape[0]), dtype=complex)
        for j in range(self._n):
            prod *= powers[j, exps[:, j], :]
        return prod

    def evaluate_many(self, Z) -> np.ndarray:
        """Evaluate at the rows of an (M, n) complex array."""
        Z = self._as_rows(Z)
        _, coefs = self._arrays()
        if not len(coefs):
            return np.zeros(Z.shape[0], dtype=complex)
        return coefs @ self.term_matrix(Z)


def evaluate(f: Polynomial, z) -> complex:
    """Return f(z) = sum_gamma c_gamma z^gamma."""
    z = as_point(z)
    if z.n != f.n:
        raise DimensionError(f"point in C^{z.n} for a polynomial on C^{f.n}")
    return complex(f.evaluate_many(np.array([z.coords]))[0])


def homogeneous_part(f: Polynomial, k: int) -> Polynomial:
    return Polynomial(f.n, {g: c for g, c in f.items() if sum(g) == k})


def homogeneous_decomposition(f: Polynomial) -> list[Polynomial]:
    """[f_0, f_1, ..., f_deg]; empty list for the zero polynomial."""
    return [homogeneous_part(f, k) for k in range(f.degree + 1)]


def homogeneous_values(f: Polynomial, z) -> dict[int, complex]:
    """Map k -> f_k(z) for every degree present in f."""
    z = as_point(z)
    if z.n != f.n:
        raise DimensionError(f"point in C^{z.n} for a polynomial on C^{f.n}")
    vals = f.term_matrix(np.array([z.coords]))[:, 0]
    out: dict[int, complex] = {}
    for (g, c), v in zip(f.items(), vals):
        k = sum(g)
        out[k] = out.get(k, 0j) + c * v
    return out


def tail_split(f: Polynomial, s: float) -> tuple[Polynomial, Polynomial]:
    """Return (f_plus, f_minus): degrees k > |s| and k <= |s| respectively."""
    bound = abs(s)
    plus = {g: c for g, c in f.items() if sum(g) > bound}
    minus = {g: c for g, c in f.items() if sum(g) <= bound}
    return Polynomial(f.n, plus), Polynomial(f.n, minus)


def random_polynomial(n: int, degree: int, rng: np.random.Generator,
                      density: float = 1.0, min_degree: int = 0) -> Polynomial:
    """Random polynomial with complex Gaussian coefficients scaled by 1/sqrt(gamma!).

    The scaling keeps |c_gamma z^gamma| of order e^{|z|^2/2}, i.e. the natural
    size of Fock-space functions, so evaluations stay well conditioned.
    The top-degree part is never empty.
    """
    terms: dict[MultiIndex, complex] = {}
    for k in range(min_degree, degree + 1):
        for g in multi_indices(n, k):
            if k < degree and density < 1.0 and rng.random() > density:
                continue
            c = complex(rng.standard_normal(), rng.standard_normal()) / math.sqrt(2 * mi_factorial(g))
            terms[g] = c
    return Polynomial(n, terms)


def polynomial_ensemble(seed: int, count: int, dims=(1, 2, 3), max_degree: int = 20,
                        min_degree: int = 0, density: float = 1.0) -> list[Polynomial]:
    """Fixed-seed list of random polynomials, cycling through ``dims``."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = dims[i % len(dims)]
        deg = int(rng.integers(max(min_degree, 0), max_degree + 1))
        out.append(random_polynomial(n, deg, rng, density=density))
    return out


# -- JSON ---------------------------------------------------------------

class PolynomialFormatError(ValueError):
    pass


def polynomial_to_dict(f: Polynomial) -> dict:
    return {
        "n": f.n,
        "terms": [{"gamma": list(g), "re": c.real, "im": c.imag} for g, c in f.items()],
    }


def polynomial_from_dict(data: dict) -> Polynomial:
    try:
        n = int(data["n"])
        raw = data["terms"]
    except (KeyError, TypeError) as exc:
        raise PolynomialFormatError(f"polynomial JSON needs 'n' and 'terms': {exc}") from None
    terms: dict[MultiIndex, complex] = {}
    for i, t in enumerate(raw):
        try:
            g = as_multi_index(t["gamma"])
            c = complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise PolynomialFormatError(f"terms[{i}]: {exc}") from None
        if len(g) != n:
            raise PolynomialFormatError(f"terms[{i}]: gamma {list(g)} does not have length {n}")
        if g in terms:
            raise PolynomialFormatError(f"terms[{i}]: duplicate gamma {list(g)}")
        terms[g] = c
    return Polynomial(n, terms)


def polynomial_to_json(f: Polynomial) -> str:
    return json.dumps(polynomial_to_dict(f))


def polynomial_from_json(text: str) -> Polynomial:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolynomialFormatError(
            f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return polynomial_from_dict(data)
