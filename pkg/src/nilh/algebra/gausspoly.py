"""Closed-form test functions z -> p(z) exp(-z^T A z) and exact Gaussian moments."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .diffop import DiffOp
from .poly import SPACES, Gauss, Poly, _real, space_dim


def _as_matrix(A, n):
    rows = [list(r) for r in A]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"quadratic form must be {n}x{n}")
    return [[_real(v) for v in r] for r in rows]


class GaussPoly:
    """``p(z) * exp(-z^T A z)`` with ``A`` symmetric positive semi-definite.

    Only the upper triangle of ``A`` is stored; ``matrix`` rebuilds the full
    form. Differentiation and multiplication by a polynomial keep ``A`` and
    act on ``p`` alone, so operator application is exact.
    """

    __slots__ = ("p", "upper")

    def __init__(self, p: Poly, A):
        n = space_dim(p.space)
        M = _as_matrix(A, n)
        for i in range(n):
            for j in range(i + 1, n):
                if M[i][j] != M[j][i]:
                    raise ValueError("quadratic form is not symmetric")
        if np.linalg.eigvalsh(np.array(M, dtype=float)).min() < -1e-12:
            raise ValueError("quadratic form is not positive semi-definite")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "upper", tuple(tuple(M[i][j] for j in range(i, n)) for i in range(n)))

    def __setattr__(self, name, value):
        raise AttributeError("GaussPoly is immutable")

    @classmethod
    def isotropic(cls, space: str, p: Poly | None = None, a=1, b=1) -> "GaussPoly":
        """p * exp(-a|x|^2 - b|central|^2); ``p`` defaults to 1."""
        n = space_dim(space)
        diag = [a, a, a] + [b] * (n - 3)
        A = [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(p if p is not None else Poly.const(space, 1), A)

    @property
    def space(self) -> str:
        return self.p.space

    @property
    def matrix(self) -> list:
        n = len(self.upper)
        return [[self.upper[min(i, j)][abs(j - i)] for j in range(n)] for i in range(n)]

    def with_poly(self, p: Poly) -> "GaussPoly":
        return GaussPoly(p, self.matrix)

    def __add__(self, other: "GaussPoly") -> "GaussPoly":
        if other.upper != self.upper:
            raise ValueError("sums need a common quadratic form")
        return self.with_poly(self.p + other.p)

    def __sub__(self, other: "GaussPoly") -> "GaussPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "GaussPoly":
        return self.with_poly(self.p * c)

    def __eq__(self, other):
        if not isinstance(other, GaussPoly):
            return NotImplemented
        return self.upper == other.upper and self.p == other.p

    def __hash__(self):
        return hash((self.upper, self.p))

    def diff(self, k: int) -> "GaussPoly":
        """d/dz_k: (d_k p - 2 (A z)_k p) exp(-z^T A z)."""
        z = Poly.variables(self.space)
        Az_k = Poly.zero(self.space)
        for j, a in enumerate(self.matrix[k]):
            if a:
                Az_k = Az_k + z[j] * a
        return self.with_poly(self.p.diff(k) - self.p * Az_k * 2)

    def exponent(self, z: np.ndarray) -> np.ndarray:
        A = np.array(self.matrix, dtype=float)
        return np.einsum("...i,ij,...j->...", z, A, z)

    def __call__(self, z):
        """Value at a point, a group point, or an ``(m, dim)`` array of points."""
        if hasattr(z, "coords"):
            z = z.coords
        z = np.asarray(z, dtype=float)
        return self.p(z) * np.exp(-self.exponent(z))

    def __str__(self):
        A = " ".join(str(Gauss(v)) for row in self.upper for v in row)
        return f"({self.p}) * exp(-q), q upper = [{A}]"

    __repr__ = __str__


def apply_exact(d: DiffOp, f: GaussPoly) -> GaussPoly:
    """Exact application of a polynomial-coefficient operator to a GaussPoly."""
    if d.space != f.space:
        raise ValueError(f"operator on {d.space!r} applied to a function on {f.space!r}")
    out = Poly.zero(f.space)
    for alpha, coef in d.terms.items():
        g = f
        for k, m in enumerate(alpha):
            for _ in range(m):
                g = g.diff(k)
        out = out + coef * g.p
    return f.with_poly(out)


# ---------------------------------------------------------------------------
# Gaussian moments

def _inverse(M):
    """Inverse of a square matrix by Gauss-Jordan; exact for rational entries."""
    n = len(M)
    a = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(a[r][c]))
        if a[piv][c] == 0:
            raise ValueError("singular quadratic form")
        a[c], a[piv] = a[piv], a[c]
        pv = a[c][c]
        a[c] = [v / pv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                fct = a[r][c]
                a[r] = [vr - fct * vc for vr, vc in zip(a[r], a[c])]
    return [r[n:] for r in a]


def _det(M) -> float:
    return float(np.linalg.det(np.array(M, dtype=float)))


def _is_exact(M) -> bool:
    return all(isinstance(v, Fraction) for r in M for v in r)


class GaussianMoments:
    """Moments of exp(-z^T B z) over R^n.

    ``integral(alpha) = norm * expectation(alpha)`` where ``expectation`` is
    the moment of the centred normal law with covariance B^{-1}/2, computed
    by the Isserlis recursion E[z_i m] = sum_k S_ik E[d_k m]. It stays
    rational when B is rational, so sums of moments cancel exactly.
    """

    def __init__(self, B):
        B = [[_real(v) for v in r] for r in B]
        if np.linalg.eigvalsh(np.array(B, dtype=float)).min() <= 0:
            raise ValueError("moment form must be positive definite")
        inv = _inverse(B)
        self.cov = [[v / 2 for v in r] for r in inv]
        self.n = len(B)
        self.norm = math.pi ** (self.n / 2) / math.sqrt(_det(B))
        self.exact = _is_exact(B)
        self._expect = lru_cache(maxsize=None)(self._expect_impl)

    def expectation(self, alpha: tuple):
        return self._expect(tuple(alpha))

    def _expect_impl(self, alpha):
        if sum(alpha) == 0:
            return Fraction(1) if self.exact else 1.0
        if sum(alpha) % 2:
            return Fraction(0) if self.exact else 0.0
        i = next(k for k, a in enumerate(alpha) if a)
        rest = list(alpha)
        rest[i] -= 1
        total = Fraction(0) if self.exact else 0.0
        for k in range(self.n):
            if rest[k] and self.cov[i][k]:
                r2 = list(rest)
                r2[k] -= 1
                total += self.cov[i][k] * rest[k] * self._expect(tuple(r2))
        return total

    def integral(self, alpha: tuple) -> float:
        return self.norm * float(self.expectation(alpha))


def integral_parts(p: Poly, B) -> tuple:
    """Return (exact Gauss sum of coefficient * expectation, normaliser)."""
    mom = GaussianMoments(B)
    acc = Gauss()
    for e, c in p.terms.items():
        m = mom.expectation(e)
        if m:
            acc = acc + c * m
    return acc, mom.norm


def integrate(f: GaussPoly) -> complex:
    """Integral of f over the whole space by exact moments."""
    acc, norm = integral_parts(f.p, f.matrix)
    return complex(acc) * norm


def inner_product_parts(f1: GaussPoly, f2: GaussPoly) -> tuple:
    """<f1, f2> = int f1 conj(f2) as (exact prefactor, normaliser)."""
    if f1.space != f2.space:
        raise ValueError("functions live on different spaces")
    A1, A2 = f1.matrix, f2.matrix
    B = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(A1, A2)]
    return integral_parts(f1.p * f2.p.conjugate(), B)


def inner_product(f1: GaussPoly, f2: GaussPoly) -> complex:
    acc, norm = inner_product_parts(f1, f2)
    return complex(acc) * norm


def l2_norm(f: GaussPoly) -> float:
    return math.sqrt(inner_product(f, f).real)


def variable_names(space: str) -> tuple:
    return SPACES[space]
