"""Quadrature rules: Gauss-Legendre, product rules on S^2 and SO(3), tensor sums."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

DOMAINS = ("interval", "sphere", "so3")


@dataclass(frozen=True, eq=False)
class QuadRule:
    """Nodes and positive weights on an interval, on S^2 or on SO(3).

    Interval nodes have shape ``(n,)``, sphere nodes ``(n, 3)`` (unit
    vectors), SO(3) nodes ``(n, 3, 3)`` (rotation matrices). Sphere and SO(3)
    weights sum to 1; interval weights sum to the length.
    """

    nodes: np.ndarray
    weights: np.ndarray
    domain: str
    measure: float = 1.0
    order: int = 0

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown domain {self.domain!r}")
        if len(self.nodes) != len(self.weights):
            raise ValueError("node and weight counts differ")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return len(self.weights)


def _legendre_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on [-1, 1] by Newton iteration on the Legendre recurrence."""
    if n == 1:
        return np.array([0.0]), np.array([2.0])
    m = (n + 1) // 2
    i = np.arange(1, m + 1)
    x = np.cos(math.pi * (i - 0.25) / (n + 0.5))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    # recompute derivative at the converged nodes
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1)
    w = 2 / ((1 - x * x) * dp * dp)
    # mirror the positive half so the rule is exactly symmetric
    if n % 2:
        x[-1] = 0.0
        nodes = np.concatenate([-x, x[-2::-1]])
        weights = np.concatenate([w, w[-2::-1]])
    else:
        nodes = np.concatenate([-x, x[::-1]])
        weights = np.concatenate([w, w[::-1]])
    return nodes, weights


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0) -> QuadRule:
    """n-point Gauss-Legendre rule on [a, b], exact up to degree 2n - 1."""
    if not 1 <= n <= 512:
        raise ValueError(f"Gauss-Legendre order must be in [1, 512], got {n}")
    if not b > a:
        raise ValueError("need a < b")
    x, w = _legendre_nodes(n)
    half = (b - a) / 2
    mid = (b + a) / 2
    return QuadRule(mid + half * x, half * w, "interval", measure=b - a, order=n)


def sphere_rule(n: int) -> QuadRule:
    """Gauss-Legendre in cos(theta) (n points) x trapezoid in azimuth (2n points).

    Weights are normalised to total mass 1; spherical harmonics of degree
    below n are integrated exactly.
    """
    if n < 4:
        raise ValueError("sphere rule needs n >= 4")
    ct, wt = _legendre_nodes(n)
    phi = 2 * math.pi * np.arange(2 * n) / (2 * n)
    C, P = np.meshgrid(ct, phi, indexing="ij")
    S = np.sqrt(1 - C * C)
    nodes = np.stack([S * np.cos(P), S * np.sin(P), C], axis=-1).reshape(-1, 3)
    weights = np.repeat(wt / 2, 2 * n) / (2 * n)
    return QuadRule(nodes, weights, "sphere", order=n)


def _rz(a):
    c, s = np.cos(a), np.sin(a)
    z, o = np.zeros_like(a), np.ones_like(a)
    return np.stack([np.stack([c, -s, z], -1), np.stack([s, c, z], -1), np.stack([z, z, o], -1)], -2)


def _ry(cb, sb):
    z, o = np.zeros_like(cb), np.ones_like(cb)
    return np.stack([np.stack([cb, z, sb], -1), np.stack([z, o, z], -1), np.stack([-sb, z, cb], -1)], -2)


def so3_rule(n: int) -> QuadRule:
    """Haar rule in z-y-z Euler angles: trapezoid(alpha) x GL(cos beta) x trapezoid(gamma).

    n points in each angle; total weight 1.
    """
    if n < 4:
        raise ValueError("SO(3) rule needs n >= 4")
    cb, wb = _legendre_nodes(n)
    ang = 2 * math.pi * np.arange(n) / n
    A, CB, G = np.meshgrid(ang, cb, ang, indexing="ij")
    W = np.broadcast_to((wb / 2)[None, :, None], A.shape) / (n * n)
    A, CB, G = A.ravel(), CB.ravel(), G.ravel()
    R = _rz(A) @ _ry(CB, np.sqrt(1 - CB * CB)) @ _rz(G)
    return QuadRule(R, np.ascontiguousarray(W.ravel()), "so3", order=n)


def truncation_radius(a_min: float, eps: float = 1e-16) -> float:
    """Radius beyond which exp(-a_min |z|^2) is below eps, plus a margin of 2."""
    if a_min <= 0:
        raise ValueError("decay rate must be positive")
    return math.sqrt(math.log(1 / eps) / a_min) + 2


@dataclass(frozen=True)
class Integral:
    value: complex | float
    error: float | None = None


def fsum_complex(values: np.ndarray):
    """Correctly rounded sum, so the result does not depend on evaluation order."""
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real), math.fsum(values.imag))
    return math.fsum(values)


def _tensor(rules: Sequence[QuadRule]):
    grids = np.meshgrid(*(np.arange(len(r)) for r in rules), indexing="ij")
    idx = np.stack([g.ravel() for g in grids], axis=-1)
    args = [r.nodes[idx[:, k]] for k, r in enumerate(rules)]
    w = np.ones(len(idx))
    for k, r in enumerate(rules):
        w = w * r.weights[idx[:, k]]
    return args, w


def _weighted_sum(rules, f, jobs: int = 1, chunk: int = 1 << 16):
    args, w = _tensor(rules)
    n = len(w)
    bounds = [(s, min(s + chunk, n)) for s in range(0, n, chunk)]

    def block(se):
        s, e = se
        vals = np.asarray(f(*(a[s:e] for a in args)))
        vals = np.broadcast_to(vals, (e - s,))
        bad = ~np.isfinite(vals)
        if bad.any():
            k = s + int(np.flatnonzero(bad)[0])
            node = tuple(np.asarray(a[k]).tolist() for a in args)
            raise FloatingPointError(f"non-finite integrand at node {k}: {node}")
        return vals * w[s:e]

    if jobs > 1 and len(bounds) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(block, bounds))
    else:
        parts = [block(b) for b in bounds]
    return fsum_complex(np.concatenate(parts)) if parts else 0.0


def integrate(
    rules: QuadRule | Sequence[QuadRule],
    f: Callable,
    companion: QuadRule | Sequence[QuadRule] | None = None,
    jobs: int = 1,
) -> Integral:
    """Weighted sum of ``f`` over the tensor product of ``rules``.

    ``f`` receives one array of nodes per rule (vectorised over the product
    grid) and returns an array of values. With a half-order ``companion``
    rule set, the error estimate is the difference of the two sums. The sum
    is correctly rounded, so ``jobs > 1`` gives bit-identical results.
    """
    rules = [rules] if isinstance(rules, QuadRule) else list(rules)
    value = _weighted_sum(rules, f, jobs)
    err = None
    if companion is not None:
        companion = [companion] if isinstance(companion, QuadRule) else list(companion)
        err = abs(value - _weighted_sum(companion, f, jobs))
    return Integral(value, err)
