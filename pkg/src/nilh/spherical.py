"""Bounded spherical functions of (SO(3) x N, SO(3)) and (K' x N', K').

Every regular integrand on N depends on k in SO(3) only through
u = k^T e3, because [k.y]_3 = y.u, [k.x]_3 = x.u and
|[k.x]~|^2 = |x|^2 - (x.u)^2. The Haar pushforward of k -> k^T e3 is the
uniform probability on S^2, so the SO(3) average is a sphere average.
The sphere rules used here are antipodally symmetric and the integrand is
conjugated by u -> -u, hence the average is real.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra.group import GroupPoint
from .quad import QuadRule, fsum_complex, so3_rule, sphere_rule
from .specfun import bessel_j0, laguerre, sinc

DEFAULT_SPHERE_ORDER = 64
DEFAULT_SO3_ORDER = 24

KINDS = ("regular", "singular", "regular_prime", "singular_prime")


@dataclass(frozen=True)
class SphericalParams:
    """Parameters of one bounded spherical function.

    ``regular``: (lam > 0, l, r) on N. ``singular``: R >= 0 on N.
    ``regular_prime``: (lam > 0, l, r) on N'. ``singular_prime``: (zeta >= 0, r) on N'.
    """

    kind: str
    lam: float = 0.0
    l: int = 0
    r: float = 0.0
    R: float = 0.0
    zeta: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown spherical family {self.kind!r}")
        if self.kind in ("regular", "regular_prime"):
            if not self.lam > 0:
                raise ValueError("regular spherical functions need lambda > 0")
            if int(self.l) != self.l or self.l < 0:
                raise ValueError("l must be a non-negative integer")
        if self.R < 0 or self.zeta < 0:
            raise ValueError("R and zeta must be non-negative")

    @classmethod
    def regular(cls, lam, l, r):
        return cls("regular", lam=lam, l=int(l), r=r)

    @classmethod
    def singular(cls, R):
        return cls("singular", R=R)

    @classmethod
    def regular_prime(cls, lam, l, r):
        return cls("regular_prime", lam=lam, l=int(l), r=r)

    @classmethod
    def singular_prime(cls, zeta, r):
        return cls("singular_prime", zeta=zeta, r=r)

    @property
    def on_prime(self) -> bool:
        return self.kind.endswith("_prime")

    def as_dict(self) -> dict:
        keys = {
            "regular": ("lam", "l", "r"),
            "singular": ("R",),
            "regular_prime": ("lam", "l", "r"),
            "singular_prime": ("zeta", "r"),
        }[self.kind]
        return {"kind": self.kind, **{k: getattr(self, k) for k in keys}}


@lru_cache(maxsize=8)
def default_sphere(n: int = DEFAULT_SPHERE_ORDER) -> QuadRule:
    return sphere_rule(n)


@lru_cache(maxsize=4)
def default_so3(n: int = DEFAULT_SO3_ORDER) -> QuadRule:
    return so3_rule(n)


def _coords(g, dim):
    z = np.asarray(g.coords if hasattr(g, "coords") else g, dtype=float)
    if z.shape[-1] != dim:
        raise ValueError(f"expected {dim} coordinates")
    return z


def _regular_terms(params, X, Y, rule):
    U = rule.nodes
    xu = X @ U.T
    yu = Y @ U.T
    x2 = np.einsum("ij,ij->i", X, X)[:, None]
    arg = np.maximum(params.lam * (x2 - xu * xu) / 2, 0.0)
    return params.lam * yu + params.r * xu, laguerre(params.l, arg)


def phi_batch(params: SphericalParams, Z, rule: QuadRule | None = None, chunk: int = 256) -> np.ndarray:
    """Real values of a spherical function on N at the rows of ``Z`` (shape (m, 6))."""
    if params.on_prime:
        raise ValueError("use phi_prime_batch for N' families")
    Z = np.atleast_2d(_coords(Z, 6))
    X, Y = Z[:, :3], Z[:, 3:]
    if params.kind == "singular":
        return sinc(params.R * np.linalg.norm(X, axis=1))
    rule = rule or default_sphere()
    if rule.domain != "sphere":
        raise ValueError("regular spherical functions need a sphere rule")
    out = np.empty(len(Z))
    for s in range(0, len(Z), chunk):
        phase, lag = _regular_terms(params, X[s : s + chunk], Y[s : s + chunk], rule)
        out[s : s + chunk] = (np.cos(phase) * lag) @ rule.weights
    return out


def phi(params: SphericalParams, g, rule: QuadRule | None = None, imag_tol: float = 1e-10) -> float:
    """Spherical function on N at one point.

    Regular family: sphere average of exp(-i lam y.u) L_l(lam (|x|^2 - (x.u)^2)/2)
    exp(-i r x.u). Singular family: sinc(R |x|) in closed form.
    """
    if params.on_prime:
        raise ValueError("use phi_prime for N' families")
    z = _coords(g, 6)
    if params.kind == "singular":
        return sinc(params.R * float(np.linalg.norm(z[:3])))
    rule = rule or default_sphere()
    if rule.domain != "sphere":
        raise ValueError("regular spherical functions need a sphere rule")
    phase, lag = _regular_terms(params, z[None, :3], z[None, 3:], rule)
    val = fsum_complex(np.exp(-1j * phase[0]) * lag[0] * rule.weights)
    if abs(val.imag) > imag_tol:
        raise ArithmeticError(f"imaginary part {val.imag:.3e} exceeds tolerance; sphere rule not symmetric?")
    return val.real


def phi_prime_batch(params: SphericalParams, Z) -> np.ndarray:
    """Closed-form spherical functions of N' at the rows of ``Z`` (shape (m, 4))."""
    if not params.on_prime:
        raise ValueError("use phi_batch for N families")
    Z = np.atleast_2d(_coords(Z, 4))
    rho = np.hypot(Z[:, 0], Z[:, 1])
    x3, t = Z[:, 2], Z[:, 3]
    if params.kind == "regular_prime":
        return np.cos(params.lam * t + params.r * x3) * laguerre(params.l, params.lam * rho * rho / 2)
    return bessel_j0(params.zeta * rho) * np.cos(params.r * x3)


def phi_prime(params: SphericalParams, g) -> float:
    """Spherical function on N'.

    Regular: cos(lam t + r x3) L_l(lam |x~|^2 / 2). Singular: J0(zeta |x~|) cos(r x3).
    """
    z = _coords(g, 4)
    rho = float(np.hypot(z[0], z[1]))
    if params.kind == "regular_prime":
        return float(np.cos(params.lam * z[3] + params.r * z[2])) * laguerre(params.l, params.lam * rho * rho / 2)
    if params.kind == "singular_prime":
        return bessel_j0(params.zeta * rho) * float(np.cos(params.r * z[2]))
    raise ValueError("use phi for N families")


def evaluator(params: SphericalParams, rule: QuadRule | None = None):
    """Vectorised callable ``Z -> values`` suitable for ``apply_numeric(..., vectorized=True)``."""
    if params.on_prime:
        return lambda Z: phi_prime_batch(params, Z)
    return lambda Z: phi_batch(params, Z, rule)


def functional_equation_residual(
    params: SphericalParams,
    g1,
    g2,
    k_rule: QuadRule | None = None,
    rule: QuadRule | None = None,
) -> float:
    """|int_K phi(g1 . k(g2)) dk - phi(g1) phi(g2)| on N."""
    if params.on_prime:
        raise ValueError("functional equation check is implemented on N")
    k_rule = k_rule or default_so3()
    if k_rule.domain != "so3":
        raise ValueError("the K-average needs an SO(3) rule")
    g1 = g1 if isinstance(g1, GroupPoint) else GroupPoint.from_coords(g1)
    g2 = g2 if isinstance(g2, GroupPoint) else GroupPoint.from_coords(g2)
    K = k_rule.nodes
    x2 = K @ np.asarray(g2.x, dtype=float)
    y2 = K @ np.asarray(g2.y, dtype=float)
    # g1 . (x2, y2) = (x1 + x2, y1 + y2 + x1 ^ x2 / 2)
    x1 = np.asarray(g1.x, dtype=float)
    y1 = np.asarray(g1.y, dtype=float)
    Z = np.concatenate([x1 + x2, y1 + y2 + np.cross(x1, x2) / 2], axis=1)
    lhs = fsum_complex(phi_batch(params, Z, rule) * k_rule.weights)
    rhs = phi(params, g1, rule) * phi(params, g2, rule)
    return abs(lhs - rhs)


__all__ = [
    "SphericalParams",
    "phi",
    "phi_batch",
    "phi_prime",
    "phi_prime_batch",
    "evaluator",
    "functional_equation_residual",
    "default_sphere",
    "default_so3",
]
