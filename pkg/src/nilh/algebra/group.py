"""Group law of N = R^3_x x R^3_y and of its quotient N' = R^3_x x R_t.

Coordinates are exponential coordinates: the exponential map is the identity,
so a Lie-algebra vector and the group point share the same tuple.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def wedge(a, b):
    """Cross product written with plain arithmetic so it also works on Polys."""
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _vec3(v, name):
    v = tuple(v)
    if len(v) != 3:
        raise ValueError(f"{name} must have 3 components, got {len(v)}")
    if not all(math.isfinite(c) for c in v):
        raise ValueError(f"{name} has a non-finite component")
    return v


@dataclass(frozen=True)
class GroupPoint:
    """Element (x, y) of N; y is the central layer."""

    x: tuple = (0.0, 0.0, 0.0)
    y: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "x", _vec3(self.x, "x"))
        object.__setattr__(self, "y", _vec3(self.y, "y"))

    @classmethod
    def from_coords(cls, z) -> "GroupPoint":
        z = tuple(z)
        if len(z) != 6:
            raise ValueError("N has 6 coordinates")
        return cls(z[:3], z[3:])

    @property
    def coords(self) -> tuple:
        return self.x + self.y

    def __mul__(self, other: "GroupPoint") -> "GroupPoint":
        return multiply(self, other)


@dataclass(frozen=True)
class GroupPointPrime:
    """Element (x, t) of N'; t is the surviving central coordinate y3."""

    x: tuple = (0.0, 0.0, 0.0)
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", _vec3(self.x, "x"))
        if not math.isfinite(self.t):
            raise ValueError("t is not finite")

    @classmethod
    def from_coords(cls, z) -> "GroupPointPrime":
        z = tuple(z)
        if len(z) != 4:
            raise ValueError("N' has 4 coordinates")
        return cls(z[:3], z[3])

    @property
    def coords(self) -> tuple:
        return self.x + (self.t,)

    def __mul__(self, other: "GroupPointPrime") -> "GroupPointPrime":
        return multiply(self, other)


IDENTITY = GroupPoint()
IDENTITY_PRIME = GroupPointPrime()


def multiply(g1, g2):
    """Group product on N or on N', picked from the argument type."""
    if isinstance(g1, GroupPoint) and isinstance(g2, GroupPoint):
        w = wedge(g1.x, g2.x)
        return GroupPoint(
            tuple(a + b for a, b in zip(g1.x, g2.x)),
            tuple(a + b + wk / 2 for a, b, wk in zip(g1.y, g2.y, w)),
        )
    if isinstance(g1, GroupPointPrime) and isinstance(g2, GroupPointPrime):
        w3 = g1.x[0] * g2.x[1] - g1.x[1] * g2.x[0]
        return GroupPointPrime(tuple(a + b for a, b in zip(g1.x, g2.x)), g1.t + g2.t + w3 / 2)
    raise TypeError("multiply needs two points of the same group")


def inverse(g):
    # two-step law: x ^ x = 0, so the inverse is the negation
    if isinstance(g, GroupPoint):
        return GroupPoint(tuple(-a for a in g.x), tuple(-a for a in g.y))
    if isinstance(g, GroupPointPrime):
        return GroupPointPrime(tuple(-a for a in g.x), -g.t)
    raise TypeError(f"not a group point: {g!r}")


class Rotation:
    """Orthogonal 3x3 matrix acting on N by k(x, y) = (kx, det(k) ky)."""

    __slots__ = ("m", "det")

    def __init__(self, m, tol: float = 1e-12):
        m = np.array(m, dtype=float)
        if m.shape != (3, 3):
            raise ValueError("rotation must be 3x3")
        if not np.allclose(m.T @ m, np.eye(3), rtol=0, atol=tol):
            raise ValueError("matrix is not orthogonal")
        det = float(np.linalg.det(m))
        if abs(abs(det) - 1) > tol:
            raise ValueError("determinant is not +-1")
        m.setflags(write=False)
        self.m = m
        self.det = 1 if det > 0 else -1

    @classmethod
    def random(cls, rng: np.random.Generator, proper: bool = True) -> "Rotation":
        """Haar-distributed element of SO(3) (or O(3) when ``proper`` is False)."""
        q, r = np.linalg.qr(rng.standard_normal((3, 3)))
        q = q * np.sign(np.diag(r))
        if proper and np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        return cls(q)

    @classmethod
    def random_stabiliser(cls, rng: np.random.Generator) -> "Rotation":
        """Haar-random element of K' = S(O(2) x O(1)), the stabiliser of the (y1, y2) plane."""
        a = rng.uniform(0, 2 * np.pi)
        c, s = np.cos(a), np.sin(a)
        if rng.integers(2):
            return cls([[c, -s, 0], [s, c, 0], [0, 0, 1]])
        return cls([[c, s, 0], [s, -c, 0], [0, 0, -1]])

    def is_stabiliser(self, tol: float = 1e-12) -> bool:
        return self.det == 1 and abs(abs(self.m[2, 2]) - 1) <= tol

    def __matmul__(self, v):
        return tuple(float(c) for c in self.m @ np.asarray(v, dtype=float))

    def __repr__(self):
        return f"Rotation({self.m.tolist()})"


def act(k: Rotation, g):
    """Automorphism action of an orthogonal matrix on N, or of K' on N'."""
    if isinstance(g, GroupPoint):
        y = k @ g.y
        if k.det < 0:
            y = tuple(-c for c in y)
        return GroupPoint(k @ g.x, y)
    if isinstance(g, GroupPointPrime):
        if not k.is_stabiliser():
            raise ValueError("only elements of K' act on N'")
        return GroupPointPrime(k @ g.x, float(k.m[2, 2]) * g.t)
    raise TypeError(f"not a group point: {g!r}")


def hilbert_map(g) -> tuple:
    """(|x|^2, |y|^2, x.y) on N, or (|x|^2, t^2, x3 t, x3^2) on N'."""
    x = np.asarray(g.x, dtype=float)
    if isinstance(g, GroupPoint):
        y = np.asarray(g.y, dtype=float)
        return (float(x @ x), float(y @ y), float(x @ y))
    return (float(x @ x), g.t * g.t, x[2] * g.t, x[2] * x[2])
