"""Polynomial-coefficient differential operators on N and N'.

A :class:`DiffOp` is a finite sum ``sum_a c_a(z) d^a`` with the coefficient
written to the left of the partial derivative. Canonical form keeps one
term per multi-index and drops zero coefficients, so operator equality is
plain dictionary equality.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb
from typing import Callable, Mapping

import numpy as np

from .group import GroupPoint, GroupPointPrime, wedge
from .poly import SPACES, Gauss, Poly, space_dim


_HALF = Fraction(1, 2)


class DiffOp:
    __slots__ = ("space", "terms")

    def __init__(self, space: str, terms: Mapping[tuple, Poly] | None = None):
        n = space_dim(space)
        clean: dict = {}
        for a, c in (terms or {}).items():
            a = tuple(int(k) for k in a)
            if len(a) != n or min(a, default=0) < 0:
                raise ValueError(f"bad multi-index {a}")
            if not isinstance(c, Poly):
                c = Poly.const(space, c)
            if c.space != space:
                raise ValueError("coefficient lives on another space")
            c = clean[a] + c if a in clean else c
            if c:
                clean[a] = c
            else:
                clean.pop(a, None)
        ordered = dict(sorted(clean.items(), key=lambda ac: _order_key(ac[0])))
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "terms", ordered)

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    @classmethod
    def identity(cls, space: str) -> "DiffOp":
        return cls(space, {(0,) * space_dim(space): 1})

    @classmethod
    def partial(cls, space: str, name: str, k: int = 1) -> "DiffOp":
        a = [0] * space_dim(space)
        a[SPACES[space].index(name)] = k
        return cls(space, {tuple(a): 1})

    @classmethod
    def multiplication(cls, p: Poly) -> "DiffOp":
        return cls(p.space, {(0,) * space_dim(p.space): p})

    def _check(self, other: "DiffOp"):
        if not isinstance(other, DiffOp):
            raise TypeError(f"expected DiffOp, got {type(other).__name__}")
        if other.space != self.space:
            raise ValueError(f"mixed variable spaces {self.space!r} and {other.space!r}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out[a] + c if a in out else c
        return DiffOp(self.space, out)

    def __neg__(self):
        return DiffOp(self.space, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "DiffOp":
        """Multiply on the left by a scalar or a polynomial."""
        return DiffOp(self.space, {a: c * s for a, c in self.terms.items()})

    def __rmul__(self, s):
        return self.scale(s)

    def __matmul__(self, other):
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        return hash((self.space, tuple(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def order(self) -> int:
        return max((sum(a) for a in self.terms), default=-1)

    def real_part(self) -> "DiffOp":
        return DiffOp(self.space, {a: c.real_part() for a, c in self.terms.items()})

    def imag_part(self) -> "DiffOp":
        return DiffOp(self.space, {a: c.imag_part() for a, c in self.terms.items()})

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for a, c in self.terms.items():
            d = partial_str(self.space, a)
            for e, coef in c.monomials():
                mono = "*".join(_factor_str(n, k) for n, k in zip(SPACES[self.space], e) if k)
                sep = " " if mono and d else ""
                parts.append(f"({coef}){mono}{sep}{d}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffOp({self.space!r}, {self})"


def _order_key(a: tuple):
    return (-sum(a), tuple(-k for k in a))


def _factor_str(name, k):
    return name if k == 1 else f"{name}^{k}"


def partial_str(space: str, a: tuple) -> str:
    return "".join("∂" + _factor_str(n, k) for n, k in zip(SPACES[space], a) if k)


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """Operator product a o b, with Leibniz applied to b's coefficients."""
    a._check(b)
    out: dict = {}
    for alpha, ca in a.terms.items():
        for beta, cb in b.terms.items():
            # d^alpha (cb d^beta) = sum_gamma C(alpha, gamma) (d^gamma cb) d^(alpha - gamma + beta)
            for gamma in product(*(range(k + 1) for k in alpha)):
                dcb = cb
                mult = 1
                for k, g in enumerate(gamma):
                    for _ in range(g):
                        dcb = dcb.diff(k)
                    mult *= comb(alpha[k], g)
                if not dcb:
                    continue
                idx = tuple(al - g + be for al, g, be in zip(alpha, gamma, beta))
                term = ca * dcb * mult
                out[idx] = out[idx] + term if idx in out else term
    return DiffOp(a.space, out)


def symbol_product(a: DiffOp, b: DiffOp) -> DiffOp:
    """Product with coefficients treated as constants (no Leibniz terms)."""
    a._check(b)
    out: dict = {}
    for alpha, ca in a.terms.items():
        for beta, cb in b.terms.items():
            idx = tuple(p + q for p, q in zip(alpha, beta))
            term = ca * cb
            out[idx] = out[idx] + term if idx in out else term
    return DiffOp(a.space, out)


FIELD_NAMES = {
    "N": ("X1", "X2", "X3", "Y1", "Y2", "Y3"),
    "N'": ("X'1", "X'2", "X'3", "T"),
}


def _space_of_field(name: str) -> str:
    for space, names in FIELD_NAMES.items():
        if name in names:
            return space
    raise ValueError(f"unknown basis vector {name!r}")


def left_invariant_field(name: str) -> DiffOp:
    """Left-invariant vector field equal to the coordinate derivative at the origin.

    ``n . exp(u E_j)`` is affine in ``u``; its ``u``-derivative is the field.
    Only the first-layer directions pick up a central correction, namely the
    bilinear term of the law with the second argument set to ``e_j``.
    """
    space = _space_of_field(name)
    j = FIELD_NAMES[space].index(name)
    n = space_dim(space)
    coeffs = [Poly.zero(space) for _ in range(n)]
    coeffs[j] = Poly.const(space, 1)
    if j < 3:
        x = Poly.variables(space)[:3]
        e = [0, 0, 0]
        e[j] = 1
        w = wedge(x, e)
        if space == "N":
            for k in range(3):
                coeffs[3 + k] = w[k] * _HALF
        else:
            coeffs[3] = w[2] * _HALF
    terms = {}
    for k, c in enumerate(coeffs):
        a = [0] * n
        a[k] = 1
        terms[tuple(a)] = c
    return DiffOp(space, terms)


def fields(space: str = "N") -> tuple[DiffOp, ...]:
    return tuple(left_invariant_field(name) for name in FIELD_NAMES[space])


def symmetrize(p: Poly) -> DiffOp:
    """Left-invariant operator D_P = [P(i^{-1} d_u) F(n exp(sum u_j E_j))]_{u=0}.

    Because n exp(u) is affine in u with a Jacobian that depends only on n,
    each d_{u_j} acts on F as the field E_j with coefficients frozen at n.
    The u-derivatives therefore never hit those coefficients: D_P is P
    evaluated on the fields with the symbol (Leibniz-free) product, times
    i^{-deg} per monomial.
    """
    space = p.space
    basis = fields(space)
    out = DiffOp(space)
    ident = DiffOp.identity(space)
    for e, c in p.terms.items():
        op = ident
        for field, k in zip(basis, e):
            for _ in range(k):
                op = symbol_product(op, field)
        # i^{-d}: 1, -i, -1, i
        phase = (Gauss(1), Gauss(0, -1), Gauss(-1), Gauss(0, 1))[sum(e) % 4]
        out = out + op.scale(c * phase)
    return out


def generators(space: str = "N") -> tuple[DiffOp, ...]:
    """(L, Delta, D) on N or (L', Delta', D', -X'3^2) on N', built from the fields."""
    if space == "N":
        X1, X2, X3, Y1, Y2, Y3 = fields("N")
        L = -(X1 @ X1 + X2 @ X2 + X3 @ X3)
        Delta = -(Y1 @ Y1 + Y2 @ Y2 + Y3 @ Y3)
        D = -(X1 @ Y1 + X2 @ Y2 + X3 @ Y3)
        return (L, Delta, D)
    X1, X2, X3, T = fields("N'")
    return (-(X1 @ X1 + X2 @ X2 + X3 @ X3), -(T @ T), -(X3 @ T), -(X3 @ X3))


def commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return compose(a, b) - compose(b, a)


# ---------------------------------------------------------------------------
# numerical application

_STENCILS = {
    0: ([0], [1.0]),
    1: ([-2, -1, 1, 2], [1 / 12, -8 / 12, 8 / 12, -1 / 12]),
    2: ([-2, -1, 0, 1, 2], [-1 / 12, 16 / 12, -30 / 12, 16 / 12, -1 / 12]),
    3: ([-3, -2, -1, 1, 2, 3], [1 / 8, -1.0, 13 / 8, -13 / 8, 1.0, -1 / 8]),
    4: ([-3, -2, -1, 0, 1, 2, 3], [-1 / 6, 2.0, -13 / 2, 28 / 3, -13 / 2, 2.0, -1 / 6]),
}


class NumericApplication(tuple):
    """(value, error_estimate) pair returned by :func:`apply_numeric`."""

    __slots__ = ()

    def __new__(cls, value, error):
        return super().__new__(cls, (value, error))

    value = property(lambda self: self[0])
    error = property(lambda self: self[1])


def _stencil_terms(alpha, h):
    """Offsets (as multi-steps) and weights of the tensor 4th-order stencil for d^alpha."""
    per_axis = [list(zip(*_STENCILS[k])) for k in alpha]
    scale = h ** -sum(alpha)
    out = []
    for combo in product(*per_axis):
        off = tuple(o for o, _ in combo)
        w = scale
        for _, wk in combo:
            w *= wk
        out.append((off, w))
    return out


def apply_numeric(
    d: DiffOp,
    f: Callable,
    g,
    h: float = 1e-2,
    vectorized: bool = False,
) -> NumericApplication:
    """Evaluate (d f)(g) with centred 4th-order differences and one Richardson step.

    ``f`` takes a group point, or, with ``vectorized=True``, an ``(m, dim)``
    coordinate array and returns ``m`` values. The error estimate is the
    difference between the step-``h`` and step-``h/2`` results.
    """
    if d.order() > 4:
        raise ValueError("apply_numeric handles operators of order <= 4")
    z0 = np.asarray(g.coords if hasattr(g, "coords") else g, dtype=float)
    dim = space_dim(d.space)
    if z0.shape != (dim,):
        raise ValueError(f"point does not live on {d.space!r}")
    point_type = GroupPoint if d.space == "N" else GroupPointPrime

    levels = (h, h / 2)
    plan = []
    needed: dict = {}
    for lev, hh in enumerate(levels):
        for alpha, coef in d.terms.items():
            for off, w in _stencil_terms(alpha, hh):
                key = (lev, off)
                needed.setdefault(key, z0 + hh * np.asarray(off, dtype=float))
                plan.append((lev, alpha, key, w))
    keys = list(needed)
    pts = np.array([needed[k] for k in keys])
    if vectorized:
        vals = np.asarray(f(pts))
    else:
        vals = np.array([f(point_type.from_coords(p)) for p in pts])
    if not np.all(np.isfinite(vals)):
        bad = keys[int(np.flatnonzero(~np.isfinite(vals))[0])]
        raise FloatingPointError(f"non-finite sample of f at offset {bad}")
    sample = dict(zip(keys, vals))
    coef_at = {a: complex(np.asarray(c(z0)).item()) if c else 0j for a, c in d.terms.items()}
    acc = [0j, 0j]
    for lev, alpha, key, w in plan:
        acc[lev] += coef_at[alpha] * w * sample[key]
    coarse, fine = acc
    value = fine if fine == coarse else (16 * fine - coarse) / 15
    err = abs(fine - coarse)
    if abs(value.imag) == 0 and np.isrealobj(vals):
        value = value.real
    return NumericApplication(value, err)
