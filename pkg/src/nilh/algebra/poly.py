"""Sparse multivariate polynomials with exact Gaussian-rational coefficients.

Two variable spaces are supported: ``"N"`` with coordinates
``(x1, x2, x3, y1, y2, y3)`` and ``"N'"`` with coordinates ``(x1, x2, x3, t)``.
"""
from __future__ import annotations

import numbers
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

SPACES = {
    "N": ("x1", "x2", "x3", "y1", "y2", "y3"),
    "N'": ("x1", "x2", "x3", "t"),
}


def space_dim(space: str) -> int:
    try:
        return len(SPACES[space])
    except KeyError:
        raise ValueError(f"unknown variable space {space!r}") from None


def _real(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, numbers.Integral):
        return Fraction(int(v))
    if isinstance(v, numbers.Rational):
        return Fraction(v.numerator, v.denominator)
    if isinstance(v, numbers.Real):
        return float(v)
    raise TypeError(f"not a real number: {v!r}")


def _fmt_real(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if float(v).is_integer():
        return str(int(v))
    return repr(float(v))


class Gauss:
    """Complex number ``re + i*im`` whose parts are Fractions (or floats).

    Parts stay exact as long as every operand is rational; a float anywhere
    degrades the result to floating point, which is what the Radon
    transform needs for its pi-bearing constants.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _real(re))
        object.__setattr__(self, "im", _real(im))

    def __setattr__(self, name, value):
        raise AttributeError("Gauss is immutable")

    @classmethod
    def of(cls, v) -> "Gauss":
        if isinstance(v, Gauss):
            return v
        if isinstance(v, complex):
            return cls(v.real, v.imag)
        return cls(v, 0)

    def __add__(self, other):
        o = Gauss.of(other)
        return Gauss(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = Gauss.of(other)
        return Gauss(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return Gauss.of(other) - self

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __mul__(self, other):
        o = Gauss.of(other)
        return Gauss(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "Gauss":
        return Gauss(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = Gauss.of(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_exact(self) -> bool:
        return isinstance(self.re, Fraction) and isinstance(self.im, Fraction)

    def __repr__(self):
        return f"Gauss({self})"

    def __str__(self):
        if not self.im:
            return _fmt_real(self.re)
        im = "" if self.im == 1 else "-" if self.im == -1 else _fmt_real(self.im)
        if not self.re:
            return f"{im}i"
        sign = "" if im.startswith("-") else "+"
        return f"{_fmt_real(self.re)}{sign}{im}i"


I = Gauss(0, 1)


class Poly:
    """Polynomial on a variable space, stored as ``{exponent tuple: Gauss}``.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their term dictionaries are.
    """

    __slots__ = ("space", "terms")

    def __init__(self, space: str, terms: Mapping[tuple, object] | None = None):
        n = space_dim(space)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != n or min(e, default=0) < 0:
                raise ValueError(f"bad exponent {e} for space {space!r}")
            c = Gauss.of(c)
            if c:
                clean[e] = clean.get(e, Gauss()) + c
                if not clean[e]:
                    del clean[e]
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # constructors
    @classmethod
    def const(cls, space: str, c) -> "Poly":
        return cls(space, {(0,) * space_dim(space): c})

    @classmethod
    def var(cls, space: str, name: str) -> "Poly":
        names = SPACES[space]
        e = [0] * len(names)
        e[names.index(name)] = 1
        return cls(space, {tuple(e): 1})

    @classmethod
    def variables(cls, space: str) -> list["Poly"]:
        return [cls.var(space, v) for v in SPACES[space]]

    @classmethod
    def zero(cls, space: str) -> "Poly":
        return cls(space)

    # arithmetic
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.space != self.space:
                raise ValueError(f"mixed variable spaces {self.space!r} and {other.space!r}")
            return other
        return Poly.const(self.space, other)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, Gauss()) + c
        return Poly(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.space, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Gauss()) + c1 * c2
        return Poly(self.space, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.space, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.space == other.space and self.terms == other.terms
        if isinstance(other, (numbers.Number, Gauss)):
            return self == Poly.const(self.space, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.space, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # calculus and structure
    def diff(self, k: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                out[tuple(e2)] = c * e[k]
        return Poly(self.space, out)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def conjugate(self) -> "Poly":
        return Poly(self.space, {e: c.conjugate() for e, c in self.terms.items()})

    def real_part(self) -> "Poly":
        return Poly(self.space, {e: Gauss(c.re) for e, c in self.terms.items()})

    def imag_part(self) -> "Poly":
        return Poly(self.space, {e: Gauss(c.im) for e, c in self.terms.items()})

    def is_real(self) -> bool:
        return all(not c.im for c in self.terms.values())

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Gauss:
        return self.terms.get((0,) * space_dim(self.space), Gauss())

    def substitute(self, space: str, images: Iterable["Poly"]) -> "Poly":
        """Compose with a polynomial map: variable k becomes ``images[k]``."""
        images = list(images)
        out = Poly.zero(space)
        for e, c in self.terms.items():
            m = Poly.const(space, c)
            for img, k in zip(images, e):
                if k:
                    m = m * img**k
            out = out + m
        return out

    def __call__(self, z):
        """Evaluate at one point (sequence) or many points (array ``(m, dim)``)."""
        z = np.asarray(z, dtype=float)
        single = z.ndim == 1
        z = np.atleast_2d(z)
        out = np.zeros(z.shape[0], dtype=complex)
        for e, c in self.terms.items():
            mono = np.ones(z.shape[0])
            for k, p in enumerate(e):
                if p:
                    mono = mono * z[:, k] ** p
            out += complex(c) * mono
        if self.is_real():
            out = out.real
        return out[0] if single else out

    # text form
    def monomials(self):
        """Terms in a stable order: higher degree first, then descending lex."""
        return sorted(self.terms.items(), key=lambda ec: (-sum(ec[0]), tuple(-k for k in ec[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})" + monomial_str(self.space, e) for e, c in self.monomials())

    def __repr__(self):
        return f"Poly({self.space!r}, {self})"


def monomial_str(space: str, e: tuple) -> str:
    parts = []
    for name, k in zip(SPACES[space], e):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def hilbert_basis(space: str = "N") -> tuple[Poly, ...]:
    """Generators of the invariant polynomials on either space.

    ``N``: (|x|^2, |y|^2, x.y) for SO(3). ``N'``: (|x|^2, t^2, x3 t, x3^2) for K'.
    """
    if space == "N":
        x1, x2, x3, y1, y2, y3 = Poly.variables("N")
        return (x1**2 + x2**2 + x3**2, y1**2 + y2**2 + y3**2, x1 * y1 + x2 * y2 + x3 * y3)
    if space == "N'":
        x1, x2, x3, t = Poly.variables("N'")
        return (x1**2 + x2**2 + x3**2, t**2, x3 * t, x3**2)
    raise ValueError(f"unknown variable space {space!r}")
