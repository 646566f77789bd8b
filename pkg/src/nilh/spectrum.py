"""Eigenvalue embeddings of the two Gelfand spectra.

On N the coordinates (eta1, eta2, eta3) are the eigenvalues of (L, Delta, D).
The regular part is the union over l >= 0 of the surfaces
Gamma_l: eta3^2 = eta2 (eta1 - (2l+1) sqrt(eta2)), eta2 > 0, and the
singular part is the ray {(R^2, 0, 0)}. On N' a fourth coordinate (the
eigenvalue of -X'3^2) is appended.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .spherical import SphericalParams

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class SpectrumPoint:
    eta: tuple

    def __post_init__(self):
        eta = tuple(self.eta)
        if len(eta) not in (3, 4):
            raise ValueError("spectrum points live in R^3 or R^4")
        if not all(math.isfinite(float(v)) for v in eta):
            raise ValueError("spectrum coordinates must be finite")
        object.__setattr__(self, "eta", eta)

    @property
    def dim(self) -> int:
        return len(self.eta)

    def __iter__(self):
        return iter(self.eta)

    def __getitem__(self, k):
        return self.eta[k]


@dataclass(frozen=True)
class Classification:
    member: bool
    stratum: str | None
    params: SphericalParams | None
    residual: float
    tol: float = DEFAULT_TOL
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"member": self.member, "stratum": self.stratum}
        if self.params is not None:
            d = self.params.as_dict()
            d.pop("kind")
            out.update({("lambda" if k == "lam" else k): v for k, v in d.items()})
        out["residual"] = self.residual
        return out


def embed(params: SphericalParams) -> SpectrumPoint:
    """Eigenvalue tuple of a spherical function.

    Regular N: (lam(2l+1) + r^2, lam^2, lam r); singular N: (R^2, 0, 0).
    N' appends r^2; its singular family maps to (zeta^2 + r^2, 0, 0, r^2).
    """
    k = params.kind
    if k in ("regular", "regular_prime"):
        lam, l, r = params.lam, params.l, params.r
        eta = (lam * (2 * l + 1) + r * r, lam * lam, lam * r)
        return SpectrumPoint(eta + ((r * r,) if k == "regular_prime" else ()))
    if k == "singular":
        return SpectrumPoint((params.R * params.R, 0, 0))
    z, r = params.zeta, params.r
    return SpectrumPoint((z * z + r * r, 0, 0, r * r))


def project_pi(p: SpectrumPoint) -> SpectrumPoint:
    """Projection of the N' spectrum onto the N spectrum: drop eta4."""
    if p.dim != 4:
        raise ValueError("project_pi takes a point of R^4")
    return SpectrumPoint(p.eta[:3])


def gamma_defect(eta, l: int) -> float:
    """eta3^2 - eta2 (eta1 - (2l+1) sqrt(eta2)); zero exactly on Gamma_l."""
    e1, e2, e3 = (float(v) for v in eta[:3])
    return e3 * e3 - e2 * (e1 - (2 * l + 1) * math.sqrt(max(e2, 0.0)))


def classify(p: SpectrumPoint, tol: float = DEFAULT_TOL) -> Classification:
    """Locate a point of R^3 relative to the N spectrum.

    The tolerance is absolute on the rescaled defect and is multiplied by
    max(1, |eta|) before comparison.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if p.dim != 3:
        raise ValueError("classify works on points of R^3")
    e1, e2, e3 = (float(v) for v in p.eta)
    scale = max(1.0, math.sqrt(e1 * e1 + e2 * e2 + e3 * e3))
    bound = tol * scale
    if e2 <= tol * tol:
        resid = max(abs(e2), abs(e3), max(-e1, 0.0))
        member = resid <= bound
        R = math.sqrt(max(e1, 0.0))
        return Classification(member, "singular", SphericalParams.singular(R), resid, tol)
    lam = math.sqrt(e2)
    r = e3 / lam
    l_star = ((e1 - r * r) / lam - 1) / 2
    # eta1 >= (2l+1) lam + r^2 bounds the candidate orders
    l_max = max(0, math.ceil(e1 / lam))
    l = min(max(round(l_star), 0), l_max)
    resid = abs(l_star - l) * lam
    member = resid <= bound
    return Classification(
        member, f"Gamma_{l}", SphericalParams.regular(lam, l, r), resid, tol, {"l_star": l_star}
    )


def invert_regular(p: SpectrumPoint, tol: float = DEFAULT_TOL) -> tuple:
    """(lam, l, r) of a regular member of the N spectrum."""
    c = classify(p, tol)
    if c.stratum == "singular":
        raise ValueError("point lies on the singular ray, not on a regular surface")
    if not c.member:
        raise ValueError(f"point is not in the spectrum (residual {c.residual:.3e})")
    return (c.params.lam, c.params.l, c.params.r)


def classify_prime(p: SpectrumPoint, tol: float = DEFAULT_TOL) -> Classification:
    """Locate a point of R^4 relative to the N' spectrum."""
    if p.dim != 4:
        raise ValueError("classify_prime works on points of R^4")
    e1, e2, e3, e4 = (float(v) for v in p.eta)
    scale = max(1.0, math.sqrt(e1 * e1 + e2 * e2 + e3 * e3 + e4 * e4))
    if e2 <= tol * tol:
        resid = max(abs(e2), abs(e3), max(-e4, 0.0), max(e4 - e1, 0.0))
        r = math.sqrt(max(e4, 0.0))
        zeta = math.sqrt(max(e1 - e4, 0.0))
        return Classification(resid <= tol * scale, "singular", SphericalParams.singular_prime(zeta, r), resid, tol)
    base = classify(project_pi(p), tol)
    lam = math.sqrt(e2)
    # the extra equation eta3^2 = eta2 eta4 pins r^2
    resid = max(base.residual, abs(e3 * e3 - e2 * e4) / lam)
    pr = base.params
    return Classification(
        resid <= tol * scale, base.stratum, SphericalParams.regular_prime(pr.lam, pr.l, pr.r), resid, tol
    )


MESH_HEADER = ("l", "lambda", "r", "eta1", "eta2", "eta3")


def mesh(l: int, lam_range, r_range, counts) -> list[tuple]:
    """Grid of points of Gamma_l as rows (l, lam, r, eta1, eta2, eta3).

    ``counts = (n_lam, n_r)``; a count of 1 takes the lower end of its range.
    """
    n_lam, n_r = counts
    if n_lam <= 0 or n_r <= 0:
        return []
    if min(lam_range) <= 0:
        raise ValueError("lambda range must be positive")
    rows = []
    for lam in np.linspace(lam_range[0], lam_range[1], n_lam):
        for r in np.linspace(r_range[0], r_range[1], n_r):
            lam_f, r_f = float(lam), float(r)
            eta = embed(SphericalParams.regular(lam_f, l, r_f)).eta
            rows.append((int(l), lam_f, r_f) + tuple(float(e) for e in eta))
    return rows


def format_number(v) -> str:
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".17g")


def mesh_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MESH_HEADER)
    for row in rows:
        w.writerow([format_number(v) for v in row])
    return buf.getvalue()
