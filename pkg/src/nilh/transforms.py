"""Central Radon transform, Gelfand transforms and the moment test.

The Radon transform integrates a function of N over the central plane
(y1, y2) and returns a function of N' = R^3_x x R_t with t = y3. On
operators it acts by restricting the symbol: R(D_P) = D_Q with
Q(x, t) = P(x, 0, 0, t).

Measures are Lebesgue in exponential coordinates throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra.gausspoly import GaussianMoments, GaussPoly
from .algebra.group import Rotation
from .algebra.poly import Gauss, Poly
from .quad import Integral, fsum_complex, gauss_legendre, truncation_radius
from .spherical import SphericalParams, phi_prime_batch
from .specfun import bessel_j0, laguerre, sinc

# y1, y2 are the integrated central directions of N
_PLANE = (3, 4)
_KEEP = (0, 1, 2, 5)


# ---------------------------------------------------------------------------
# Radon transform

def radon_exact(F: GaussPoly) -> GaussPoly:
    """Closed-form Radon transform of a GaussPoly whose (y1, y2) block is decoupled."""
    if F.space != "N":
        raise ValueError("the Radon transform takes functions on N")
    A = F.matrix
    for i in _PLANE:
        for j in range(6):
            if j not in _PLANE and A[i][j] != 0:
                raise ValueError(
                    "the (y1, y2) block is coupled to other variables; use radon_numeric"
                )
    B = [[A[i][j] for j in _PLANE] for i in _PLANE]
    try:
        mom = GaussianMoments(B)
    except ValueError:
        raise ValueError("the (y1, y2) block is not positive definite; use radon_numeric") from None
    terms: dict = {}
    for e, c in F.p.terms.items():
        m = mom.expectation((e[3], e[4]))
        if not m:
            continue
        e2 = (e[0], e[1], e[2], e[5])
        terms[e2] = terms.get(e2, Gauss()) + c * m
    # pi / sqrt(det B) is irrational in general, so apply it once in floating point
    p = Poly("N'", terms) * mom.norm if terms else Poly.zero("N'")
    A2 = [[A[i][j] for j in _KEEP] for i in _KEEP]
    return GaussPoly(p, A2)


def decay_radius(F: GaussPoly, indices=None) -> float:
    A = np.array(F.matrix, dtype=float)
    if indices is not None:
        A = A[np.ix_(indices, indices)]
    return truncation_radius(float(np.linalg.eigvalsh(A).min()))


def radon_numeric(F, gp, rule=None, radius: float | None = None, order: int = 96):
    """Radon transform at one point of N' by tensor Gauss-Legendre over (y1, y2).

    ``F`` is a GaussPoly or a callable on ``(m, 6)`` coordinate arrays. The
    caller supplies the truncation ``radius`` for callables; for a GaussPoly
    it follows from the decay of the (y1, y2) block.
    """
    z = np.asarray(gp.coords if hasattr(gp, "coords") else gp, dtype=float)
    if z.shape != (4,):
        raise ValueError("radon_numeric evaluates at a point of N'")
    if rule is None:
        if radius is None:
            if not isinstance(F, GaussPoly):
                raise ValueError("a truncation radius is required for callables")
            radius = decay_radius(F, list(_PLANE))
        rule = gauss_legendre(order, -radius, radius)
    u, v = np.meshgrid(rule.nodes, rule.nodes, indexing="ij")
    w = np.outer(rule.weights, rule.weights).ravel()
    Z = np.empty((u.size, 6))
    Z[:, 0:3] = z[:3]
    Z[:, 3] = u.ravel()
    Z[:, 4] = v.ravel()
    Z[:, 5] = z[3]
    vals = np.asarray(F(Z))
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite sample in radon_numeric")
    return fsum_complex(vals * w)


def radon_op(P: Poly) -> Poly:
    """Restriction of a polynomial symbol to N': y1, y2 -> 0 and y3 -> t."""
    if P.space != "N":
        raise ValueError("radon_op takes a polynomial on N")
    x1, x2, x3, t = Poly.variables("N'")
    zero = Poly.zero("N'")
    return P.substitute("N'", (x1, x2, x3, zero, zero, t))


# ---------------------------------------------------------------------------
# Gelfand transforms

@dataclass(frozen=True)
class GelfandOrders:
    """Quadrature orders: radial GL per radius, angular GL in cos(x, y), inner GL on the sphere."""

    radial: int = 96
    angular: int = 32
    inner: int = 64
    radius: float | None = None

    def halved(self) -> "GelfandOrders":
        return GelfandOrders(
            max(self.radial // 2, 4), max(self.angular // 2, 4), max(self.inner // 2, 4), self.radius
        )


def check_invariance(F, dim: int, n: int = 10, tol: float = 1e-8, seed: int = 0):
    """Raise unless F(k g) = F(g) for ``n`` random rotations (K for dim 6, K' for dim 4)."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1, 1, (n, dim))
    base = np.asarray(F(pts))
    for i in range(n):
        if dim == 6:
            k = Rotation.random(rng).m
            moved = np.concatenate([pts[:, :3] @ k.T, pts[:, 3:] @ k.T], axis=1)
        else:
            k = Rotation.random_stabiliser(rng).m
            moved = np.concatenate([pts[:, :3] @ k.T, pts[:, 3:] * k[2, 2]], axis=1)
        diff = np.abs(np.asarray(F(moved)) - base)
        if np.any(diff > tol * np.maximum(1.0, np.abs(base))):
            group = "SO(3)" if dim == 6 else "K'"
            raise ValueError(f"function is not {group}-invariant (defect {diff.max():.3e})")


def _radius(F, dim, orders: GelfandOrders) -> float:
    if orders.radius is not None:
        return orders.radius
    if isinstance(F, GaussPoly):
        return decay_radius(F)
    raise ValueError("a truncation radius is required for callables (GelfandOrders.radius)")


def zonal_phi(params: SphericalParams, s, sigma, c, inner: int = 64, chunk: int = 4096) -> np.ndarray:
    """Regular spherical function of N at x = s e1, y = sigma (c e1 + sqrt(1-c^2) e2).

    Taking the sphere's pole along x, the azimuthal average of
    exp(-i lam y.u) is J0(lam sigma sqrt(1-c^2) sqrt(1-u1^2)), leaving a 1D
    Gauss-Legendre integral over u1 = x.u / |x|. The integrand is even in u1
    after taking the real part, so only the positive half of the nodes is used.
    """
    s, sigma, c = (np.asarray(a, dtype=float).ravel() for a in (s, sigma, c))
    rule = gauss_legendre(inner)
    half = rule.nodes >= 0
    u = rule.nodes[half]
    w = np.where(rule.nodes[half] == 0, 0.5, 1.0) * rule.weights[half]
    su = np.sqrt(1 - u * u)
    lam, l, r = params.lam, params.l, params.r
    out = np.empty(s.size)
    for a in range(0, s.size, chunk):
        b = slice(a, a + chunk)
        freq = (lam * sigma[b] * c[b] + r * s[b])[:, None]
        perp = (lam * sigma[b] * np.sqrt(np.maximum(1 - c[b] ** 2, 0)))[:, None]
        integrand = (
            np.cos(freq * u)
            * bessel_j0(perp * su)
            * laguerre(l, lam * (s[b] ** 2)[:, None] * (1 - u * u) / 2)
        )
        out[b] = integrand @ w
    return out


def _gelfand_sum(F, params: SphericalParams, orders: GelfandOrders, T: float, frame):
    rs = gauss_legendre(orders.radial, 0, T)
    rc = gauss_legendre(orders.angular)
    S, SG, C = np.meshgrid(rs.nodes, rs.nodes, rc.nodes, indexing="ij")
    W = np.einsum("i,j,k->ijk", rs.weights, rs.weights, rc.weights)
    S, SG, C, W = S.ravel(), SG.ravel(), C.ravel(), W.ravel()
    sc = np.sqrt(np.maximum(1 - C * C, 0))
    X = np.stack([S, 0 * S, 0 * S], axis=1)
    Y = np.stack([SG * C, SG * sc, 0 * S], axis=1)
    if frame is not None:
        X, Y = X @ frame.T, Y @ frame.T
    fvals = np.asarray(F(np.concatenate([X, Y], axis=1)))
    if params.kind == "singular":
        phis = sinc(params.R * S)
    else:
        phis = zonal_phi(params, S, SG, C, orders.inner)
    jac = 8 * math.pi**2 * S * S * SG * SG
    vals = fvals * np.conj(phis) * jac * W
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite integrand in gelfand")
    return fsum_complex(vals)


def gelfand(
    F,
    params: SphericalParams,
    orders: GelfandOrders | None = None,
    check: bool = True,
    frame=None,
) -> Integral:
    """Gelfand transform int_N F conj(phi) of an SO(3)-invariant function.

    The 6D integral is reduced by invariance to (s, sigma, c) =
    (|x|, |y|, cos angle(x, y)) with measure 8 pi^2 s^2 sigma^2 ds dsigma dc,
    evaluated at representatives x = s e1, y = sigma (c e1 + sqrt(1-c^2) e2)
    (rotated by ``frame`` when given). The error is the difference with a
    half-order evaluation.
    """
    if params.on_prime:
        raise ValueError("gelfand takes N parameters; use gelfand_prime on N'")
    orders = orders or GelfandOrders()
    if check:
        check_invariance(F, 6)
    T = _radius(F, 6, orders)
    value = _gelfand_sum(F, params, orders, T, frame)
    coarse = _gelfand_sum(F, params, orders.halved(), T, frame)
    return Integral(value, abs(value - coarse))


def _gelfand_prime_sum(G, params, n: int, T: float):
    rr = gauss_legendre(n, 0, T)
    rl = gauss_legendre(n, -T, T)
    P, X3, TT = np.meshgrid(rr.nodes, rl.nodes, rl.nodes, indexing="ij")
    W = np.einsum("i,j,k->ijk", rr.weights, rl.weights, rl.weights).ravel()
    Z = np.stack([P.ravel(), 0 * P.ravel(), X3.ravel(), TT.ravel()], axis=1)
    vals = np.asarray(G(Z)) * np.conj(phi_prime_batch(params, Z)) * 2 * math.pi * Z[:, 0] * W
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite integrand in gelfand_prime")
    return fsum_complex(vals)


def gelfand_prime(
    G,
    params: SphericalParams,
    orders: GelfandOrders | None = None,
    check: bool = True,
) -> Integral:
    """Gelfand transform on N' reduced to (|x~|, x3, t) with weight 2 pi |x~|."""
    if not params.on_prime:
        raise ValueError("gelfand_prime takes N' parameters")
    orders = orders or GelfandOrders()
    if check:
        check_invariance(G, 4)
    T = _radius(G, 4, orders)
    value = _gelfand_prime_sum(G, params, orders.radial, T)
    coarse = _gelfand_prime_sum(G, params, max(orders.radial // 2, 4), T)
    return Integral(value, abs(value - coarse))


def gelfand_at(F, eta, orders: GelfandOrders | None = None, tol: float = 1e-9) -> Integral:
    """Gelfand transform of F as a function on the embedded N spectrum."""
    from .spectrum import SpectrumPoint, classify

    c = classify(eta if isinstance(eta, SpectrumPoint) else SpectrumPoint(eta), tol)
    if not c.member:
        raise ValueError(f"{tuple(eta)} is not in the spectrum (residual {c.residual:.3e})")
    return gelfand(F, c.params, orders)


# ---------------------------------------------------------------------------
# moment test for the image of the Radon transform

@dataclass(frozen=True)
class MomentRecord:
    j: int
    shell: float
    x3: tuple
    moments: tuple
    coefficients: tuple
    residual: float
    passed: bool


@dataclass(frozen=True)
class MomentReport:
    records: tuple = field(default_factory=tuple)
    tol: float = 1e-10

    @property
    def residual(self) -> float:
        return max((r.residual for r in self.records), default=0.0)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def residual_at(self, j: int) -> float:
        return max(r.residual for r in self.records if r.j == j)

    def passed_at(self, j: int) -> bool:
        return all(r.passed for r in self.records if r.j == j)


def moment_check(
    G,
    j_max: int = 3,
    shells=(0.5, 1.0, 1.5),
    samples: int = 7,
    tol: float = 1e-10,
    t_radius: float | None = None,
    t_order: int = 96,
) -> MomentReport:
    """Test whether t-moments of G are polynomials of degree <= j in x3 on |x| shells.

    A K'-invariant G is a Radon image exactly when, for every j,
    int G(x, t) t^j dt = sum_{i<=j} a_ij(|x|^2) x3^i. On each shell the
    moment must therefore be a degree-j polynomial in x3. The fit residual is
    normalised by the largest absolute moment int |G| |t|^j dt on the shell,
    which does not collapse when the signed moment vanishes by symmetry.
    """
    if j_max < 0 or not shells or min(shells) <= 0:
        raise ValueError("degenerate moment grid")
    if t_radius is None:
        t_radius = decay_radius(G, [3]) if isinstance(G, GaussPoly) else 12.0
    rule = gauss_legendre(t_order, -t_radius, t_radius)
    t, w = rule.nodes, rule.weights
    records = []
    for j in range(j_max + 1):
        n = max(samples, j + 3)
        for s in shells:
            x3 = np.linspace(-s, s, n)
            xt = np.sqrt(np.maximum(s * s - x3 * x3, 0))
            Z = np.empty((n * t.size, 4))
            Z[:, 0] = np.repeat(xt, t.size)
            Z[:, 1] = 0.0
            Z[:, 2] = np.repeat(x3, t.size)
            Z[:, 3] = np.tile(t, n)
            vals = np.asarray(G(Z)).reshape(n, t.size)
            tj = t**j
            mom = np.array([fsum_complex(v * tj * w) for v in vals]).real
            absmom = np.array([math.fsum(np.abs(v * tj) * w) for v in vals])
            scale = max(float(absmom.max()), 1e-300)
            coef = np.polynomial.polynomial.polyfit(x3, mom, j)
            fit = np.polynomial.polynomial.polyval(x3, coef)
            resid = float(np.max(np.abs(mom - fit))) / scale
            records.append(
                MomentRecord(j, s, tuple(x3), tuple(mom), tuple(coef), resid, resid <= tol)
            )
    return MomentReport(tuple(records), tol)
