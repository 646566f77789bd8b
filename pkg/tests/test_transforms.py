import math
from fractions import Fraction

import numpy as np
import pytest

from nilh.algebra import GaussPoly, Poly, Rotation, apply_exact, generators, hilbert_basis, symmetrize
from nilh.quad import gauss_legendre
from nilh.spectrum import embed
from nilh.spherical import SphericalParams, phi_batch
from nilh.transforms import (
    GelfandOrders,
    gelfand,
    gelfand_at,
    gelfand_prime,
    moment_check,
    radon_exact,
    radon_numeric,
    radon_op,
    zonal_phi,
)
from nilh.verify import pi_params, random_gausspoly, random_invariant_gausspoly

FAST = GelfandOrders(64, 24, 48)
x1, x2, x3, y1, y2, y3 = Poly.variables("N")
xp1, xp2, xp3, t = Poly.variables("N'")


def laplace_oracle(lam, l, r):
    """Regular transform of exp(-|x|^2 - |y|^2) by hand.

    The t and x3 integrals are Gaussian Fourier transforms and the radial one
    is the Laplace transform of a Laguerre polynomial: (p - a)^l / p^(l+1).
    """
    p, a = 1 + lam / 4, lam / 2
    return math.pi**3 * math.exp(-lam * lam / 4 - r * r / 4) * (p - a) ** l / p ** (l + 1)


# ---------------------------------------------------------------------------
# Radon transform

def test_radon_exact_examples():
    F = GaussPoly.isotropic("N")
    RF = radon_exact(F)
    z = np.array([0.3, -0.2, 0.5, 0.7])
    assert RF(z) == pytest.approx(math.pi * math.exp(-0.38 - 0.49), rel=1e-15)
    assert RF.matrix == GaussPoly.isotropic("N'").matrix
    G = radon_exact(GaussPoly.isotropic("N", y1 * y1))
    assert G(z) == pytest.approx(math.pi / 2 * math.exp(-0.38 - 0.49), rel=1e-15)
    Z = radon_exact(GaussPoly.isotropic("N", Poly.zero("N")))
    assert Z(z) == 0


def test_radon_exact_keeps_t_dependence():
    RF = radon_exact(GaussPoly.isotropic("N", x3 * y3 + y2 * y2))
    assert RF.p == (xp3 * t + Fraction(1, 2)) * math.pi


def test_radon_exact_rejects_coupled_block():
    A = np.eye(6).tolist()
    A[0][3] = A[3][0] = 0.25
    with pytest.raises(ValueError, match="radon_numeric"):
        radon_exact(GaussPoly(Poly.const("N", 1), A))


def test_radon_exact_rejects_wrong_space():
    with pytest.raises(ValueError):
        radon_exact(GaussPoly.isotropic("N'"))


@pytest.mark.parametrize("seed", range(3))
def test_radon_numeric_matches_exact(seed):
    rng = np.random.default_rng(seed)
    F = random_gausspoly(rng)
    RF = radon_exact(F)
    for z in rng.uniform(-1, 1, (4, 4)):
        assert radon_numeric(F, z) == pytest.approx(RF(z), rel=1e-10, abs=1e-10)


def test_radon_numeric_callable_needs_radius():
    f = lambda Z: np.exp(-np.sum(Z * Z, axis=1))
    with pytest.raises(ValueError):
        radon_numeric(f, np.zeros(4))
    assert radon_numeric(f, np.zeros(4), radius=8.0) == pytest.approx(math.pi, rel=1e-12)
    with pytest.raises(FloatingPointError):
        radon_numeric(lambda Z: np.full(len(Z), np.nan), np.zeros(4), radius=1.0)


def test_radon_op_examples():
    r2, s2, xy = hilbert_basis("N")
    assert radon_op(s2) == t * t
    assert radon_op(xy) == xp3 * t
    assert radon_op(r2) == xp1 * xp1 + xp2 * xp2 + xp3 * xp3


@pytest.mark.parametrize("seed", range(4))
def test_intertwining(seed):
    rng = np.random.default_rng(10 + seed)
    F = random_gausspoly(rng)
    probes = rng.uniform(-1, 1, (20, 4))
    for P in hilbert_basis("N"):
        lhs = radon_exact(apply_exact(symmetrize(P), F))(probes)
        rhs = apply_exact(symmetrize(radon_op(P)), radon_exact(F))(probes)
        assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-10)


def test_radon_separates_radial_profiles():
    z = np.array([0.5, 0.0, 0.5, 0.5])
    a = radon_exact(GaussPoly.isotropic("N"))(z)
    b = radon_exact(GaussPoly.isotropic("N", a=Fraction(3, 2)))(z)
    assert abs(a - b) > 1e-3


# ---------------------------------------------------------------------------
# Gelfand transform on N

def test_reduction_jacobian_against_6d_quadrature():
    # direct tensor quadrature over R^6 versus the (s, sigma, c) reduction
    f = lambda Z: np.exp(
        -np.sum(Z[:, :3] ** 2, 1) - 2 * np.sum(Z[:, 3:] ** 2, 1) - 0.5 * np.sum(Z[:, :3] * Z[:, 3:], 1)
    )
    rx, ry = gauss_legendre(16, -3.5, 3.5), gauss_legendre(16, -3, 3)
    rest = np.meshgrid(rx.nodes, rx.nodes, ry.nodes, ry.nodes, ry.nodes, indexing="ij")
    rest = np.stack([g.ravel() for g in rest], axis=1)
    w_rest = np.einsum("a,b,c,d,e->abcde", rx.weights, rx.weights, ry.weights, ry.weights, ry.weights).ravel()
    direct = 0.0
    for u, wu in zip(rx.nodes, rx.weights):
        Z = np.concatenate([np.full((len(rest), 1), u), rest], axis=1)
        direct += wu * float(np.sum(f(Z) * w_rest))
    reduced = gelfand(f, SphericalParams.singular(0.0), GelfandOrders(48, 16, 32, radius=8.0)).value
    assert reduced == pytest.approx(direct, rel=1e-4)
    # and both against the Gaussian determinant
    exact = math.pi**3 / math.sqrt((1 * 2 - 0.25**2 / 1) ** 3)
    assert reduced == pytest.approx(exact, rel=1e-10)


def test_normalised_gaussian_at_origin():
    F = GaussPoly.isotropic("N").scale(math.pi**-3)
    assert abs(gelfand(F, SphericalParams.singular(0.0), FAST).value - 1) <= 1e-10


@pytest.mark.parametrize("R", [0.5, 1.0, 2.0, 3.0])
def test_singular_is_gaussian_fourier(R):
    F = GaussPoly.isotropic("N").scale(math.pi**-3)
    assert abs(gelfand(F, SphericalParams.singular(R), FAST).value - math.exp(-R * R / 4)) <= 1e-8


@pytest.mark.parametrize("lam, l, r", [(1.3, 2, 0.7), (0.4, 0, -1.1), (2.0, 1, 0.0), (0.8, 4, 1.5)])
def test_regular_against_laplace_oracle(lam, l, r):
    res = gelfand(GaussPoly.isotropic("N"), SphericalParams.regular(lam, l, r), FAST)
    assert res.value == pytest.approx(laplace_oracle(lam, l, r), abs=1e-9)
    assert res.error <= 1e-6


def test_zonal_phi_matches_sphere_average():
    rng = np.random.default_rng(3)
    s, sigma, c = rng.uniform(0, 2, 8), rng.uniform(0, 2, 8), rng.uniform(-1, 1, 8)
    Z = np.zeros((8, 6))
    Z[:, 0] = s
    Z[:, 3] = sigma * c
    Z[:, 4] = sigma * np.sqrt(1 - c * c)
    for params in (SphericalParams.regular(1.0, 2, 0.5), SphericalParams.regular(2.5, 0, -1.0)):
        assert np.allclose(zonal_phi(params, s, sigma, c), phi_batch(params, Z), rtol=0, atol=1e-10)


def test_representative_frame_does_not_matter():
    rng = np.random.default_rng(4)
    F = random_invariant_gausspoly(rng)
    params = SphericalParams.regular(0.9, 1, 0.4)
    base = gelfand(F, params, FAST).value
    moved = gelfand(F, params, FAST, frame=Rotation.random(rng).m).value
    assert moved == pytest.approx(base, rel=1e-10, abs=1e-12)


def test_non_invariant_rejected():
    with pytest.raises(ValueError, match="invariant"):
        gelfand(GaussPoly.isotropic("N", x1), SphericalParams.singular(1.0), FAST)
    with pytest.raises(ValueError):
        gelfand(GaussPoly.isotropic("N"), SphericalParams.singular_prime(1.0, 0.0), FAST)


def test_callable_needs_radius():
    f = lambda Z: np.exp(-np.sum(Z * Z, axis=1))
    with pytest.raises(ValueError):
        gelfand(f, SphericalParams.singular(1.0), FAST)


@pytest.mark.parametrize("seed", range(2))
def test_eigenvalue_transport(seed):
    rng = np.random.default_rng(20 + seed)
    F = random_invariant_gausspoly(rng)
    for params in (SphericalParams.regular(1.1, 1, -0.6), SphericalParams.singular(1.4)):
        base = gelfand(F, params, FAST).value
        for op, mu in zip(generators("N"), embed(params).eta):
            got = gelfand(apply_exact(op, F), params, FAST, check=False).value
            assert abs(got - mu * base) <= 1e-6 * max(1.0, abs(mu * base))


def test_gelfand_at_spectrum_point():
    F = GaussPoly.isotropic("N")
    assert gelfand_at(F, (15, 4, 6), FAST).value == pytest.approx(laplace_oracle(2, 1, 3), abs=1e-9)
    with pytest.raises(ValueError):
        gelfand_at(F, (1, 1, 5), FAST)


# ---------------------------------------------------------------------------
# Gelfand transform on N'

def test_prime_normalised_gaussian():
    G = GaussPoly.isotropic("N'").scale(math.pi**-2)
    assert abs(gelfand_prime(G, SphericalParams.singular_prime(0, 0), FAST).value - 1) <= 1e-10
    with pytest.raises(ValueError):
        gelfand_prime(G, SphericalParams.singular(1.0), FAST)


def test_commuting_diagram():
    F = GaussPoly.isotropic("N").scale(math.pi**-3)
    RF = radon_exact(F)
    draws = [
        SphericalParams.regular_prime(0.7, 0, 0.3),
        SphericalParams.regular_prime(1.6, 2, -1.2),
        SphericalParams.singular_prime(1.1, 0.6),
        SphericalParams.singular_prime(0.0, 1.3),
    ]
    for mp in draws:
        lhs = gelfand_prime(RF, mp, FAST).value
        rhs = gelfand(F, pi_params(mp), FAST).value
        assert abs(lhs - rhs) <= 1e-7


def test_prime_linearity():
    G1 = radon_exact(GaussPoly.isotropic("N", x3 * y3 + 1))
    G2 = radon_exact(GaussPoly.isotropic("N", y1 * y1, a=2))
    a, b = 0.7, -1.9
    combo = lambda Z: a * G1(Z) + b * G2(Z)
    p = SphericalParams.regular_prime(1.2, 1, 0.5)
    orders = GelfandOrders(64, radius=9.0)
    lhs = gelfand_prime(combo, p, orders).value
    rhs = a * gelfand_prime(G1, p, orders).value + b * gelfand_prime(G2, p, orders).value
    assert abs(lhs - rhs) <= 1e-12


# ---------------------------------------------------------------------------
# moment test

def test_moments_of_a_radon_image_pass():
    G = radon_exact(GaussPoly.isotropic("N"))
    rep = moment_check(G, 3)
    assert rep.passed and rep.residual <= 1e-10
    assert all(len(r.x3) >= r.j + 3 for r in rep.records)


@pytest.mark.parametrize("seed", range(3))
def test_moments_of_random_radon_images_pass(seed):
    F = random_invariant_gausspoly(np.random.default_rng(30 + seed))
    assert moment_check(radon_exact(F), 3).passed


def test_counterexample_fails_at_first_moment():
    def G(Z):
        rho2 = Z[:, 0] ** 2 + Z[:, 1] ** 2
        return rho2 * Z[:, 2] * Z[:, 3] * np.exp(-rho2 - Z[:, 2] ** 2 - Z[:, 3] ** 2)

    rep = moment_check(G, 1)
    assert not rep.passed_at(1)
    assert rep.residual_at(1) >= 0.01
    assert rep.passed_at(0)


def test_zero_passes():
    rep = moment_check(lambda Z: np.zeros(len(Z)), 3)
    assert rep.passed and rep.residual == 0


def test_degenerate_grid():
    G = radon_exact(GaussPoly.isotropic("N"))
    with pytest.raises(ValueError):
        moment_check(G, 2, shells=())
    with pytest.raises(ValueError):
        moment_check(G, 2, shells=(0.0, 1.0))
    with pytest.raises(ValueError):
        moment_check(G, -1)
