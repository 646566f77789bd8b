import math

import mpmath as mp
import numpy as np
import pytest

from nilh.algebra import IDENTITY, IDENTITY_PRIME, GroupPoint, GroupPointPrime, Rotation, act
from nilh.quad import QuadRule, gauss_legendre, sphere_rule
from nilh.specfun import laguerre, sinc
from nilh.spherical import (
    SphericalParams,
    default_so3,
    functional_equation_residual,
    phi,
    phi_batch,
    phi_prime,
    phi_prime_batch,
)
from nilh.verify import eigen_residual

REGULAR = [SphericalParams.regular(lam, l, r) for lam, l, r in ((0.5, 0, 0.0), (1.0, 1, 1.0), (2.0, 3, -0.5))]
SINGULAR = [SphericalParams.singular(R) for R in (0.0, 1.0, 2.5)]
PRIME = [SphericalParams.regular_prime(1.0, 2, 0.5), SphericalParams.singular_prime(1.2, 0.7)]


def test_param_validation():
    with pytest.raises(ValueError):
        SphericalParams.regular(0.0, 0, 0)
    with pytest.raises(ValueError):
        SphericalParams.regular(1.0, -1, 0)
    with pytest.raises(ValueError):
        SphericalParams("regular", lam=1.0, l=0.5)
    with pytest.raises(ValueError):
        SphericalParams.singular(-1)
    with pytest.raises(ValueError):
        SphericalParams("other")


@pytest.mark.parametrize("params", REGULAR + SINGULAR)
def test_identity_value(params):
    assert phi(params, IDENTITY) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("params", PRIME)
def test_identity_value_prime(params):
    assert phi_prime(params, IDENTITY_PRIME) == 1


@pytest.mark.parametrize("params", REGULAR)
def test_regular_on_central_axis_is_sinc(params):
    y = np.array([0.3, -0.7, 0.4])
    g = GroupPoint((0, 0, 0), tuple(y))
    assert phi(params, g) == pytest.approx(sinc(params.lam * np.linalg.norm(y)), abs=1e-12)


def test_singular_zero():
    g = GroupPoint((math.pi / 2, 0, 0), (1, 2, 3))
    assert abs(phi(SphericalParams.singular(2.0), g)) <= 1e-15


def test_singular_closed_form_matches_sphere_average():
    rule = sphere_rule(64)
    rng = np.random.default_rng(0)
    for R in (0.5, 1.0, 3.0):
        for _ in range(5):
            x = rng.uniform(-2, 2, 3)
            avg = np.sum(np.exp(-1j * R * rule.nodes @ x) * rule.weights)
            assert abs(avg - phi(SphericalParams.singular(R), GroupPoint(tuple(x), (0, 0, 0)))) <= 1e-10


def test_regular_against_mpmath_sphere_integral():
    params = SphericalParams.regular(1.3, 2, 0.6)
    x, y = np.array([0.4, -0.3, 0.8]), np.array([0.5, 0.2, -0.6])

    def integrand(theta, psi):
        u = np.array([math.sin(theta) * math.cos(psi), math.sin(theta) * math.sin(psi), math.cos(theta)])
        xu, yu = float(x @ u), float(y @ u)
        lag = laguerre(params.l, params.lam * (x @ x - xu * xu) / 2)
        return mp.cos(params.lam * yu + params.r * xu) * lag * mp.sin(theta) / (4 * mp.pi)

    mp.mp.dps = 20
    expected = float(mp.quad(integrand, [0, mp.pi], [0, 2 * mp.pi]))
    assert phi(params, GroupPoint(tuple(x), tuple(y))) == pytest.approx(expected, abs=1e-10)


def test_prime_examples():
    p = SphericalParams.regular_prime(1.0, 0, 2.0)
    assert phi_prime(p, GroupPointPrime((0, 0, 1), 0)) == pytest.approx(math.cos(2), abs=1e-15)
    zero = 2.404825557695773
    q = SphericalParams.singular_prime(1.0, 0.0)
    assert abs(phi_prime(q, GroupPointPrime((zero, 0, 0.3), 5.0))) <= 1e-9
    with pytest.raises(ValueError):
        phi_prime(SphericalParams.singular(1.0), IDENTITY_PRIME)


def test_wrong_rule_domain():
    with pytest.raises(ValueError):
        phi(REGULAR[0], IDENTITY, gauss_legendre(8))
    with pytest.raises(ValueError):
        phi_batch(PRIME[0], np.zeros((1, 6)))


def test_imaginary_part_guard():
    lopsided = QuadRule(np.array([[0.0, 0.0, 1.0]]), np.array([1.0]), "sphere")
    with pytest.raises(ArithmeticError):
        phi(SphericalParams.regular(1.0, 0, 0.0), GroupPoint((0, 0, 0), (0, 0, 1)), lopsided)


@pytest.mark.parametrize("params", REGULAR + SINGULAR)
def test_bounded(params):
    Z = np.random.default_rng(1).uniform(-3, 3, (1000, 6))
    assert np.max(np.abs(phi_batch(params, Z))) <= 1 + 1e-10


@pytest.mark.parametrize("params", PRIME)
def test_bounded_prime(params):
    Z = np.random.default_rng(2).uniform(-3, 3, (1000, 4))
    assert np.max(np.abs(phi_prime_batch(params, Z))) <= 1 + 1e-10


@pytest.mark.parametrize("params", REGULAR + SINGULAR)
def test_k_invariant(params):
    rng = np.random.default_rng(3)
    for _ in range(5):
        g = GroupPoint.from_coords(rng.uniform(-1, 1, 6))
        k = Rotation.random(rng)
        assert phi(params, act(k, g)) == pytest.approx(phi(params, g), abs=1e-10)


@pytest.mark.parametrize("params", PRIME)
def test_k_prime_invariant(params):
    rng = np.random.default_rng(4)
    for _ in range(20):
        g = GroupPointPrime.from_coords(rng.uniform(-1, 1, 4))
        k = Rotation.random_stabiliser(rng)
        assert phi_prime(params, act(k, g)) == pytest.approx(phi_prime(params, g), abs=1e-14)


def test_batch_matches_pointwise():
    Z = np.random.default_rng(5).uniform(-1, 1, (7, 6))
    for params in REGULAR:
        assert np.allclose(phi_batch(params, Z), [phi(params, z) for z in Z], rtol=0, atol=1e-14)


@pytest.mark.parametrize("params", [REGULAR[1], SINGULAR[1]])
def test_eigenvalue_identities(params):
    pts = np.random.default_rng(6).uniform(-1, 1, (2, 6))
    assert eigen_residual(params, pts) <= 1e-4


@pytest.mark.parametrize("params", PRIME)
def test_eigenvalue_identities_prime(params):
    pts = np.random.default_rng(7).uniform(-1, 1, (3, 4))
    assert eigen_residual(params, pts) <= 1e-4


def test_eigenvalues_pin_the_prime_reading():
    # cos(lam t + r x3) is an eigenfunction; reading the subscript as |x| instead breaks it
    from nilh.algebra import apply_numeric, generators
    from nilh.spectrum import embed

    params = SphericalParams.regular_prime(1.0, 1, 1.0)
    pts = np.random.default_rng(8).uniform(-1, 1, (2, 4))
    assert eigen_residual(params, pts) <= 1e-4

    def misread(Z):
        rho2 = Z[:, 0] ** 2 + Z[:, 1] ** 2
        return np.cos(Z[:, 3] + np.sqrt(rho2 + Z[:, 2] ** 2)) * laguerre(1, rho2 / 2)

    worst = 0.0
    for z in pts:
        base = misread(z[None, :])[0]
        for op, mu in zip(generators("N'"), embed(params).eta):
            v, _ = apply_numeric(op, misread, z, vectorized=True)
            worst = max(worst, abs(v - mu * base))
    assert worst > 1e-2


def test_functional_equation_trivial_and_sampled():
    params = SphericalParams.regular(1.0, 0, 0.0)
    g1 = GroupPoint((0.2, -0.1, 0.4), (0.3, 0.1, -0.2))
    assert functional_equation_residual(params, g1, IDENTITY, default_so3(8)) <= 1e-12
    g2 = GroupPoint((-0.5, 0.3, 0.1), (0.2, -0.4, 0.6))
    assert functional_equation_residual(params, g1, g2, default_so3(12)) <= 5e-3
    assert functional_equation_residual(SphericalParams.singular(1.0), g1, g2, default_so3(12)) <= 2e-3
    with pytest.raises(ValueError):
        functional_equation_residual(params, g1, g2, sphere_rule(8))
