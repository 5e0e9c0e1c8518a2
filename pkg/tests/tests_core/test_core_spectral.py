import numpy as np
from numpy.testing import assert_allclose
import pytest
from scipy.integrate import quad

from pullin.core.spectral import (
    etd1_dissipation,
    etd1_step,
    laplacian_symbol,
    phi1,
    plate_symbol,
)


def test_laplacian_symbol():
    expected = np.pi**2 * np.array([[2.0, 5.0], [5.0, 8.0]])

    assert_allclose(laplacian_symbol(2), expected)


@pytest.mark.parametrize(
    "tau, expected", [(0.0, 389.636364136), (1.0, 409.375572938)]
)
def test_smallest_plate_eigenvalue(tau, expected):
    assert_allclose(plate_symbol(1, 1.0, tau)[0, 0], expected, rtol=1e-9)


def test_phi1_at_zero_is_one():
    assert_allclose(phi1(np.zeros(3)), 1.0)


def test_phi1_is_continuous_across_series_switch():
    z = np.array([1e-5 * (1 - 1e-9), 1e-5 * (1 + 1e-9)])
    values = phi1(z)

    assert_allclose(values[0], values[1], rtol=1e-12)
    assert_allclose(values, -np.expm1(-z) / z, rtol=1e-12)


def test_phi1_large_argument():
    z = np.array([[10.0, 100.0]])

    assert_allclose(phi1(z), (1 - np.exp(-z)) / z)


def test_etd1_step_two_halves_equal_one_step():
    rng = np.random.default_rng(0)
    u_hat = rng.standard_normal((4, 4))
    g_hat = rng.standard_normal((4, 4))
    mu = plate_symbol(4, 1.0, 0.5)
    dt = 1e-3

    full = etd1_step(u_hat, g_hat, mu, dt, 2.0)
    half = etd1_step(etd1_step(u_hat, g_hat, mu, dt / 2, 2.0), g_hat, mu, dt / 2, 2.0)

    assert_allclose(half, full, rtol=1e-12, atol=1e-14)


def test_etd1_step_without_source_is_exponential_decay():
    u_hat = np.ones((3, 3))
    mu = plate_symbol(3, 1.0, 0.0)

    result = etd1_step(u_hat, np.zeros((3, 3)), mu, 1e-3, 1.0)

    assert_allclose(result, np.exp(-1e-3 * mu))


def test_etd1_dissipation_matches_quadrature():
    mu = plate_symbol(1, 1.0, 0.0)
    u_hat = np.array([[0.1]])
    g_hat = np.array([[1.5]])
    lam, dt = 3.0, 2e-3
    rate = mu[0, 0] * u_hat[0, 0] + lam * g_hat[0, 0]

    expected, _ = quad(lambda s: (rate * np.exp(-s * mu[0, 0])) ** 2, 0, dt)

    assert_allclose(
        etd1_dissipation(u_hat, g_hat, mu, dt, lam), 0.25 * expected, rtol=1e-10
    )


def test_etd1_dissipation_vanishes_at_rest():
    mu = plate_symbol(3, 1.0, 0.0)
    zero = np.zeros((3, 3))

    assert etd1_dissipation(zero, zero, mu, 1e-3, 1.0) == 0.0
