from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
import numpy as np
from numpy.testing import assert_allclose
import pytest

from pullin.grid import PlateField, PlateGrid, sine_mode, to_spectral
from pullin.parameters import Parameters
from pullin.plate import (
    OperatorSpectrum,
    apply_A,
    apply_A_stencil,
    boundary_identity_check,
    duhamel_dissipation,
    duhamel_step,
    laplacian_norm_squared,
    quadratic_form,
    semigroup,
    single_mode_boundary_residual,
    spectrum_check,
)
from pullin.verification import boundary_identity_constant

MU11 = 4 * np.pi**4

GRID = PlateGrid(6)
fields = arrays(
    float,
    (GRID.n, GRID.n),
    elements=st.floats(-1, 1, allow_nan=False, allow_infinity=False),
)


@pytest.mark.parametrize(
    "tau, expected", [(0.0, 389.636364136), (1.0, 409.375572938)]
)
def test_min_eigenvalue(tau, expected):
    spectrum = OperatorSpectrum(Parameters(tau=tau), 5)

    assert spectrum.min_eigenvalue == pytest.approx(expected, rel=1e-9)
    assert spectrum.eigenvalue(1, 1) == spectrum.min_eigenvalue
    assert spectrum.eigenvalue(1, 2) == spectrum.eigenvalue(2, 1)


def test_spectrum_table():
    table = OperatorSpectrum(Parameters(), 3).to_table()

    assert table.colnames == ["k", "l", "mu"]
    assert len(table) == 9
    assert table["mu"][0] == pytest.approx(MU11)
    assert list(table["l"][:3]) == [1, 2, 3]


def test_spectrum_needs_modes():
    with pytest.raises(ValueError):
        OperatorSpectrum(Parameters(), 0)


def test_A_on_first_mode(params, plate):
    v = sine_mode(plate, 1, 1)

    assert_allclose(apply_A(v, params).full, MU11 * v.full, atol=1e-9)
    assert_allclose(apply_A(PlateField.zeros(plate), params).full, 0.0)


def test_stencil_operator_approximates_spectral_one():
    grid = PlateGrid(32)
    p = Parameters(tau=1.0)
    v = sine_mode(grid, 1, 1)

    assert_allclose(
        apply_A_stencil(v, p).full, apply_A(v, p).full, rtol=0, atol=1e-2 * 410
    )


@settings(deadline=None, max_examples=30)
@given(fields, fields, st.floats(-3, 3))
def test_A_is_linear(a, b, s):
    p = Parameters(tau=0.5)
    u = PlateField.from_interior(GRID, a)
    v = PlateField.from_interior(GRID, b)

    lhs = apply_A(u + s * v, p).full
    rhs = apply_A(u, p).full + s * apply_A(v, p).full

    assert_allclose(lhs, rhs, atol=1e-8 * (1 + np.abs(rhs).max()))


@settings(deadline=None, max_examples=30)
@given(fields)
def test_A_is_positive(a):
    p = Parameters(tau=0.5)
    v = PlateField.from_interior(GRID, a)

    assert quadratic_form(v, p) >= 0
    assert quadratic_form(v, p) >= p.beta * laplacian_norm_squared(v) - 1e-9


def test_semigroup_at_zero_is_identity(random_hinged, params):
    assert_allclose(semigroup(random_hinged, 0.0, params).full, random_hinged.full)


def test_semigroup_decay_of_first_mode(plate, params):
    v = sine_mode(plate, 1, 1)
    decayed = semigroup(v, 1e-3, params)

    assert_allclose(decayed.full, 0.67730 * v.full, atol=1e-5)


def test_semigroup_law(random_hinged, params):
    twice = semigroup(semigroup(random_hinged, 1e-3, params), 2e-3, params)
    once = semigroup(random_hinged, 3e-3, params)

    assert_allclose(twice.full, once.full, atol=1e-12)


def test_semigroup_rejects_negative_time(bump, params):
    with pytest.raises(ValueError):
        semigroup(bump, -1.0, params)


def test_duhamel_step_without_voltage_is_semigroup(random_hinged, params):
    p = params.replace(lam=0.0)
    g = PlateField.constant(random_hinged.grid, 1.0)

    assert_allclose(
        duhamel_step(random_hinged, g, 1e-3, p).full,
        semigroup(random_hinged, 1e-3, p).full,
        atol=1e-14,
    )


def test_duhamel_step_from_rest(plate, params):
    p = params.replace(lam=2.0)
    g = PlateField.constant(plate, 1.0)
    dt = 1e-3
    spectrum = OperatorSpectrum.on_grid(plate, p)

    u_hat = to_spectral(duhamel_step(PlateField.zeros(plate), g, dt, p)).coefficients
    g_hat = to_spectral(g).coefficients
    expected = -p.lam * (1 - np.exp(-dt * spectrum.mu)) / spectrum.mu * g_hat

    assert_allclose(u_hat, expected, atol=1e-14)


def test_duhamel_half_steps(random_hinged, params):
    g = PlateField.constant(random_hinged.grid, 1.0)
    full = duhamel_step(random_hinged, g, 2e-3, params)
    half = duhamel_step(duhamel_step(random_hinged, g, 1e-3, params), g, 1e-3, params)

    assert_allclose(half.full, full.full, atol=1e-12)


def test_duhamel_step_rejects_bad_time_step(bump, params):
    with pytest.raises(ValueError):
        duhamel_step(bump, bump, 0.0, params)


def test_dissipation_of_linear_decay(plate):
    p = Parameters(lam=0.0)
    v = sine_mode(plate, 1, 1, 0.1)
    dt = 1e-3
    # E_m drops by exactly the dissipated amount
    e0 = 0.5 * quadratic_form(v, p)
    e1 = 0.5 * quadratic_form(semigroup(v, dt, p), p)

    assert duhamel_dissipation(v, v, dt, p) == pytest.approx(e0 - e1, rel=1e-10)


def test_spectrum_check_report():
    report = spectrum_check(Parameters(), 8)

    assert report.passed
    assert report.min_eigenvalue == pytest.approx(report.expected_min, rel=1e-12)
    assert report.worst_ratio >= report.coercivity


@pytest.mark.parametrize("k, l", [(1, 1), (2, 3), (5, 1)])
def test_boundary_identity_stencil_residual_of_single_mode(k, l):
    grid = PlateGrid(16)
    residual = boundary_identity_check(sine_mode(grid, k, l))
    expected = single_mode_boundary_residual(grid, k, l)

    assert expected < 0
    assert residual == pytest.approx(expected, rel=1e-9)


def test_single_mode_residual_is_second_order():
    coarse = single_mode_boundary_residual(PlateGrid(15), 1, 2)
    fine = single_mode_boundary_residual(PlateGrid(31), 1, 2)

    assert coarse / fine == pytest.approx(4.0, rel=0.05)


def test_single_mode_residual_rejects_unresolved_mode():
    with pytest.raises(ValueError, match="not resolved"):
        single_mode_boundary_residual(PlateGrid(4), 5, 1)


@pytest.mark.parametrize("k, l", [(1, 1), (2, 3)])
def test_boundary_identity_spectral_form_of_single_mode(k, l):

    w = sine_mode(PlateGrid(16), k, l)

    assert abs(boundary_identity_check(w, method="spectral")) <= 1e-12 * (
        laplacian_norm_squared(w)
    )


def test_boundary_identity_of_zero(plate):
    zero = PlateField.zeros(plate)

    assert boundary_identity_check(zero) == 0.0
    assert boundary_identity_check(zero, method="spectral") == 0.0


def test_boundary_identity_residual_is_second_order():
    c16 = boundary_identity_constant(16)
    c32 = boundary_identity_constant(32)

    assert c16 > 0
    assert c32 / c16 == pytest.approx(1.0, abs=0.25)


def test_boundary_identity_rejects_unknown_method(bump):
    with pytest.raises(ValueError, match="Unknown method"):
        boundary_identity_check(bump, method="galerkin")
