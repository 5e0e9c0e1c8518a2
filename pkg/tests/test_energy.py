import numpy as np
from numpy.testing import assert_allclose
import pytest

from pullin.energy import (
    EnergyBreakdown,
    electrostatic_energy,
    electrostatic_energy_surface,
    energy_equality_monitor,
    mechanical_energy,
    shape_derivative_check,
    shape_derivative_sides,
    total_energy,
)
from pullin.evolution.stepper import TimeSettings, simulate
from pullin.evolution.trace import Sample, SimulationTrace
from pullin.grid import CylinderGrid, PlateField, PlateGrid, sine_mode
from pullin.parameters import Parameters
from pullin.potential import PotentialField, solve_transformed_potential
from pullin.warnings import InitialLayerWarning


def test_energy_breakdown():
    e = EnergyBreakdown(2.0, 1.5, 0.5, dissipation=0.25, time=1.0)

    assert e.e_total == pytest.approx(1.25)
    assert e.balance == pytest.approx(1.5)


def test_mechanical_energy_of_zero(params, plate):
    assert mechanical_energy(PlateField.zeros(plate), params) == 0.0
    assert mechanical_energy(PlateField.zeros(plate), params, "stencil") == 0.0


@pytest.mark.parametrize("sigma", [-0.5, 0.3, 0.9])
def test_mechanical_energy_of_first_mode(sigma):
    p = Parameters(sigma=sigma)
    v = sine_mode(PlateGrid(32), 1, 1)

    assert mechanical_energy(v, p) == pytest.approx(np.pi**4 / 2, rel=1e-12)
    assert mechanical_energy(v, p, method="stencil") == pytest.approx(
        np.pi**4 / 2, rel=1e-2
    )


@pytest.mark.parametrize("c", [0.5, -0.3])
def test_mechanical_energy_of_uniform_gap(params, plate, c):
    v = PlateField.constant(plate, c)

    assert mechanical_energy(v, params) == 0.0
    assert mechanical_energy(v, params, method="stencil") == 0.0


def test_mechanical_energy_is_quadratic(random_hinged, params):
    p = params.replace(tau=0.7)

    assert mechanical_energy(2 * random_hinged, p) == pytest.approx(
        4 * mechanical_energy(random_hinged, p), rel=1e-12
    )


def test_mechanical_energy_rejects_unknown_method(bump, params):
    with pytest.raises(ValueError, match="Unknown method"):
        mechanical_energy(bump, params, method="fem")


@pytest.mark.parametrize("c, expected", [(0.0, 1.0), (1.0, 0.5), (-0.5, 2.0)])
def test_electrostatic_energy_of_uniform_gap(params, cylinder, c, expected):
    v = PlateField.constant(cylinder.plate, c)
    phi = solve_transformed_potential(v, params, cylinder)

    assert electrostatic_energy(v, phi, params) == pytest.approx(expected, rel=1e-8)
    assert electrostatic_energy(v, phi, params, method="physical") == pytest.approx(
        expected, rel=1e-8
    )
    assert electrostatic_energy_surface(v, phi, params) == pytest.approx(
        expected, rel=1e-8
    )


def test_electrostatic_energy_forms_agree(params):
    grid = CylinderGrid.from_sizes(16, 16)
    v = sine_mode(grid.plate, 1, 1, 0.1)
    phi = solve_transformed_potential(v, params, grid)
    transformed = electrostatic_energy(v, phi, params)

    assert electrostatic_energy(v, phi, params, method="physical") == pytest.approx(
        transformed, rel=2e-2
    )
    assert electrostatic_energy_surface(v, phi, params) == pytest.approx(
        transformed, rel=2e-2
    )


def test_electrostatic_energy_rejects_unknown_method(params, cylinder):
    v = PlateField.zeros(cylinder.plate)

    with pytest.raises(ValueError, match="Unknown method"):
        electrostatic_energy(v, PotentialField.lifting(cylinder), params, "bem")


@pytest.mark.parametrize("lam, expected", [(1.0, -1.0), (0.5, -0.5)])
def test_total_energy_of_flat_plate(cylinder, lam, expected):
    p = Parameters(lam=lam)
    u = PlateField.zeros(cylinder.plate)
    e = total_energy(u, PotentialField.lifting(cylinder), p)

    assert e.e_total == pytest.approx(expected)


@pytest.mark.parametrize("lam, c", [(1.0, 0.5), (0.5, -0.3)])
def test_total_energy_of_uniform_gap(cylinder, lam, c):
    p = Parameters(lam=lam)
    v = PlateField.constant(cylinder.plate, c)
    e = total_energy(v, solve_transformed_potential(v, p, cylinder), p)

    assert e.e_mech == 0.0
    assert e.e_total == pytest.approx(-lam / (1 + c), rel=1e-10)


def test_shape_derivative_of_static_path(params, bump, cylinder):
    def path(t):
        return bump

    def dpath(t):
        return PlateField.zeros(bump.grid)

    difference, formula = shape_derivative_sides(
        path, dpath, params, 0.0, 1e-3, cylinder
    )

    assert difference == 0.0
    assert formula == 0.0
    assert shape_derivative_check(path, dpath, params, 0.0, 1e-3, cylinder) == 0.0


def test_shape_derivative_of_uniform_gap(params, cylinder):
    plate = cylinder.plate

    def path(t):
        return PlateField.constant(plate, -0.2 + 0.1 * t)

    def dpath(t):
        return PlateField.constant(plate, 0.1)

    difference, formula = shape_derivative_sides(
        path, dpath, params, 0.0, 1e-3, cylinder
    )

    assert formula == pytest.approx(-0.1 / 0.8**2, rel=1e-8)
    assert difference == pytest.approx(formula, rel=1e-6)
    assert shape_derivative_check(path, dpath, params, 0.0, 1e-3, cylinder) <= 1e-6


def _sine_path(plate):
    def path(t):
        return sine_mode(plate, 1, 1, 0.1 * (1 + t))

    def dpath(t):
        return sine_mode(plate, 1, 1, 0.1)

    return path, dpath


@pytest.mark.slow
def test_shape_derivative_of_sine_path(params):
    grid = CylinderGrid.from_sizes(24, 24)
    path, dpath = _sine_path(grid.plate)

    assert shape_derivative_check(path, dpath, params, 0.0, 1e-3, grid) <= 1e-2


def test_drift_vanishes_at_rest(cylinder):
    p = Parameters(lam=0.0)
    trace = simulate(PlateField.zeros(cylinder.plate), p, dt=1e-4, t_end=2e-3)

    assert_allclose(energy_equality_monitor(trace), 0.0)


def test_drift_of_linear_decay(cylinder):
    p = Parameters(lam=0.0)
    u0 = sine_mode(cylinder.plate, 1, 1, 0.1)
    trace = simulate(u0, p, dt=1e-4, t_end=5e-3, grid=cylinder)

    assert energy_equality_monitor(trace).max() <= 1e-6


def _trace_with_drift(first):
    trace = SimulationTrace(0.05, 1e-3)
    for t, balance in [(0.0, 1.0), (1e-3, 1.0 + first), (2e-3, 1.0 + 1e-3)]:
        trace.append(
            Sample(
                t, 0.0, 0.0, 0.0, 0.0, EnergyBreakdown(balance, 0.0, 0.0), 0.0, 0.0, 0.0
            )
        )
    trace.first_step_drift = first
    return trace


def test_initial_layer_is_reported():
    with pytest.warns(InitialLayerWarning):
        drift = energy_equality_monitor(_trace_with_drift(9e-4))

    assert_allclose(drift, [0.0, 9e-4, 1e-3], atol=1e-15)


def test_initial_layer_not_reported_for_late_drift(recwarn):
    energy_equality_monitor(_trace_with_drift(1e-5))

    assert not [w for w in recwarn if issubclass(w.category, InitialLayerWarning)]


def test_shape_derivative_of_variational_force(params, cylinder):
    # the variational force is the exact gradient of the discrete energy
    path, dpath = _sine_path(cylinder.plate)

    error = shape_derivative_check(
        path, dpath, params, 0.0, 1e-3, cylinder, force="variational"
    )

    assert error <= 1e-5


def test_electrostatic_energy_nodal_form(params):
    grid = CylinderGrid.from_sizes(16, 16)
    v = sine_mode(grid.plate, 1, 1, 0.1)
    phi = solve_transformed_potential(v, params, grid)

    assert electrostatic_energy(v, phi, params, method="nodal") == pytest.approx(
        electrostatic_energy(v, phi, params), rel=2e-2
    )


def test_drift_of_variational_force(cylinder):
    p = Parameters(lam=1.0)
    u0 = PlateField.zeros(cylinder.plate)

    def drift(force):
        settings = TimeSettings(dt=1e-4, t_end=0.01, force=force)
        trace = simulate(u0, p, settings=settings, grid=cylinder)
        return energy_equality_monitor(trace).max()

    variational = drift("variational")

    assert variational <= 1e-5
    assert variational < drift("trace")

