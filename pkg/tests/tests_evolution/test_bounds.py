import pytest

from pullin.energy import EnergyBreakdown, electrostatic_energy, mechanical_energy
from pullin.evolution.bounds import (
    BoundReport,
    G_l1_bound,
    check_bounds,
    energy_lower_bound,
    energy_offset,
    gradient_norm_squared,
)
from pullin.grid import PlateField
from pullin.potential import compute_g, solve_transformed_potential


def test_bounds_of_flat_plate(params, plate):
    u = PlateField.zeros(plate)

    assert gradient_norm_squared(u) == 0.0
    assert G_l1_bound(u, params) == pytest.approx(6.0)
    assert energy_lower_bound(u, params, 0.0) == pytest.approx(-4.5)
    assert energy_offset(u, params) == pytest.approx(4.5)


def test_bounds_hold_for_small_state(params, random_hinged, cylinder):
    u = random_hinged
    phi = solve_transformed_potential(u, params, cylinder)
    g = compute_g(u, params, phi=phi)
    energy = EnergyBreakdown(
        mechanical_energy(u, params),
        electrostatic_energy(u, phi, params),
        params.lam,
    )

    report = check_bounds(u, g, energy, params, energy.e_total)

    assert report.violations() == []
    assert report.energy >= report.energy_bound


def test_violations_are_named():
    report = BoundReport(
        G_l1=10.0,
        G_bound=6.0,
        energy=-10.0,
        energy_bound=-5.0,
        energy_weak_bound=-20.0,
        dissipation_lhs=1.0,
        dissipation_rhs=2.0,
    )

    assert report.violations() == ["G_l1", "energy_lower"]
    assert report.violations(atol=10.0) == []
