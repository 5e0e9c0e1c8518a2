import numpy as np
from numpy.testing import assert_allclose
import pytest

from pullin.grid import (
    CylinderGrid,
    PlateField,
    PlateGrid,
    SpectralField,
    gradient,
    integrate_cylinder,
    integrate_plate,
    laplacian,
    lq_norm,
    mixed_second,
    sine_mode,
    to_nodal,
    to_spectral,
    w2q_norm,
)


@pytest.mark.parametrize("n", [3, 4.5, -1])
def test_plate_grid_rejects_small_sizes(n):
    with pytest.raises(ValueError, match="n >= 4"):
        PlateGrid(n)


def test_cylinder_grid_rejects_small_sizes():
    with pytest.raises(ValueError, match="m >= 4"):
        CylinderGrid.from_sizes(8, 2)


def test_grid_geometry():
    grid = CylinderGrid.from_sizes(9, 5)

    assert grid.plate.h == pytest.approx(0.1)
    assert grid.h_eta == pytest.approx(0.2)
    assert grid.shape == (11, 11, 6)
    assert grid.n_unknowns == 81 * 4
    assert_allclose(grid.plate.nodes[[0, -1]], [0.0, 1.0])
    assert grid == CylinderGrid(PlateGrid(9), 5)


def test_plate_field_is_read_only(plate):
    v = PlateField.zeros(plate)

    with pytest.raises(ValueError):
        v.full[1, 1] = 1.0


def test_plate_field_rejects_wrong_shape(plate):
    with pytest.raises(ValueError, match="shape"):
        PlateField(plate, np.zeros((3, 3)))


def test_plate_field_rejects_non_finite_values(plate):
    full = np.zeros(plate.shape)
    full[2, 2] = np.nan

    with pytest.raises(ValueError, match="finite"):
        PlateField(plate, full)


def test_boundary_ring(plate):
    hinged = PlateField.from_interior(plate, np.ones((plate.n, plate.n)))
    uniform = PlateField.constant(plate, 0.5)

    assert hinged.is_hinged
    assert not uniform.is_hinged
    assert_allclose(uniform.full, 0.5)
    assert hinged.values.shape == (plate.n, plate.n)


def test_arithmetic_keeps_grid(bump):
    v = 2 * bump - bump / 2 + 1.0

    assert v.grid == bump.grid
    assert_allclose(v.full, 1.5 * bump.full + 1.0)
    assert_allclose((-bump).full, -bump.full)


def test_single_mode_has_unit_coefficient(plate):
    c = to_spectral(sine_mode(plate, 2, 3)).coefficients
    expected = np.zeros((plate.n, plate.n))
    expected[1, 2] = 1.0

    assert_allclose(c, expected, atol=1e-13)


def test_zero_field_has_zero_coefficients(plate):
    assert_allclose(to_spectral(PlateField.zeros(plate)).coefficients, 0.0)


def test_spectral_round_trip(plate):
    rng = np.random.default_rng(3)
    v = PlateField.from_interior(plate, rng.standard_normal((plate.n, plate.n)))

    assert_allclose(to_nodal(to_spectral(v)).full, v.full, atol=1e-12)


def test_spectral_field_mode(plate):
    c = SpectralField.mode(plate, 1, 1, 0.3)

    assert_allclose(to_nodal(c).full, sine_mode(plate, 1, 1, 0.3).full, atol=1e-14)


def test_integrate_constants():
    grid = CylinderGrid.from_sizes(10, 6)
    inside = PlateField.from_interior(grid.plate, np.ones((10, 10)))

    assert integrate_plate(PlateField.constant(grid.plate, 1.0)) == pytest.approx(1.0)
    assert integrate_plate(inside) < 1.0
    assert integrate_cylinder(grid, np.ones(grid.shape)) == pytest.approx(1.0)


def test_integrate_sine_mode():
    v = sine_mode(PlateGrid(32), 1, 1)

    assert integrate_plate(v) == pytest.approx(4 / np.pi**2, rel=5e-3)


def test_integrate_cylinder_checks_shape():
    grid = CylinderGrid.from_sizes(6, 4)

    with pytest.raises(ValueError, match="shape"):
        integrate_cylinder(grid, np.ones((8, 8)))


def test_gradient_of_zero(plate):
    d1, d2 = gradient(PlateField.zeros(plate))

    assert_allclose(d1.full, 0.0)
    assert_allclose(d2.full, 0.0)


def test_gradient_of_sine_mode_converges():
    def error(n):
        grid = PlateGrid(n)
        x1, x2 = grid.mesh
        d1, _ = gradient(sine_mode(grid, 1, 1))
        return np.abs(d1.full - np.pi * np.cos(np.pi * x1) * np.sin(np.pi * x2)).max()

    assert 3.5 < error(32) / error(64) < 4.3


def test_laplacian_of_eigenmode():
    grid = PlateGrid(32)
    v = sine_mode(grid, 1, 1)

    assert_allclose(laplacian(v).full, -2 * np.pi**2 * v.full, atol=0.02)


def test_mixed_second_of_bilinear(plate):
    v = PlateField.from_function(plate, lambda x1, x2: x1 * x2)

    assert_allclose(mixed_second(v).values, 1.0)


def test_lq_norms(plate):
    v = PlateField.constant(plate, -2.0)

    assert lq_norm(v, np.inf) == 2.0
    assert lq_norm(v, 2) == pytest.approx(2.0)
    assert lq_norm(v, 3) == pytest.approx(2.0)


def test_w2q_norm_is_positively_homogeneous(random_hinged):
    assert w2q_norm(PlateField.zeros(random_hinged.grid)) == 0.0
    assert w2q_norm(3 * random_hinged) == pytest.approx(3 * w2q_norm(random_hinged))
    assert w2q_norm(random_hinged, np.inf) > 0
