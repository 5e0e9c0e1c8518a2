"""Plate and cylinder grids, nodal fields and the discrete operators acting on them.

The plate is the unit square ``D = (0, 1)²`` with ``n`` interior nodes per
axis and spacing ``h = 1 / (n + 1)``. The fixed cylinder is
``Ω = D × (0, 1)`` with ``m`` vertical intervals.
"""

from functools import cached_property

import numpy as np

from pullin._math.fft import sine_coefficients, sine_synthesis
from pullin._math.integrate import trapezoid_nd
from pullin.core.stencils import (
    extend,
    gradient as gradient_fast,
    laplacian as laplacian_fast,
    second_derivatives as second_derivatives_fast,
)


class PlateGrid:
    """Uniform grid on the unit square.

    Parameters
    ----------
    n : int
        Interior nodes per axis, at least 4.

    """

    def __init__(self, n):
        if int(n) != n or n < 4:
            raise ValueError(f"Plate grid needs n >= 4 interior nodes, got {n}")
        self._n = int(n)

    @property
    def n(self):
        return self._n

    @property
    def h(self):
        return 1.0 / (self._n + 1)

    @property
    def shape(self):
        """Shape of nodal arrays including the boundary ring."""
        return (self._n + 2, self._n + 2)

    @cached_property
    def nodes(self):
        """Node coordinates ``0, h, ..., 1`` along one axis, boundary included."""
        return np.arange(self._n + 2) * self.h

    @cached_property
    def mesh(self):
        """Coordinate arrays ``(x1, x2)`` of every node, boundary included."""
        return np.meshgrid(self.nodes, self.nodes, indexing="ij")

    def __eq__(self, other):
        return isinstance(other, PlateGrid) and other.n == self._n

    def __hash__(self):
        return hash(("PlateGrid", self._n))

    def __repr__(self):
        return f"PlateGrid(n={self._n})"


class CylinderGrid:
    """Tensor grid on the fixed cylinder ``D × (0, 1)``.

    Parameters
    ----------
    plate : PlateGrid
        Horizontal grid.
    m : int
        Vertical intervals, at least 4; ``eta_k = k / m``.

    """

    def __init__(self, plate, m):
        if int(m) != m or m < 4:
            raise ValueError(f"Cylinder grid needs m >= 4 layers, got {m}")
        self._plate = plate
        self._m = int(m)

    @classmethod
    def from_sizes(cls, n, m):
        return cls(PlateGrid(n), m)

    @property
    def plate(self):
        return self._plate

    @property
    def m(self):
        return self._m

    @property
    def h_eta(self):
        return 1.0 / self._m

    @property
    def shape(self):
        n2 = self._plate.n + 2
        return (n2, n2, self._m + 1)

    @property
    def n_unknowns(self):
        return self._plate.n**2 * (self._m - 1)

    @cached_property
    def eta(self):
        return np.arange(self._m + 1) * self.h_eta

    def lifting(self):
        """The nodal field ``phi = eta``, solution for every uniform gap."""
        return np.broadcast_to(self.eta, self.shape).copy()

    def __eq__(self, other):
        return (
            isinstance(other, CylinderGrid)
            and other.plate == self._plate
            and other.m == self._m
        )

    def __hash__(self):
        return hash(("CylinderGrid", self._plate.n, self._m))

    def __repr__(self):
        return f"CylinderGrid(n={self._plate.n}, m={self._m})"


class PlateField:
    """Nodal field on the plate grid.

    The values at the boundary ring are stored with the field. Hinged
    deformations have a zero ring; :meth:`from_interior` builds fields with
    a uniform ring value, which is how uniform-gap states ``v ≡ c`` are
    represented.

    Parameters
    ----------
    grid : PlateGrid
        Plate grid.
    full : numpy.ndarray
        Values at every node, shape ``grid.shape``.

    """

    def __init__(self, grid, full):
        full = np.array(full, dtype=float)
        if full.shape != grid.shape:
            raise ValueError(
                f"Expected nodal array of shape {grid.shape}, got {full.shape}"
            )
        if not np.all(np.isfinite(full)):
            raise ValueError("Plate field values must be finite")
        full.setflags(write=False)
        self._grid = grid
        self._full = full

    @classmethod
    def from_interior(cls, grid, values, boundary=0.0):
        """Field from interior values and a uniform boundary value."""
        full = np.full(grid.shape, float(boundary))
        full[1:-1, 1:-1] = values
        return cls(grid, full)

    @classmethod
    def from_function(cls, grid, func):
        """Samples ``func(x1, x2)`` at every node, boundary included."""
        x1, x2 = grid.mesh
        return cls(grid, np.broadcast_to(func(x1, x2), grid.shape))

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid, value):
        """Uniform-gap state, ``value`` everywhere including the boundary."""
        return cls(grid, np.full(grid.shape, float(value)))

    @property
    def grid(self):
        return self._grid

    @property
    def full(self):
        """Values at every node, boundary ring included (read-only)."""
        return self._full

    @property
    def values(self):
        """Values at the interior nodes (read-only)."""
        return self._full[1:-1, 1:-1]

    @property
    def is_hinged(self):
        """Whether the boundary ring vanishes."""
        ring = np.concatenate(
            [self._full[0], self._full[-1], self._full[:, 0], self._full[:, -1]]
        )
        return bool(np.all(ring == 0.0))

    def min(self):
        return float(self._full.min())

    def max(self):
        return float(self._full.max())

    def _new(self, full):
        return PlateField(self._grid, full)

    def __add__(self, other):
        if isinstance(other, PlateField):
            return self._new(self._full + other.full)
        return self._new(self._full + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PlateField):
            return self._new(self._full - other.full)
        return self._new(self._full - other)

    def __mul__(self, other):
        if isinstance(other, PlateField):
            return self._new(self._full * other.full)
        return self._new(self._full * other)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self._full)

    def __truediv__(self, other):
        if isinstance(other, PlateField):
            return self._new(self._full / other.full)
        return self._new(self._full / other)

    def __repr__(self):
        return (
            f"PlateField(n={self._grid.n}, min={self.min():.6g}, "
            f"max={self.max():.6g})"
        )


class SpectralField:
    """Unit-amplitude coefficients of the double sine expansion.

    ``coefficients[k - 1, l - 1]`` multiplies ``sin(k pi x1) sin(l pi x2)``.

    """

    def __init__(self, grid, coefficients):
        coefficients = np.array(coefficients, dtype=float)
        if coefficients.shape != (grid.n, grid.n):
            raise ValueError(
                f"Expected {grid.n}x{grid.n} coefficients, got {coefficients.shape}"
            )
        coefficients.setflags(write=False)
        self._grid = grid
        self._coefficients = coefficients

    @classmethod
    def mode(cls, grid, k, l, amplitude=1.0):
        c = np.zeros((grid.n, grid.n))
        c[k - 1, l - 1] = amplitude
        return cls(grid, c)

    @property
    def grid(self):
        return self._grid

    @property
    def coefficients(self):
        return self._coefficients

    def __repr__(self):
        return f"SpectralField(n={self._grid.n})"


def sine_mode(grid, k, l, amplitude=1.0):
    """Nodal samples of ``amplitude * sin(k pi x1) sin(l pi x2)``, ring exactly zero."""
    x1, x2 = grid.mesh
    values = amplitude * np.sin(k * np.pi * x1) * np.sin(l * np.pi * x2)
    return PlateField.from_interior(grid, values[1:-1, 1:-1])


def gradient(v):
    """Central differences ``(d1 v, d2 v)`` at every node.

    Boundary nodes use the ghost layer obtained by odd reflection about the
    boundary value, which is second order for fields in the sine span.

    """
    grid = v.grid
    d1, d2 = gradient_fast(extend(v.full), grid.h)
    return PlateField(grid, d1), PlateField(grid, d2)


def laplacian(v):
    """Five-point Laplacian at every node."""
    grid = v.grid
    return PlateField(grid, laplacian_fast(extend(v.full), grid.h))


def second_derivatives(v):
    """Second differences ``(d11 v, d22 v, d12 v)`` at every node."""
    grid = v.grid
    d11, d22, d12 = second_derivatives_fast(extend(v.full), grid.h)
    return PlateField(grid, d11), PlateField(grid, d22), PlateField(grid, d12)


def mixed_second(v):
    """Cross-stencil approximation of ``d1 d2 v``."""
    return second_derivatives(v)[2]


def to_spectral(v):
    """Double sine coefficients of the interior samples of ``v``.

    The boundary ring does not enter: the transform is the projection onto the
    sine span, which vanishes on the boundary.

    """
    return SpectralField(v.grid, sine_coefficients(v.values))


def to_nodal(c):
    """Hinged nodal field of a double sine series."""
    return PlateField.from_interior(c.grid, sine_synthesis(c.coefficients))


def integrate_plate(v):
    """Composite trapezoidal rule over ``D``, boundary ring included."""
    h = v.grid.h
    return trapezoid_nd(v.full, (h, h))


def integrate_cylinder(grid, w):
    """Composite trapezoidal rule over ``Ω`` of a nodal array of shape ``grid.shape``."""
    w = np.asarray(w, dtype=float)
    if w.shape != grid.shape:
        raise ValueError(f"Expected shape {grid.shape}, got {w.shape}")
    h = grid.plate.h
    return trapezoid_nd(w, (h, h, grid.h_eta))


def lq_norm(v, q=2):
    """Discrete ``L_q(D)`` norm by trapezoidal quadrature; ``q = inf`` is the max norm."""
    if np.isinf(q):
        return float(np.abs(v.full).max())
    return integrate_plate(PlateField(v.grid, np.abs(v.full) ** q)) ** (1 / q)


def w2q_norm(v, q=3):
    r"""Discrete proxy of the :math:`W^2_q(D)` norm.

    Sum of the discrete :math:`L_q` norms of ``v``, both first differences and
    all second differences (the mixed one counted twice, as
    :math:`\partial_1 \partial_2 v` and :math:`\partial_2 \partial_1 v`).

    """
    d1, d2 = gradient(v)
    d11, d22, d12 = second_derivatives(v)
    terms = [v, d1, d2, d11, d22, d12, d12]
    if np.isinf(q):
        return float(max(lq_norm(t, q) for t in terms))
    return float(sum(lq_norm(t, q) ** q for t in terms) ** (1 / q))
