r"""Electrostatic potential on the fixed cylinder and the plate nonlinearity.

Under :math:`T_v(x, z) = (x, (1 + z) / (1 + v(x)))` the potential in the
gap between the ground plate and the deformed plate becomes a function
:math:`\phi_v` on :math:`\Omega = D \times (0, 1)` solving
:math:`\mathcal{L}_v \phi_v = 0` with :math:`\phi_v = \eta` on
:math:`\partial \Omega`. The force on the plate is

.. math::

    g(v) = \frac{1 + \varepsilon^2 |\nabla v|^2}{(1 + v)^2}
        \left(\partial_\eta \phi_v(\cdot, 1)\right)^2 .

"""

import logging
import warnings

import numpy as np

from pullin._math.interpolate import multilinear_interp
from pullin._math.linalg import (
    LinearOperator,
    bicgstab,
    coo_matrix,
    norm,
    splu,
    spsolve,
)
from pullin.core.operator import (
    assemble_operator,
    coefficient_fields,
    unknown_columns,
)
from pullin.exceptions import (
    NonAdmissibleError,
    OutOfDomainError,
    SolverDivergenceError,
)
from pullin.grid import (
    CylinderGrid,
    PlateField,
    gradient,
    integrate_plate,
    laplacian,
    lq_norm,
    w2q_norm,
)
from pullin.warnings import MaximumPrincipleWarning

logger = logging.getLogger(__name__)

SOLVER_RTOL = 1e-10
DIRECT_SOLVE_LIMIT = 40_000
MAXIMUM_PRINCIPLE_TOL = 1e-8


def check_admissible(v):
    """Raises :class:`~pullin.exceptions.NonAdmissibleError` if ``min v <= -1``."""
    if not v.min() > -1:
        raise NonAdmissibleError(
            f"Deformation touches the ground plate, min v = {v.min():.6g}"
        )


def default_cylinder(v, grid=None):
    """Cylinder over the grid of ``v``, with ``m = n`` unless given."""
    if grid is None:
        return CylinderGrid(v.grid, v.grid.n)
    if grid.plate != v.grid:
        raise ValueError(f"Plate field lives on {v.grid}, cylinder is {grid}")
    return grid


def _relative_gradient(v):
    d1, d2 = gradient(v)
    gap = 1.0 + v.full
    return d1.full / gap, d2.full / gap


class OperatorCoefficients:
    r"""Nodal coefficients of :math:`\mathcal{L}_v` in divergence form.

    The symmetric matrix at each node is

    .. math::

        \alpha = \begin{pmatrix}
            \alpha_1 & 0 & \alpha_2 / 2 \\
            0 & \alpha_1 & \alpha_3 / 2 \\
            \alpha_2 / 2 & \alpha_3 / 2 & \alpha_4
        \end{pmatrix}

    and ``source`` is :math:`f = \mathcal{L}_v \eta`, the right hand side of
    the problem for :math:`\Phi = \phi - \eta`.

    """

    def __init__(self, grid, eps, alpha2, alpha3, alpha4, b1, b2, b3, source):
        self._grid = grid
        self._eps = eps
        self.alpha2 = alpha2
        self.alpha3 = alpha3
        self.alpha4 = alpha4
        self.b1 = b1
        self.b2 = b2
        self.b3 = b3
        self.source = source

    @property
    def grid(self):
        return self._grid

    @property
    def alpha1(self):
        return self._eps**2

    def alpha(self, i, j, k):
        """The 3x3 matrix at node ``(i, j, k)``."""
        a1 = self.alpha1
        a2 = self.alpha2[i, j, k] / 2
        a3 = self.alpha3[i, j, k] / 2
        return np.array(
            [
                [a1, 0.0, a2],
                [0.0, a1, a3],
                [a2, a3, self.alpha4[i, j, k]],
            ]
        )

    def b(self, i, j, k):
        return np.array([self.b1[i, j, k], self.b2[i, j, k], self.b3[i, j, k]])

    def leading_minors(self):
        """Leading principal minors of alpha at every node, by cofactor expansion."""
        a1 = self.alpha1
        a2 = self.alpha2 / 2
        a3 = self.alpha3 / 2
        d1 = np.full(self.alpha4.shape, a1)
        d2 = np.full(self.alpha4.shape, a1 * a1)
        d3 = a1 * a1 * self.alpha4 - a1 * (a2**2 + a3**2)
        return d1, d2, d3

    def is_positive_definite(self, n_samples=None, seed=0):
        """Sylvester criterion on every node, or on ``n_samples`` random ones."""
        d1, d2, d3 = self.leading_minors()
        if n_samples is not None:
            rng = np.random.default_rng(seed)
            idx = rng.integers(0, d3.size, size=n_samples)
            d1, d2, d3 = d1.flat[idx], d2.flat[idx], d3.flat[idx]
        return bool(np.all(d1 > 0) and np.all(d2 > 0) and np.all(d3 > 0))


def assemble_coefficients(v, p, grid=None):
    """Divergence-form coefficients of the transformed operator for ``v``.

    Parameters
    ----------
    v : ~pullin.grid.PlateField
        Admissible deformation.
    p : ~pullin.parameters.Parameters
        Model constants.
    grid : ~pullin.grid.CylinderGrid, optional
        Cylinder grid, ``m = n`` by default.

    Returns
    -------
    OperatorCoefficients

    """
    check_admissible(v)
    grid = default_cylinder(v, grid)
    V1, V2 = _relative_gradient(v)
    alpha2, alpha3, alpha4, b1, b2, b3 = coefficient_fields(
        v.full, V1, V2, grid.eta, p.eps
    )
    # div V = Δv / (1 + v) - |V|²
    VV = V1**2 + V2**2
    div_V = laplacian(v).full / (1.0 + v.full) - VV
    source = p.eps**2 * grid.eta * (VV - div_V)[..., None]
    return OperatorCoefficients(
        grid, p.eps, alpha2, alpha3, alpha4, b1, b2, b3, source
    )


def assemble_system(v, p, grid=None):
    """Sparse discrete operator and the indices of the unknowns.

    Returns
    -------
    L_full : scipy.sparse.csr_matrix
        Rows over the unknown nodes, columns over every node of the cylinder
        grid (flattened in C order).
    unknowns : numpy.ndarray
        Column indices of the unknown nodes, in row order.

    """
    check_admissible(v)
    grid = default_cylinder(v, grid)
    n, m = grid.plate.n, grid.m
    d1, d2 = gradient(v)
    S = d1.full**2 + d2.full**2
    rows, cols, vals = assemble_operator(v.full, S, n, m, p.eps)
    shape = (grid.n_unknowns, int(np.prod(grid.shape)))
    L_full = coo_matrix((vals, (rows, cols)), shape=shape).tocsr()
    return L_full, unknown_columns(n, m)


class PotentialField:
    """Transformed potential at every node of the cylinder grid.

    Parameters
    ----------
    grid : ~pullin.grid.CylinderGrid
        Cylinder grid.
    values : numpy.ndarray
        Nodal values, shape ``grid.shape``, boundary layers included.
    residual : float, optional
        Relative residual of the solve that produced the field.
    iterations : int, optional
        Krylov iterations, 0 for direct solves.

    """

    def __init__(self, grid, values, residual=0.0, iterations=0):
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            raise ValueError(
                f"Expected nodal array of shape {grid.shape}, got {values.shape}"
            )
        self._grid = grid
        self._values = values
        self.residual = residual
        self.iterations = iterations

    @classmethod
    def lifting(cls, grid):
        """The field ``phi = eta``."""
        return cls(grid, grid.lifting())

    @property
    def grid(self):
        return self._grid

    @property
    def values(self):
        return self._values

    @property
    def shifted(self):
        """The homogeneous part ``Phi = phi - eta``."""
        return self._values - self._grid.eta

    def boundary_error(self):
        """Largest deviation from ``phi = eta`` on the boundary of the cylinder."""
        Phi = self.shifted
        faces = [
            Phi[0],
            Phi[-1],
            Phi[:, 0],
            Phi[:, -1],
            Phi[..., 0],
            Phi[..., -1],
        ]
        return float(max(np.abs(face).max() for face in faces))

    def maximum_principle_violation(self):
        """Amount by which the values leave ``[0, 1]``, zero if they do not."""
        return float(max(0.0, -self._values.min(), self._values.max() - 1.0))

    def __repr__(self):
        return f"PotentialField({self._grid!r}, residual={self.residual:.3e})"


def _jacobi(A):
    diag = A.diagonal()
    return LinearOperator(A.shape, matvec=lambda x: x / diag, dtype=float)


class FactorizationCache:
    """Sparse LU factorization kept between solves for nearby deformations.

    Successive time steps change the operator only slightly, so the
    factorization of an earlier step is a good preconditioner for the
    current one. It is refreshed when the preconditioned iteration needs
    more than ``max_iterations`` steps or fails to converge.

    Parameters
    ----------
    max_iterations : int
        Iterations allowed before the factorization is refreshed.

    """

    def __init__(self, max_iterations=30):
        if max_iterations < 1:
            raise ValueError(
                f"max_iterations must be positive, got {max_iterations}"
            )
        self.max_iterations = int(max_iterations)
        self.factorizations = 0
        self._lu = None
        self._shape = None

    def ready(self, A):
        return self._lu is not None and self._shape == A.shape

    @property
    def preconditioner(self):
        lu = self._lu
        return LinearOperator(self._shape, matvec=lu.solve, dtype=float)

    def refresh(self, A):
        """Factorizes ``A`` and keeps the factors."""
        self._lu = splu(A.tocsc())
        self._shape = A.shape
        self.factorizations += 1
        logger.debug("Factorization %d of the potential operator", self.factorizations)
        return self._lu

    def __repr__(self):
        return (
            f"FactorizationCache(max_iterations={self.max_iterations}, "
            f"factorizations={self.factorizations})"
        )


def _iterate(A, b, guess, rtol, M, maxiter):
    iterations = 0

    def count(_xk):
        nonlocal iterations
        iterations += 1

    x, info = bicgstab(
        A,
        b,
        x0=guess,
        rtol=rtol / 2,
        atol=0.0,
        maxiter=maxiter,
        M=M,
        callback=count,
    )
    logger.debug(
        "BiCGSTAB finished with info %d after %d iterations", info, iterations
    )
    return x, iterations


def _relative_residual(A, x, b, b_norm):
    return float(norm(A @ x - b) / b_norm)


def solve_transformed_potential(
    v, p, grid=None, *, source=None, x0=None, rtol=SOLVER_RTOL, cache=None
):
    r"""Solves the transformed elliptic problem for the deformation ``v``.

    The unknown is the shifted potential :math:`\Phi = \phi - \eta`, which
    vanishes on :math:`\partial\Omega` and satisfies
    :math:`-\mathcal{L}_v \Phi = \mathcal{L}_v \eta + s`, with ``s = source``
    (zero for the physical problem, a manufactured forcing in tests).

    Systems with at most ``DIRECT_SOLVE_LIMIT`` unknowns (counted as
    ``n² m``) are factorized; larger ones use BiCGSTAB with a Jacobi
    preconditioner started from ``x0``. With a ``cache`` the factorization
    of an earlier call preconditions BiCGSTAB instead of factorizing again.

    Parameters
    ----------
    v : ~pullin.grid.PlateField
        Admissible deformation, ``min v > -1``.
    p : ~pullin.parameters.Parameters
        Model constants.
    grid : ~pullin.grid.CylinderGrid, optional
        Cylinder grid, ``m = n`` by default.
    source : numpy.ndarray, optional
        Extra forcing ``s`` at every node of the cylinder grid; only the
        values at unknown nodes are used.
    x0 : PotentialField, optional
        Initial guess for the Krylov solver, typically the previous time step.
    rtol : float
        Relative residual required of the solve.
    cache : FactorizationCache, optional
        Factorization shared by successive solves on the same grid.

    Returns
    -------
    PotentialField

    Raises
    ------
    ~pullin.exceptions.NonAdmissibleError
        If ``min v <= -1``.
    ~pullin.exceptions.SolverDivergenceError
        If the residual stays above ``rtol``.

    """
    grid = default_cylinder(v, grid)
    L_full, unknowns = assemble_system(v, p, grid)
    A = L_full[:, unknowns].tocsr()

    rhs = L_full @ grid.lifting().ravel()
    if source is not None:
        rhs = rhs + np.asarray(source, dtype=float)[1:-1, 1:-1, 1:-1].ravel()
    b = -rhs

    guess = None
    if x0 is not None:
        guess = x0.shifted[1:-1, 1:-1, 1:-1].ravel()

    b_norm = norm(b)
    iterations = 0
    if b_norm == 0.0:
        x = np.zeros(grid.n_unknowns)
    elif cache is not None and cache.ready(A):
        x, iterations = _iterate(
            A, b, guess, rtol, cache.preconditioner, cache.max_iterations
        )
        residual = _relative_residual(A, x, b, b_norm)
        if not np.isfinite(residual) or residual > rtol:
            logger.debug(
                "Stale factorization, residual %.3e after %d iterations",
                residual,
                iterations,
            )
            x = cache.refresh(A).solve(b)
            iterations = 0
    elif grid.plate.n**2 * grid.m <= DIRECT_SOLVE_LIMIT:
        logger.debug("Direct sparse solve, %d unknowns", grid.n_unknowns)
        if cache is not None:
            x = cache.refresh(A).solve(b)
        else:
            x = spsolve(A.tocsc(), b)
    else:
        maxiter = int(20 * np.sqrt(grid.plate.n**2 * grid.m))
        x, iterations = _iterate(A, b, guess, rtol, _jacobi(A), maxiter)

    residual = 0.0 if b_norm == 0.0 else _relative_residual(A, x, b, b_norm)
    if not np.isfinite(residual) or residual > rtol:
        raise SolverDivergenceError(residual, iterations)

    values = grid.lifting()
    values[1:-1, 1:-1, 1:-1] += x.reshape(
        grid.plate.n, grid.plate.n, grid.m - 1
    )
    phi = PotentialField(grid, values, residual=residual, iterations=iterations)

    violation = phi.maximum_principle_violation()
    if violation > MAXIMUM_PRINCIPLE_TOL:
        warnings.warn(
            f"Potential leaves [0, 1] by {violation:.3e}",
            MaximumPrincipleWarning,
            stacklevel=2,
        )
    return phi


class TraceField(PlateField):
    """Vertical derivative of the transformed potential at the plate."""


def top_trace_derivative(phi):
    """One-sided second-order difference of ``phi`` at ``eta = 1``.

    Exact for potentials quadratic in ``eta``.

    """
    grid = phi.grid
    values = phi.values
    trace = (
        3 * values[..., -1] - 4 * values[..., -2] + values[..., -3]
    ) / (2 * grid.h_eta)
    return TraceField(grid.plate, trace)


def g_from_trace(v, trace, p):
    d1, d2 = gradient(v)
    stretch = 1.0 + p.eps**2 * (d1.full**2 + d2.full**2)
    return PlateField(v.grid, stretch / (1.0 + v.full) ** 2 * trace.full**2)


def _gradient_transpose(y, h):
    """Transpose of the first-axis central difference of :func:`~pullin.grid.gradient`.

    Boundary rows of the gradient are one-sided differences, which is what the
    odd reflection about the boundary value reduces to.
    """
    out = np.zeros_like(y)
    out[2:] += y[1:-1] / (2 * h)
    out[:-2] -= y[1:-1] / (2 * h)
    out[1] += y[0] / h
    out[0] -= y[0] / h
    out[-1] += y[-1] / h
    out[-2] -= y[-1] / h
    return out


def _quadrature(v, phi, p, with_gradient=False):
    """Discrete energy minimized by the solver and, optionally, its gradient in ``v``.

    Edge and cell terms on faces where ``phi = eta`` vanish; the vertical
    edges are weighted by the trapezoidal rule over the plate.
    """
    grid = phi.grid
    n = grid.plate.n
    h, he = grid.plate.h, grid.h_eta
    c = p.eps**2
    vf = v.full
    gap = 1.0 + vf
    values = phi.values

    d1 = np.diff(values, axis=0) / h
    d2 = np.diff(values, axis=1) / h
    de = np.diff(values, axis=2) / he
    eta = (np.arange(grid.m) + 0.5) * he
    vol = h * h * he

    # x_i edges, 1 + v averaged over the edge
    P1 = c * vol * np.sum(d1**2, axis=-1)
    P2 = c * vol * np.sum(d2**2, axis=-1)
    mid1 = 1.0 + 0.5 * (vf[1:] + vf[:-1])
    mid2 = 1.0 + 0.5 * (vf[:, 1:] + vf[:, :-1])

    # eta edges
    gv1, gv2 = gradient(v)
    S = gv1.full**2 + gv2.full**2
    w = np.ones(n + 2)
    w[0] = w[-1] = 0.5
    W = np.outer(w, w)
    R = he * np.sum(de**2, axis=-1)
    T = he * np.sum(eta**2 * de**2, axis=-1)

    # (x_i, eta) cells: products of the cell averages of both differences
    cell1 = 0.25 * (d1[..., 1:] + d1[..., :-1]) * (de[1:] + de[:-1])
    cell2 = 0.25 * (d2[..., 1:] + d2[..., :-1]) * (de[:, 1:] + de[:, :-1])
    M1 = -2 * c * vol * np.sum(eta * cell1, axis=-1)
    M2 = -2 * c * vol * np.sum(eta * cell2, axis=-1)
    slope1 = np.diff(vf, axis=0) / h
    slope2 = np.diff(vf, axis=1) / h

    energy = (
        np.sum(mid1 * P1)
        + np.sum(mid2 * P2)
        + h * h * np.sum(W * (R + c * S * T) / gap)
        + np.sum(slope1 * M1)
        + np.sum(slope2 * M2)
    )
    if not with_gradient:
        return float(energy), None

    dQ = -h * h * W * (R + c * S * T) / gap**2
    sigma = 2 * h * h * W * c * T / gap
    dQ += _gradient_transpose(sigma * gv1.full, h)
    dQ += _gradient_transpose((sigma * gv2.full).T, h).T
    dQ[1:-1] += 0.5 * (P1[:-1] + P1[1:]) + (M1[:-1] - M1[1:]) / h
    dQ[:, 1:-1] += 0.5 * (P2[:, :-1] + P2[:, 1:]) + (M2[:, :-1] - M2[:, 1:]) / h
    return float(energy), dQ


def discrete_electrostatic_energy(v, phi, p):
    r"""Quadrature of :math:`\int_\Omega (1 + v) \nabla \phi \cdot \alpha \nabla \phi`.

    This is the energy whose minimizer :func:`solve_transformed_potential`
    computes, so at the solved potential it is the discrete electrostatic
    energy, exact for uniform gaps.

    Parameters
    ----------
    v : ~pullin.grid.PlateField
        Admissible deformation.
    phi : PotentialField
        Transformed potential, ``phi = eta`` on the boundary.
    p : ~pullin.parameters.Parameters
        Model constants.

    """
    check_admissible(v)
    return _quadrature(v, phi, p)[0]


def g_variational(v, phi, p):
    r"""Force density as minus the gradient of the discrete electrostatic energy.

    At interior nodes :math:`g_{ij} = -h^{-2} \partial E_h / \partial v_{ij}`
    with ``phi`` held fixed, which is the total derivative because ``phi``
    minimizes :math:`E_h`. Then
    :math:`E_h(v + w) - E_h(v) = -\int_D g w + O(\|w\|^2)` holds exactly in
    the discrete inner product. Boundary nodes keep the values of
    :func:`g_from_trace`.

    """
    check_admissible(v)
    _, dQ = _quadrature(v, phi, p, with_gradient=True)
    full = g_from_trace(v, top_trace_derivative(phi), p).full.copy()
    full[1:-1, 1:-1] = -dQ[1:-1, 1:-1] / v.grid.h**2
    return PlateField(v.grid, full)


G_METHODS = ("trace", "variational")


def compute_g(v, p, grid=None, *, phi=None, method="trace"):
    """Electrostatic force density on the plate.

    Parameters
    ----------
    v : ~pullin.grid.PlateField
        Admissible deformation.
    p : ~pullin.parameters.Parameters
        Model constants.
    grid : ~pullin.grid.CylinderGrid, optional
        Cylinder grid, ``m = n`` by default.
    phi : PotentialField, optional
        Potential already solved for ``v``.
    method : str
        ``"trace"`` evaluates the closed form from the top trace of ``phi``;
        ``"variational"`` uses :func:`g_variational`, the form the time
        stepper conserves energy with.

    """
    if method not in G_METHODS:
        raise ValueError(
            f"Unknown method {method!r}, expected one of {G_METHODS}"
        )
    if phi is None:
        phi = solve_transformed_potential(v, p, grid)
    if method == "variational":
        return g_variational(v, phi, p)
    return g_from_trace(v, top_trace_derivative(phi), p)


def compute_G(u, p, grid=None, *, phi=None, physical=False):
    r"""Squared field strength at the plate, :math:`\varepsilon^2 |\nabla' \psi|^2 + (\partial_z \psi)^2`.

    Equal to :func:`compute_g`, which is what is returned by default. With
    ``physical=True`` the gradient of the physical potential is instead
    differenced at the plate surface in physical coordinates through
    :func:`reconstruct_psi`; this evaluation is only meant for cross-checks.
    Boundary nodes keep the transformed-form values.

    """
    if phi is None:
        phi = solve_transformed_potential(u, p, grid)
    g = compute_g(u, p, phi=phi)
    if not physical:
        return g

    psi = reconstruct_psi(phi, u)
    plate = u.grid
    h = plate.h
    h_z = (1.0 + u.values) * phi.grid.h_eta
    x1, x2 = (c[1:-1, 1:-1] for c in plate.mesh)
    z = u.values

    def sample(y1, y2, zz):
        return psi.sample(y1, y2, zz, check=False)

    dz = (
        3 * sample(x1, x2, z)
        - 4 * sample(x1, x2, z - h_z)
        + sample(x1, x2, z - 2 * h_z)
    ) / (2 * h_z)
    d1 = (sample(x1 + h, x2, z) - sample(x1 - h, x2, z)) / (2 * h)
    d2 = (sample(x1, x2 + h, z) - sample(x1, x2 - h, z)) / (2 * h)

    full = g.full.copy()
    full[1:-1, 1:-1] = p.eps**2 * (d1**2 + d2**2) + dz**2
    return PlateField(plate, full)


class PhysicalPotential:
    """Evaluator of the potential in the physical gap ``-1 < z < v(x)``."""

    def __init__(self, phi, v):
        self._phi = phi
        self._v = v
        nodes = v.grid.nodes
        self._axes3 = (nodes, nodes, phi.grid.eta)
        self._axes2 = (nodes, nodes)

    def surface(self, x1, x2):
        """Plate deformation at arbitrary points, by bilinear interpolation."""
        points = np.stack(np.broadcast_arrays(x1, x2), axis=-1)
        return multilinear_interp(
            self._v.full, self._axes2, points, extrapolate=True
        )

    def sample(self, x1, x2, z, *, check=True):
        """Potential at ``(x1, x2, z)``.

        With ``check=False`` points outside the gap or the plate are evaluated
        by linear extrapolation, for difference quotients at the boundary.

        """
        x1, x2, z = np.broadcast_arrays(
            np.asarray(x1, float), np.asarray(x2, float), np.asarray(z, float)
        )
        top = self.surface(x1, x2)
        if check:
            outside_plate = (x1 < 0) | (x1 > 1) | (x2 < 0) | (x2 > 1)
            outside_gap = (z < -1 - 1e-12) | (z > top + 1e-12)
            if np.any(outside_plate | outside_gap):
                raise OutOfDomainError(
                    "Point outside the gap between the ground plate and the "
                    "deformed plate, expected -1 <= z <= v(x) and x in D"
                )
        eta = (1.0 + z) / (1.0 + top)
        if check:
            eta = np.clip(eta, 0.0, 1.0)
        points = np.stack([x1, x2, eta], axis=-1)
        return multilinear_interp(
            self._phi.values, self._axes3, points, extrapolate=not check
        )

    __call__ = sample


def reconstruct_psi(phi, v):
    """Physical potential ``psi(x, z) = phi(x, (1 + z) / (1 + v(x)))``.

    Raises
    ------
    ~pullin.exceptions.NonAdmissibleError
        If ``min v <= -1``.

    """
    check_admissible(v)
    if phi.grid.plate != v.grid:
        raise ValueError(f"Potential lives on {phi.grid}, plate field on {v.grid}")
    return PhysicalPotential(phi, v)


def g_lipschitz_ratio(v1, v2, p, grid=None, q=3):
    """Ratio ``||g(v1) - g(v2)||_L2 / ||v1 - v2||_W2q`` for two admissible states."""
    dg = compute_g(v1, p, grid) - compute_g(v2, p, grid)
    return lq_norm(dg, 2) / w2q_norm(v1 - v2, q)


def G_l1_norm(G):
    return integrate_plate(PlateField(G.grid, np.abs(G.full)))
