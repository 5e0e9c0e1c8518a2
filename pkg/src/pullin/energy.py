"""Mechanical and electrostatic energies and the oracles built on them.

The total energy :math:`E = E_m - \\lambda E_e` decreases along solutions and
satisfies :math:`E(u(t)) + \\int_0^t \\|\\partial_t u\\|^2 ds = E(u^0)`.
"""

import warnings

import numpy as np

from pullin._math.integrate import trapezoid, trapezoid_nd
from pullin.grid import (
    PlateField,
    gradient,
    integrate_plate,
    second_derivatives,
)
from pullin.plate import quadratic_form
from pullin.potential import (
    check_admissible,
    compute_g,
    discrete_electrostatic_energy,
    reconstruct_psi,
    solve_transformed_potential,
    top_trace_derivative,
)
from pullin.warnings import InitialLayerWarning


class EnergyBreakdown:
    """Energies of one state.

    Parameters
    ----------
    e_mech : float
        Mechanical energy.
    e_elec : float
        Electrostatic energy.
    lam : float
        Voltage parameter weighting ``e_elec`` in the total.
    dissipation : float
        Accumulated ``int_0^t ||d_t u||² ds``.
    time : float
        Time of the state.

    """

    def __init__(self, e_mech, e_elec, lam, dissipation=0.0, time=0.0):
        self.e_mech = float(e_mech)
        self.e_elec = float(e_elec)
        self.lam = float(lam)
        self.dissipation = float(dissipation)
        self.time = float(time)

    @property
    def e_total(self):
        return self.e_mech - self.lam * self.e_elec

    @property
    def balance(self):
        """``E + dissipation``, constant in time for exact solutions."""
        return self.e_total + self.dissipation

    def __repr__(self):
        return (
            f"EnergyBreakdown(t={self.time:.6g}, E_m={self.e_mech:.6g}, "
            f"E_e={self.e_elec:.6g}, E={self.e_total:.6g}, "
            f"dissipation={self.dissipation:.6g})"
        )


def _gradient_squared(u):
    d1, d2 = gradient(u)
    return d1 * d1 + d2 * d2


def mechanical_energy(u, p, method="spectral"):
    """Bending and stretching energy of the plate.

    Parameters
    ----------
    u : ~pullin.grid.PlateField
        Deformation.
    p : ~pullin.parameters.Parameters
        Model constants.
    method : str
        ``"spectral"`` evaluates ``<Au, u> / 2`` exactly in the sine span of
        the interior samples, which is what the exponential stepper conserves.
        ``"stencil"`` integrates the pointwise energy density built from
        second differences with the trapezoidal rule. Fields with a non-zero
        boundary ring, such as uniform gaps, are not in the sine span and
        always use the stencil form.

    """
    if method == "spectral" and not u.is_hinged:
        method = "stencil"
    if method == "spectral":
        return 0.5 * quadratic_form(u, p)
    elif method == "stencil":
        d11, d22, d12 = second_derivatives(u)
        lap = d11 + d22
        density = p.beta * (
            0.5 * lap * lap + (1 - p.sigma) * (d12 * d12 - d11 * d22)
        ) + 0.5 * p.tau * _gradient_squared(u)
        return integrate_plate(density)
    else:
        raise ValueError(
            f"Unknown method {method!r}, expected 'spectral' or 'stencil'"
        )


def _transformed_density(v, phi, p):
    grid = phi.grid
    h = grid.plate.h
    dphi1, dphi2, dphi_eta = np.gradient(
        phi.values, h, h, grid.h_eta, edge_order=2
    )
    d1, d2 = gradient(v)
    gap = (1.0 + v.full)[..., None]
    eta = grid.eta
    w1 = dphi1 - eta * (d1.full[..., None] / gap) * dphi_eta
    w2 = dphi2 - eta * (d2.full[..., None] / gap) * dphi_eta
    return p.eps**2 * (w1**2 + w2**2) * gap + dphi_eta**2 / gap


def _physical_energy(v, phi, p):
    grid = phi.grid
    plate = v.grid
    h = plate.h
    psi = reconstruct_psi(phi, v)

    gap = 1.0 + v.full
    x1, x2 = (np.broadcast_to(c[..., None], grid.shape) for c in plate.mesh)
    z = -1.0 + gap[..., None] * grid.eta

    def sample(y1, y2):
        return psi.sample(y1, y2, z, check=False)

    d1 = (sample(x1 + h, x2) - sample(x1 - h, x2)) / (2 * h)
    d2 = (sample(x1, x2 + h) - sample(x1, x2 - h)) / (2 * h)
    # Column nodes are equispaced in z with spacing (1 + v) h_eta
    dz = np.gradient(phi.values, grid.h_eta, axis=-1, edge_order=2) / gap[..., None]
    density = p.eps**2 * (d1**2 + d2**2) + dz**2
    # Integrate each column in eta, then over the plate; dz = (1 + v) deta
    per_column = trapezoid(density, dx=grid.h_eta, axis=-1) * gap
    return integrate_plate(PlateField(plate, per_column))


def electrostatic_energy(v, phi, p, method="transformed"):
    """Electrostatic energy of the gap under the plate.

    Parameters
    ----------
    v : ~pullin.grid.PlateField
        Admissible deformation.
    phi : ~pullin.potential.PotentialField
        Transformed potential solved for ``v``.
    p : ~pullin.parameters.Parameters
        Model constants.
    method : str
        ``"transformed"`` integrates over the fixed cylinder with the edge and
        cell quadrature of the potential solver, see
        :func:`~pullin.potential.discrete_electrostatic_energy`; ``"nodal"``
        applies the trapezoidal rule to nodal differences of ``phi``;
        ``"physical"`` integrates the squared gradient of the reconstructed
        physical potential over the deformed gap. The last two are meant for
        cross-checks.

    """
    check_admissible(v)
    if method == "transformed":
        return discrete_electrostatic_energy(v, phi, p)
    elif method == "nodal":
        return trapezoid_nd(
            _transformed_density(v, phi, p),
            (v.grid.h, v.grid.h, phi.grid.h_eta),
        )
    elif method == "physical":
        return _physical_energy(v, phi, p)
    else:
        raise ValueError(
            f"Unknown method {method!r}, expected 'transformed', 'nodal' "
            "or 'physical'"
        )


def electrostatic_energy_surface(v, phi, p):
    r"""Electrostatic energy from the plate surface alone.

    .. math::

        E_e(v) = |D| - \int_D v (1 + \varepsilon^2 |\nabla v|^2)
            \partial_z \psi_v(x, v(x)) \, dx

    with :math:`\partial_z \psi_v(x, v) = \partial_\eta \phi_v(x, 1) / (1 + v)`.

    """
    check_admissible(v)
    trace = top_trace_derivative(phi)
    stretch = 1.0 + p.eps**2 * _gradient_squared(v).full
    integrand = v.full * stretch * trace.full / (1.0 + v.full)
    return 1.0 - integrate_plate(PlateField(v.grid, integrand))


def total_energy(u, phi, p, dissipation=0.0, time=0.0, mechanical="spectral"):
    """Energies of the state ``u`` with potential ``phi``."""
    return EnergyBreakdown(
        mechanical_energy(u, p, method=mechanical),
        electrostatic_energy(u, phi, p),
        p.lam,
        dissipation=dissipation,
        time=time,
    )


def shape_derivative_sides(path, dpath, p, t0, h, grid=None, force="trace"):
    r"""Both sides of the shape derivative identity at ``t0``.

    ``force`` selects the evaluation of ``g``, see
    :func:`~pullin.potential.compute_g`.

    Returns
    -------
    difference : float
        Central difference ``(E_e(v(t0 + h)) - E_e(v(t0 - h))) / (2 h)``.
    formula : float
        :math:`-\int_D g(v(t_0)) \partial_t v(t_0) \, dx`.

    """

    def e_elec(t):
        v = path(t)
        return electrostatic_energy(v, solve_transformed_potential(v, p, grid), p)

    difference = (e_elec(t0 + h) - e_elec(t0 - h)) / (2 * h)
    v0 = path(t0)
    g = compute_g(v0, p, grid, method=force)
    formula = -integrate_plate(g * dpath(t0))
    return difference, formula


def shape_derivative_check(path, dpath, p, t0, h, grid=None, force="trace"):
    """Relative error between the two sides of the shape derivative identity.

    Parameters
    ----------
    path : callable
        Smooth admissible family ``t -> PlateField``.
    dpath : callable
        Its exact time derivative ``t -> PlateField``.
    p : ~pullin.parameters.Parameters
        Model constants.
    t0 : float
        Evaluation time.
    h : float
        Half width of the central difference.
    grid : ~pullin.grid.CylinderGrid, optional
        Cylinder grid for the potential solves.
    force : str
        ``"trace"`` checks the closed form of ``g``, converging at second
        order; ``"variational"`` holds up to the central difference error.

    Returns
    -------
    float
        ``|difference - formula| / |formula|``; 0 when both sides vanish.

    """
    difference, formula = shape_derivative_sides(
        path, dpath, p, t0, h, grid, force
    )
    error = abs(difference - formula)
    if error == 0.0:
        return 0.0
    if formula == 0.0:
        return np.inf
    return error / abs(formula)


def energy_equality_monitor(trace, first_step_share=0.5, tol=1e-8):
    """Relative energy drift ``|E + dissipation - E(u0)| / max(1, |E(u0)|)``.

    Parameters
    ----------
    trace : ~pullin.evolution.trace.SimulationTrace
        Simulation record.
    first_step_share : float
        Fraction of the final drift above which drift produced by the first
        step alone is reported with an
        :class:`~pullin.warnings.InitialLayerWarning`.
    tol : float
        Drifts below this are not reported.

    Returns
    -------
    numpy.ndarray
        Drift at every recorded sample.

    """
    energies = trace.energies
    if not energies:
        return np.zeros(0)
    e0 = energies[0].e_total
    scale = max(1.0, abs(e0))
    drift = np.array([abs(e.balance - e0) / scale for e in energies])

    first = trace.first_step_drift
    if first is not None and drift[-1] > tol and first > first_step_share * drift[-1]:
        warnings.warn(
            f"First step produces drift {first:.3e} of final {drift[-1]:.3e}",
            InitialLayerWarning,
            stacklevel=2,
        )
    return drift
