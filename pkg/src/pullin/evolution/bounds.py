r"""A-priori bounds satisfied by every admissible state.

With :math:`\rho_0 = 1 + \min u`:

.. math::

    \|G(u)\|_{L_1} \le \left(4 + \frac{2}{\rho_0^2}\right)|D|
        + 4 \varepsilon^2 \|\nabla u\|^2,

    E(u) \ge E_m(u) - 3 \lambda \varepsilon^2 \|\nabla u\|^2
        - \lambda \left(4 + \frac{1}{2 \rho_0^2}\right)|D| .

Young's inequality turns the second one into :math:`E \ge E_m / 2 - c_2` with
the explicit :math:`c_2` of :func:`energy_offset`.
"""

from collections import namedtuple

from pullin.grid import gradient, integrate_plate, lq_norm
from pullin.plate import laplacian_norm_squared
from pullin.potential import G_l1_norm

AREA = 1.0


def gradient_norm_squared(u):
    d1, d2 = gradient(u)
    return integrate_plate(d1 * d1 + d2 * d2)


def G_l1_bound(u, p):
    rho0 = 1.0 + u.min()
    return (4 + 2 / rho0**2) * AREA + 4 * p.eps**2 * gradient_norm_squared(u)


def energy_lower_bound(u, p, e_mech):
    rho0 = 1.0 + u.min()
    return (
        e_mech
        - 3 * p.lam * p.eps**2 * gradient_norm_squared(u)
        - p.lam * (4 + 1 / (2 * rho0**2)) * AREA
    )


def energy_offset(u, p):
    """Constant ``c_2`` with ``E(u) >= E_m(u) / 2 - c_2``.

    Uses ``||∇u||² <= ||u|| ||Δu||`` and ``||Δu||² <= 4 E_m / (beta (1 + sigma))``.

    """
    rho0 = 1.0 + u.min()
    l2 = lq_norm(u, 2)
    return (
        18 * p.lam**2 * p.eps**4 * l2**2 / (p.beta * (1 + p.sigma))
        + p.lam * (4 + 1 / (2 * rho0**2)) * AREA
    )


class BoundReport(
    namedtuple(
        "_BoundReport",
        [
            "G_l1",
            "G_bound",
            "energy",
            "energy_bound",
            "energy_weak_bound",
            "dissipation_lhs",
            "dissipation_rhs",
        ],
    )
):
    """Values of both sides of every bound for one state."""

    def violations(self, atol=0.0):
        """Names of the bounds that fail by more than ``atol``."""
        failed = []
        if self.G_l1 > self.G_bound + atol:
            failed.append("G_l1")
        if self.energy < self.energy_bound - atol:
            failed.append("energy_lower")
        if self.energy < self.energy_weak_bound - atol:
            failed.append("energy_half_mechanical")
        if self.dissipation_lhs > self.dissipation_rhs + atol:
            failed.append("dissipation")
        return failed


def check_bounds(u, g, energy, p, e_initial):
    """Evaluates the a-priori bounds along a trajectory.

    Parameters
    ----------
    u : ~pullin.grid.PlateField
        Current state.
    g : ~pullin.grid.PlateField
        Force density of ``u``.
    energy : ~pullin.energy.EnergyBreakdown
        Energies of ``u``, with the dissipation accumulated so far.
    p : ~pullin.parameters.Parameters
        Model constants.
    e_initial : float
        Total energy of the initial state.

    """
    c2 = energy_offset(u, p)
    return BoundReport(
        G_l1=G_l1_norm(g),
        G_bound=G_l1_bound(u, p),
        energy=energy.e_total,
        energy_bound=energy_lower_bound(u, p, energy.e_mech),
        energy_weak_bound=0.5 * energy.e_mech - c2,
        dissipation_lhs=p.beta * (1 + p.sigma) / 8 * laplacian_norm_squared(u)
        + energy.dissipation,
        dissipation_rhs=e_initial + c2,
    )
