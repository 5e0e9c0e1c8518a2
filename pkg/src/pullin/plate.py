r"""Plate operator :math:`A = \beta \Delta^2 - \tau \Delta` with Navier conditions.

On the square the hinged conditions reduce to :math:`u = \Delta u = 0` on the
boundary, so :math:`A` is diagonal in the double sine basis and everything
here except the stencil cross-checks acts exactly in spectral space.
"""

from astropy.table import Table
import numpy as np

from pullin.core.spectral import (
    etd1_dissipation,
    etd1_step,
    laplacian_symbol,
    plate_symbol,
)
from pullin.grid import (
    PlateField,
    PlateGrid,
    SpectralField,
    integrate_plate,
    laplacian,
    second_derivatives,
    to_nodal,
    to_spectral,
)


class OperatorSpectrum:
    """Eigenvalues of the plate operator for modes ``1 <= k, l <= n_modes``.

    Parameters
    ----------
    p : ~pullin.parameters.Parameters
        Model constants, only ``beta`` and ``tau`` are used.
    n_modes : int
        Modes per axis.

    """

    def __init__(self, p, n_modes):
        if n_modes < 1:
            raise ValueError(f"Need at least one mode per axis, got {n_modes}")
        self._p = p
        self._n_modes = int(n_modes)
        self._mu = plate_symbol(self._n_modes, p.beta, p.tau)
        self._mu.setflags(write=False)

    @classmethod
    def on_grid(cls, grid, p):
        return cls(p, grid.n)

    @property
    def n_modes(self):
        return self._n_modes

    @property
    def mu(self):
        """Eigenvalues, ``mu[k - 1, l - 1]``."""
        return self._mu

    @property
    def min_eigenvalue(self):
        return float(self._mu.min())

    def eigenvalue(self, k, l):
        return float(self._mu[k - 1, l - 1])

    def to_table(self):
        """Eigenvalue table with columns ``k``, ``l``, ``mu``, sorted by ``k`` then ``l``."""
        k, l = np.meshgrid(
            np.arange(1, self._n_modes + 1),
            np.arange(1, self._n_modes + 1),
            indexing="ij",
        )
        return Table(
            [k.ravel(), l.ravel(), self._mu.ravel()], names=("k", "l", "mu")
        )


def _spectral_pair(v, p):
    c = to_spectral(v).coefficients
    mu = plate_symbol(v.grid.n, p.beta, p.tau)
    return c, mu


def apply_A(v, p):
    """Spectral action of the plate operator.

    The boundary ring of ``v`` does not enter; the result is hinged.

    """
    c, mu = _spectral_pair(v, p)
    return to_nodal(SpectralField(v.grid, mu * c))


def apply_A_stencil(v, p):
    """``beta Δ(Δv) - tau Δv`` composed from five-point Laplacians."""
    lap = laplacian(v)
    return p.beta * laplacian(lap) - p.tau * lap


def quadratic_form(v, p):
    r""":math:`\langle A v, v \rangle_{L_2}`, exact in the sine span."""
    c, mu = _spectral_pair(v, p)
    return 0.25 * float(np.sum(mu * c**2))


def laplacian_norm_squared(v):
    r""":math:`\|\Delta v\|_{L_2}^2` in spectral space."""
    c = to_spectral(v).coefficients
    s = laplacian_symbol(v.grid.n)
    return 0.25 * float(np.sum((s * c) ** 2))


def semigroup(v, t, p):
    """Action of ``exp(-t A)`` on ``v``."""
    if t < 0:
        raise ValueError(f"Semigroup time must be non-negative, got {t}")
    c, mu = _spectral_pair(v, p)
    return to_nodal(SpectralField(v.grid, np.exp(-t * mu) * c))


def duhamel_step(u, gval, dt, p):
    r"""One exponential step of the mild formulation with ``g`` frozen.

    .. math::

        \hat{u}^{+}_{kl} = e^{-\Delta t \mu_{kl}} \hat{u}_{kl}
            - \lambda \frac{1 - e^{-\Delta t \mu_{kl}}}{\mu_{kl}} \hat{g}_{kl}

    Exact when ``g`` is constant in time.

    """
    if not dt > 0:
        raise ValueError(f"Time step must be positive, got {dt}")
    u_hat, mu = _spectral_pair(u, p)
    g_hat = to_spectral(gval).coefficients
    return to_nodal(SpectralField(u.grid, etd1_step(u_hat, g_hat, mu, dt, p.lam)))


def duhamel_dissipation(u, gval, dt, p):
    r"""Exact :math:`\int \|\partial_t u\|_{L_2}^2` over one :func:`duhamel_step`."""
    u_hat, mu = _spectral_pair(u, p)
    g_hat = to_spectral(gval).coefficients
    return float(etd1_dissipation(u_hat, g_hat, mu, dt, p.lam))


class SpectrumReport:
    """Outcome of :func:`spectrum_check`."""

    def __init__(self, min_eigenvalue, expected_min, coercivity, worst_ratio, n_fields):
        self.min_eigenvalue = min_eigenvalue
        self.expected_min = expected_min
        self.coercivity = coercivity
        self.worst_ratio = worst_ratio
        self.n_fields = n_fields

    @property
    def positive(self):
        return self.min_eigenvalue > 0

    @property
    def coercive(self):
        return self.worst_ratio >= self.coercivity

    @property
    def passed(self):
        return self.positive and self.coercive

    def __repr__(self):
        return (
            f"SpectrumReport(min_eigenvalue={self.min_eigenvalue:.6f}, "
            f"coercivity={self.coercivity:.4f}, worst_ratio={self.worst_ratio:.4f})"
        )


def spectrum_check(p, n_modes, grid=None, n_fields=100, seed=0):
    """Positivity of the spectrum and the coercivity of the plate energy.

    For ``n_fields`` random fields it evaluates
    ``<Av, v> / ||Δv||²``, which must not fall below ``beta (1 + sigma) / 2``.

    Parameters
    ----------
    p : ~pullin.parameters.Parameters
        Model constants.
    n_modes : int
        Modes per axis of the eigenvalue table.
    grid : ~pullin.grid.PlateGrid, optional
        Grid of the random fields, ``PlateGrid(n_modes)`` by default.
    n_fields : int
        Number of random fields.
    seed : int
        Seed of the random generator.

    Returns
    -------
    SpectrumReport

    """
    spectrum = OperatorSpectrum(p, n_modes)
    grid = grid or PlateGrid(max(n_modes, 4))
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(n_fields):
        v = PlateField.from_interior(grid, rng.standard_normal((grid.n, grid.n)))
        worst = min(worst, quadratic_form(v, p) / laplacian_norm_squared(v))

    s11 = 2 * np.pi**2
    return SpectrumReport(
        min_eigenvalue=spectrum.min_eigenvalue,
        expected_min=p.beta * s11**2 + p.tau * s11,
        coercivity=p.coercivity,
        worst_ratio=float(worst),
        n_fields=n_fields,
    )


def boundary_identity_check(w, method="stencil"):
    r"""Residual :math:`\int_D (\partial_1 \partial_2 w)^2 - \partial_1^2 w \, \partial_2^2 w \, dx`.

    The boundary of the square has zero curvature, so this integral vanishes
    for every ``w`` with zero trace.

    Parameters
    ----------
    w : ~pullin.grid.PlateField
        Field vanishing on the boundary.
    method : str
        ``"stencil"`` uses second differences and trapezoidal quadrature,
        converging at second order; ``"spectral"`` evaluates both integrals
        exactly in the sine basis.

    """
    if method == "stencil":
        d11, d22, d12 = second_derivatives(w)
        return integrate_plate(d12 * d12 - d11 * d22)
    elif method == "spectral":
        c = to_spectral(w).coefficients
        k = np.arange(1, w.grid.n + 1) * np.pi
        kk, ll = np.meshgrid(k**2, k**2, indexing="ij")
        mixed = 0.25 * np.sum(kk * ll * c**2)
        # Cross term: the sine modes are orthogonal, so only diagonal pairs survive
        pure = 0.25 * np.sum((kk * c) * (ll * c))
        return float(mixed - pure)
    else:
        raise ValueError(f"Unknown method {method!r}, expected 'stencil' or 'spectral'")


def single_mode_boundary_residual(grid, k, l):
    r"""Closed form of the stencil residual of ``sin(k pi x1) sin(l pi x2)``.

    The odd ghost layer continues the mode exactly, so the second differences
    are the mode times the discrete symbols
    :math:`\sigma_k = 4 h^{-2} \sin^2(k \pi h / 2)` and
    :math:`\sigma_k \cos^2(k \pi h / 2)` for the squared central difference.
    With trapezoidal sums of ``sin²`` and ``cos²`` both equal to ``1/2``,

    .. math::

        r = \frac{\sigma_k \sigma_l}{4}
            \left(\cos^2 \tfrac{k \pi h}{2} \cos^2 \tfrac{l \pi h}{2} - 1\right),

    which vanishes at second order in ``h``.

    """
    if not (1 <= k <= grid.n and 1 <= l <= grid.n):
        raise ValueError(f"Mode ({k}, {l}) not resolved on {grid}")
    h = grid.h
    theta_k, theta_l = k * np.pi * h / 2, l * np.pi * h / 2
    sigma_k = 4 * np.sin(theta_k) ** 2 / h**2
    sigma_l = 4 * np.sin(theta_l) ** 2 / h**2
    return 0.25 * sigma_k * sigma_l * (
        np.cos(theta_k) ** 2 * np.cos(theta_l) ** 2 - 1
    )
