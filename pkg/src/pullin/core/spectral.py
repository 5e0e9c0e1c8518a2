r"""Spectral symbols of the plate operator under Navier conditions.

On the unit square the double sine modes
:math:`\sin(k \pi x_1) \sin(l \pi x_2)` diagonalize
:math:`A = \beta \Delta^2 - \tau \Delta`, with

.. math::

    \mu_{kl} = \beta s_{kl}^2 + \tau s_{kl}, \qquad s_{kl} = (k^2 + l^2) \pi^2 .

"""

from numba import njit as jit
import numpy as np


@jit
def laplacian_symbol(n):
    """Values of ``(k**2 + l**2) pi**2`` for ``1 <= k, l <= n``."""
    out = np.empty((n, n))
    for k in range(n):
        for l in range(n):
            out[k, l] = ((k + 1) ** 2 + (l + 1) ** 2) * np.pi**2
    return out


@jit
def plate_symbol(n, beta, tau):
    s = laplacian_symbol(n)
    return beta * s**2 + tau * s


@jit
def phi1(z):
    r"""Exponential integrator weight :math:`(1 - e^{-z}) / z`, equal to 1 at 0.

    A truncated series is used for small arguments to avoid cancellation.

    """
    flat = np.ascontiguousarray(z).reshape(-1)
    res = np.empty(flat.shape[0])
    for idx in range(flat.shape[0]):
        x = flat[idx]
        if abs(x) < 1e-5:
            res[idx] = 1.0 - x / 2.0 + x * x / 6.0
        else:
            res[idx] = -np.expm1(-x) / x
    return res.reshape(z.shape)


@jit
def etd1_step(u_hat, g_hat, mu, dt, lam):
    r"""First-order exponential step with the source frozen over the step.

    .. math::

        \hat{u}^{+} = e^{-\Delta t \mu} \hat{u}
            - \lambda \frac{1 - e^{-\Delta t \mu}}{\mu} \hat{g}

    """
    decay = np.exp(-dt * mu)
    return decay * u_hat - lam * dt * phi1(dt * mu) * g_hat


@jit
def etd1_dissipation(u_hat, g_hat, mu, dt, lam):
    r"""Exact :math:`\int \|\partial_t u\|_{L_2}^2` over one frozen-source step.

    Modewise :math:`\partial_t \hat{u}(s) = -e^{-s \mu} (\mu \hat{u} + \lambda \hat{g})`,
    integrated in closed form; the factor 1/4 is the squared
    :math:`L_2(D)` norm of a unit-amplitude double sine mode.

    """
    rate = mu * u_hat + lam * g_hat
    weight = dt * phi1(2 * dt * mu)
    return 0.25 * np.sum(rate**2 * weight)
