r"""Discretization of the transformed elliptic operator on the fixed cylinder.

The operator is written in divergence form

.. math::

    \mathcal{L}_v w = \operatorname{div}(\alpha \nabla w) + b \cdot \nabla w

with

.. math::

    \alpha = \begin{pmatrix}
        \varepsilon^2 & 0 & -\varepsilon^2 \eta V_1 \\
        0 & \varepsilon^2 & -\varepsilon^2 \eta V_2 \\
        -\varepsilon^2 \eta V_1 & -\varepsilon^2 \eta V_2 &
        (1 + v)^{-2} + \varepsilon^2 \eta^2 |V|^2
    \end{pmatrix},
    \qquad
    b = \varepsilon^2 (V_1, V_2, -\eta |V|^2),
    \qquad
    V = \frac{\nabla v}{1 + v}.

Since :math:`b = \alpha \nabla \log(1 + v)`, the operator equals
:math:`(1 + v)^{-1} \operatorname{div}((1 + v) \alpha \nabla w)`, the
Euler-Lagrange operator of the electrostatic energy
:math:`\int_\Omega (1 + v) \nabla w \cdot \alpha \nabla w`. The stencil below
is the gradient of a quadrature of that energy, so the discrete potential
minimizes the discrete energy.

Nodes are indexed ``(i, j, k)`` with ``0 <= i, j <= n + 1`` and
``0 <= k <= m``; the unknowns are the nodes with ``1 <= i, j <= n`` and
``1 <= k <= m - 1``.
"""

from numba import njit as jit
import numpy as np


@jit
def coefficient_fields(v, V1, V2, eta, eps):
    """Nodal values of the entries of alpha and b.

    Parameters
    ----------
    v : numpy.ndarray
        Plate deformation with boundary ring, shape ``(n + 2, n + 2)``.
    V1, V2 : numpy.ndarray
        Components of ``grad v / (1 + v)``, same shape as ``v``.
    eta : numpy.ndarray
        Vertical nodes, shape ``(m + 1,)``.
    eps : float
        Aspect ratio.

    Returns
    -------
    alpha2, alpha3, alpha4, b1, b2, b3 : numpy.ndarray
        Arrays of shape ``(n + 2, n + 2, m + 1)``.

    """
    eps2 = eps * eps
    n2 = v.shape[0]
    m1 = eta.shape[0]
    alpha2 = np.empty((n2, n2, m1))
    alpha3 = np.empty((n2, n2, m1))
    alpha4 = np.empty((n2, n2, m1))
    b1 = np.empty((n2, n2, m1))
    b2 = np.empty((n2, n2, m1))
    b3 = np.empty((n2, n2, m1))
    for i in range(n2):
        for j in range(n2):
            VV = V1[i, j] ** 2 + V2[i, j] ** 2
            gap2 = 1.0 / (1.0 + v[i, j]) ** 2
            for k in range(m1):
                alpha2[i, j, k] = -2 * eps2 * eta[k] * V1[i, j]
                alpha3[i, j, k] = -2 * eps2 * eta[k] * V2[i, j]
                alpha4[i, j, k] = gap2 + eps2 * eta[k] ** 2 * VV
                b1[i, j, k] = eps2 * V1[i, j]
                b2[i, j, k] = eps2 * V2[i, j]
                b3[i, j, k] = -eps2 * eta[k] * VV
    return alpha2, alpha3, alpha4, b1, b2, b3


@jit
def _full_index(i, j, k, n, m):
    return (i * (n + 2) + j) * (m + 1) + k


@jit
def assemble_operator(v, S, n, m, eps):
    r"""COO triplets of the discrete operator acting on full nodal arrays.

    Rows run over the unknown nodes, columns over all nodes of the cylinder
    grid, so that boundary data enter through the corresponding columns.

    Each row is the derivative of the discrete energy

    .. math::

        Q_h(\phi) = \varepsilon^2 \sum_{x_i\text{-edges}} (1 + \bar{v})
            (\delta_i \phi)^2
            + \sum_{\eta\text{-edges}}
            \frac{1 + \varepsilon^2 \eta^2 |\nabla v|^2}{1 + v}
            (\delta_\eta \phi)^2
            - 2 \varepsilon^2 \sum_{(x_i, \eta)\text{-cells}}
            \eta \, \delta_i v \, \overline{\delta_i \phi} \,
            \overline{\delta_\eta \phi}

    (every term weighted by ``h² h_eta``) with respect to the row node,
    divided by ``-2 (1 + v) h² h_eta`` so that it approximates
    :math:`\mathcal{L}_v` to second order. ``1 + v`` is averaged over
    ``x_i``-edges, the mixed fluxes use averaged cross stencils on the cells.

    Parameters
    ----------
    v : numpy.ndarray
        Plate deformation with boundary ring, shape ``(n + 2, n + 2)``.
    S : numpy.ndarray
        Squared gradient ``|grad v|²`` at the same nodes.
    n, m : int
        Grid sizes.
    eps : float
        Aspect ratio.

    Returns
    -------
    rows, cols, vals : numpy.ndarray
        Triplets, fifteen per row.

    """
    c = eps * eps
    h = 1.0 / (n + 1)
    he = 1.0 / m
    n_rows = n * n * (m - 1)
    cap = 15 * n_rows
    rows = np.empty(cap, dtype=np.int64)
    cols = np.empty(cap, dtype=np.int64)
    vals = np.empty(cap)
    cnt = 0

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            gap = 1.0 + v[i, j]
            a1p = 1.0 + 0.5 * (v[i, j] + v[i + 1, j])
            a1m = 1.0 + 0.5 * (v[i, j] + v[i - 1, j])
            a2p = 1.0 + 0.5 * (v[i, j] + v[i, j + 1])
            a2m = 1.0 + 0.5 * (v[i, j] + v[i, j - 1])
            s1p = (v[i + 1, j] - v[i, j]) / h
            s1m = (v[i, j] - v[i - 1, j]) / h
            s2p = (v[i, j + 1] - v[i, j]) / h
            s2m = (v[i, j] - v[i, j - 1]) / h
            cx = c / (gap * h * h)
            cz = 1.0 / (gap * he * he)
            w = c / (2 * gap * h * he)
            for k in range(1, m):
                row = ((i - 1) * n + (j - 1)) * (m - 1) + (k - 1)
                eta_p = (k + 0.5) * he
                eta_m = (k - 0.5) * he
                bp = (1.0 + c * eta_p**2 * S[i, j]) / gap
                bm = (1.0 + c * eta_m**2 * S[i, j]) / gap

                center = -cx * (a1p + a1m + a2p + a2m) - cz * (bp + bm)

                rows[cnt] = row
                cols[cnt] = _full_index(i + 1, j, k, n, m)
                vals[cnt] = cx * a1p
                cnt += 1

                rows[cnt] = row
                cols[cnt] = _full_index(i - 1, j, k, n, m)
                vals[cnt] = cx * a1m
                cnt += 1

                rows[cnt] = row
                cols[cnt] = _full_index(i, j + 1, k, n, m)
                vals[cnt] = cx * a2p
                cnt += 1

                rows[cnt] = row
                cols[cnt] = _full_index(i, j - 1, k, n, m)
                vals[cnt] = cx * a2m
                cnt += 1

                rows[cnt] = row
                cols[cnt] = _full_index(i, j, k + 1, n, m)
                vals[cnt] = cz * bp
                cnt += 1

                rows[cnt] = row
                cols[cnt] = _full_index(i, j, k - 1, n, m)
                vals[cnt] = cz * bm
                cnt += 1

                # Mixed terms: the corner opposite to the node in each of the
                # four (x_i, eta) cells around it; edge neighbours cancel
                for axis in range(2):
                    for di in (-1, 1):
                        if axis == 0:
                            slope = s1p if di > 0 else s1m
                            ii = i + di
                            jj = j
                        else:
                            slope = s2p if di > 0 else s2m
                            ii = i
                            jj = j + di
                        for dk in (-1, 1):
                            eta_c = eta_p if dk > 0 else eta_m
                            coef = -di * dk * w * eta_c * slope
                            center -= coef
                            rows[cnt] = row
                            cols[cnt] = _full_index(ii, jj, k + dk, n, m)
                            vals[cnt] = coef
                            cnt += 1

                rows[cnt] = row
                cols[cnt] = _full_index(i, j, k, n, m)
                vals[cnt] = center
                cnt += 1

    return rows[:cnt], cols[:cnt], vals[:cnt]


@jit
def unknown_columns(n, m):
    """Full-grid indices of the unknown nodes, in row order."""
    out = np.empty(n * n * (m - 1), dtype=np.int64)
    cnt = 0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, m):
                out[cnt] = _full_index(i, j, k, n, m)
                cnt += 1
    return out
