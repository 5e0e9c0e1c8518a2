"""Finite difference stencils on the plate grid.

All kernels take the nodal array *with* its boundary ring, shape
``(n + 2, n + 2)``, extended by one ghost layer (see :func:`extend`), and
return values at every node of the ring-including grid.
"""

from numba import njit as jit
import numpy as np


def extend(full):
    """Adds one ghost layer by odd reflection about the boundary values.

    For fields vanishing on the boundary this is the odd extension implied by
    the double sine basis, so that Navier conditions ``u = Δu = 0`` hold for
    the discrete operators on the boundary ring.

    """
    return np.pad(full, 1, mode="reflect", reflect_type="odd")


@jit
def gradient(ext, h):
    n2 = ext.shape[0] - 2
    d1 = np.empty((n2, n2))
    d2 = np.empty((n2, n2))
    for i in range(n2):
        for j in range(n2):
            d1[i, j] = (ext[i + 2, j + 1] - ext[i, j + 1]) / (2 * h)
            d2[i, j] = (ext[i + 1, j + 2] - ext[i + 1, j]) / (2 * h)
    return d1, d2


@jit
def laplacian(ext, h):
    n2 = ext.shape[0] - 2
    out = np.empty((n2, n2))
    for i in range(n2):
        for j in range(n2):
            out[i, j] = (
                ext[i + 2, j + 1]
                + ext[i, j + 1]
                + ext[i + 1, j + 2]
                + ext[i + 1, j]
                - 4 * ext[i + 1, j + 1]
            ) / (h * h)
    return out


@jit
def second_derivatives(ext, h):
    """Pure and mixed second differences ``(d11, d22, d12)``.

    The mixed derivative uses the four-point cross stencil.

    """
    n2 = ext.shape[0] - 2
    d11 = np.empty((n2, n2))
    d22 = np.empty((n2, n2))
    d12 = np.empty((n2, n2))
    for i in range(n2):
        for j in range(n2):
            c = ext[i + 1, j + 1]
            d11[i, j] = (ext[i + 2, j + 1] - 2 * c + ext[i, j + 1]) / (h * h)
            d22[i, j] = (ext[i + 1, j + 2] - 2 * c + ext[i + 1, j]) / (h * h)
            d12[i, j] = (
                ext[i + 2, j + 2]
                - ext[i + 2, j]
                - ext[i, j + 2]
                + ext[i, j]
            ) / (4 * h * h)
    return d11, d22, d12
