from numba import njit as jit
import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.linalg import LinearOperator, bicgstab, splu, spsolve

__all__ = [
    "LinearOperator",
    "bicgstab",
    "coo_matrix",
    "csr_matrix",
    "norm",
    "splu",
    "spsolve",
]


@jit
def norm(arr):
    arr = arr.ravel()
    return np.sqrt(arr @ arr)
