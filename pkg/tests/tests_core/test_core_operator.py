import numpy as np
from numpy.testing import assert_allclose
from scipy.sparse import coo_matrix
import pytest

from pullin.core.operator import (
    assemble_operator,
    coefficient_fields,
    unknown_columns,
)


def _flat_operator(v, S, n, m, eps):
    rows, cols, vals = assemble_operator(v, S, n, m, eps)
    shape = (n * n * (m - 1), (n + 2) ** 2 * (m + 1))
    return coo_matrix((vals, (rows, cols)), shape=shape).tocsr()


def test_coefficients_of_flat_plate():
    n2, eta = 6, np.linspace(0, 1, 5)
    zero = np.zeros((n2, n2))
    alpha2, alpha3, alpha4, b1, b2, b3 = coefficient_fields(
        zero, zero, zero, eta, 0.5
    )

    for arr in (alpha2, alpha3, b1, b2, b3):
        assert_allclose(arr, 0.0)
    assert_allclose(alpha4, 1.0)
    assert alpha4.shape == (n2, n2, 5)


def test_coefficients_of_uniform_gap():
    n2, eta = 6, np.linspace(0, 1, 5)
    v = np.full((n2, n2), 1.0)
    zero = np.zeros((n2, n2))
    *_, alpha4, b1, b2, b3 = coefficient_fields(v, zero, zero, eta, 1.0)

    assert_allclose(alpha4, 0.25)
    assert_allclose(b3, 0.0)


def test_unknown_columns_are_interior_nodes():
    n, m = 4, 5
    cols = unknown_columns(n, m)
    i, j, k = np.unravel_index(cols, (n + 2, n + 2, m + 1))

    assert cols.size == n * n * (m - 1)
    assert np.all(np.diff(cols) > 0)
    assert i.min() == 1 and i.max() == n
    assert k.min() == 1 and k.max() == m - 1


def test_operator_has_fifteen_entries_per_row():
    n, m = 4, 5
    zero = np.zeros((n + 2, n + 2))
    rows, cols, vals = assemble_operator(zero, zero, n, m, 1.0)

    assert rows.size == 15 * n * n * (m - 1)
    assert np.all(np.bincount(rows) == 15)


@pytest.mark.parametrize("gap", [0.0, 0.5, -0.4])
def test_operator_annihilates_lifting_for_uniform_gap(gap):
    n, m = 5, 6
    v = np.full((n + 2, n + 2), gap)
    L = _flat_operator(v, np.zeros_like(v), n, m, 1.0)
    eta = np.broadcast_to(np.arange(m + 1) / m, (n + 2, n + 2, m + 1))

    assert_allclose(L @ eta.ravel(), 0.0, atol=1e-10)


def test_operator_is_exact_on_quadratics_for_flat_plate():
    n, m, eps = 5, 6, 0.7
    zero = np.zeros((n + 2, n + 2))
    L = _flat_operator(zero, zero, n, m, eps)
    x = np.arange(n + 2) / (n + 1)
    eta = np.arange(m + 1) / m
    x1, _, e = np.meshgrid(x, x, eta, indexing="ij")
    w = x1**2 + 3 * e**2

    # L w = eps² ∂₁² w + ∂η² w
    assert_allclose(L @ w.ravel(), 2 * eps**2 + 6, rtol=1e-10)


def _random_plate(n, seed):
    rng = np.random.default_rng(seed)
    v = np.zeros((n + 2, n + 2))
    v[1:-1, 1:-1] = 0.3 * rng.uniform(-1, 1, (n, n))
    S = rng.uniform(0, 2, (n + 2, n + 2))
    return v, S


def test_operator_annihilates_constants():
    n, m = 4, 4
    v, S = _random_plate(n, 1)
    L = _flat_operator(v, S, n, m, 1.0)

    assert_allclose(L @ np.ones(L.shape[1]), 0.0, atol=1e-10)


def test_operator_is_symmetric_after_scaling_by_gap():
    # Rows are energy gradients divided by the gap at the row node
    n, m = 4, 5
    v, S = _random_plate(n, 2)
    L = _flat_operator(v, S, n, m, 0.8)
    A = L[:, unknown_columns(n, m)].toarray()
    gap = np.repeat(1.0 + v[1:-1, 1:-1].ravel(), m - 1)
    B = gap[:, None] * A

    assert_allclose(B, B.T, atol=1e-9)
