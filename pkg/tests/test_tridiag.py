"""In-repo QL eigensolver against the numpy oracle."""

import numpy as np
import pytest

from fraclag.tridiag import tridiag_eigh_first_row


def _dense(d, e):
    return np.diag(d) + np.diag(e, 1) + np.diag(e, -1)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 12, 40, 80])
def test_matches_numpy_on_random_matrices(n):
    rng = np.random.default_rng(42 + n)
    d = rng.normal(size=n)
    e = rng.normal(size=n - 1)
    vals, row = tridiag_eigh_first_row(d, e)
    ref_vals, ref_vecs = np.linalg.eigh(_dense(d, e))
    assert np.all(np.diff(vals) >= 0.0)
    scale = max(1.0, np.abs(ref_vals).max())
    assert np.abs(vals - ref_vals).max() <= 1e-13 * scale
    # eigenvector signs are arbitrary; compare magnitudes
    assert np.abs(np.abs(row) - np.abs(ref_vecs[0])).max() <= 1e-12


def test_first_row_is_orthonormal_row():
    rng = np.random.default_rng(7)
    n = 25
    d = rng.normal(size=n)
    e = rng.normal(size=n - 1)
    _, row = tridiag_eigh_first_row(d, e)
    assert abs(np.sum(row ** 2) - 1.0) <= 1e-13


def test_diagonal_matrix_needs_no_rotations():
    d = np.array([3.0, -1.0, 2.0])
    vals, row = tridiag_eigh_first_row(d, np.zeros(2))
    assert np.allclose(vals, [-1.0, 2.0, 3.0])
    # first basis vector belongs to the eigenvalue 3
    assert np.allclose(np.abs(row), [0.0, 0.0, 1.0])


def test_clustered_eigenvalues():
    # near-degenerate pair must still deflate
    d = np.array([1.0, 1.0 + 1e-13, 5.0])
    e = np.array([1e-14, 1e-14])
    vals, _ = tridiag_eigh_first_row(d, e)
    ref = np.linalg.eigvalsh(_dense(d, e))
    assert np.abs(vals - ref).max() <= 1e-12


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        tridiag_eigh_first_row([1.0, 2.0], [1.0, 1.0])


def test_large_jacobi_matrix_converges():
    # Laguerre-type Jacobi matrix at the contract edge (M=200, theta=10)
    theta = 10.0
    n = 201
    i = np.arange(n, dtype=float)
    d = 2.0 * i + theta + 1.0
    j = np.arange(1.0, n)
    e = np.sqrt(j * (j + theta))
    vals, row = tridiag_eigh_first_row(d, e)
    ref = np.linalg.eigvalsh(_dense(d, e))
    assert np.abs((vals - ref) / ref).max() <= 1e-12
    assert vals[0] > 0.0
