"""
Small linear-algebra helpers for covariance estimates.
"""

import numpy as np
from scipy import linalg

from utils.errors import InputError

SYMMETRY_TOL = 1e-10


def check_symmetric(matrix, tol: float = SYMMETRY_TOL) -> np.ndarray:
    """
    Return the matrix as a float array after checking it is square and symmetric.

    Raises:
        InputError: If the matrix is not square or not symmetric to `tol` (relative)
    """
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.T).max(initial=0.0) > tol * scale:
        raise InputError('matrix is not symmetric')
    return m


def psd_project(matrix, clip: float = 0.0) -> np.ndarray:
    """
    Nearest PSD matrix in Frobenius norm: eigenvalues below `clip` are raised to it.

    PSD inputs are returned unchanged (as a copy).

    Raises:
        InputError: If the input is not symmetric
    """
    m = check_symmetric(matrix)
    eigenvalues, vectors = linalg.eigh(m)
    if eigenvalues.min(initial=np.inf) >= clip:
        return m.copy()
    clipped = np.maximum(eigenvalues, clip)
    out = (vectors * clipped) @ vectors.T
    return 0.5 * (out + out.T)


def relative_frobenius_error(estimate, reference) -> float:
    """||estimate - reference||_F / ||reference||_F."""
    estimate = np.atleast_2d(np.asarray(estimate, dtype=float))
    reference = np.atleast_2d(np.asarray(reference, dtype=float))
    if estimate.shape != reference.shape:
        raise InputError(f"shape mismatch: {estimate.shape} vs {reference.shape}")
    norm = np.linalg.norm(reference)
    if norm == 0.0:
        raise InputError('reference matrix is zero')
    return float(np.linalg.norm(estimate - reference) / norm)
