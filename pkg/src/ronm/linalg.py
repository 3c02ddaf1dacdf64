"""Dense complex linear algebra for small systems.

Everything here works on plain numpy arrays. Matrices stay tiny (system
dimension d <= 4, superoperators up to 16 x 16), so accuracy and clarity
take priority over speed. Vectorization is column-stacking throughout:
vec(A X B) = (B^T kron A) vec(X).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import NotHermitian

#: Relative tolerance for accepting a matrix as Hermitian.
HERM_TOL = 1e-12

#: Absolute tolerance on eigendecomposition residuals.
EIG_TOL = 1e-10

#: Eigenvalues with |lambda| <= ZERO_TOL count as zero when classifying signs.
ZERO_TOL = 1e-11


def is_hermitian(matrix: np.ndarray, tol: float = HERM_TOL) -> bool:
    """True when max_ij |M[i,j] - conj(M[j,i])| <= tol * max_ij |M[i,j]|."""
    m = np.asarray(matrix)
    scale = float(np.abs(m).max()) if m.size else 0.0
    if scale == 0.0:
        return True
    return float(np.abs(m - m.conj().T).max()) <= tol * scale


def require_hermitian(matrix: np.ndarray, what: str = "matrix") -> np.ndarray:
    """Return the input as a complex array, raising NotHermitian if it fails the check."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitian(f"{what} must be a square matrix, got shape {m.shape}")
    if not is_hermitian(m):
        dev = float(np.abs(m - m.conj().T).max())
        raise NotHermitian(f"{what} is not Hermitian (max deviation {dev:.3e})")
    return m


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(matrix).reshape(-1, order="F")


def unvec(vector: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vec` for square matrices."""
    v = np.asarray(vector).ravel()
    dim = math.isqrt(v.size)
    if dim * dim != v.size:
        raise ValueError(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape((dim, dim), order="F")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; (A kron B)[i*dB+k, j*dB+l] = A[i,j] B[k,l]."""
    return np.kron(np.asarray(a), np.asarray(b))


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    ``eigenvalues`` are real and sorted descending; column i of
    ``eigenvectors`` is the unit eigenvector paired with ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eig(matrix: np.ndarray, what: str = "matrix") -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    m = require_hermitian(matrix, what)
    vals, vecs = np.linalg.eigh((m + m.conj().T) / 2.0)
    order = np.argsort(vals)[::-1]
    return EigenDecomposition(eigenvalues=vals[order], eigenvectors=vecs[:, order])


def trace_norm(matrix: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix: sum of |eigenvalues|."""
    m = require_hermitian(matrix)
    vals = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    return float(np.sum(np.abs(vals)))


def matrix_exp(matrix: np.ndarray) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring with a Pade core)."""
    return scipy.linalg.expm(np.asarray(matrix, dtype=complex))
