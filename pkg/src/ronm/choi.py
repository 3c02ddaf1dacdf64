"""Choi matrix of a map: construction, inversion, CP and TP diagnostics.

Convention: identity on the first tensor factor, the map on the second,
applied to the normalized maximally entangled state. With that normalization
a trace-preserving map always gives a unit-trace Choi matrix, and the matrix
is positive semidefinite exactly when the map is completely positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import IntermediateMap
from .exceptions import DimensionMismatch
from .linalg import ZERO_TOL, unvec, vec

#: Max-norm tolerance on the trace-preservation marginal.
TP_TOL = 1e-9


@dataclass(frozen=True)
class ChoiMatrix:
    """A d^2 x d^2 Choi matrix tagged with the window it came from."""

    sys_dim: int
    matrix: np.ndarray
    t_start: float = 0.0
    epsilon: float = 0.0


def maximally_entangled(d: int) -> np.ndarray:
    """Projector onto (1/sqrt(d)) sum_i |ii>, as a d^2 x d^2 matrix."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    phi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        phi[i * d + i] = 1.0
    phi /= np.sqrt(d)
    return np.outer(phi, phi.conj())


def _second_factor_blocks(mat: np.ndarray) -> tuple[int, np.ndarray]:
    side = mat.shape[0]
    d = math.isqrt(side)
    if d * d != side or mat.shape != (side, side):
        raise DimensionMismatch(f"expected a bipartite d^2 x d^2 matrix, got shape {mat.shape}")
    return d, mat.reshape(d, d, d, d)


def apply_to_second_factor(superop: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """Apply (identity tensor map) to a bipartite matrix, blockwise."""
    mat = np.asarray(mat, dtype=complex)
    d, blocks = _second_factor_blocks(mat)
    if superop.shape != (d * d, d * d):
        raise DimensionMismatch(
            f"superoperator shape {superop.shape} does not match system dimension {d}")
    out = np.zeros_like(mat)
    view = out.reshape(d, d, d, d)
    for i in range(d):
        for j in range(d):
            view[i, :, j, :] = unvec(superop @ vec(blocks[i, :, j, :]))
    return out


def choi_of_map(imap: IntermediateMap) -> ChoiMatrix:
    """Choi matrix of an intermediate map, tagged with its (t, epsilon)."""
    matrix = apply_to_second_factor(imap.superop, maximally_entangled(imap.dim))
    return ChoiMatrix(sys_dim=imap.dim, matrix=matrix,
                      t_start=imap.t_start, epsilon=imap.epsilon)


def map_from_choi(choi: ChoiMatrix) -> IntermediateMap:
    """Rebuild the map's superoperator from its Choi matrix (CJ inverse)."""
    d = choi.sys_dim
    _, blocks = _second_factor_blocks(np.asarray(choi.matrix, dtype=complex))
    superop = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d):
        for l in range(d):
            superop[:, l * d + k] = d * vec(blocks[k, :, l, :])
    return IntermediateMap(dim=d, superop=superop, t_start=choi.t_start,
                           epsilon=choi.epsilon, construction="from_choi")


def apply_from_choi(choi: ChoiMatrix, rho: np.ndarray) -> np.ndarray:
    """Act on a state through the Choi matrix: d Tr_1[(rho^T kron I) choi]."""
    d = choi.sys_dim
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d, d):
        raise DimensionMismatch(f"state has shape {rho.shape}, expected {(d, d)}")
    prod = np.kron(rho.T, np.eye(d, dtype=complex)) @ choi.matrix
    return d * partial_trace_first(prod)


def partial_trace_first(mat: np.ndarray) -> np.ndarray:
    """Trace out the first tensor factor of a bipartite matrix."""
    _, blocks = _second_factor_blocks(np.asarray(mat))
    return np.einsum("ikil->kl", blocks)


def partial_trace_second(mat: np.ndarray) -> np.ndarray:
    """Trace out the second tensor factor of a bipartite matrix."""
    _, blocks = _second_factor_blocks(np.asarray(mat))
    return np.einsum("ikjk->ij", blocks)


def is_cp(choi: ChoiMatrix) -> tuple[bool, float]:
    """Complete-positivity test; returns (verdict, min eigenvalue)."""
    m = np.asarray(choi.matrix, dtype=complex)
    vals = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    min_eig = float(vals[0])
    return min_eig >= -ZERO_TOL, min_eig


def is_tp_marginal(choi: ChoiMatrix) -> tuple[bool, float]:
    """Trace-preservation diagnostic: Tr over the output factor vs I/d.

    Returns (verdict, max-norm deviation). The output factor is the second
    one (the side the map acts on).
    """
    d = choi.sys_dim
    marginal = partial_trace_second(np.asarray(choi.matrix))
    deviation = float(np.abs(marginal - np.eye(d) / d).max())
    return deviation <= TP_TOL, deviation
