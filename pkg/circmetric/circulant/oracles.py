"""Brute-force references the closed forms are checked against.

Nothing here knows about circulant structure beyond building the full
matrix; every quantity is recomputed the generic way.
"""

import numpy as np
import scipy.linalg

from .circulant import Q, SymCirc4, Vector4


def full_matrix(m: SymCirc4) -> np.ndarray:
    # symmetric, so the first column equals the first row
    return scipy.linalg.circulant(np.array(m.first_row, dtype=float))


def cofactor_det(matrix: np.ndarray) -> float:
    """Laplace expansion along the first row."""
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    if n == 1:
        return float(matrix[0, 0])
    total = 0.0
    for j in range(n):
        minor = np.delete(np.delete(matrix, 0, axis=0), j, axis=1)
        total += (-1) ** j * matrix[0, j] * cofactor_det(minor)
    return total


def eigenvalue_oracle(m: SymCirc4) -> np.ndarray:
    return np.sort(np.linalg.eigvalsh(full_matrix(m)))


def leading_minors(matrix: np.ndarray) -> list[float]:
    return [cofactor_det(matrix[:k, :k]) for k in range(1, matrix.shape[0] + 1)]


def minors_positive_definite(m: SymCirc4) -> bool:
    """Sylvester's criterion on the expanded matrix."""
    return all(minor > 0 for minor in leading_minors(full_matrix(m)))


def pullback_contraction(m: SymCirc4) -> np.ndarray:
    # f_ij = g_ik q_t^k q_j^t, with q_i^j stored as Q[i, j]
    return np.einsum("ik,tk,jt->ij", full_matrix(m), Q, Q)


def bilinear(matrix: np.ndarray, w: Vector4, v: Vector4) -> float:
    return float(np.einsum("i,ij,j->", w.as_array(), matrix, v.as_array()))
