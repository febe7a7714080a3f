"""Learnable orthogonal mode transforms.

Each mode carries a square orthogonal matrix; the learning step is the
classical orthogonal Procrustes solution, maximizing ``trace(M @ L)`` over
orthogonal ``L`` via the SVD of ``M``.
"""

from __future__ import annotations

import numpy as np

from .tensor import dct_matrix, unfold


class TransformSet:
    """Three square orthogonal matrices, one per mode."""

    def __init__(self, l1: np.ndarray, l2: np.ndarray, l3: np.ndarray):
        self.matrices = (np.asarray(l1), np.asarray(l2), np.asarray(l3))
        for i, l in enumerate(self.matrices, start=1):
            if l.ndim != 2 or l.shape[0] != l.shape[1]:
                raise ValueError(f"mode-{i} transform must be square, got {l.shape}")

    def for_mode(self, mode: int) -> np.ndarray:
        return self.matrices[mode - 1]

    def replace(self, mode: int, l: np.ndarray) -> "TransformSet":
        mats = list(self.matrices)
        mats[mode - 1] = l
        return TransformSet(*mats)

    def max_residual(self) -> float:
        return max(orthogonality_residual(l) for l in self.matrices)

    @staticmethod
    def identity(dims: tuple[int, int, int]) -> "TransformSet":
        return TransformSet(*(np.eye(d) for d in dims))

    @staticmethod
    def dct(dims: tuple[int, int, int]) -> "TransformSet":
        return TransformSet(*(dct_matrix(d) for d in dims))


def orthogonality_residual(l: np.ndarray) -> float:
    """``||L @ L.T - I||_F``, zero iff L has orthonormal rows."""
    l = np.asarray(l)
    if l.ndim != 2 or l.shape[0] != l.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {l.shape}")
    return float(np.linalg.norm(l @ l.T - np.eye(l.shape[0])))


def procrustes_rotation(m: np.ndarray) -> np.ndarray:
    """Orthogonal L maximizing trace(M @ L): L = V @ U.T from M = U S V.T."""
    u, _, vh = np.linalg.svd(np.asarray(m))
    return vh.T @ u.T


def update_transform(
    x_i: np.ndarray, y_i: np.ndarray, n_i: np.ndarray, mu: float, mode: int
) -> np.ndarray:
    """Procrustes update of the mode transform from the current iterates.

    Builds ``M = unfold(Y - N/mu, mode) @ unfold(X, mode).T`` and returns the
    trace-optimal orthogonal matrix for it.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    if not (np.shape(x_i) == np.shape(y_i) == np.shape(n_i)):
        raise ValueError("X, Y and the multiplier must share dims")
    m = unfold(y_i - n_i / mu, mode) @ unfold(x_i, mode).T
    return procrustes_rotation(m)
