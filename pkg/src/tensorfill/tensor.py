"""Dense 3-order tensor primitives.

Everything in this package works on plain ``numpy.ndarray`` values of shape
``(n1, n2, n3)`` and dtype float64.  The canonical linear layout (used for
mask indices and the binary file format) is first-index-fastest: element
``(i, j, k)`` lives at offset ``i + j*n1 + k*n1*n2``, i.e. Fortran order.

Modes are numbered 1..3 throughout, matching the usual convention for
mode-wise tensor algebra.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.fft


def check_tensor3(x: np.ndarray, name: str = "tensor") -> np.ndarray:
    """Validate and return a dense 3-order float64 tensor.

    Raises ValueError on wrong rank or non-finite entries.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3:
        raise ValueError(f"{name} must be a 3-order tensor, got shape {x.shape}")
    if not np.isfinite(x).all():
        raise ValueError(f"{name} contains non-finite entries")
    return x


def _check_mode(mode: int) -> int:
    if mode not in (1, 2, 3):
        raise ValueError(f"mode must be 1, 2 or 3, got {mode}")
    return mode


class ObservationMask:
    """Index set of observed entries of a tensor.

    ``indices`` are strictly increasing linear offsets into the canonical
    first-index-fastest layout.
    """

    def __init__(self, dims: tuple[int, int, int], indices: np.ndarray):
        dims = tuple(int(d) for d in dims)
        if len(dims) != 3 or any(d <= 0 for d in dims):
            raise ValueError(f"dims must be three positive integers, got {dims}")
        indices = np.asarray(indices, dtype=np.int64)
        total = dims[0] * dims[1] * dims[2]
        if indices.size:
            if indices[0] < 0 or indices[-1] >= total:
                raise ValueError("mask indices out of range")
            if not (np.diff(indices) > 0).all():
                raise ValueError("mask indices must be strictly increasing")
        self.dims = dims
        self.indices = indices
        flat = np.zeros(total, dtype=bool)
        flat[indices] = True
        # Boolean view in tensor shape; F-order unravel matches the layout.
        self._bool = flat.reshape(dims, order="F")

    @property
    def size(self) -> int:
        return int(self.indices.size)

    def bool_array(self) -> np.ndarray:
        """Boolean tensor, True on observed entries."""
        return self._bool


def unfold(x: np.ndarray, mode: int) -> np.ndarray:
    """Mode-``mode`` unfolding: rows indexed by the mode, columns by the
    remaining indices with the lower-numbered mode varying fastest."""
    _check_mode(mode)
    x = np.asarray(x)
    return np.reshape(np.moveaxis(x, mode - 1, 0), (x.shape[mode - 1], -1), order="F")


def fold(mat: np.ndarray, mode: int, dims: tuple[int, int, int]) -> np.ndarray:
    """Inverse of :func:`unfold` for the given target dims."""
    _check_mode(mode)
    mat = np.asarray(mat)
    rest = tuple(d for a, d in enumerate(dims) if a != mode - 1)
    if mat.shape != (dims[mode - 1], int(np.prod(rest))):
        raise ValueError(
            f"matrix shape {mat.shape} does not match dims {dims} for mode {mode}"
        )
    x = np.reshape(mat, (dims[mode - 1],) + rest, order="F")
    return np.moveaxis(x, 0, mode - 1)


def mode_product(x: np.ndarray, a: np.ndarray, mode: int) -> np.ndarray:
    """Mode product ``x ×_mode a`` = fold(a @ unfold(x, mode))."""
    _check_mode(mode)
    x = np.asarray(x)
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[1] != x.shape[mode - 1]:
        raise ValueError(
            f"matrix of shape {a.shape} cannot act on mode {mode} of shape {x.shape}"
        )
    return np.moveaxis(np.tensordot(a, x, axes=(1, mode - 1)), 0, mode - 1)


def mode_slices(x: np.ndarray, mode: int) -> list[np.ndarray]:
    """The n_mode slices of ``x`` along a mode.

    Mode-1 slice i is ``x[i, :, :]`` (n2 x n3), mode-2 slice j is the
    (n3 x n1) matrix with entries ``x[i, j, k]`` at position (k, i), and
    mode-3 slice k is the frontal ``x[:, :, k]`` (n1 x n2).
    """
    return list(mode_slice_stack(x, mode))


def mode_slice_stack(x: np.ndarray, mode: int) -> np.ndarray:
    """All mode slices as one (n_mode, rows, cols) array."""
    _check_mode(mode)
    x = np.asarray(x)
    if mode == 1:
        return x
    if mode == 2:
        return x.transpose(1, 2, 0)
    return x.transpose(2, 0, 1)


def stack_to_tensor(batch: np.ndarray, mode: int) -> np.ndarray:
    """Reassemble a tensor from its :func:`mode_slice_stack`."""
    _check_mode(mode)
    batch = np.asarray(batch)
    if mode == 1:
        return batch
    if mode == 2:
        return batch.transpose(2, 0, 1)
    return batch.transpose(1, 2, 0)


class TensorNorms(NamedTuple):
    fro: float
    l1: float
    linf: float


def norms(x: np.ndarray) -> TensorNorms:
    """Frobenius, entrywise l1 and entrywise max norms."""
    ax = np.abs(np.asarray(x))
    return TensorNorms(
        fro=float(np.sqrt(np.sum(ax * ax))),
        l1=float(np.sum(ax)),
        linf=float(ax.max()) if ax.size else 0.0,
    )


def project_mask(x: np.ndarray, mask: ObservationMask, keep: str = "on") -> np.ndarray:
    """Keep entries on (``keep="on"``) or off (``keep="off"``) the mask,
    zeroing the rest.  The two projections sum to ``x`` exactly."""
    x = np.asarray(x)
    if x.shape != mask.dims:
        raise ValueError(f"tensor shape {x.shape} does not match mask dims {mask.dims}")
    if keep == "on":
        return np.where(mask.bool_array(), x, 0.0)
    if keep == "off":
        return np.where(mask.bool_array(), 0.0, x)
    raise ValueError(f"keep must be 'on' or 'off', got {keep!r}")


def dft_mode(x: np.ndarray, mode: int) -> np.ndarray:
    """Unnormalized forward DFT along a mode (complex output)."""
    _check_mode(mode)
    return np.fft.fft(np.asarray(x), axis=mode - 1)


def idft_mode(x: np.ndarray, mode: int) -> np.ndarray:
    """Inverse DFT along a mode (1/n scaling; complex output)."""
    _check_mode(mode)
    return np.fft.ifft(np.asarray(x), axis=mode - 1)


def dct_mode(x: np.ndarray, mode: int) -> np.ndarray:
    """Orthonormal DCT-II along a mode."""
    _check_mode(mode)
    return scipy.fft.dct(np.asarray(x), type=2, axis=mode - 1, norm="ortho")


def idct_mode(x: np.ndarray, mode: int) -> np.ndarray:
    """Inverse of :func:`dct_mode`."""
    _check_mode(mode)
    return scipy.fft.idct(np.asarray(x), type=2, axis=mode - 1, norm="ortho")


def dct_matrix(n: int) -> np.ndarray:
    """The n x n orthonormal DCT-II matrix C, with C @ C.T = I.

    Row p, column q holds ``alpha_p * cos(pi * (2q + 1) * p / (2n))`` where
    ``alpha_0 = sqrt(1/n)`` and ``alpha_p = sqrt(2/n)`` otherwise.
    """
    p = np.arange(n)[:, None]
    q = np.arange(n)[None, :]
    c = np.cos(np.pi * (2 * q + 1) * p / (2 * n))
    c[0, :] *= np.sqrt(1.0 / n)
    c[1:, :] *= np.sqrt(2.0 / n)
    return c


def flatten(x: np.ndarray) -> np.ndarray:
    """Linear view of a tensor in the canonical layout order."""
    return np.asarray(x).ravel(order="F")


def unflatten(data: np.ndarray, dims: tuple[int, int, int]) -> np.ndarray:
    """Inverse of :func:`flatten`."""
    data = np.asarray(data)
    if data.size != dims[0] * dims[1] * dims[2]:
        raise ValueError(f"payload of length {data.size} does not match dims {dims}")
    return data.reshape(dims, order="F")
