"""Dense tensor substrate.

Dense tensors are plain :class:`numpy.ndarray` objects. Every reshape in the
package is first-index-fastest (``order="F"``), so the k:th unfolding is a
relabelling of the same column-major buffer.

Mode numbers ``k`` are 1-based, as in the math: ``unfold(T, 1)`` groups the
first mode into rows, ``cyclic_shift(T, 1)`` is the identity.
"""

from __future__ import annotations

import numpy as np

from .exceptions import IndexDomainError, ShapeError

__all__ = [
    "as_tensor",
    "unfold",
    "refold",
    "shift_axes",
    "cyclic_shift",
    "inverse_shift",
    "mode_product",
    "hadamard",
    "dense_norm",
]


def as_tensor(T) -> np.ndarray:
    """Validate and convert ``T`` to a float64 ndarray with order >= 1."""
    T = np.asarray(T, dtype=np.float64)
    if T.ndim < 1:
        raise ShapeError("tensor must have at least one mode")
    if any(n < 1 for n in T.shape):
        raise ShapeError(f"all mode sizes must be positive, got {T.shape}")
    return T


def unfold(T, k: int) -> np.ndarray:
    """Return the k:th unfolding ``T_<k>`` of shape (n_1...n_k, n_{k+1}...n_d)."""
    T = np.asarray(T)
    d = T.ndim
    if not 1 <= k <= d - 1:
        raise IndexDomainError(f"unfolding index k={k} outside [1, {d - 1}]")
    rows = int(np.prod(T.shape[:k]))
    return np.reshape(T, (rows, -1), order="F")


def refold(M, shape) -> np.ndarray:
    """Inverse of :func:`unfold` for any split point."""
    return np.reshape(M, tuple(shape), order="F")


def shift_axes(d: int, k: int) -> tuple:
    """Axis order realizing ``tau_k = gamma^(k-1)`` on a d-way tensor.

    ``gamma = (1, d, d-1, ..., 2)`` shifts the modes left by one, so
    ``T^{tau_k}`` has mode sizes ``(n_k, ..., n_d, n_1, ..., n_{k-1})``.
    Any integer ``k`` is accepted and reduced modulo ``d``.
    """
    p = (k - 1) % d
    return tuple((j + p) % d for j in range(d))


def inverse_shift(k: int, d: int) -> int:
    """Shift number ``k'`` with ``tau_{k'} = tau_k^{-1}``."""
    return (-(k - 1)) % d + 1


def cyclic_shift(T, k: int) -> np.ndarray:
    """Return ``T^{tau_k}`` with ``T^tau(i_1..i_d) = T(i_tau(1), ..., i_tau(d))``."""
    T = np.asarray(T)
    return np.transpose(T, shift_axes(T.ndim, k))


def mode_product(T, A, k: int) -> np.ndarray:
    """k-mode product ``T x_k A``; mode k of size n_k becomes ``A.shape[0]``."""
    T = np.asarray(T)
    A = np.atleast_2d(np.asarray(A))
    if not 1 <= k <= T.ndim:
        raise IndexDomainError(f"mode k={k} outside [1, {T.ndim}]")
    if A.shape[1] != T.shape[k - 1]:
        raise ShapeError(
            f"matrix has {A.shape[1]} columns but mode {k} has size {T.shape[k - 1]}"
        )
    out = np.tensordot(A, T, axes=([1], [k - 1]))
    return np.moveaxis(out, 0, k - 1)


def hadamard(T1, T2) -> np.ndarray:
    T1, T2 = np.asarray(T1), np.asarray(T2)
    if T1.shape != T2.shape:
        raise ShapeError(f"shape mismatch {T1.shape} vs {T2.shape}")
    return T1 * T2


def dense_norm(T) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(np.ravel(T)))
