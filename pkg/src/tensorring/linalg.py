"""Rank-revealing matrix kernels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DomainError

__all__ = [
    "SVDTruncation",
    "QRFactors",
    "truncated_svd",
    "truncation_rank",
    "svd_factors",
    "delta_rank",
    "reduced_qr",
    "divisors",
]


@dataclass(frozen=True)
class SVDTruncation:
    """Result of a delta-truncated SVD, ``A ~ U @ diag(sigma) @ V.T``."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    r: int
    tail_energy: float

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.sigma) @ self.V.T


@dataclass(frozen=True)
class QRFactors:
    Q: np.ndarray
    R: np.ndarray


def _svd(A):
    try:
        return scipy.linalg.svd(A, full_matrices=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        return scipy.linalg.svd(A, full_matrices=False, lapack_driver="gesvd")


def truncation_rank(sigma, delta: float, shape=None) -> int:
    """Smallest rank whose discarded tail has Frobenius norm <= delta.

    With ``delta == 0`` the exact-rank threshold
    ``sigma_i > max(shape) * eps * sigma_1`` is used instead.
    """
    sigma = np.asarray(sigma, dtype=np.float64)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    if delta == 0:
        m = max(shape) if shape is not None else sigma.size
        tol = m * np.finfo(np.float64).eps * sigma[0]
        return int(np.count_nonzero(sigma > tol))
    # tail[i] = sqrt(sum_{j >= i} sigma_j^2)
    tail = np.sqrt(np.cumsum((sigma**2)[::-1])[::-1])
    keep = np.nonzero(tail > delta)[0]
    return int(keep[-1] + 1) if keep.size else 0


def truncated_svd(A, delta: float) -> SVDTruncation:
    """Delta-truncated SVD with the minimal rank meeting ``||A - A_r||_F <= delta``."""
    if delta < 0:
        raise DomainError(f"delta must be non-negative, got {delta}")
    A = np.asarray(A, dtype=np.float64)
    U, s, Vt = _svd(A)
    r = truncation_rank(s, delta, A.shape)
    tail = float(np.sqrt(np.sum(s[r:] ** 2)))
    return SVDTruncation(U[:, :r], s[:r], Vt[:r].T, r, tail)


def svd_factors(A, delta: float):
    """``(U, sigma, V)`` of the delta-truncated SVD, keeping at least one term.

    A matrix that truncates to rank 0 yields a single zero singular value, so
    callers building tensor formats always get positive bond dimensions.
    """
    res = truncated_svd(A, delta)
    if res.r >= 1:
        return res.U, res.sigma, res.V
    A = np.asarray(A)
    U = np.zeros((A.shape[0], 1))
    U[0, 0] = 1.0
    V = np.zeros((A.shape[1], 1))
    V[0, 0] = 1.0
    return U, np.zeros(1), V


def delta_rank(A, delta: float) -> int:
    """``rank_delta(A)``: the rank of the delta-truncated SVD."""
    if delta < 0:
        raise DomainError(f"delta must be non-negative, got {delta}")
    A = np.asarray(A, dtype=np.float64)
    if A.size == 0:
        return 0
    s = scipy.linalg.svdvals(A)
    return truncation_rank(s, delta, A.shape)


def reduced_qr(A) -> QRFactors:
    """Economic QR; Q has ``min(rows, cols)`` columns."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    Q, R = scipy.linalg.qr(A, mode="economic")
    return QRFactors(Q, R)


def divisors(n: int) -> list:
    """All positive divisors of ``n`` in ascending order."""
    n = int(n)
    if n < 1:
        raise DomainError(f"divisors need n >= 1, got {n}")
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]
