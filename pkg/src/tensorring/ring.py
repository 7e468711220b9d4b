"""Tensor-ring (TR) representation and its arithmetic.

A TR tensor is a cyclic list of order-3 cores ``G_k`` of shape
``(r_{k-1}, n_k, r_k)`` with ``r_d == r_0``; entries are
``Trace(G_1[:, i_1, :] @ ... @ G_d[:, i_d, :])``.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .exceptions import CapacityError, DomainError, IndexDomainError, ShapeError
from .linalg import reduced_qr, svd_factors

__all__ = [
    "TRTensor",
    "MAX_DENSE_ELEMENTS",
    "tr_eval",
    "tr_to_dense",
    "storage_cost",
    "shift_representation",
    "tr_add",
    "tr_add_blockdiag",
    "tr_scale",
    "tr_norm",
    "tr_round",
]

#: Largest tensor (in elements) that the dense conversions will materialize.
MAX_DENSE_ELEMENTS = 2**27


class TRTensor:
    """Cores of a tensor ring.

    Parameters
    ----------
    cores : sequence of array_like
        ``d`` arrays of shape ``(r_{k-1}, n_k, r_k)``. The last rank must
        equal the first one.
    """

    __slots__ = ("_cores",)

    def __init__(self, cores: Sequence[np.ndarray]):
        cores = [np.asarray(G, dtype=np.float64) for G in cores]
        if not cores:
            raise ShapeError("a tensor ring needs at least one core")
        for k, G in enumerate(cores):
            if G.ndim != 3:
                raise ShapeError(f"core {k + 1} has {G.ndim} modes, expected 3")
            if min(G.shape) < 1:
                raise ShapeError(f"core {k + 1} has an empty mode: {G.shape}")
        for k in range(len(cores)):
            nxt = cores[(k + 1) % len(cores)]
            if cores[k].shape[2] != nxt.shape[0]:
                raise ShapeError(
                    f"rank mismatch between core {k + 1} ({cores[k].shape}) "
                    f"and core {(k + 1) % len(cores) + 1} ({nxt.shape})"
                )
        self._cores = tuple(cores)

    @property
    def cores(self) -> list:
        return list(self._cores)

    @property
    def d(self) -> int:
        return len(self._cores)

    @property
    def shape(self) -> tuple:
        return tuple(G.shape[1] for G in self._cores)

    @property
    def ranks(self) -> tuple:
        """TR-rank vector ``(r_0, r_1, ..., r_d)`` with ``r_d == r_0``."""
        return tuple(G.shape[0] for G in self._cores) + (self._cores[0].shape[0],)

    @property
    def storage(self) -> int:
        return storage_cost(self)

    def __len__(self):
        return self.d

    def __getitem__(self, k):
        return self._cores[k]

    def __repr__(self):
        return f"TRTensor(shape={self.shape}, ranks={self.ranks})"

    def full(self, max_elements: Optional[int] = None) -> np.ndarray:
        return tr_to_dense(self, max_elements)

    def norm(self) -> float:
        return tr_norm(self)

    def __add__(self, other):
        if not isinstance(other, TRTensor):
            return NotImplemented
        return tr_add(self, other)

    def __mul__(self, a):
        if not np.isscalar(a):
            return NotImplemented
        return tr_scale(self, a)

    __rmul__ = __mul__

    def __neg__(self):
        return tr_scale(self, -1.0)

    def __sub__(self, other):
        if not isinstance(other, TRTensor):
            return NotImplemented
        return tr_add(self, tr_scale(other, -1.0))

    @classmethod
    def zeros(cls, shape) -> "TRTensor":
        return cls([np.zeros((1, n, 1)) for n in shape])

    @classmethod
    def ones(cls, shape) -> "TRTensor":
        return cls([np.ones((1, n, 1)) for n in shape])

    @classmethod
    def random(cls, shape, ranks, rng=None) -> "TRTensor":
        """Cores with i.i.d. standard normal entries.

        ``ranks`` lists ``r_0..r_{d-1}`` (or ``r_0..r_d`` with ``r_d == r_0``).
        """
        rng = np.random.default_rng(rng)
        d = len(shape)
        ranks = list(ranks)
        if len(ranks) == d + 1:
            if ranks[0] != ranks[-1]:
                raise ShapeError("r_d must equal r_0")
            ranks = ranks[:-1]
        if len(ranks) != d:
            raise ShapeError(f"expected {d} ranks, got {len(ranks)}")
        return cls(
            [rng.standard_normal((ranks[k], shape[k], ranks[(k + 1) % d])) for k in range(d)]
        )


def tr_eval(T: TRTensor, idx) -> float:
    """Entry ``T(i_1, ..., i_d)`` for a 0-based multi-index."""
    idx = tuple(int(i) for i in idx)
    if len(idx) != T.d:
        raise IndexDomainError(f"expected {T.d} indices, got {len(idx)}")
    for k, (i, n) in enumerate(zip(idx, T.shape)):
        if not 0 <= i < n:
            raise IndexDomainError(f"index {i} out of bounds for mode {k + 1} of size {n}")
    M = T[0][:, idx[0], :]
    for G, i in zip(T.cores[1:], idx[1:]):
        M = M @ G[:, i, :]
    return float(np.trace(M))


def tr_to_dense(T: TRTensor, max_elements: Optional[int] = None) -> np.ndarray:
    """Contract all cores into a dense array."""
    limit = MAX_DENSE_ELEMENTS if max_elements is None else max_elements
    total = math.prod(T.shape)
    if total > limit:
        raise CapacityError(f"dense tensor of {total} elements exceeds budget {limit}")
    if T.d == 1:
        return np.einsum("aia->i", T[0]).reshape(T.shape, order="F")
    # chain G_2 .. G_d, then close the ring against G_1 so that no
    # (r0, N, r0) intermediate is formed
    M = T[1]  # (r1, N, r)
    for G in T.cores[2:]:
        a, N, _ = M.shape
        M = np.tensordot(M, G, axes=([2], [0]))  # (r1, N, n, r)
        M = M.reshape(a, N * G.shape[1], G.shape[2], order="F")
    full = np.tensordot(T[0], M, axes=([0, 2], [2, 0]))  # (n1, N)
    return full.reshape(T.shape, order="F")


def storage_cost(T: TRTensor) -> int:
    """Number of stored core entries, ``sum_k r_{k-1} n_k r_k``."""
    return int(sum(G.size for G in T.cores))


def shift_representation(T: TRTensor, k: int) -> TRTensor:
    """TR of the shifted tensor ``T^{tau_k}`` by relabelling cores only."""
    p = (k - 1) % T.d
    cores = T.cores
    return TRTensor(cores[p:] + cores[:p])


def _blockdiag(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    a1, n, b1 = A.shape
    a2, _, b2 = B.shape
    C = np.zeros((a1 + a2, n, b1 + b2))
    C[:a1, :, :b1] = A
    C[a1:, :, b1:] = B
    return C


def _check_same_modes(T1: TRTensor, T2: TRTensor):
    if T1.shape != T2.shape:
        raise ShapeError(f"mode sizes differ: {T1.shape} vs {T2.shape}")


def tr_add(T1: TRTensor, T2: TRTensor) -> TRTensor:
    """Sum of two tensor rings with shared end bond.

    Middle cores are block diagonal. The first cores are placed side by side
    and the last cores stacked, after zero-padding the smaller end rank, so
    the end rank of the sum is ``max(r_0', r_0'')`` instead of their sum.
    """
    _check_same_modes(T1, T2)
    if T1.d == 1:
        return tr_add_blockdiag(T1, T2)
    r0 = max(T1.ranks[0], T2.ranks[0])

    def pad_first(G):
        return np.pad(G, ((0, r0 - G.shape[0]), (0, 0), (0, 0)))

    def pad_last(G):
        return np.pad(G, ((0, 0), (0, 0), (0, r0 - G.shape[2])))

    first = np.concatenate([pad_first(T1[0]), pad_first(T2[0])], axis=2)
    last = np.concatenate([pad_last(T1[-1]), pad_last(T2[-1])], axis=0)
    middle = [_blockdiag(A, B) for A, B in zip(T1.cores[1:-1], T2.cores[1:-1])]
    return TRTensor([first] + middle + [last])


def tr_add_blockdiag(T1: TRTensor, T2: TRTensor) -> TRTensor:
    """Sum with every core block diagonal, end cores included.

    Ranks of the result are the sums of the input ranks, and rounding cannot
    shrink them when the inputs are minimal; kept for comparison with
    :func:`tr_add`.
    """
    _check_same_modes(T1, T2)
    return TRTensor([_blockdiag(A, B) for A, B in zip(T1.cores, T2.cores)])


def tr_scale(T: TRTensor, a: float) -> TRTensor:
    cores = T.cores
    cores[0] = float(a) * cores[0]
    return TRTensor(cores)


def tr_norm(T: TRTensor) -> float:
    """Frobenius norm from the cores.

    The ring is first rotated so that its smallest bond closes the loop;
    the transfer matrix ``sum_i G(i) (x)_K G(i)`` is then accumulated with
    two cheap contractions per core instead of forming Kronecker products.
    """
    ranks = T.ranks[:-1]
    j = int(np.argmin(ranks))
    S = shift_representation(T, j + 1)
    G = S[0]
    # X[a, a', b, b'] = sum_i G(a, i, b) G(a', i, b')
    X = np.einsum("aib,cid->acbd", G, G)
    for G in S.cores[1:]:
        Y = np.tensordot(X, G, axes=([2], [0]))  # (a, a', b', i, e)
        X = np.tensordot(Y, G, axes=([2, 3], [0, 1]))
    sq = float(np.einsum("acac->", X))
    return math.sqrt(max(sq, 0.0))


def round_cores(T: TRTensor, tol: float) -> TRTensor:
    """Round ``T`` so that the absolute Frobenius error is at most ``tol``."""
    if tol < 0:
        raise DomainError(f"tolerance must be non-negative, got {tol}")
    cores = T.cores
    d = len(cores)
    delta = tol / math.sqrt(d * T.ranks[0])

    # left-to-right QR sweep
    for k in range(d - 1):
        a, n, b = cores[k].shape
        qr = reduced_qr(cores[k].reshape(a * n, b, order="F"))
        cores[k] = qr.Q.reshape(a, n, qr.Q.shape[1], order="F")
        cores[k + 1] = np.tensordot(qr.R, cores[k + 1], axes=([1], [0]))

    # cyclic step on the closing bond
    a, n, b = cores[-1].shape
    qr = reduced_qr(cores[-1].reshape(a * n, b, order="F"))
    U, s, V = svd_factors(qr.R, delta)
    if len(s) < b:
        cores[-1] = ((qr.Q @ U) * s).reshape(a, n, len(s), order="F")
        cores[0] = np.tensordot(V.T, cores[0], axes=([1], [0]))

    # right-to-left SVD sweep
    for k in range(d - 1, 0, -1):
        a, n, b = cores[k].shape
        U, s, V = svd_factors(cores[k].reshape(a, n * b, order="F"), delta)
        cores[k] = V.T.reshape(len(s), n, b, order="F")
        cores[k - 1] = np.tensordot(cores[k - 1], U * s, axes=([2], [0]))
    return TRTensor(cores)


def tr_round(T: TRTensor, eps: float, norm: Optional[float] = None) -> TRTensor:
    """TR-rounding to relative accuracy ``eps``.

    Structured QR sweep, an SVD of the closing-bond factor that may shrink
    ``r_0``, then a backward SVD sweep, all at core accuracy
    ``eps * ||T|| / sqrt(d * r_0)``. Ranks never grow.

    ``norm`` may carry a precomputed ``||T||_F``.
    """
    if eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps}")
    if norm is None:
        norm = tr_norm(T) if eps > 0 else 0.0
    return round_cores(T, eps * norm)
