"""Edge deletion, edge insertion and rank reshuffling on tensor rings."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .dense import inverse_shift
from .exceptions import DivisorError, DomainError, IndexDomainError
from .ring import TRTensor, round_cores, shift_representation, tr_add, tr_norm

__all__ = [
    "delete_edge",
    "rank_reshuffle",
    "insert_edge",
]


def _check_eps(eps):
    if eps is not None and eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps}")


def _successive_sum(terms, tol: Optional[float]) -> TRTensor:
    """Add TR terms one at a time, rounding each partial sum to ``tol``."""
    acc = None
    for term in terms:
        acc = term if acc is None else tr_add(acc, term)
        if tol is not None:
            acc = round_cores(acc, tol)
    return acc


def delete_edge(T: TRTensor, k: int, eps: float, norm: Optional[float] = None) -> TRTensor:
    """Cut the bond ``r_{k-1}`` joining core ``k-1`` to core ``k`` (1-based).

    The tensor is written as the sum over that bond index of open-chain
    terms. Partial sums are rounded after each addition with an absolute
    budget of ``eps * ||T|| / r_{k-1}``, so the total error stays below
    ``eps * ||T||``. The result has ``r_{k-1} == 1``.
    """
    d = T.d
    if not 1 <= k <= d:
        raise IndexDomainError(f"edge index k={k} outside [1, {d}]")
    _check_eps(eps)
    r = T.ranks[k - 1]
    S = shift_representation(T, k)
    if r == 1:
        out = S
    else:
        if norm is None:
            norm = tr_norm(T) if eps > 0 else 0.0
        tol = eps * norm / r
        cores = S.cores

        def terms():
            for l in range(r):
                if d == 1:
                    yield TRTensor([cores[0][l : l + 1, :, l : l + 1]])
                else:
                    first = cores[0][l : l + 1]
                    last = cores[-1][:, :, l : l + 1]
                    yield TRTensor([first] + cores[1:-1] + [last])

        out = _successive_sum(terms(), tol)
    return shift_representation(out, inverse_shift(k, d))


def _check_divisor(rho: int, r1: int):
    if rho < 1 or r1 % rho:
        raise DivisorError(rho, r1)


def _restack(T: TRTensor, rho: int) -> TRTensor:
    """Exact reshuffle of the ``(1,2)`` bond: ranks ``(r0 rho, r1/rho, r2 rho, ...)``."""
    cores = T.cores
    d = T.d
    r0, n1, r1 = cores[0].shape
    m = r1 // rho
    G1 = cores[0]
    # column blocks of G_1 stacked vertically
    first = np.concatenate([G1[:, :, a * m : (a + 1) * m] for a in range(rho)], axis=0)
    G2 = cores[1]
    second = np.concatenate([G2[a * m : (a + 1) * m] for a in range(rho)], axis=2)
    eye = np.eye(rho)
    rest = [np.einsum("ab,rns->arnbs", eye, G).reshape(rho * G.shape[0], G.shape[1], rho * G.shape[2])
            for G in cores[2:]]
    if d == 2:
        return TRTensor([first, second])
    return TRTensor([first, second] + rest)


def _fast_path(T: TRTensor, rho: int, tol: float) -> TRTensor:
    """Reshuffle as ``rho`` successive additions with rounding in between.

    Each term lives in the frame shifted by one core, where the split bond
    closes the ring and the old ``r_0`` bond is interior.
    """
    cores = T.cores
    m = cores[0].shape[2] // rho

    def terms():
        for a in range(rho):
            G1 = cores[0][:, :, a * m : (a + 1) * m]
            G2 = cores[1][a * m : (a + 1) * m]
            yield TRTensor([G2] + cores[2:] + [G1])

    out = _successive_sum(terms(), tol)
    return shift_representation(out, T.d)


def rank_reshuffle(T: TRTensor, rho1: int, eps: Optional[float] = None,
                   norm: Optional[float] = None) -> TRTensor:
    """Move a factor ``rho1`` of ``r_1`` onto every other bond.

    With ``eps=None`` the restacking is exact and the ranks become
    ``(r_0 rho1, r_1/rho1, r_2 rho1, ..., r_0 rho1)``. Otherwise the blocks
    are added one by one and rounded to an absolute budget of
    ``eps * ||T|| / rho1`` each.
    """
    _check_eps(eps)
    if T.d < 2:
        raise DomainError("rank reshuffling needs d >= 2")
    _check_divisor(rho1, T.ranks[1])
    if rho1 == 1 and eps is None:
        return T
    if eps is None:
        return _restack(T, rho1)
    if norm is None:
        norm = tr_norm(T) if eps > 0 else 0.0
    return _fast_path(T, rho1, eps * norm / rho1)


def insert_edge(T: TRTensor, r0_new: int, eps: Optional[float] = None,
                norm: Optional[float] = None) -> TRTensor:
    """Close a tensor train into a ring with end rank ``r0_new``.

    ``r0_new`` must divide ``r_1``. ``eps=None`` gives the exact restacking;
    a number selects the rounded successive-addition path.
    """
    if T.ranks[0] != 1:
        raise DomainError(f"insert_edge expects a tensor train (r_0 = 1), got r_0 = {T.ranks[0]}")
    if r0_new == 1:
        _check_eps(eps)
        return T
    return rank_reshuffle(T, r0_new, eps, norm)
