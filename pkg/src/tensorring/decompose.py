"""Full-format to tensor-ring conversion.

All routines share the core accuracy ``delta = eps * ||T||_F / sqrt(d)``;
for ``eps == 0`` every SVD falls back to the exact-rank threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .dense import as_tensor, cyclic_shift, dense_norm, inverse_shift, unfold
from .exceptions import DivisorError, DomainError, IndexDomainError
from .linalg import delta_rank, divisors, svd_factors
from .ring import TRTensor, shift_representation

__all__ = [
    "InteractionProfile",
    "core_delta",
    "tr_svd",
    "balanced_r0",
    "tr_svd_balanced",
    "tr_svd_candidates",
    "reduced_storage_tr_svd",
    "interaction_rank",
    "interaction_profile",
    "heuristic_tr_svd",
]


def core_delta(T, eps: float) -> float:
    if eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps}")
    return eps * dense_norm(T) / math.sqrt(np.ndim(T))


def _first_rank(T, delta) -> int:
    if T.ndim == 1:
        return 1
    return max(delta_rank(unfold(T, 1), delta), 1)


class _FirstStep:
    """Truncated SVD of the first unfolding, reusable across divisors."""

    def __init__(self, T: np.ndarray, delta: float):
        self.T = T
        self.delta = delta
        C = T.reshape(T.shape[0], -1, order="F")
        self.U, s, V = svd_factors(C, delta)
        self.W = s[:, None] * V.T
        self.rank = len(s)

    def build(self, r0: int) -> TRTensor:
        T, delta = self.T, self.delta
        n = T.shape
        d = T.ndim
        R = self.rank
        if r0 < 1 or R % r0:
            raise DivisorError(r0, R)
        r1 = R // r0
        G1 = self.U.reshape(n[0], r0, r1, order="F").transpose(1, 0, 2)
        C = self.W.reshape(r0, r1, -1, order="F").transpose(1, 2, 0)
        C = C.reshape(r1, math.prod(n[1 : d - 1]), n[d - 1] * r0, order="F")
        cores = [G1]
        r_prev = r1
        for k in range(1, d - 1):
            C = C.reshape(r_prev * n[k], -1, order="F")
            U, s, V = svd_factors(C, delta)
            r = len(s)
            cores.append(U.reshape(r_prev, n[k], r, order="F"))
            C = s[:, None] * V.T
            r_prev = r
        cores.append(C.reshape(r_prev, n[d - 1], r0, order="F"))
        return TRTensor(cores)


def tr_svd(T, eps: float, r0: int = 1) -> TRTensor:
    """TR-SVD with a prescribed first rank ``r0``.

    ``r0`` must divide ``rank_delta(T_<1>)``; otherwise :class:`DivisorError`
    is raised with the actual rank attached. ``r0 = 1`` is TT-SVD.
    """
    T = as_tensor(T)
    delta = core_delta(T, eps)
    if T.ndim == 1:
        if r0 != 1:
            raise DivisorError(r0, 1)
        return TRTensor([T.reshape(1, -1, 1).copy()])
    return _FirstStep(T, delta).build(r0)


def balanced_r0(rank: int) -> list:
    """Divisors of ``rank`` minimizing ``|r0 - rank / r0|`` (one or two of them)."""
    divs = divisors(rank)
    cost = [abs(r - rank / r) for r in divs]
    best = min(cost)
    return [r for r, c in zip(divs, cost) if c == best]


def tr_svd_balanced(T, eps: float) -> TRTensor:
    """TR-SVD with the balanced first rank.

    When ``r0`` and ``rank / r0`` tie, both are computed and the one with
    the larger storage cost is returned.
    """
    T = as_tensor(T)
    if T.ndim == 1:
        return tr_svd(T, eps, 1)
    step = _FirstStep(T, core_delta(T, eps))
    reps = [step.build(r0) for r0 in balanced_r0(step.rank)]
    return max(reps, key=lambda rep: rep.storage)


def tr_svd_candidates(T, eps: float, shifts=None) -> Iterator[tuple]:
    """Yield ``(k, r0, rep)`` for every shift ``tau_k`` and divisor ``r0``.

    ``rep`` is already relabelled back to the original mode order. Shifts
    default to ``1..d`` and divisors run in ascending order.
    """
    T = as_tensor(T)
    d = T.ndim
    delta = core_delta(T, eps)
    for k in shifts if shifts is not None else range(1, d + 1):
        Ts = np.asfortranarray(cyclic_shift(T, k))
        if d == 1:
            yield k, 1, tr_svd(T, eps, 1)
            continue
        step = _FirstStep(Ts, delta)
        for r0 in divisors(step.rank):
            yield k, r0, shift_representation(step.build(r0), inverse_shift(k, d))


def reduced_storage_tr_svd(T, eps: float) -> TRTensor:
    """Exhaustive search over cyclic shifts and first-rank divisors.

    Returns the cheapest candidate; ties keep the first one in
    (shift ascending, divisor ascending) order.
    """
    best = None
    for _, _, rep in tr_svd_candidates(T, eps):
        if best is None or rep.storage < best.storage:
            best = rep
    return best


def interaction_rank(T, k: int, delta: float) -> int:
    """Delta-rank of the k:th interaction matrix ``(T^{tau_k})_<2>``."""
    T = np.asarray(T)
    d = T.ndim
    if not 1 <= k <= d:
        raise IndexDomainError(f"interaction index k={k} outside [1, {d}]")
    Ts = cyclic_shift(T, k)
    if d <= 2:
        M = Ts.reshape(-1, 1, order="F")
    else:
        M = unfold(Ts, 2)
    return delta_rank(M, delta)


@dataclass(frozen=True)
class InteractionProfile:
    """Interaction ranks and the shift/divisor picked from them (1-based ``k_star``)."""

    interaction_ranks: tuple
    k_star: int
    first_rank: int
    r0_star: int


def interaction_profile(T, eps: float) -> InteractionProfile:
    T = as_tensor(T)
    d = T.ndim
    delta = core_delta(T, eps)
    ir = tuple(interaction_rank(T, k, delta) for k in range(1, d + 1))
    k_star = int(np.argmin(ir)) + 1
    R = _first_rank(np.asfortranarray(cyclic_shift(T, k_star)), delta)
    ir_prev = ir[(k_star - 2) % d]
    ir_cur = ir[k_star - 1]
    best, best_cost = None, None
    for r0 in divisors(R):
        cost = abs(ir_prev - R / r0) + abs(ir_cur - r0)
        if best_cost is None or cost < best_cost:
            best, best_cost = r0, cost
    return InteractionProfile(ir, k_star, R, best)


def heuristic_tr_svd(T, eps: float, profile: Optional[InteractionProfile] = None) -> TRTensor:
    """Single TR-SVD at the shift and divisor suggested by interaction ranks."""
    T = as_tensor(T)
    if profile is None:
        profile = interaction_profile(T, eps)
    d = T.ndim
    Ts = np.asfortranarray(cyclic_shift(T, profile.k_star))
    rep = tr_svd(Ts, eps, profile.r0_star)
    return shift_representation(rep, inverse_shift(profile.k_star, d))
