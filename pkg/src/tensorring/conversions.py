"""Conversions between canonical (CP), tensor-train and tensor-ring formats."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dense import inverse_shift
from .edges import delete_edge, insert_edge
from .exceptions import DomainError, ShapeError
from .functions import grid
from .linalg import divisors
from .ring import TRTensor, round_cores, shift_representation, tr_norm, tr_round

__all__ = [
    "CanonicalTensor",
    "cp_to_tt",
    "cp_to_tr_optimal",
    "cp_candidates",
    "tt_to_tr",
    "tr_to_tt",
    "CP_FAMILIES",
    "cp_family",
]


class CanonicalTensor:
    """Sum of ``r`` rank-one terms; ``factors[j][:, i]`` is ``v_i^{(j)}``."""

    def __init__(self, factors: Sequence[np.ndarray]):
        factors = [np.atleast_2d(np.asarray(F, dtype=np.float64)) for F in factors]
        if not factors:
            raise ShapeError("a canonical tensor needs at least one factor")
        r = factors[0].shape[1]
        if r < 1:
            raise ShapeError("canonical rank must be at least 1")
        for j, F in enumerate(factors):
            if F.ndim != 2 or F.shape[1] != r:
                raise ShapeError(f"factor {j} has shape {F.shape}, expected (n_{j}, {r})")
        self.factors = factors

    @property
    def d(self) -> int:
        return len(self.factors)

    @property
    def rank(self) -> int:
        return self.factors[0].shape[1]

    @property
    def shape(self) -> tuple:
        return tuple(F.shape[0] for F in self.factors)

    def shifted(self, k: int) -> "CanonicalTensor":
        p = (k - 1) % self.d
        return CanonicalTensor(self.factors[p:] + self.factors[:p])

    def norm(self) -> float:
        gram = np.ones((self.rank, self.rank))
        for F in self.factors:
            gram *= F.T @ F
        return math.sqrt(max(float(gram.sum()), 0.0))

    def full(self) -> np.ndarray:
        out = np.zeros(self.shape)
        for i in range(self.rank):
            term = self.factors[0][:, i]
            for F in self.factors[1:]:
                term = np.multiply.outer(term, F[:, i])
            out += term
        return out

    def __repr__(self):
        return f"CanonicalTensor(shape={self.shape}, rank={self.rank})"


def cp_to_tt(C: CanonicalTensor) -> TRTensor:
    """Exact tensor train with ranks ``(1, r, ..., r, 1)`` and diagonal middle cores."""
    if C.d < 2:
        raise DomainError("cp_to_tt needs d >= 2")
    r = C.rank
    F = C.factors
    cores = [F[0][None, :, :]]
    for G in F[1:-1]:
        core = np.zeros((r, G.shape[0], r))
        idx = np.arange(r)
        core[idx, :, idx] = G.T
        cores.append(core)
    cores.append(F[-1].T[:, :, None])
    return TRTensor(cores)


def cp_candidates(C: CanonicalTensor, eps: float):
    """Yield ``(shift, r0, representation)`` for every cyclic shift and divisor.

    Half of the budget goes to the successive-addition insertion of the
    closing edge, the other half to a final rounding.
    """
    if eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps}")
    norm = C.norm()
    d = C.d
    half = eps / 2
    for k in range(1, d + 1):
        tt = cp_to_tt(C.shifted(k))
        for r0 in divisors(C.rank):
            X = insert_edge(tt, r0, half, norm) if r0 > 1 else tt
            X = round_cores(X, half * norm)
            yield k, r0, shift_representation(X, inverse_shift(k, d))


def cp_to_tr_optimal(C: CanonicalTensor, eps: float) -> TRTensor:
    """Cheapest tensor ring over cyclic shifts of the factors and divisors of ``r``.

    Ties keep the first candidate in (shift, divisor) order.
    """
    best = None
    for _, _, rep in cp_candidates(C, eps):
        if best is None or rep.storage < best.storage:
            best = rep
    return best


def tt_to_tr(T: TRTensor, r0_new: int, eps: Optional[float] = None) -> TRTensor:
    return insert_edge(T, r0_new, eps)


def tr_to_tt(T: TRTensor, eps: float) -> TRTensor:
    """Cut the closing bond ``r_0``."""
    return delete_edge(T, 1, eps)


def _monomial_factors(exponents: np.ndarray, x: np.ndarray) -> list:
    """Factors of ``sum_j prod_k x_k^{exponents[k, j]}``."""
    return [x[:, None] ** exponents[k][None, :] for k in range(exponents.shape[0])]


def _t1(d, x, rng):
    # x_1 x_d + sum_{k=2}^{d-1} x_k
    ones = np.ones_like(x)
    cols = []
    first = [x] + [ones] * (d - 2) + [x]
    cols.append(first)
    for k in range(1, d - 1):
        cols.append([x if j == k else ones for j in range(d)])
    return [np.stack([c[j] for c in cols], axis=1) for j in range(d)]


def _pairs(d, x, pairs):
    ones = np.ones_like(x)
    return [
        np.stack([x if j in p else ones for p in pairs], axis=1) for j in range(d)
    ]


def _t2(d, x, rng):
    if d % 2:
        raise DomainError("T2 needs even d")
    return _pairs(d, x, [(k, d - 1 - k) for k in range(d // 2)])


def _t3(d, x, rng):
    if d % 2 or d < 4:
        raise DomainError("T3 needs even d >= 4")
    # x_k x_{k+1} x_{d-k} x_{d+1-k}, k = 1..d/2-1 (1-based)
    quads = [(k - 1, k, d - k - 1, d - k) for k in range(1, d // 2)]
    return _pairs(d, x, quads)


def _t4(d, x, rng):
    alpha = rng.integers(1, 21, size=(d, 10))
    return _monomial_factors(alpha, x)


def _sin_pair(d, x, rng):
    # sum_{k=1}^{20} sin(k x_1) sin(k x_{floor(d/2)})
    j = d // 2 - 1
    ks = np.arange(1, 21)
    ones = np.ones((x.size, 20))
    S = np.sin(np.outer(x, ks))
    if j == 0:
        return [S * S] + [ones] * (d - 1)
    return [S if i in (0, j) else ones for i in range(d)]


def _skip_poly(d, x, rng):
    if d % 2 == 0:
        raise DomainError("skip-poly needs odd d")
    return _pairs(d, x, [(2 * k - 2, 2 * k) for k in range(1, (d - 1) // 2 + 1)])


CP_FAMILIES = {
    "T1": _t1,
    "T2": _t2,
    "T3": _t3,
    "T4": _t4,
    "sin-pair": _sin_pair,
    "skip-poly": _skip_poly,
}


def cp_family(name: str, d: int, n: int = 32, interval=(0.0, 1.0), seed: Optional[int] = None) -> CanonicalTensor:
    """Analytic canonical decomposition of a benchmark function on a uniform grid."""
    if name not in CP_FAMILIES:
        raise DomainError(f"unknown CP family {name!r}")
    if d < 2 or n < 2:
        raise DomainError(f"need d >= 2 and n >= 2, got d={d}, n={n}")
    if name == "T4" and seed is None:
        raise DomainError("T4 needs an explicit seed")
    rng = np.random.default_rng(seed)
    return CanonicalTensor(CP_FAMILIES[name](d, grid(n, interval), rng))
