"""Grid discretizations of the benchmark functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .exceptions import DomainError

__all__ = [
    "GeneratorSpec",
    "NAMED_FUNCTIONS",
    "grid",
    "random_exponents",
    "generate",
]


def _exp_cos_chain(x):
    d = len(x)
    s = x[0] * x[d - 1]
    for k in range(1, d - 1):
        s = s + x[k]
    return np.exp(np.cos(s))


def _exp_cos_two(x):
    d = len(x)
    s = x[0] * x[d - 1] + x[0] * x[1]
    for k in range(2, d - 1):
        s = s + x[k]
    return np.exp(np.cos(s))


def _inv_sqrt(x):
    return 1.0 / np.sqrt(1.0 + sum(xk**2 for xk in x))


def _exp_triple(x):
    # sum_{k=1}^{d-2} x_k x_{k+1} x_{k+2} + x_{d-1} x_d x_1
    d = len(x)
    s = sum(x[k] * x[k + 1] * x[k + 2] for k in range(d - 2))
    return np.exp(s + x[d - 2] * x[d - 1] * x[0])


def _park1(x):
    if len(x) != 4:
        raise DomainError("park1 is defined for d = 4")
    x1, x2, x3, x4 = x
    return (x1 / 2) * (np.sqrt(1 + (x2 + x3**2) * x4 / x1**2) - 1) + (x1 + 3 * x4) * np.exp(
        1 + np.sin(x3)
    )


def _sin_pair(x):
    # sum_{k=1}^{20} sin(k x_1) sin(k x_{floor(d/2)})
    j = len(x) // 2 - 1
    return sum(np.sin(k * x[0]) * np.sin(k * x[j]) for k in range(1, 21))


def _skip_poly(x):
    # sum_{k=1}^{(d-1)/2} x_{2k-1} x_{2k+1}
    d = len(x)
    return sum(x[2 * k - 2] * x[2 * k] for k in range(1, (d - 1) // 2 + 1))


def _constant(x):
    return np.ones(np.broadcast_shapes(*(xk.shape for xk in x)))


NAMED_FUNCTIONS: dict = {
    "exp-cos-chain": _exp_cos_chain,
    "exp-cos-two": _exp_cos_two,
    "inv-sqrt": _inv_sqrt,
    "exp-triple": _exp_triple,
    "park1": _park1,
    "sin-pair": _sin_pair,
    "skip-poly": _skip_poly,
    "constant": _constant,
}


@dataclass
class GeneratorSpec:
    """Recipe for a benchmark tensor.

    ``family`` is a key of :data:`NAMED_FUNCTIONS`, ``"random-polynomial"``
    or ``"file"`` (``path`` to a DTEN file).
    """

    family: str
    d: int = 5
    n: int = 20
    interval: tuple = (0.0, 1.0)
    m_deg: Optional[int] = None
    m_term: Optional[int] = None
    seed: Optional[int] = None
    path: Optional[str] = None
    name: Optional[str] = field(default=None)

    def __post_init__(self):
        if self.family == "file":
            if not self.path:
                raise DomainError("file family needs a path")
            return
        if self.d < 2 or self.n < 2:
            raise DomainError(f"need d >= 2 and n >= 2, got d={self.d}, n={self.n}")
        a, b = self.interval
        if not a < b:
            raise DomainError(f"empty interval ({a}, {b})")
        if self.family == "random-polynomial":
            if self.m_deg is None or self.m_deg < 1 or self.m_term is None or self.m_term < 1:
                raise DomainError("random-polynomial needs m_deg >= 1 and m_term >= 1")
            if self.seed is None:
                raise DomainError("random-polynomial needs an explicit seed")
        elif self.family not in NAMED_FUNCTIONS:
            raise DomainError(f"unknown family {self.family!r}")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.family == "random-polynomial":
            return f"random-polynomial-d{self.d}-deg{self.m_deg}-term{self.m_term}-s{self.seed}"
        if self.family == "file":
            return str(self.path)
        return f"{self.family}-d{self.d}-n{self.n}"


def grid(n: int, interval=(0.0, 1.0)) -> np.ndarray:
    return np.linspace(interval[0], interval[1], n)


def random_exponents(d: int, m_deg: int, m_term: int, seed: int) -> np.ndarray:
    """``(d, m_term)`` exponents drawn uniformly from ``{1..m_deg}`` (PCG64)."""
    rng = np.random.default_rng(seed)
    return rng.integers(1, m_deg + 1, size=(d, m_term))


def _evaluate(f: Callable, d: int, n: int, interval) -> np.ndarray:
    x1 = grid(n, interval)
    shape = [1] * d
    xs = []
    for k in range(d):
        s = list(shape)
        s[k] = n
        xs.append(x1.reshape(s))
    return np.asfortranarray(np.broadcast_to(f(xs), (n,) * d), dtype=np.float64)


def generate(spec: GeneratorSpec) -> np.ndarray:
    """Dense tensor for ``spec``."""
    if spec.family == "file":
        from .io import read_dten

        return read_dten(spec.path)
    if spec.family == "random-polynomial":
        alpha = random_exponents(spec.d, spec.m_deg, spec.m_term, spec.seed)
        x = grid(spec.n, spec.interval)
        powers = [x[:, None] ** alpha[k][None, :] for k in range(spec.d)]
        # sum over terms of outer products: accumulate one term at a time
        out = np.zeros((spec.n,) * spec.d, order="F")
        for j in range(spec.m_term):
            term = powers[0][:, j]
            for k in range(1, spec.d):
                term = np.multiply.outer(term, powers[k][:, j])
            out += term
        return out
    return _evaluate(NAMED_FUNCTIONS[spec.family], spec.d, spec.n, spec.interval)
