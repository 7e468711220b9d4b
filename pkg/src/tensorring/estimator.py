"""scikit-learn style wrapper around the TR decompositions."""

from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .decompose import heuristic_tr_svd, reduced_storage_tr_svd, tr_svd, tr_svd_balanced
from .exceptions import DomainError, ShapeError
from .ring import TRTensor, tr_to_dense

__all__ = ["check_tensor", "check_eps", "TensorRingDecomposition"]

_METHODS = ("tt", "balanced", "exhaustive", "heuristic")


def check_tensor(T, min_ndim: int = 1) -> np.ndarray:
    """Validate a dense tensor: finite float64, at least ``min_ndim`` modes, no empty mode."""
    arr = np.asarray(T, dtype=np.float64)
    if arr.ndim < min_ndim:
        raise ShapeError(f"expected a tensor with at least {min_ndim} modes, got {arr.ndim}")
    if arr.size == 0 or 0 in arr.shape:
        raise ShapeError(f"tensor has an empty mode: shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("tensor contains NaN or infinite entries")
    return np.asfortranarray(arr)


def check_eps(eps) -> float:
    eps = float(eps)
    if not eps >= 0:
        raise DomainError(f"eps must be non-negative, got {eps}")
    return eps


class TensorRingDecomposition(TransformerMixin, BaseEstimator, auto_wrap_output_keys=None):
    """Compress a dense tensor into tensor-ring format.

    Parameters
    ----------
    eps : float
        Relative Frobenius accuracy.
    method : {"tt", "balanced", "exhaustive", "heuristic"}
        ``tt`` uses ``r0=1`` (or ``r0`` when given), ``balanced`` the divisor
        closest to the square root of the first rank, ``exhaustive`` the
        cheapest shift and divisor, ``heuristic`` the interaction-rank guess.
    r0 : int, optional
        Explicit first rank; only valid with ``method="tt"``.

    Attributes
    ----------
    tr_ : TRTensor
    ranks_ : tuple
    storage_ : int
    compression_ : float
        Dense size divided by storage.
    """

    def __init__(self, eps: float = 1e-10, method: str = "heuristic", r0: Optional[int] = None):
        self.eps = eps
        self.method = method
        self.r0 = r0

    def fit(self, X, y=None):
        X = check_tensor(X)
        eps = check_eps(self.eps)
        if self.method not in _METHODS:
            raise DomainError(f"method must be one of {_METHODS}, got {self.method!r}")
        if self.r0 is not None and self.method != "tt":
            raise DomainError("r0 can only be fixed with method='tt'")
        if self.method == "tt":
            rep = tr_svd(X, eps, 1 if self.r0 is None else int(self.r0))
        elif self.method == "balanced":
            rep = tr_svd_balanced(X, eps)
        elif self.method == "exhaustive":
            rep = reduced_storage_tr_svd(X, eps)
        else:
            rep = heuristic_tr_svd(X, eps)
        self.tr_ = rep
        self.ranks_ = rep.ranks
        self.storage_ = rep.storage
        self.compression_ = X.size / rep.storage
        self.shape_ = X.shape
        return self

    def transform(self, X=None) -> TRTensor:
        """The fitted representation; a new ``X`` is decomposed with the same settings."""
        check_is_fitted(self, "tr_")
        if X is None:
            return self.tr_
        return self.__class__(**self.get_params()).fit(X).tr_

    def fit_transform(self, X, y=None, **fit_params) -> TRTensor:
        return self.fit(X).tr_

    def inverse_transform(self, rep: Optional[TRTensor] = None) -> np.ndarray:
        check_is_fitted(self, "tr_")
        return tr_to_dense(self.tr_ if rep is None else rep)

    def score(self, X, y=None) -> float:
        """Negative relative reconstruction error of the fitted representation on ``X``."""
        check_is_fitted(self, "tr_")
        X = check_tensor(X)
        if X.shape != self.shape_:
            raise ShapeError(f"shape {X.shape} differs from fitted shape {self.shape_}")
        norm = np.linalg.norm(X)
        diff = np.linalg.norm(tr_to_dense(self.tr_) - X)
        return -(diff / norm if norm > 0 else diff)
