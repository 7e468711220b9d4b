import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from tensorring import DomainError, ShapeError, TensorRingDecomposition, TRTensor, check_tensor


@pytest.fixture
def X(rng):
    return TRTensor.random((4, 3, 4, 3), (2, 2, 3, 2), rng).full()


def test_params_and_clone():
    est = TensorRingDecomposition(eps=1e-6, method="balanced")
    assert est.get_params() == {"eps": 1e-6, "method": "balanced", "r0": None}
    c = clone(est)
    assert c.get_params() == est.get_params() and c is not est


@pytest.mark.parametrize("method", ["tt", "balanced", "exhaustive", "heuristic"])
def test_fit_inverse(X, method):
    est = TensorRingDecomposition(eps=1e-10, method=method).fit(X)
    Y = est.inverse_transform()
    assert np.linalg.norm(Y - X) <= 1e-10 * np.linalg.norm(X)
    assert est.storage_ == est.tr_.storage
    assert est.compression_ == pytest.approx(X.size / est.storage_)
    assert est.score(X) >= -1e-10


def test_fixed_r0(X):
    est = TensorRingDecomposition(eps=0.0, method="tt", r0=2).fit(X)
    assert est.ranks_[0] == 2


def test_transform_new_tensor(X, rng):
    est = TensorRingDecomposition(eps=1e-10).fit(X)
    assert est.transform() is est.tr_
    Z = rng.standard_normal((3, 3, 3))
    assert est.transform(Z).shape == (3, 3, 3)
    assert est.fit_transform(X) is est.tr_


def test_not_fitted(X):
    with pytest.raises(NotFittedError):
        TensorRingDecomposition().inverse_transform()


def test_invalid(X):
    with pytest.raises(DomainError):
        TensorRingDecomposition(method="nope").fit(X)
    with pytest.raises(DomainError):
        TensorRingDecomposition(method="balanced", r0=2).fit(X)
    with pytest.raises(DomainError):
        TensorRingDecomposition(eps=-1).fit(X)
    with pytest.raises(ShapeError):
        TensorRingDecomposition().fit(X).score(np.ones((2, 2)))


def test_check_tensor():
    with pytest.raises(ShapeError):
        check_tensor(np.ones((2, 0)))
    with pytest.raises(ShapeError):
        check_tensor(np.float64(1.0), min_ndim=1)
    with pytest.raises(DomainError):
        check_tensor(np.array([1.0, np.nan]))
    assert check_tensor([[1, 2]]).dtype == np.float64
