import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tensorring import IndexDomainError, ShapeError
from tensorring.dense import (
    as_tensor,
    cyclic_shift,
    dense_norm,
    hadamard,
    inverse_shift,
    mode_product,
    refold,
    shift_axes,
    unfold,
)


def test_unfold_column_major_layout():
    T = np.zeros((2, 2, 2))
    for i, j, k in itertools.product(range(2), repeat=3):
        T[i, j, k] = (i + 1) + 2 * j + 4 * k
    M = unfold(T, 1)
    assert M.shape == (2, 4)
    np.testing.assert_array_equal(M, [[1, 3, 5, 7], [2, 4, 6, 8]])


def test_unfold_refold_roundtrip(rng):
    T = rng.standard_normal((3, 4, 5))
    for k in (1, 2):
        np.testing.assert_array_equal(refold(unfold(T, k), T.shape), T)


def test_unfold_matches_elementwise_construction(rng):
    T = rng.standard_normal((3, 4, 5))
    M = np.zeros((12, 5))
    for i, j, k in itertools.product(range(3), range(4), range(5)):
        M[i + 3 * j, k] = T[i, j, k]
    np.testing.assert_array_equal(unfold(T, 2), M)
    assert np.linalg.matrix_rank(unfold(T, 2)) == np.linalg.matrix_rank(M)


@pytest.mark.parametrize("k", [0, 3, -1])
def test_unfold_rejects_bad_index(k):
    with pytest.raises(IndexDomainError):
        unfold(np.zeros((2, 2, 2)), k)


def test_cyclic_shift_identity_and_inverse(rng):
    T = rng.standard_normal((2, 3, 4))
    np.testing.assert_array_equal(cyclic_shift(T, 1), T)
    for k in range(1, 4):
        back = cyclic_shift(cyclic_shift(T, k), inverse_shift(k, 3))
        np.testing.assert_array_equal(back, T)


def test_gamma_composed_d_times_is_identity(rng):
    T = rng.standard_normal((2, 3, 4, 5))
    S = T
    for _ in range(4):
        S = cyclic_shift(S, 2)
    np.testing.assert_array_equal(S, T)


def test_cyclic_shift_entrywise(rng):
    T = rng.standard_normal((2, 3, 4))
    S = cyclic_shift(T, 2)  # gamma: (i_2, i_3, i_1)
    assert S.shape == (3, 4, 2)
    for i1, i2, i3 in itertools.product(range(2), range(3), range(4)):
        assert S[i2, i3, i1] == T[i1, i2, i3]


def test_shift_axes_wraps():
    assert shift_axes(4, 1) == (0, 1, 2, 3)
    assert shift_axes(4, 3) == (2, 3, 0, 1)
    assert shift_axes(4, 5) == shift_axes(4, 1)


def test_mode_product_identity_and_sum(rng):
    T = rng.standard_normal((2, 3, 2))
    np.testing.assert_allclose(mode_product(T, np.eye(3), 2), T)
    np.testing.assert_allclose(mode_product(T, np.ones((1, 3)), 2)[:, 0, :], T.sum(axis=1))


def test_mode_product_loop_oracle(rng):
    T = rng.standard_normal((2, 3, 2))
    A = rng.standard_normal((4, 3))
    out = np.zeros((2, 4, 2))
    for i, a, k in itertools.product(range(2), range(4), range(2)):
        out[i, a, k] = sum(A[a, j] * T[i, j, k] for j in range(3))
    np.testing.assert_allclose(mode_product(T, A, 2), out, atol=1e-14)


def test_mode_product_shape_error(rng):
    with pytest.raises(ShapeError):
        mode_product(np.zeros((2, 3)), np.zeros((2, 2)), 2)


def test_hadamard(rng):
    T = rng.standard_normal((2, 3, 2))
    U = rng.standard_normal((2, 3, 2))
    np.testing.assert_array_equal(hadamard(T, np.ones_like(T)), T)
    np.testing.assert_array_equal(hadamard(T, np.zeros_like(T)), 0 * T)
    H = hadamard(T, U)
    for idx in itertools.product(range(2), range(3), range(2)):
        assert H[idx] == T[idx] * U[idx]
    with pytest.raises(ShapeError):
        hadamard(T, np.zeros((2, 2)))


def test_dense_norm(rng):
    assert dense_norm(np.ones((2, 2, 2))) == pytest.approx(np.sqrt(8))
    assert dense_norm(np.zeros((3, 3))) == 0.0
    T = rng.standard_normal((3, 4, 5))
    for k in (1, 2):
        assert dense_norm(T) == pytest.approx(np.linalg.norm(unfold(T, k)), rel=1e-14)


def test_as_tensor_validation():
    with pytest.raises(ShapeError):
        as_tensor(3.0)
    with pytest.raises(ShapeError):
        as_tensor(np.zeros((2, 0)))


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, st.tuples(*[st.integers(1, 4)] * 4),
              elements=st.floats(-10, 10, allow_nan=False)),
       st.integers(1, 4))
def test_shift_preserves_norm_and_inverts(T, k):
    S = cyclic_shift(T, k)
    assert dense_norm(S) == pytest.approx(dense_norm(T))
    np.testing.assert_array_equal(cyclic_shift(S, inverse_shift(k, 4)), T)
