"""CSR container, Cholesky, sine transform and operator norm."""

import numpy as np
import pytest

from hybriditer.linalg import (CsrMatrix, cholesky, csr_from_coo,
                               csr_transpose, operator_norm_2, sine_modes,
                               sine_transform_1d, spmv)


def small_csr():
    # [[2, -1, 0], [0, 3, 1], [4, 0, 0]]
    return csr_from_coo(3, 3, [0, 0, 1, 1, 2], [0, 1, 1, 2, 0],
                        [2.0, -1.0, 3.0, 1.0, 4.0])


def test_to_dense_and_diagonal():
    a = small_csr()
    expect = np.array([[2.0, -1.0, 0.0], [0.0, 3.0, 1.0], [4.0, 0.0, 0.0]])
    assert np.array_equal(a.to_dense(), expect)
    assert np.array_equal(a.diagonal(), np.array([2.0, 3.0, 0.0]))
    assert a.nnz == 5
    assert a.shape == (3, 3)


def test_coo_duplicates_are_summed():
    a = csr_from_coo(2, 2, [0, 0, 1], [1, 1, 0], [1.5, 2.5, 1.0])
    assert np.array_equal(a.to_dense(), np.array([[0.0, 4.0], [1.0, 0.0]]))


def test_coo_drop_zeros():
    a = csr_from_coo(2, 2, [0, 0], [0, 0], [1.0, -1.0])
    assert a.nnz == 0
    b = csr_from_coo(2, 2, [0, 0], [0, 0], [1.0, -1.0], drop_zeros=False)
    assert b.nnz == 1
    assert b.to_dense()[0, 0] == 0.0


def test_invariant_violations_raise():
    with pytest.raises(ValueError, match="row_ptr"):
        CsrMatrix(2, 2, np.array([0, 1]), np.array([0]), np.array([1.0]))
    with pytest.raises(ValueError, match="strictly increasing"):
        CsrMatrix(1, 3, np.array([0, 2]), np.array([1, 1]),
                  np.array([1.0, 2.0]))
    with pytest.raises(ValueError, match="column index"):
        CsrMatrix(1, 2, np.array([0, 1]), np.array([5]), np.array([1.0]))
    with pytest.raises(ValueError, match="finite"):
        CsrMatrix(1, 1, np.array([0, 1]), np.array([0]), np.array([np.nan]))


def test_transpose_matches_dense():
    rng = np.random.default_rng(1)
    rows = rng.integers(0, 5, 30)
    cols = rng.integers(0, 4, 30)
    vals = rng.standard_normal(30)
    a = csr_from_coo(5, 4, rows, cols, vals)
    at = csr_transpose(a)
    assert np.allclose(at.to_dense(), a.to_dense().T, atol=1e-15)


def test_spmv_matches_dense():
    rng = np.random.default_rng(2)
    rows = rng.integers(0, 7, 40)
    cols = rng.integers(0, 7, 40)
    vals = rng.standard_normal(40)
    a = csr_from_coo(7, 7, rows, cols, vals)
    x = rng.standard_normal(7)
    assert np.allclose(spmv(a, x), a.to_dense() @ x, atol=1e-13)


def test_spmv_shape_check():
    a = small_csr()
    with pytest.raises(ValueError, match="shape"):
        spmv(a, np.zeros(4))


def test_spmv_deterministic():
    rng = np.random.default_rng(3)
    a = csr_from_coo(6, 6, rng.integers(0, 6, 25), rng.integers(0, 6, 25),
                     rng.standard_normal(25))
    x = rng.standard_normal(6)
    assert np.array_equal(spmv(a, x), spmv(a, x.copy()))


def test_cholesky_roundtrip():
    rng = np.random.default_rng(4)
    m = rng.standard_normal((6, 6))
    s = m @ m.T + 6 * np.eye(6)
    l = cholesky(s)
    assert np.allclose(l @ l.T, s, atol=1e-12)
    assert np.allclose(np.triu(l, 1), 0.0)


def test_cholesky_failure_names_pivot():
    s = np.array([[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(np.linalg.LinAlgError, match="pivot 1"):
        cholesky(s)


def test_cholesky_jitter_rescues_rank_deficiency():
    s = np.ones((3, 3))  # rank one
    with pytest.raises(np.linalg.LinAlgError):
        cholesky(s)
    l = cholesky(s, jitter=1e-8)
    assert np.all(np.isfinite(l))


def test_sine_modes_symmetric_involutory():
    for n in (5, 16):
        xi = sine_modes(n)
        assert np.allclose(xi, xi.T, atol=1e-15)
        assert np.max(np.abs(xi @ xi - np.eye(n))) < 1e-12


def test_sine_transform_self_inverse():
    rng = np.random.default_rng(5)
    v = rng.standard_normal(17)
    c = sine_transform_1d(v)
    assert np.max(np.abs(sine_transform_1d(c) - v)) < 1e-12


def test_sine_transform_isolates_a_mode():
    n = 12
    xi = sine_modes(n)
    c = sine_transform_1d(xi[:, 3])
    expect = np.zeros(n)
    expect[3] = 1.0
    assert np.max(np.abs(c - expect)) < 1e-12


def test_operator_norm_of_diagonal_map():
    d = np.array([3.0, -1.0, 0.5])
    norm = operator_norm_2(lambda v: d * v, 3)
    assert abs(norm - 3.0) < 1e-8


def test_operator_norm_ignores_affine_offset():
    d = np.array([2.0, 1.0])
    c = np.array([10.0, -7.0])
    norm = operator_norm_2(lambda v: d * v + c, 2)
    assert abs(norm - 2.0) < 1e-8
