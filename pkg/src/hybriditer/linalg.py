"""Sparse and dense linear algebra shared by the solver stack.

Vectors and dense matrices are plain float64 numpy arrays; the only custom
container is the CSR matrix. All reductions have a fixed summation order
(row-major, left to right within a row) so repeated runs are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg.lapack import dpotrf

from ._kernels import csr_matvec


@dataclass
class CsrMatrix:
    """Compressed sparse row matrix with float64 values.

    Invariants, enforced at construction: row_ptr is nondecreasing with
    row_ptr[0] == 0 and row_ptr[-1] == nnz, column indices lie in
    [0, ncols) and are strictly increasing within each row, and all values
    are finite.
    """

    nrows: int
    ncols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.row_ptr = np.ascontiguousarray(self.row_ptr, dtype=np.int64)
        self.col_idx = np.ascontiguousarray(self.col_idx, dtype=np.int64)
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if self.row_ptr.shape != (self.nrows + 1,):
            raise ValueError("row_ptr must have length nrows + 1")
        if self.row_ptr[0] != 0 or self.row_ptr[-1] != self.col_idx.size:
            raise ValueError("row_ptr must start at 0 and end at nnz")
        if np.any(np.diff(self.row_ptr) < 0):
            raise ValueError("row_ptr must be nondecreasing")
        if self.col_idx.size != self.values.size:
            raise ValueError("col_idx and values must have equal length")
        if self.col_idx.size:
            if self.col_idx.min() < 0 or self.col_idx.max() >= self.ncols:
                raise ValueError("column index out of range")
            entry_row = np.repeat(np.arange(self.nrows), np.diff(self.row_ptr))
            same_row = entry_row[1:] == entry_row[:-1]
            if np.any(self.col_idx[1:][same_row] <= self.col_idx[:-1][same_row]):
                raise ValueError("column indices must be strictly increasing within each row")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("matrix values must be finite")

    @property
    def nnz(self) -> int:
        return int(self.col_idx.size)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def diagonal(self) -> np.ndarray:
        """Main diagonal as a dense vector; absent entries read as zero."""
        d = np.zeros(min(self.nrows, self.ncols))
        entry_row = np.repeat(np.arange(self.nrows), np.diff(self.row_ptr))
        hit = entry_row == self.col_idx
        d[entry_row[hit]] = self.values[hit]
        return d

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols))
        entry_row = np.repeat(np.arange(self.nrows), np.diff(self.row_ptr))
        out[entry_row, self.col_idx] = self.values
        return out

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return spmv(self, x)


def csr_from_coo(nrows, ncols, rows, cols, vals, drop_zeros=True) -> CsrMatrix:
    """Build a CSR matrix from triplets; duplicate entries are summed.

    Duplicates are accumulated in insertion order (stable sort + in-order
    segment sums), so assembly results are reproducible to the bit.
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    if not (rows.shape == cols.shape == vals.shape):
        raise ValueError("rows, cols, vals must have matching shapes")
    if rows.size == 0:
        return CsrMatrix(nrows, ncols, np.zeros(nrows + 1, np.int64),
                         np.zeros(0, np.int64), np.zeros(0))
    order = np.lexsort((cols, rows))
    r, c, v = rows[order], cols[order], vals[order]
    first = np.ones(r.size, dtype=bool)
    first[1:] = (r[1:] != r[:-1]) | (c[1:] != c[:-1])
    starts = np.flatnonzero(first)
    summed = np.add.reduceat(v, starts)
    r, c = r[starts], c[starts]
    if drop_zeros:
        keep = summed != 0.0
        r, c, summed = r[keep], c[keep], summed[keep]
    row_ptr = np.zeros(nrows + 1, dtype=np.int64)
    np.cumsum(np.bincount(r, minlength=nrows), out=row_ptr[1:])
    return CsrMatrix(nrows, ncols, row_ptr, c, summed)


def csr_transpose(a: CsrMatrix) -> CsrMatrix:
    entry_row = np.repeat(np.arange(a.nrows), np.diff(a.row_ptr))
    return csr_from_coo(a.ncols, a.nrows, a.col_idx, entry_row, a.values,
                        drop_zeros=False)


def spmv(a: CsrMatrix, x: np.ndarray) -> np.ndarray:
    """y = A x with per-row left-to-right accumulation."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (a.ncols,):
        raise ValueError(f"operand has shape {x.shape}, expected ({a.ncols},)")
    y = np.empty(a.nrows)
    csr_matvec(a.row_ptr, a.col_idx, a.values, x, y)
    return y


def cholesky(s: np.ndarray, jitter: float = 0.0) -> np.ndarray:
    """Lower-triangular factor L with L L^T = S + jitter * I.

    Raises numpy.linalg.LinAlgError naming the failing pivot (0-based) when
    the shifted matrix is not positive definite.
    """
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("cholesky needs a square matrix")
    m = s.copy()
    if jitter:
        m[np.diag_indices_from(m)] += jitter
    c, info = dpotrf(m, lower=1, clean=1, overwrite_a=1)
    if info > 0:
        raise np.linalg.LinAlgError(
            f"matrix not positive definite: pivot {info - 1} nonpositive "
            f"(jitter={jitter:g})")
    if info < 0:
        raise ValueError(f"illegal value in argument {-info} of dpotrf")
    return c


def sine_modes(n: int) -> np.ndarray:
    """Orthonormal sine modes of the unit-interval model operator.

    Column i-1 holds xi^i with entries sqrt(2h) sin(i pi h j), h = 1/(n+1).
    The matrix is symmetric and involutory (its own inverse).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    h = 1.0 / (n + 1)
    j = np.arange(1, n + 1)
    return np.sqrt(2.0 * h) * np.sin(np.pi * h * np.outer(j, j))


def sine_transform_1d(v: np.ndarray) -> np.ndarray:
    """Coefficients of v in the discrete sine basis (self-inverse transform).

    O(n^2) by design: one dense matmul keeps the reduction order fixed.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("expected a nonempty vector")
    return sine_modes(v.size) @ v


def operator_norm_2(apply_fn, n: int, iters: int = 200, seed: int = 0) -> float:
    """Largest singular value of a linear map given only as a callable.

    The matrix is recovered column by column from probes (apply(+e_j) -
    apply(-e_j)) / 2, which also cancels any affine offset, then the
    dominant singular value is taken by power iteration on A^T A.
    Accuracy is typically within a few percent of a dense SVD for the
    small operators this is used on.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    cols = np.empty((n, n))
    e = np.zeros(n)
    for j in range(n):
        e[j] = 1.0
        plus = np.asarray(apply_fn(e.copy()), dtype=np.float64)
        e[j] = -1.0
        minus = np.asarray(apply_fn(e.copy()), dtype=np.float64)
        e[j] = 0.0
        if plus.shape != (n,) or minus.shape != (n,):
            raise ValueError("apply_fn must map length-n vectors to length-n vectors")
        cols[:, j] = 0.5 * (plus - minus)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.sqrt(v @ v)
    for _ in range(iters):
        w = cols.T @ (cols @ v)
        nw = np.sqrt(w @ w)
        if nw == 0.0:
            return 0.0
        v = w / nw
    return float(np.sqrt(v @ (cols.T @ (cols @ v))))
