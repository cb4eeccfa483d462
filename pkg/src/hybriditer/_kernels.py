"""Compiled CSR kernels.

Loop order is part of the contract: rows top to bottom, entries within a row
left to right, so every reduction is bit-stable across runs. fastmath stays
off to keep IEEE semantics.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def csr_matvec(row_ptr, col_idx, values, x, out):
    for i in range(row_ptr.size - 1):
        acc = 0.0
        for p in range(row_ptr[i], row_ptr[i + 1]):
            acc += values[p] * x[col_idx[p]]
        out[i] = acc


@njit(cache=True)
def sor_forward_sweep(row_ptr, col_idx, values, b, mu, omega):
    """One in-place forward lexicographic SOR sweep; omega=1 is Gauss-Seidel.

    Returns the first row with a zero or missing diagonal, or -1 on success.
    """
    for i in range(row_ptr.size - 1):
        acc = 0.0
        diag = 0.0
        for p in range(row_ptr[i], row_ptr[i + 1]):
            j = col_idx[p]
            acc += values[p] * mu[j]
            if j == i:
                diag = values[p]
        if diag == 0.0:
            return i
        mu[i] += omega * (b[i] - acc) / diag
    return -1
