"""Classical stationary smoothers B applied as mu += B(b - A mu).

Richardson uses B = omega I, weighted Jacobi B = omega D^-1, Gauss-Seidel
and SOR sweep forward in lexicographic order updating mu in place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import sor_forward_sweep
from .linalg import CsrMatrix, spmv

RICHARDSON = "richardson"
JACOBI = "jacobi"
GAUSS_SEIDEL = "gauss_seidel"
SOR = "sor"
_KINDS = (RICHARDSON, JACOBI, GAUSS_SEIDEL, SOR)


@dataclass(frozen=True)
class Smoother:
    """Smoother selector; omega is required except for plain Gauss-Seidel."""

    kind: str
    omega: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown smoother kind {self.kind!r}")
        if self.kind == GAUSS_SEIDEL:
            if self.omega is not None:
                raise ValueError("gauss_seidel takes no omega; use sor")
        else:
            if self.omega is None or not np.isfinite(self.omega) or self.omega <= 0.0:
                raise ValueError(f"{self.kind} needs a positive finite omega")


def smoother_step(a: CsrMatrix, b: np.ndarray, mu: np.ndarray,
                  smoother: Smoother) -> np.ndarray:
    """Apply one smoother step in place; returns mu for convenience."""
    if mu.shape != (a.nrows,) or b.shape != (a.nrows,):
        raise ValueError("shape mismatch between matrix and vectors")
    if smoother.kind == RICHARDSON:
        mu += smoother.omega * (b - spmv(a, mu))
        return mu
    if smoother.kind == JACOBI:
        d = a.diagonal()
        if np.any(d == 0.0):
            raise ZeroDivisionError(
                f"zero diagonal at row {int(np.argmax(d == 0.0))}")
        mu += smoother.omega * (b - spmv(a, mu)) / d
        return mu
    omega = 1.0 if smoother.kind == GAUSS_SEIDEL else float(smoother.omega)
    bad = sor_forward_sweep(a.row_ptr, a.col_idx, a.values,
                            np.ascontiguousarray(b, dtype=np.float64), mu, omega)
    if bad >= 0:
        raise ZeroDivisionError(f"zero diagonal at row {bad}")
    return mu
