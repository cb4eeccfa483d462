"""Geometric multigrid V-cycles on the structured Poisson grids.

Levels are re-discretized (the stiffness matrix is assembled on every grid
from the same coefficient field), prolongation is linear interpolation
between nested grids, restriction its plain transpose, smoothing is forward
Gauss-Seidel and the coarsest level is solved densely.

The unscaled transpose is the exact dual-space restriction for nested
piecewise-linear elements: a coarse hat function is a weighted sum of fine
hats with the interpolation weights, so coarse residual entries are the same
weighted sums of fine ones. With the 1/h-scaled element matrices this makes
the two-grid correction a true projection (P^T A_fine P equals the
re-discretized coarse matrix for constant coefficients).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .fem import StructuredGrid, assemble_stiffness_1d, assemble_stiffness_2d
from .linalg import CsrMatrix, csr_from_coo, csr_transpose, spmv
from .smoothers import GAUSS_SEIDEL, Smoother, smoother_step

_GS = Smoother(GAUSS_SEIDEL)


@dataclass
class MgLevel:
    grid: StructuredGrid
    a: CsrMatrix
    prolong: CsrMatrix | None = None   # from next-coarser level to this one
    restrict: CsrMatrix | None = None  # prolong^T


@dataclass
class MgHierarchy:
    levels: list[MgLevel]
    nu1: int
    nu2: int
    coarse_lu: tuple

    @property
    def grid(self) -> StructuredGrid:
        return self.levels[0].grid

    @property
    def a(self) -> CsrMatrix:
        return self.levels[0].a


def prolongation_1d(n_fine: int) -> CsrMatrix:
    """Linear interpolation from the n_coarse = (n_fine+1)/2 - 1 grid: coarse
    node j coincides with fine node 2j; odd fine nodes average their coarse
    neighbours (boundary values are zero)."""
    if (n_fine + 1) % 2:
        raise ValueError("fine grid must have n + 1 even")
    n_coarse = (n_fine + 1) // 2 - 1
    rows, cols, vals = [], [], []
    for j in range(1, n_coarse + 1):
        rows.append(2 * j - 1)
        cols.append(j - 1)
        vals.append(1.0)
    for i in range(1, n_fine + 1, 2):  # odd fine nodes, 1-based
        left = (i - 1) // 2
        right = left + 1
        if left >= 1:
            rows.append(i - 1)
            cols.append(left - 1)
            vals.append(0.5)
        if right <= n_coarse:
            rows.append(i - 1)
            cols.append(right - 1)
            vals.append(0.5)
    return csr_from_coo(n_fine, n_coarse, rows, cols, vals)


def prolongation_2d(n_fine: int) -> CsrMatrix:
    """Bilinear interpolation: the tensor product of the 1-d operator acting
    on lexicographically ordered interior nodes."""
    p1 = prolongation_1d(n_fine)
    n_coarse = p1.ncols
    rows, cols, vals = [], [], []
    for fy in range(n_fine):
        for py in range(p1.row_ptr[fy], p1.row_ptr[fy + 1]):
            cy, wy = p1.col_idx[py], p1.values[py]
            for fx in range(n_fine):
                for px in range(p1.row_ptr[fx], p1.row_ptr[fx + 1]):
                    cx, wx = p1.col_idx[px], p1.values[px]
                    rows.append(fy * n_fine + fx)
                    cols.append(cy * n_coarse + cx)
                    vals.append(wy * wx)
    return csr_from_coo(n_fine * n_fine, n_coarse * n_coarse, rows, cols, vals)


def build_hierarchy(grid: StructuredGrid, k, levels: int,
                    nu1: int = 2, nu2: int = 2) -> MgHierarchy:
    """Assemble the level matrices and transfer operators.

    Requires (n+1) divisible by 2^(levels-1) with at least one interior node
    on the coarsest grid; k is re-sampled on every level's elements.
    """
    if levels < 1:
        raise ValueError("need at least one level")
    if nu1 < 0 or nu2 < 0 or nu1 + nu2 == 0:
        raise ValueError("need nonnegative sweep counts with nu1 + nu2 >= 1")
    if (grid.n + 1) % (1 << (levels - 1)):
        raise ValueError(f"n + 1 = {grid.n + 1} not divisible by 2^{levels - 1}")
    if (grid.n + 1) // (1 << (levels - 1)) < 2:
        raise ValueError("coarsest level would have no interior nodes")
    assemble = assemble_stiffness_1d if grid.dim == 1 else assemble_stiffness_2d
    prolong = prolongation_1d if grid.dim == 1 else prolongation_2d
    lvls = []
    n = grid.n
    for l in range(levels):
        g = StructuredGrid(grid.dim, n)
        a = assemble(g, k)
        lvls.append(MgLevel(g, a))
        if l + 1 < levels:
            p = prolong(n)
            lvls[-1].prolong = p
            lvls[-1].restrict = csr_transpose(p)
            n = (n + 1) // 2 - 1
    coarse_lu = lu_factor(lvls[-1].a.to_dense())
    return MgHierarchy(lvls, nu1, nu2, coarse_lu)


def vcycle(h: MgHierarchy, b: np.ndarray, mu: np.ndarray, level: int = 0) -> np.ndarray:
    """One V(nu1, nu2) cycle on the given level, updating mu in place."""
    lvl = h.levels[level]
    if level == len(h.levels) - 1:
        mu[:] = lu_solve(h.coarse_lu, b)
        return mu
    for _ in range(h.nu1):
        smoother_step(lvl.a, b, mu, _GS)
    r = b - spmv(lvl.a, mu)
    rc = spmv(lvl.restrict, r)
    ec = np.zeros(h.levels[level + 1].grid.n_interior)
    vcycle(h, rc, ec, level + 1)
    mu += spmv(lvl.prolong, ec)
    for _ in range(h.nu2):
        smoother_step(lvl.a, b, mu, _GS)
    return mu
