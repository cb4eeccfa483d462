"""Transfer operators and V-cycle convergence."""

import numpy as np
import pytest

from hybriditer.fem import (StructuredGrid, assemble_load_1d,
                            assemble_load_2d, assemble_stiffness_1d,
                            assemble_stiffness_2d)
from hybriditer.linalg import spmv
from hybriditer.multigrid import (build_hierarchy, prolongation_1d,
                                  prolongation_2d, vcycle)

from conftest import one_1d, one_2d


def test_prolongation_1d_weights():
    p = prolongation_1d(7)
    coarse = np.array([0.0, 1.0, 0.0])
    fine = spmv(p, coarse)
    # coarse interior node j (0-based) sits at fine index 2j + 1
    assert np.array_equal(fine, [0.0, 0.0, 0.5, 1.0, 0.5, 0.0, 0.0])


def test_prolongation_1d_shape_check():
    with pytest.raises(ValueError, match="even"):
        prolongation_1d(6)


def test_prolongation_2d_is_tensor_product():
    p1 = prolongation_1d(7).to_dense()
    p2 = prolongation_2d(7).to_dense()
    assert np.allclose(p2, np.kron(p1, p1), atol=1e-15)


def test_galerkin_identity_1d():
    # P^T A_fine P equals the re-discretized coarse matrix for constant k
    gf = StructuredGrid(1, 15)
    gc = StructuredGrid(1, 7)
    af = assemble_stiffness_1d(gf, one_1d).to_dense()
    ac = assemble_stiffness_1d(gc, one_1d).to_dense()
    p = prolongation_1d(15).to_dense()
    assert np.max(np.abs(p.T @ af @ p - ac)) < 1e-12


def test_build_hierarchy_validation():
    g = StructuredGrid(1, 31)
    with pytest.raises(ValueError, match="divisible"):
        build_hierarchy(StructuredGrid(1, 30), one_1d, 2)
    with pytest.raises(ValueError, match="interior"):
        build_hierarchy(StructuredGrid(1, 3), one_1d, 3)
    with pytest.raises(ValueError, match="level"):
        build_hierarchy(g, one_1d, 0)
    h = build_hierarchy(g, one_1d, 4)
    assert [lvl.grid.n for lvl in h.levels] == [31, 15, 7, 3]
    assert h.levels[-1].prolong is None


def test_single_level_is_direct_solve():
    g = StructuredGrid(1, 7)
    a = assemble_stiffness_1d(g, one_1d)
    b = assemble_load_1d(g, one_1d)
    h = build_hierarchy(g, one_1d, 1)
    mu = np.zeros(7)
    vcycle(h, b, mu)
    assert np.max(np.abs(spmv(a, mu) - b)) < 1e-12


def _cycle_factors(dim, n, levels, cycles=10):
    k = one_1d if dim == 1 else one_2d
    g = StructuredGrid(dim, n)
    a = assemble_stiffness_1d(g, k) if dim == 1 else assemble_stiffness_2d(g, k)
    b = assemble_load_1d(g, k) if dim == 1 else assemble_load_2d(g, k)
    h = build_hierarchy(g, k, levels)
    mu = np.zeros(g.n_interior)
    norms = [float(np.linalg.norm(b))]
    for _ in range(cycles):
        vcycle(h, b, mu)
        norms.append(float(np.linalg.norm(b - spmv(a, mu))))
    return np.array(norms[1:]) / np.array(norms[:-1])


def test_vcycle_1d_contraction():
    factors = _cycle_factors(1, 63, 4)
    assert np.max(factors[2:]) < 0.15


def test_vcycle_2d_contraction():
    factors = _cycle_factors(2, 31, 3)
    assert np.max(factors[2:]) < 0.2


def test_vcycle_h_independence_small():
    f31 = np.max(_cycle_factors(2, 31, 3)[2:])
    f63 = np.max(_cycle_factors(2, 63, 4)[2:])
    assert abs(f31 - f63) < 0.1


def test_vcycle_variable_coefficient():
    g = StructuredGrid(1, 63)
    k = lambda x: 1.0 + 0.5 * np.sin(2.0 * np.pi * np.asarray(x, float))
    a = assemble_stiffness_1d(g, k)
    b = assemble_load_1d(g, one_1d)
    h = build_hierarchy(g, k, 4)
    mu = np.zeros(63)
    for _ in range(20):
        vcycle(h, b, mu)
    assert np.linalg.norm(b - spmv(a, mu)) < 1e-12


def test_hierarchy_exposes_fine_level():
    g = StructuredGrid(1, 15)
    h = build_hierarchy(g, one_1d, 2, nu1=1, nu2=3)
    assert h.grid.n == 15
    assert h.a.nrows == 15
    assert (h.nu1, h.nu2) == (1, 3)
