"""Correctors: spectral oracle exactness and the network-backed pipeline."""

import numpy as np
import pytest

from hybriditer.correctors import (MODE_CONTINUOUS_EIG, MODE_DISCRETE_EXACT,
                                   MionetCorrector, SpectralOracleCorrector)
from hybriditer.fem import (StructuredGrid, assemble_stiffness_1d,
                            assemble_stiffness_2d)
from hybriditer.linalg import sine_modes, spmv
from hybriditer.mionet import build_model, default_architecture, forward


def oracle_1d(n=16, n0=4, **kw):
    return SpectralOracleCorrector(StructuredGrid(1, n), n0, **kw)


def one(x):
    return np.ones_like(x)


def one2(x, y):
    return np.ones_like(x)


def small_model(dim=1, seed=0, output_bias=0.0, deep_f=False):
    if dim == 1:
        ks = np.linspace(0.0, 1.0, 6)
        fs = np.linspace(0.0, 1.0, 9)
    else:
        ax = np.linspace(0.0, 1.0, 5)
        xx, yy = np.meshgrid(ax, ax, indexing="xy")
        ks = np.column_stack([xx.ravel(), yy.ravel()])
        fs = ks.copy()
    arch = default_architecture(dim, ks.shape[0], fs.shape[0],
                                hidden=10, depth=2)
    if deep_f:
        arch["branch_f"] = [fs.shape[0], 10, 10]
    return build_model(arch, ks, fs, seed=seed, output_bias=output_bias)


def test_oracle_validation():
    grid = StructuredGrid(1, 8)
    with pytest.raises(ValueError, match="n0"):
        SpectralOracleCorrector(grid, 0)
    with pytest.raises(ValueError, match="n0"):
        SpectralOracleCorrector(grid, 9)
    with pytest.raises(ValueError, match="mode"):
        SpectralOracleCorrector(grid, 3, mode="bogus")
    with pytest.raises(ValueError, match="1-d"):
        SpectralOracleCorrector(StructuredGrid(2, 8), 3,
                                mode=MODE_CONTINUOUS_EIG)
    with pytest.raises(ValueError, match="k_const"):
        SpectralOracleCorrector(grid, 3, k_const=0.0)


def test_discrete_oracle_inverts_trusted_modes_only():
    n, n0 = 16, 4
    grid = StructuredGrid(1, n)
    a = assemble_stiffness_1d(grid, one)
    xi = sine_modes(n)
    oracle = oracle_1d(n, n0)
    for i in range(1, n + 1):
        mode = xi[:, i - 1]
        got = oracle.correct(spmv(a, mode))
        want = mode if i <= n0 else np.zeros(n)
        assert np.max(np.abs(got - want)) < 1e-12, f"mode {i}"


def test_discrete_oracle_respects_k_const():
    n, n0 = 12, 5
    grid = StructuredGrid(1, n)
    a = assemble_stiffness_1d(grid, lambda x: np.full_like(x, 3.0))
    xi = sine_modes(n)
    oracle = oracle_1d(n, n0, k_const=3.0)
    got = oracle.correct(spmv(a, xi[:, 1]))
    assert np.max(np.abs(got - xi[:, 1])) < 1e-12


def test_oracle_linear_and_zero():
    oracle = oracle_1d()
    rng = np.random.default_rng(0)
    r1 = rng.standard_normal(16)
    r2 = rng.standard_normal(16)
    combo = oracle.correct(2.0 * r1 - 0.5 * r2)
    parts = 2.0 * oracle.correct(r1) - 0.5 * oracle.correct(r2)
    assert np.max(np.abs(combo - parts)) < 1e-12
    assert np.array_equal(oracle.correct(np.zeros(16)), np.zeros(16))


def test_oracle_rejects_wrong_length():
    with pytest.raises(ValueError, match="length"):
        oracle_1d().correct(np.zeros(17))


def test_full_spectrum_oracle_is_a_solve():
    n = 16
    grid = StructuredGrid(1, n)
    a = assemble_stiffness_1d(grid, one)
    rng = np.random.default_rng(1)
    b = rng.standard_normal(n)
    mu = oracle_1d(n, n0=n).initial_guess(b)
    exact = np.linalg.solve(a.to_dense(), b)
    assert np.max(np.abs(mu - exact)) < 1e-10


def test_discrete_oracle_2d_tensor_modes():
    n, n0 = 8, 3
    grid = StructuredGrid(2, n)
    a = assemble_stiffness_2d(grid, one2)
    xi = sine_modes(n)
    oracle = SpectralOracleCorrector(grid, n0)
    for i, j in ((1, 1), (2, 3), (3, 3), (1, 4), (4, 2), (6, 6)):
        # interior grid is x-fastest, so row index is y
        mode = np.outer(xi[:, j - 1], xi[:, i - 1]).ravel()
        got = oracle.correct(spmv(a, mode))
        want = mode if max(i, j) <= n0 else np.zeros(n * n)
        assert np.max(np.abs(got - want)) < 1e-12, f"mode {(i, j)}"


def test_oracle_period_contraction_matches_closed_form():
    # one correction then M - 1 damped Richardson sweeps: the error map is
    # E = (I - omega A)^(M-1) (I - C A), diagonal in the sine basis, and its
    # spectral radius sits on the first untrusted mode
    n, n0, m_period = 16, 4, 5
    grid = StructuredGrid(1, n)
    h = grid.h
    a = assemble_stiffness_1d(grid, one).to_dense()
    xi = sine_modes(n)
    lam = np.diag(xi @ a @ xi)
    c = xi[:, :n0] @ np.diag(1.0 / lam[:n0]) @ xi[:, :n0].T
    s = np.eye(n) - 0.25 * h * a
    e = np.linalg.matrix_power(s, m_period - 1) @ (np.eye(n) - c @ a)
    rho = np.max(np.abs(np.linalg.eigvals(e)))
    want = np.cos(0.5 * np.pi * h * (n0 + 1)) ** (2 * (m_period - 1))
    assert abs(rho - want) < 1e-10


def continuous_mode_error(n, n0=3):
    grid = StructuredGrid(1, n)
    a = assemble_stiffness_1d(grid, one)
    xi = sine_modes(n)
    oracle = SpectralOracleCorrector(grid, n0, mode=MODE_CONTINUOUS_EIG)
    errs = [np.linalg.norm(oracle.correct(spmv(a, xi[:, i - 1])) - xi[:, i - 1])
            for i in range(1, n0 + 1)]
    return max(errs)


def test_continuous_oracle_error_shrinks_like_h_squared():
    # dominated by the discrete-vs-continuous eigenvalue mismatch, so
    # halving h should cut the trusted-mode error by roughly four
    ratio = continuous_mode_error(16) / continuous_mode_error(32)
    assert 3.0 < ratio < 5.0


def test_continuous_oracle_zero_maps_to_zero():
    oracle = oracle_1d(16, 3, mode=MODE_CONTINUOUS_EIG)
    assert np.max(np.abs(oracle.correct(np.zeros(16)))) == 0.0


def test_mionet_corrector_validation():
    grid = StructuredGrid(1, 15)
    with pytest.raises(ValueError, match="solver-facing"):
        MionetCorrector(small_model(output_bias=0.5), grid, one)
    with pytest.raises(ValueError, match="solver-facing"):
        MionetCorrector(small_model(deep_f=True), grid, one)
    with pytest.raises(ValueError, match="grid is"):
        MionetCorrector(small_model(dim=2), grid, one2)
    with pytest.raises(ValueError, match="augmented"):
        MionetCorrector(small_model(), grid, one, g=lambda t: t)
    with pytest.raises(ValueError, match="2-d"):
        MionetCorrector(small_model(), grid, one, augmented=True)


def test_mionet_corrector_rejects_out_of_domain_sensors():
    model = small_model()
    model.f_sensors = np.linspace(0.0, 1.5, 9)
    with pytest.raises(ValueError, match="f sensor outside"):
        MionetCorrector(model, StructuredGrid(1, 15), one)


def test_mionet_corrector_rejects_wrong_residual_length():
    corr = MionetCorrector(small_model(), StructuredGrid(1, 15), one)
    with pytest.raises(ValueError, match="length 15"):
        corr.correct(np.zeros(16))


def test_mionet_corrector_linear_and_zero():
    grid = StructuredGrid(1, 15)
    corr = MionetCorrector(small_model(), grid, one)
    rng = np.random.default_rng(2)
    r1 = rng.standard_normal(15)
    r2 = rng.standard_normal(15)
    combo = corr.correct(1.7 * r1 + 0.3 * r2)
    parts = 1.7 * corr.correct(r1) + 0.3 * corr.correct(r2)
    scale = max(np.max(np.abs(parts)), 1e-30)
    assert np.max(np.abs(combo - parts)) / scale < 1e-12
    assert np.array_equal(corr.correct(np.zeros(15)), np.zeros(15))


def test_mionet_corrector_flags_non_finite_output():
    model = small_model()
    corr = MionetCorrector(model, StructuredGrid(1, 15), one)
    model.trunk.weights[0][...] = np.nan
    with pytest.raises(ValueError, match="non-finite correction at node"):
        corr.correct(np.ones(15))


def test_mionet_initial_guess_uses_bound_forcing():
    grid = StructuredGrid(1, 15)
    model = small_model()

    def f(x):
        return np.sin(np.pi * x)

    corr = MionetCorrector(model, grid, one, f=f)
    b1 = np.ones(15)
    b2 = np.full(15, 7.0)
    manual = forward(model, np.full(6, 1.0), f(np.asarray(model.f_sensors)),
                     grid.interior_coords())
    assert np.array_equal(corr.initial_guess(b1), manual)
    # bound forcing makes the guess independent of the rhs vector
    assert np.array_equal(corr.initial_guess(b1), corr.initial_guess(b2))


def test_mionet_initial_guess_defaults_to_correct():
    grid = StructuredGrid(1, 15)
    corr = MionetCorrector(small_model(), grid, one)
    b = np.linspace(-1.0, 1.0, 15)
    assert np.array_equal(corr.initial_guess(b), corr.correct(b))


def test_mionet_augmented_paths():
    grid = StructuredGrid(2, 7)
    model = small_model(dim=2)
    corr = MionetCorrector(model, grid, one2, f=lambda x, y: 0.0 * x,
                           augmented=True)
    with pytest.raises(ValueError, match="needs g"):
        corr.initial_guess(np.zeros(grid.n_total))
    with pytest.raises(ValueError, match=f"length {grid.n_total}"):
        corr.correct(np.zeros(grid.n_interior))
    assert np.array_equal(corr.correct(np.zeros(grid.n_total)),
                          np.zeros(grid.n_total))
    rng = np.random.default_rng(3)
    r = rng.standard_normal(grid.n_total)
    out = corr.correct(r)
    assert out.shape == (grid.n_total,)
    assert np.all(np.isfinite(out))
    combo = corr.correct(2.0 * r) - 2.0 * out
    assert np.max(np.abs(combo)) / np.max(np.abs(out)) < 1e-12

    with_g = MionetCorrector(model, grid, one2, f=lambda x, y: 0.0 * x,
                             g=lambda t: np.ones_like(t), augmented=True)
    guess = with_g.initial_guess(np.zeros(grid.n_total))
    assert guess.shape == (grid.n_total,)
    assert np.all(np.isfinite(guess))
