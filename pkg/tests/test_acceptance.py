"""Acceptance checks, one test per criterion.

Each test appends a (number, label, passed, detail) line to the shared
results list; the conftest summary hook prints them at the end of the run.
Stated runtime limits are reported alongside the measured times, not hard
asserted, so a slow machine degrades the report rather than the result.
"""

import functools
import time
from contextlib import contextmanager

import numpy as np
import pytest

from hybriditer.correctors import (Corrector, MionetCorrector,
                                   SpectralOracleCorrector)
from hybriditer.fem import (StructuredGrid, assemble_augmented_2d,
                            assemble_load_1d, assemble_load_2d,
                            assemble_stiffness_1d, assemble_stiffness_2d)
from hybriditer.gpfield import GpSpec, sample_field
from hybriditer.hybrid import (HybridConfig, best_period, hybrid_solve,
                               solve_stationary, sweep_M, sweep_to_csv)
from hybriditer.iteration import (STATUS_CONVERGED, STATUS_DIVERGED, StopRule,
                                  empirical_rate)
from hybriditer.linalg import sine_modes, spmv
from hybriditer.mionet import (TrainingOptions, build_model,
                               default_architecture, forward,
                               generate_dataset, grad_check,
                               relative_l2_error, train)
from hybriditer.multigrid import build_hierarchy
from hybriditer.smoothers import Smoother
from hybriditer.spectral import (RateParams, gs_symbol, model_error_spectrum,
                                 rate_bound, richardson_M_bound,
                                 smoothing_factor)


def one_1d(x):
    return np.ones_like(np.asarray(x, dtype=np.float64))


def zero_1d(x):
    return np.zeros_like(np.asarray(x, dtype=np.float64))


def one_2d(x, y):
    return np.ones_like(np.asarray(x, dtype=np.float64))


def zero_2d(x, y):
    return np.zeros_like(np.asarray(x, dtype=np.float64))


class _Checks:
    def __init__(self):
        self.items = []

    def check(self, ok, msg):
        self.items.append((bool(ok), msg))


@contextmanager
def criterion(results, num, label, limit_s):
    c = _Checks()
    t0 = time.perf_counter()
    try:
        yield c
    except Exception as exc:
        results.append((num, label, False,
                        f"raised {type(exc).__name__}: {exc}"))
        raise
    elapsed = time.perf_counter() - t0
    passed = all(ok for ok, _ in c.items)
    detail = "; ".join(msg if ok else "FAILED " + msg
                       for ok, msg in c.items)
    detail += f" ({elapsed:.1f}s, limit {limit_s:g}s)"
    results.append((num, label, passed, detail))
    assert passed, detail


def richardson(grid):
    return Smoother("richardson", omega=0.25 * grid.h)


def poisson_1d(n):
    grid = StructuredGrid(1, n)
    return grid, assemble_stiffness_1d(grid, one_1d), assemble_load_1d(grid,
                                                                       one_1d)


@functools.lru_cache(maxsize=1)
def plain_richardson_48():
    """Plain damped-Richardson run shared by criteria 2 and 3."""
    grid, a, b = poisson_1d(48)
    return solve_stationary(a, b, richardson(grid),
                            StopRule(tol=1e-14, max_iter=60000))


def test_criterion_01_eigen_structure(acceptance_results):
    with criterion(acceptance_results, 1, "1-d eigen-structure", 1.0) as c:
        for n in (16, 48):
            grid = StructuredGrid(1, n)
            a = assemble_stiffness_1d(grid, one_1d)
            h = grid.h
            i = np.arange(1, n + 1)
            lam = (4.0 / h) * np.sin(0.5 * np.pi * h * i) ** 2
            xi = sine_modes(n)
            worst = max(np.max(np.abs(spmv(a, xi[:, k]) - lam[k] * xi[:, k]))
                        for k in range(n))
            c.check(worst < 1e-10, f"n={n} eigen identity {worst:.2e} < 1e-10")
            rt = np.max(np.abs(xi @ xi - np.eye(n)))
            c.check(rt < 1e-12, f"n={n} mode round-trip {rt:.2e} < 1e-12")


def test_criterion_02_plain_richardson_rate(acceptance_results):
    with criterion(acceptance_results, 2, "plain Richardson rate", 5.0) as c:
        trace = plain_richardson_48()
        c.check(trace.status == STATUS_CONVERGED, f"status {trace.status}")
        iters = trace.iterations
        c.check(20000 <= iters <= 40000,
                f"{iters} iterations to 1e-14 in [20000, 40000]")
        # measure in a clean mid-run window, away from the rounding floor
        rate = empirical_rate(trace, 10000, end=20000)
        want = np.cos(np.pi / 98.0) ** 2
        c.check(abs(rate - want) < 1e-4,
                f"per-step rate {rate:.6f} vs cos^2(pi/98) = {want:.6f}")


def test_criterion_03_oracle_hybrid(acceptance_results):
    with criterion(acceptance_results, 3, "oracle hybrid", 5.0) as c:
        grid, a, b = poisson_1d(48)
        n0, m_period = 10, 20
        oracle = SpectralOracleCorrector(grid, n0)
        cfg = HybridConfig(inner=richardson(grid), period=m_period,
                           stop=StopRule(tol=1e-14, max_iter=5000))
        trace = hybrid_solve(a, b, oracle, cfg)
        c.check(trace.status == STATUS_CONVERGED, f"status {trace.status}")
        c.check(trace.iterations <= 400,
                f"{trace.iterations} iterations <= 400")
        correct_at = [i for i, k in enumerate(trace.kinds) if k == "correct"]
        r = trace.residual_norms
        ratios = [r[j] / r[i] for i, j in zip(correct_at[3:7], correct_at[4:8])]
        contraction = float(np.exp(np.mean(np.log(ratios))))
        want = np.cos(0.5 * np.pi * grid.h * (n0 + 1)) ** (2 * (m_period - 1))
        c.check(abs(contraction - want) / want < 0.02,
                f"per-period contraction {contraction:.4f} within 2% of "
                f"{want:.4f}")
        plain = plain_richardson_48()
        speedup = plain.iterations / trace.iterations
        c.check(speedup >= 50.0,
                f"speedup {speedup:.0f}x over the plain run >= 50x")


def test_criterion_04_rate_bound_curve(acceptance_results):
    with criterion(acceptance_results, 4, "Rate(M) formula", 0.1) as c:
        p = RateParams(eta1=0.999, eta2=0.5, eps=0.1, big_r=10.0)
        v20 = rate_bound(20, p)
        c.check(abs(v20 - 0.8904) < 5e-4, f"Rate(20) = {v20:.6f} = 0.8904(5)")
        rates = np.array([rate_bound(m, p) for m in range(1, 201)])
        k = int(np.argmin(rates))
        d = np.diff(rates)
        c.check(0 < k < 199, f"interior minimum at M = {k + 1}")
        c.check(np.all(d[:k] < 0.0) and np.all(d[k:] > 0.0),
                "curve decreases to the minimum then increases")


def test_criterion_05_gs_local_mode(acceptance_results):
    with criterion(acceptance_results, 5, "GS local-mode analysis", 2.0) as c:
        z = gs_symbol(np.pi / 2.0, np.arccos(0.8))
        c.check(abs(z - 0.5) < 1e-12,
                f"symbol at (pi/2, arccos(4/5)) = {z:.12f}")
        mu = smoothing_factor(0.5)
        c.check(abs(mu - 0.5) < 1e-4, f"smoothing factor {mu:.6f} = 0.5(1e-4)")
        z00 = gs_symbol(0.0, 0.0)
        c.check(z00 == 1.0, f"symbol at (0, 0) = {z00}")


def _mg_factor(n, cycles=8):
    grid = StructuredGrid(2, n)
    a = assemble_stiffness_2d(grid, one_2d)
    b = assemble_load_2d(grid, one_2d)
    levels = 1
    m = n + 1
    while m % 2 == 0 and m // 2 >= 4:
        m //= 2
        levels += 1
    hier = build_hierarchy(grid, one_2d, levels)
    trace = solve_stationary(a, b, hier, StopRule(tol=1e-300,
                                                  max_iter=cycles))
    r = np.concatenate([[trace.initial_residual], trace.residual_norms])
    ratios = r[1:] / r[:-1]
    return float(np.max(ratios[2:]))


def test_criterion_06_multigrid(acceptance_results):
    with criterion(acceptance_results, 6, "2-d multigrid", 30.0) as c:
        f129 = _mg_factor(127)
        c.check(f129 <= 0.25,
                f"129^2 lattice V(2,2) factor {f129:.3f} <= 0.25 (cycles 3+)")
        f65 = _mg_factor(63)
        f257 = _mg_factor(255)
        c.check(abs(f65 - f257) < 0.1,
                f"h-independence |{f65:.3f} - {f257:.3f}| < 0.1")


def test_criterion_07_network_invariants(acceptance_results):
    with criterion(acceptance_results, 7, "network invariants", 10.0) as c:
        rng = np.random.default_rng(42)
        worst_lin, worst_grad = 0.0, 0.0
        zero_ok = True
        cases = [(1, None, s) for s in (0, 1, 2)] + [(2, 50, 3)]
        for dim, hidden, seed in cases:
            if dim == 1:
                ks = np.linspace(0.0, 1.0, 50)
                fs = np.linspace(0.0, 1.0, 50)
                q = StructuredGrid(1, 48).interior_coords()
            else:
                ax = np.linspace(0.0, 1.0, 7)
                xx, yy = np.meshgrid(ax, ax, indexing="xy")
                ks = np.column_stack([xx.ravel(), yy.ravel()])
                fs = ks.copy()
                q = StructuredGrid(2, 8).interior_coords()
            arch = default_architecture(dim, ks.shape[0], fs.shape[0],
                                        hidden=hidden)
            model = build_model(arch, ks, fs, seed=seed)
            k = rng.standard_normal(ks.shape[0])
            f1 = rng.standard_normal(fs.shape[0])
            f2 = rng.standard_normal(fs.shape[0])
            combo = forward(model, k, 1.3 * f1 - 0.4 * f2, q)
            parts = 1.3 * forward(model, k, f1, q) - 0.4 * forward(model, k,
                                                                   f2, q)
            worst_lin = max(worst_lin, float(
                np.max(np.abs(combo - parts)) / np.max(np.abs(parts))))
            zero_ok &= np.array_equal(forward(model, k, np.zeros(fs.shape[0]),
                                              q), np.zeros(q.shape[0]))
            y = rng.standard_normal((3, q.shape[0]))
            # central differences need a step clear of the rounding floor
            worst_grad = max(worst_grad, grad_check(
                model, rng.standard_normal((3, ks.shape[0])),
                rng.standard_normal((3, fs.shape[0])), q, y,
                n_probes=60, eps=3e-5, seed=seed))
        c.check(worst_lin < 1e-12, f"linearity in f {worst_lin:.2e} < 1e-12")
        c.check(zero_ok, "zero forcing maps to the zero function exactly")
        c.check(worst_grad < 1e-5,
                f"gradient check {worst_grad:.2e} < 1e-5")


def test_criterion_08_trained_hybrid(acceptance_results):
    with criterion(acceptance_results, 8, "trained hybrid", 1800.0) as c:
        fine = StructuredGrid(1, 255)
        gp_k = GpSpec(kernel="rbf", mean=1.0, std=0.2, length_scale=0.1)
        gp_f = GpSpec(kernel="rbf", mean=0.0, std=1.0, length_scale=0.1)
        sensors = np.linspace(0.0, 1.0, 50)
        grid, a, b = poisson_1d(48)
        ds = generate_dataset(fine, gp_k, gp_f, 1000, sensors, sensors,
                              grid.interior_coords(), seed=0)
        opts = TrainingOptions(epochs=2000, batch_size=64, lr=1e-3)
        model, _ = train(ds, opts, seed=0)
        fit = relative_l2_error(model, ds)

        corrector = MionetCorrector(model, grid, one_1d, f=one_1d)
        stop = StopRule(tol=1e-12, max_iter=60000)
        rows = sweep_M(a, b, corrector, [0, 10, 20, 50, 100],
                       richardson(grid), stop)
        plain = rows[0]
        best = best_period(rows)
        c.check(plain.status == STATUS_CONVERGED,
                f"plain baseline {plain.iterations} iterations "
                f"(train fit rel-l2 {fit:.3f})")
        c.check(best.iterations < plain.iterations,
                f"best hybrid (M={best.period}) {best.iterations} iterations "
                f"< plain")
        speedup = plain.iterations / best.iterations
        c.check(speedup >= 5.0, f"iteration speedup {speedup:.1f}x >= 5x")
        _, eps, big_r = model_error_spectrum(corrector, grid, 10)
        c.check(eps < big_r / 10.0,
                f"low-mode error eps = {eps:.3f} < R/10 = {big_r / 10.0:.3f}")


def test_criterion_09_inhomogeneous_boundary(acceptance_results):
    with criterion(acceptance_results, 9, "inhomogeneous boundary", 60.0) as c:
        grid = StructuredGrid(2, 63)
        g_one = lambda t: np.ones_like(np.asarray(t, dtype=np.float64))
        a, b = assemble_augmented_2d(grid, one_2d, zero_2d, g_one)
        gs = Smoother("gauss_seidel")
        first = solve_stationary(a, b, gs, StopRule(tol=1e-300, max_iter=1))
        bmask = grid.boundary_mask()
        c.check(np.array_equal(first.mu[bmask], b[bmask]),
                "boundary rows exactly satisfied after the first sweep")
        trace = solve_stationary(a, b, gs, StopRule(tol=1e-13,
                                                    max_iter=60000))
        err = float(np.max(np.abs(trace.mu - 1.0)))
        c.check(trace.status == STATUS_CONVERGED and err <= 1e-10,
                f"g = 1 gives max|mu - 1| = {err:.2e} <= 1e-10 "
                f"({trace.iterations} sweeps)")

        spec = GpSpec(kernel="exp_sine_squared", mean=0.0, std=1.0,
                      length_scale=0.5, period=4.0)
        ts = np.linspace(0.0, 4.0, 257)[:-1]
        vals = sample_field(spec, ts, rng=np.random.default_rng(7))
        g_gp = lambda t: np.interp(np.asarray(t, dtype=np.float64), ts, vals,
                                   period=4.0)
        grid2 = StructuredGrid(2, 31)
        a2, b2 = assemble_augmented_2d(grid2, one_2d, zero_2d, g_gp)
        t2 = solve_stationary(a2, b2, gs, StopRule(tol=1e-10,
                                                   max_iter=60000))
        bmask2 = grid2.boundary_mask()
        c.check(t2.status == STATUS_CONVERGED,
                f"GP boundary data converged in {t2.iterations} sweeps")
        c.check(np.array_equal(t2.mu[bmask2], b2[bmask2]),
                "boundary rows stay exact through the whole run")


class _CorruptedOracle(Corrector):
    """Exact low-mode oracle with a deliberate high-mode injection, strong
    enough to destabilize short correction periods."""

    def __init__(self, grid, n0, boost=100.0):
        self.oracle = SpectralOracleCorrector(grid, n0)
        n, h = grid.n, grid.h
        i = n0 + 1
        self.xi = sine_modes(n)[:, i - 1]
        self.lam = (4.0 / h) * np.sin(0.5 * np.pi * h * i) ** 2
        self.boost = boost

    def correct(self, r):
        inject = (self.boost / self.lam) * self.xi * float(self.xi @ r)
        return self.oracle.correct(r) + inject


def test_criterion_10_divergence_bookkeeping(acceptance_results):
    with criterion(acceptance_results, 10, "divergence bookkeeping",
                   10.0) as c:
        grid, a, b = poisson_1d(48)
        n0 = 10
        bad = _CorruptedOracle(grid, n0)
        rho = np.cos(0.5 * np.pi * grid.h * (n0 + 1)) ** 2
        m_safe = richardson_M_bound(bad.boost - 1.0, rho) + 2
        stop = StopRule(tol=1e-10, max_iter=40000)
        rows = sweep_M(a, b, bad, [0, 2, m_safe], richardson(grid), stop)
        c.check(rows[1].status == STATUS_DIVERGED,
                f"M=2 diverges ({rows[1].iterations} steps)")
        c.check(rows[0].status == STATUS_CONVERGED and
                rows[2].status == STATUS_CONVERGED,
                f"baseline and M={m_safe} rows still converge: the sweep "
                f"was not aborted")
        text = sweep_to_csv(rows)
        c.check("div." in text, 'sweep table prints "div." for the bad row')
