"""Hybrid iteration with an exact low-mode oracle.

Interleave damped Richardson with a corrector that inverts the operator
exactly on the lowest n0 modes and returns zero elsewhere. Every M-th step
the correction wipes the slow part of the error, so the iteration only ever
has to smooth modes above n0. The per-period contraction has the closed
form cos^(2(M-1))((n0+1) pi h / 2), and the measured trace reproduces it to
three digits.
"""

import numpy as np

from hybriditer.correctors import SpectralOracleCorrector
from hybriditer.fem import (StructuredGrid, assemble_load_1d,
                            assemble_stiffness_1d)
from hybriditer.hybrid import HybridConfig, hybrid_solve, solve_stationary
from hybriditer.iteration import StopRule
from hybriditer.smoothers import Smoother


def one(x):
    return np.ones_like(np.asarray(x, dtype=np.float64))


def main():
    n, n0, period = 48, 10, 20
    grid = StructuredGrid(1, n)
    a = assemble_stiffness_1d(grid, one)
    b = assemble_load_1d(grid, one)
    inner = Smoother("richardson", omega=0.25 * grid.h)
    stop = StopRule(tol=1e-14, max_iter=60000)

    plain = solve_stationary(a, b, inner, stop)
    print(f"plain Richardson, n = {n}, tol 1e-14: "
          f"{plain.iterations} iterations")

    oracle = SpectralOracleCorrector(grid, n0)
    cfg = HybridConfig(inner=inner, period=period, stop=stop)
    hyb = hybrid_solve(a, b, oracle, cfg)
    print(f"hybrid, exact oracle on modes 1..{n0}, M = {period}: "
          f"{hyb.iterations} iterations "
          f"({plain.iterations / hyb.iterations:.0f}x fewer)")

    correct_at = [i for i, k in enumerate(hyb.kinds) if k == "correct"]
    r = hyb.residual_norms
    ratios = [r[j] / r[i] for i, j in zip(correct_at[3:7], correct_at[4:8])]
    measured = float(np.exp(np.mean(np.log(ratios))))
    closed = np.cos(0.5 * np.pi * grid.h * (n0 + 1)) ** (2 * (period - 1))
    print(f"\nper-period contraction: measured {measured:.4f}, "
          f"closed form {closed:.4f}")
    print("the hybrid rate is set entirely by the slowest UNcorrected mode,")
    print(f"mode {n0 + 1}, smoothed {period - 1} times per period.")


if __name__ == "__main__":
    main()
