"""The hybrid iteration: M-1 smoother (or V-cycle) steps, then one corrector
step, repeating until the stop rule fires or the residual blows up.

The driver recomputes r = b - A mu from scratch after every step (no
incremental residual updates), counts one V-cycle as one step, and treats
the corrector's initial guess as step 1 of the trace.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass

import numpy as np

from .correctors import Corrector
from .iteration import (DIVERGENCE_FACTOR, STATUS_CONVERGED, STATUS_DIVERGED,
                        STATUS_MAX_ITER, IterationTrace, StopRule,
                        empirical_rate)
from .linalg import CsrMatrix, sine_transform_1d, spmv
from .multigrid import MgHierarchy, vcycle
from .smoothers import Smoother, smoother_step

__all__ = ["HybridConfig", "SweepRow", "hybrid_solve", "solve_stationary",
           "sweep_M", "sweep_to_csv", "best_period", "empirical_rate"]

KIND_INIT = "init"
KIND_SMOOTH = "smooth"
KIND_VCYCLE = "vcycle"
KIND_CORRECT = "correct"


@dataclass(frozen=True)
class HybridConfig:
    """Inner method, correction period M and stopping rule for one solve."""

    inner: Smoother | MgHierarchy
    period: int
    stop: StopRule
    use_initial_guess: bool = True

    def __post_init__(self):
        if not isinstance(self.period, (int, np.integer)) or self.period < 1:
            raise ValueError("correction period M must be an integer >= 1")
        if not isinstance(self.inner, (Smoother, MgHierarchy)):
            raise ValueError("inner must be a Smoother or an MgHierarchy")


def _inner_step(a, b, mu, inner):
    if isinstance(inner, MgHierarchy):
        vcycle(inner, b, mu)
        return KIND_VCYCLE
    smoother_step(a, b, mu, inner)
    return KIND_SMOOTH


def hybrid_solve(a: CsrMatrix, b: np.ndarray, corrector: Corrector | None,
                 cfg: HybridConfig, reference: np.ndarray | None = None,
                 record_spectral: bool = False) -> IterationTrace:
    """Run the hybrid iteration from mu = 0 and trace every step.

    With corrector None this is the plain stationary method. reference
    enables per-step error norms; record_spectral additionally stores the
    sine-basis coefficients of the error after every step (1-d sized
    problems only) for spectral heatmaps.
    """
    b = np.asarray(b, dtype=np.float64)
    n = b.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix and right-hand side sizes disagree")
    if record_spectral and reference is None:
        raise ValueError("spectral recording needs a reference solution")
    stop = cfg.stop
    mu = np.zeros(n)
    t0 = time.perf_counter()
    correct_s = 0.0

    r = b - spmv(a, mu)
    initial_residual = float(np.sqrt(r @ r))
    initial_measure = stop.measure(r)
    norms, kinds, times, errors, alphas = [], [], [], [], []

    def error_of(v):
        return float(np.sqrt(v @ v))

    initial_error = None
    if reference is not None:
        initial_error = error_of(reference - mu)
        if record_spectral:
            alphas.append(sine_transform_1d(reference - mu))

    status = STATUS_MAX_ITER
    if initial_measure <= stop.tol:
        status = STATUS_CONVERGED

    m = 0
    while status == STATUS_MAX_ITER and len(kinds) < stop.max_iter:
        if not kinds and corrector is not None and cfg.use_initial_guess:
            tc = time.perf_counter()
            mu = np.array(corrector.initial_guess(b), dtype=np.float64)
            correct_s += time.perf_counter() - tc
            kind = KIND_INIT
        else:
            m += 1
            if corrector is not None and m % cfg.period == 0:
                tc = time.perf_counter()
                mu = mu + corrector.correct(b - spmv(a, mu))
                correct_s += time.perf_counter() - tc
                kind = KIND_CORRECT
            else:
                kind = _inner_step(a, b, mu, cfg.inner)
        r = b - spmv(a, mu)
        rl2 = float(np.sqrt(r @ r))
        norms.append(rl2)
        kinds.append(kind)
        times.append(1000.0 * (time.perf_counter() - t0))
        if reference is not None:
            errors.append(error_of(reference - mu))
            if record_spectral:
                alphas.append(sine_transform_1d(reference - mu))
        if not np.isfinite(rl2) or rl2 > DIVERGENCE_FACTOR * max(
                initial_residual, 1.0e-300):
            status = STATUS_DIVERGED
        elif stop.measure(r) <= stop.tol:
            status = STATUS_CONVERGED

    return IterationTrace(
        initial_residual=initial_residual,
        residual_norms=np.asarray(norms),
        kinds=kinds,
        times_ms=np.asarray(times),
        status=status,
        mu=mu,
        error_norms=np.asarray(errors) if reference is not None else None,
        initial_error=initial_error,
        spectral=np.asarray(alphas) if record_spectral else None,
        corrector_time_ms=1000.0 * correct_s,
    )


def solve_stationary(a: CsrMatrix, b: np.ndarray, inner, stop: StopRule,
                     reference: np.ndarray | None = None,
                     record_spectral: bool = False) -> IterationTrace:
    """Plain smoother or multigrid iteration (no corrector)."""
    cfg = HybridConfig(inner=inner, period=1, stop=stop,
                       use_initial_guess=False)
    return hybrid_solve(a, b, None, cfg, reference=reference,
                        record_spectral=record_spectral)


@dataclass(frozen=True)
class SweepRow:
    """One correction period's outcome; period 0 marks the plain baseline."""

    period: int
    iterations: int
    time_s: float
    status: str
    final_residual: float


def sweep_M(a: CsrMatrix, b: np.ndarray, corrector: Corrector,
            periods, inner, stop: StopRule) -> list[SweepRow]:
    """Run one hybrid solve per period and tabulate the outcomes.

    A period of 0 runs the plain method as the comparison baseline.
    Divergence is data here, not an error: the sweep carries on and the row
    records the status.
    """
    periods = [int(p) for p in periods]
    if not periods:
        raise ValueError("periods must be non-empty")
    if any(p < 0 for p in periods):
        raise ValueError("periods must be >= 0 (0 = plain baseline)")
    rows = []
    for p in periods:
        t0 = time.perf_counter()
        if p == 0:
            trace = solve_stationary(a, b, inner, stop)
        else:
            cfg = HybridConfig(inner=inner, period=p, stop=stop)
            trace = hybrid_solve(a, b, corrector, cfg)
        wall = time.perf_counter() - t0
        final = float(trace.residual_norms[-1]) if trace.iterations \
            else trace.initial_residual
        rows.append(SweepRow(p, trace.iterations, wall, trace.status, final))
    return rows


def sweep_to_csv(rows: list[SweepRow], path=None) -> str:
    """Render sweep rows as CSV (columns M,iterations,time_s,status,speedup).

    speedup is wall time relative to the period-0 baseline row when present;
    diverged rows print the customary "div." and leave speedup empty.
    """
    base = next((r.time_s for r in rows if r.period == 0), None)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["M", "iterations", "time_s", "status", "speedup"])
    for r in rows:
        status = "div." if r.status == STATUS_DIVERGED else r.status
        speedup = ""
        if base is not None and r.time_s > 0.0 and r.status != STATUS_DIVERGED:
            speedup = f"{base / r.time_s:.3f}"
        w.writerow([r.period, r.iterations, f"{r.time_s:.6f}", status, speedup])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def best_period(rows: list[SweepRow]) -> SweepRow:
    """Converged hybrid row with the fewest iterations (ties: smaller M)."""
    good = [r for r in rows if r.status == STATUS_CONVERGED and r.period > 0]
    if not good:
        raise ValueError("no converged hybrid run in the sweep")
    return min(good, key=lambda r: (r.iterations, r.period))
