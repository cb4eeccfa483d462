"""Stopping rules and per-iteration traces shared by all solve drivers."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

STATUS_CONVERGED = "converged"
STATUS_MAX_ITER = "max_iter"
STATUS_DIVERGED = "diverged"

# A run is declared diverged once the residual norm exceeds this multiple of
# the initial residual (or goes non-finite).
DIVERGENCE_FACTOR = 1.0e6


@dataclass(frozen=True)
class StopRule:
    """Residual-based stopping: stop once ||r|| <= tol in the chosen norm,
    give up after max_iter applied steps."""

    tol: float
    max_iter: int
    norm: str = "l2"

    def __post_init__(self):
        if not (self.tol > 0.0 and np.isfinite(self.tol)):
            raise ValueError("tol must be positive and finite")
        if self.max_iter < 0:
            raise ValueError("max_iter must be nonnegative")
        if self.norm not in ("l2", "linf"):
            raise ValueError("norm must be 'l2' or 'linf'")

    def measure(self, r: np.ndarray) -> float:
        if self.norm == "l2":
            return float(np.sqrt(r @ r))
        return float(np.max(np.abs(r))) if r.size else 0.0


@dataclass
class IterationTrace:
    """Record of one solve: per-step kinds, residual norms and wall times.

    Step i (1-based) lives at index i-1 of each array. times_ms holds the
    cumulative wall time since the solve started; corrector_time_ms
    sub-tracks how much of the total the corrector inference consumed.
    residual_norms are always l2 regardless of the stopping norm;
    error_norms and spectral coefficients (sine-basis coefficients of the
    error, 1-d only, one row per step including the start state) are filled
    when a reference solution was supplied.
    """

    initial_residual: float
    residual_norms: np.ndarray
    kinds: list[str]
    times_ms: np.ndarray
    status: str
    mu: np.ndarray
    error_norms: np.ndarray | None = None
    initial_error: float | None = None
    spectral: np.ndarray | None = None
    corrector_time_ms: float = 0.0

    @property
    def iterations(self) -> int:
        return len(self.kinds)

    def to_csv(self, path):
        """Write `step,kind,residual_l2,error_l2,time_ms`; step 0 is the
        initial state."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "kind", "residual_l2", "error_l2", "time_ms"])
            err0 = "" if self.initial_error is None else repr(self.initial_error)
            w.writerow([0, "start", repr(self.initial_residual), err0, repr(0.0)])
            for i, kind in enumerate(self.kinds):
                err = ("" if self.error_norms is None
                       else repr(float(self.error_norms[i])))
                w.writerow([i + 1, kind, repr(float(self.residual_norms[i])),
                            err, repr(float(self.times_ms[i]))])


def empirical_rate(trace: IterationTrace, window: int,
                   end: int | None = None) -> float:
    """Geometric-mean residual contraction per step over a window.

    The window covers steps (end - window, end], with end defaulting to the
    final step. Near a tight tolerance the computed residual picks up
    rounding noise of order machine epsilon times the solution scale, so
    asymptotic-rate measurements should place `end` well before the stop.
    """
    r = trace.residual_norms
    if window < 1:
        raise ValueError("window must be at least 1")
    last = r.size if end is None else end
    if not 1 <= last <= r.size:
        raise ValueError(f"end must be in [1, {r.size}]")
    if last < window + 1:
        raise ValueError(f"window of {window} needs at least {window + 1} "
                         f"steps before end, have {last}")
    a, b = float(r[last - 1 - window]), float(r[last - 1])
    if not (a > 0.0 and b > 0.0 and np.isfinite(a) and np.isfinite(b)):
        raise ValueError("window contains zero or non-finite residuals")
    return (b / a) ** (1.0 / window)
