"""Spectral diagnostics and convergence-rate bounds for the hybrid method.

Covers the 1-d eigen-structure of the unit-coefficient operator, per-mode
model-error measurement, the Rate(M) upper bound and its minimizer, the
Richardson period bound, and the local-mode (Fourier symbol) analysis of
lexicographic Gauss-Seidel on the 2-d five-point stencil.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .iteration import IterationTrace
from .linalg import sine_modes
from .smoothers import GAUSS_SEIDEL, Smoother, smoother_step

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def eigenpairs_1d(n: int):
    """Eigenvalues and orthonormal eigenvectors of (1/h) tridiag(-1, 2, -1).

    lam_i = (4/h) sin^2(pi h i / 2) and xi^i_j = sqrt(2h) sin(i j pi h) for
    i = 1..n (column i-1 of the returned matrix); the eigenvector matrix is
    symmetric and involutory.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    h = 1.0 / (n + 1)
    i = np.arange(1, n + 1)
    lam = (4.0 / h) * np.sin(0.5 * np.pi * h * i) ** 2
    return lam, sine_modes(n)


@dataclass(frozen=True)
class RateParams:
    """Inputs of the Rate(M) bound: slow/fast contraction factors of the
    smoother and the low/high-mode split of the corrector's model error."""

    eta1: float
    eta2: float
    eps: float
    big_r: float

    def __post_init__(self):
        if not (0.0 < self.eta2 < self.eta1 < 1.0):
            raise ValueError("need 0 < eta2 < eta1 < 1")
        if not (self.eps >= 0.0 and np.isfinite(self.eps)):
            raise ValueError("eps must be finite and >= 0")
        if not (self.big_r >= 0.0 and np.isfinite(self.big_r)):
            raise ValueError("R must be finite and >= 0")


def rate_bound(m: int, p: RateParams) -> float:
    """Upper bound on the average per-iteration contraction at period M:

        Rate(M) = eta1 * (eps/eta1 + R/eta2 * (eta2/eta1)^M)^(1/M).

    The first term is the smoother-resistant low-mode model error, the
    second the high-mode mass the smoother grinds down between corrections.
    """
    if m < 1:
        raise ValueError("M must be >= 1")
    inner = p.eps / p.eta1 + p.big_r / p.eta2 * (p.eta2 / p.eta1) ** m
    return p.eta1 * inner ** (1.0 / m)


def rate_bound_gs(m: int, zeta0: float, zeta_rho: float, eps: float,
                  big_r: float) -> float:
    """Gauss-Seidel flavor of the rate bound,

        Rate(M) = zeta0 * (eps/zeta0 + R/zeta_rho * (zeta_rho/zeta0)^(M-1))^(1/M),

    with zeta0 the observed low-mode GS contraction and zeta_rho the
    smoothing factor over the high-frequency region.
    """
    if m < 1:
        raise ValueError("M must be >= 1")
    if not (0.0 < zeta_rho < zeta0 < 1.0):
        raise ValueError("need 0 < zeta_rho < zeta0 < 1")
    if eps < 0.0 or big_r < 0.0:
        raise ValueError("eps and R must be >= 0")
    inner = eps / zeta0 + big_r / zeta_rho * (zeta_rho / zeta0) ** (m - 1)
    return zeta0 * inner ** (1.0 / m)


def argmin_rate(p: RateParams, m_max: int) -> int:
    """Period in [1, m_max] minimizing rate_bound; ties pick the smaller M."""
    if m_max < 2:
        raise ValueError("m_max must be >= 2")
    best_m, best_v = 1, rate_bound(1, p)
    for m in range(2, m_max + 1):
        v = rate_bound(m, p)
        if v < best_v:
            best_m, best_v = m, v
    return best_m


def richardson_M_bound(norm_ima: float, rho_iwa: float) -> int:
    """Smallest safe correction period for Richardson smoothing,

        M >= 2 + floor(-ln ||I - MA|| / ln rho(I - wA)),

    clamped below at 1. Beyond this period the smoother has damped the
    corrector's worst-case high-mode injection back under unit size.
    """
    if not (0.0 < rho_iwa < 1.0):
        raise ValueError("need 0 < rho < 1")
    if not (norm_ima > 0.0 and np.isfinite(norm_ima)):
        raise ValueError("operator norm must be positive and finite")
    return max(1, 2 + math.floor(-math.log(norm_ima) / math.log(rho_iwa)))


def model_error_spectrum(corrector, grid, n0: int | None = None):
    """Per-mode corrector error ||xi^i - correct(lam_i xi^i)||_2, i = 1..n.

    With n0 given, also returns the split (eps, R) = (sum over i <= n0,
    sum over i > n0) feeding RateParams.
    """
    if grid.dim != 1:
        raise ValueError("model error spectrum is measured on 1-d grids")
    lam, xi = eigenpairs_1d(grid.n)
    norms = np.empty(grid.n)
    for i in range(grid.n):
        e = xi[:, i] - corrector.correct(lam[i] * xi[:, i])
        norms[i] = np.sqrt(e @ e)
    if n0 is None:
        return norms
    if not (1 <= n0 <= grid.n):
        raise ValueError(f"n0 must be in [1, {grid.n}]")
    return norms, float(norms[:n0].sum()), float(norms[n0:].sum())


def spectral_heatmap(trace: IterationTrace, n: int) -> np.ndarray:
    """Mode-by-iteration matrix log10(|alpha_i^(m)| + 1e-300) from a trace
    recorded with spectral coefficients; column 0 is the start state."""
    if trace.spectral is None:
        raise ValueError("trace carries no spectral record; solve with "
                         "record_spectral and a reference solution")
    coeffs = np.asarray(trace.spectral)
    if coeffs.ndim != 2 or coeffs.shape[1] != n:
        raise ValueError(f"spectral record is {coeffs.shape}, expected "
                         f"(steps+1, {n})")
    return np.log10(np.abs(coeffs.T) + 1.0e-300)


def gs_symbol(theta1, theta2):
    """Per-sweep amplification of the Fourier mode theta under lexicographic
    Gauss-Seidel on the five-point stencil:

        zeta(theta) = |e^{i theta1} + e^{i theta2}|
                    / |4 - e^{i theta1} - e^{i theta2}|.
    """
    e1 = np.exp(1j * np.asarray(theta1, dtype=np.float64))
    e2 = np.exp(1j * np.asarray(theta2, dtype=np.float64))
    out = np.abs(e1 + e2) / np.abs(4.0 - e1 - e2)
    return float(out) if out.ndim == 0 else out


def _golden_max(f, lo: float, hi: float, iters: int = 80):
    """Golden-section maximization of a unimodal-enough f on [lo, hi]."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _feasible_interval(x: float, other: float, rho: float, delta: float):
    """Clip [x-delta, x+delta] to [-pi, pi] and, when the other coordinate
    is low-frequency, to the high-frequency segment containing x."""
    lo, hi = max(-math.pi, x - delta), min(math.pi, x + delta)
    if abs(other) < rho * math.pi:
        if x >= 0.0:
            lo = max(lo, rho * math.pi)
        else:
            hi = min(hi, -rho * math.pi)
    return lo, hi


def smoothing_factor(rho: float, grid_resolution: int = 512) -> float:
    """Max of gs_symbol over the high-frequency set max(|t1|,|t2|) >= rho pi.

    Grid scan at the stated resolution, then coordinate-wise golden-section
    refinement around the grid argmax (the true maximizer can sit on the
    |theta| = rho pi boundary, which the clipped line searches respect).
    """
    if not (0.0 < rho < 1.0):
        raise ValueError("rho must be in (0, 1)")
    if grid_resolution < 8:
        raise ValueError("grid resolution too small")
    th = np.linspace(-math.pi, math.pi, grid_resolution)
    t1, t2 = np.meshgrid(th, th, indexing="ij")
    vals = gs_symbol(t1, t2)
    vals[np.maximum(np.abs(t1), np.abs(t2)) < rho * math.pi] = -np.inf
    flat = int(np.argmax(vals))
    x1 = float(t1.ravel()[flat])
    x2 = float(t2.ravel()[flat])
    best = float(vals.ravel()[flat])
    delta = th[1] - th[0]
    for _ in range(4):
        lo, hi = _feasible_interval(x1, x2, rho, delta)
        x1, _ = _golden_max(lambda t: gs_symbol(t, x2), lo, hi)
        lo, hi = _feasible_interval(x2, x1, rho, delta)
        x2, _ = _golden_max(lambda t: gs_symbol(x1, t), lo, hi)
        best = max(best, float(gs_symbol(x1, x2)))
    return best


def estimate_gs_low_mode_contraction(a, n_steps: int = 300,
                                     tail: int = 60) -> float:
    """Observed asymptotic per-sweep contraction of Gauss-Seidel on the
    homogeneous system, a stand-in for the zeta0 of the GS rate bound.

    Iterates e <- GS(e) from a constant vector (rich in the slowest mode)
    and returns the geometric-mean norm ratio over the trailing sweeps.
    """
    if n_steps <= tail:
        raise ValueError("need more steps than the averaging tail")
    gs = Smoother(GAUSS_SEIDEL)
    zero = np.zeros(a.nrows)
    e = np.ones(a.nrows)
    e /= np.sqrt(e @ e)
    ratios = []
    for _ in range(n_steps):
        smoother_step(a, zero, e, gs)
        nrm = float(np.sqrt(e @ e))
        if nrm == 0.0:
            return 0.0
        ratios.append(nrm)
        e /= nrm
    tail_r = np.asarray(ratios[-tail:])
    return float(np.exp(np.mean(np.log(tail_r))))


def rate_curve_to_csv(periods, rates, path=None) -> str:
    """Rate(M) curve as CSV with header M,rate."""
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["M", "rate"])
    for m, r in zip(periods, rates):
        w.writerow([int(m), repr(float(r))])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def heatmap_to_csv(matrix: np.ndarray, path=None) -> str:
    """Heatmap matrix as a plain CSV grid (rows = modes, columns = steps)."""
    buf = io.StringIO()
    w = csv.writer(buf)
    for row in np.asarray(matrix):
        w.writerow([repr(float(v)) for v in row])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text
