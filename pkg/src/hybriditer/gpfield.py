"""Gaussian random fields for coefficients, loads and boundary data.

Fields are drawn by Cholesky factorization of a jittered kernel matrix. The
factorization always runs on the unit-variance kernel and the draw is scaled
afterwards (sample = mean + std * L0 z), so rescaling mean or std reproduces
the same underlying draw bit for bit. The squared-exponential kernel takes
points in R^d; the periodic kernel takes the scalar boundary parameter
t in [0, 4) of the unit square.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import cholesky

RBF = "rbf"
EXP_SINE_SQUARED = "exp_sine_squared"
_KERNELS = (RBF, EXP_SINE_SQUARED)

DEFAULT_JITTER = 1.0e-8
POSITIVITY_FLOOR = 0.05


@dataclass(frozen=True)
class GpSpec:
    """Kernel family plus first and second moments of the field."""

    kernel: str
    mean: float
    std: float
    length_scale: float
    period: float = 4.0
    seed: int | None = None

    def __post_init__(self):
        if self.kernel not in _KERNELS:
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if not (self.std >= 0.0 and np.isfinite(self.std)):
            raise ValueError("std must be nonnegative and finite")
        if not (self.length_scale > 0.0 and np.isfinite(self.length_scale)):
            raise ValueError("length_scale must be positive and finite")
        if not (self.period > 0.0 and np.isfinite(self.period)):
            raise ValueError("period must be positive and finite")
        if not np.isfinite(self.mean):
            raise ValueError("mean must be finite")


def _unit_kernel(spec: GpSpec, points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if spec.kernel == RBF:
        if pts.ndim == 1:
            pts = pts[:, None]
        d2 = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
        return np.exp(-d2 / (2.0 * spec.length_scale ** 2))
    if pts.ndim != 1:
        raise ValueError("the periodic kernel takes scalar boundary parameters")
    d = np.abs(pts[:, None] - pts[None, :])
    s = np.sin(np.pi * d / spec.period)
    return np.exp(-2.0 * s * s / spec.length_scale ** 2)


def covariance(spec: GpSpec, points: np.ndarray) -> np.ndarray:
    """Dense covariance matrix std^2 K(points, points)."""
    return spec.std ** 2 * _unit_kernel(spec, points)


def sample_field(spec: GpSpec, points: np.ndarray,
                 jitter: float = DEFAULT_JITTER, rng=None) -> np.ndarray:
    """One field draw at the given points.

    The rng argument overrides spec.seed; one of the two must be provided.
    jitter is added to the unit kernel's diagonal (equivalently
    jitter * std^2 on the covariance).
    """
    if rng is None:
        if spec.seed is None:
            raise ValueError("either spec.seed or rng must be given")
        rng = np.random.default_rng(spec.seed)
    pts = np.asarray(points, dtype=np.float64)
    npts = pts.shape[0]
    if npts == 0:
        return np.zeros(0)
    if spec.std == 0.0:
        rng.standard_normal(npts)  # keep the stream position consistent
        return np.full(npts, spec.mean)
    l0 = cholesky(_unit_kernel(spec, pts), jitter=jitter)
    z = rng.standard_normal(npts)
    return spec.mean + spec.std * (l0 @ z)


def positivity_guard(values: np.ndarray, floor: float = POSITIVITY_FLOOR):
    """Clamp a coefficient draw from below; returns (values, n_clamped)."""
    values = np.asarray(values, dtype=np.float64)
    clamped = np.maximum(values, floor)
    return clamped, int(np.count_nonzero(values < floor))
