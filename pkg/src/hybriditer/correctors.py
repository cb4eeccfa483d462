"""Correction operators for the hybrid loop.

A corrector maps an algebraic residual to an approximate error vector,
mu += correct(b - A mu). Implementations here: the trained-network corrector
(residual -> function -> network -> nodal values) and an analytically exact
spectral oracle used to validate the convergence theory without training.

Every corrector is linear with correct(0) = 0; that pair of properties is
what makes the hybrid loop a stationary linear iteration.
"""

from __future__ import annotations

import numpy as np

from .fem import (PAD_REPLICATE, StructuredGrid, _eval_field,
                  boundary_parameter, interpolate_at_nodes,
                  residual_to_function)
from .linalg import sine_modes
from .mionet import MionetModel, forward

MODE_DISCRETE_EXACT = "discrete_exact"
MODE_CONTINUOUS_EIG = "continuous_eig"


class Corrector:
    """Residual-to-error-estimate capability used by the hybrid driver."""

    def correct(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def initial_guess(self, b: np.ndarray) -> np.ndarray:
        """Starting iterate from the right-hand side.

        The lumped quotient b_i / int phi_i reconstructs the forcing at the
        nodes, so correct(b) evaluates the solution operator on (k, f).
        """
        return self.correct(b)


class SpectralOracleCorrector(Corrector):
    """Exact inverse on the lowest n0 modes of the unit-coefficient operator.

    discrete_exact projects onto the discrete sine eigenvectors and divides
    by the discrete eigenvalues: correct(r) = sum_low lam_i^-1 xi^i (xi^i.r),
    zero on the rest of the spectrum; available in 1-d and (via tensor-sine
    modes, trusted set max(i, j) <= n0) in 2-d.

    continuous_eig (1-d only) routes through the same pipeline a trained
    model uses: residual -> padded piecewise-linear function -> projection
    onto sin(i pi x) with continuous-eigenvalue weights 1/(i pi)^2 ->
    interpolation back to the nodes. Exact on nothing, close on low modes:
    its per-mode error is dominated by the discrete-vs-continuous eigenvalue
    mismatch, O(i^2 h^2).
    """

    def __init__(self, grid: StructuredGrid, n0: int,
                 mode: str = MODE_DISCRETE_EXACT, k_const: float = 1.0,
                 padding: str = PAD_REPLICATE):
        if not (1 <= n0 <= grid.n):
            raise ValueError(f"n0 must be in [1, {grid.n}], got {n0}")
        if mode not in (MODE_DISCRETE_EXACT, MODE_CONTINUOUS_EIG):
            raise ValueError(f"unknown oracle mode {mode!r}")
        if mode == MODE_CONTINUOUS_EIG and grid.dim != 1:
            raise ValueError("continuous_eig oracle is 1-d only")
        if not (k_const > 0.0 and np.isfinite(k_const)):
            raise ValueError("k_const must be positive and finite")
        self.grid = grid
        self.n0 = int(n0)
        self.mode = mode
        self.k_const = float(k_const)
        self.padding = padding
        n, h = grid.n, grid.h
        xi = sine_modes(n)
        if grid.dim == 1:
            i = np.arange(1, n + 1)
            lam = k_const * (4.0 / h) * np.sin(0.5 * np.pi * h * i) ** 2
            self._xi_low = xi[:, :n0]
            self._lam_low = lam[:n0]
        else:
            ij = np.arange(1, n + 1)
            lam1 = 2.0 - 2.0 * np.cos(np.pi * h * ij)
            self._xi1 = xi
            self._lam2 = k_const * (lam1[:, None] + lam1[None, :])
            self._trusted = (ij[:, None] <= n0) & (ij[None, :] <= n0)

    def correct(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=np.float64)
        if r.shape != (self.grid.n_interior,):
            raise ValueError("residual length does not match the grid")
        if self.mode == MODE_DISCRETE_EXACT:
            if self.grid.dim == 1:
                return self._xi_low @ ((self._xi_low.T @ r) / self._lam_low)
            n = self.grid.n
            # rows index y, columns index x; the sine matrix is symmetric so
            # the same sandwich transforms in and out of mode space
            coeff = self._xi1 @ r.reshape(n, n) @ self._xi1
            coeff = np.where(self._trusted, coeff / self._lam2, 0.0)
            return (self._xi1 @ coeff @ self._xi1).ravel()
        return self._correct_continuous(r)

    def _correct_continuous(self, r: np.ndarray) -> np.ndarray:
        grid = self.grid
        n, h = grid.n, grid.h
        beta = residual_to_function(r, grid, self.padding)
        # 5-point Gauss per element integrates the piecewise-linear beta
        # against the low sine modes essentially exactly
        gx, gw = np.polynomial.legendre.leggauss(5)
        pts = (h * np.arange(n + 1))[:, None] + 0.5 * h * (gx + 1.0)[None, :]
        wts = 0.5 * h * gw
        bv = beta(pts.ravel()).reshape(n + 1, 5)
        modes = np.arange(1, self.n0 + 1)
        basis = np.sqrt(2.0) * np.sin(
            np.pi * modes[:, None, None] * pts[None, :, :])
        coeff = np.einsum("ieg,eg,g->i", basis, bv, wts)
        weights = coeff / (self.k_const * (np.pi * modes) ** 2)

        def expansion(x):
            s = np.sin(np.pi * modes[:, None] * np.atleast_1d(x)[None, :])
            return np.sqrt(2.0) * (weights @ s)

        return interpolate_at_nodes(expansion, grid)


def _check_sensors(points: np.ndarray, dim: int, what: str):
    pts = np.asarray(points, dtype=np.float64).reshape(-1, dim)
    if np.any((pts < 0.0) | (pts > 1.0)):
        raise ValueError(f"{what} outside the closed domain")


class MionetCorrector(Corrector):
    """Correction through a trained network.

    correct(r) reconstructs the residual as a padded piecewise-linear
    function, samples it at the model's f sensors, evaluates the network at
    the grid nodes and returns the nodal values. The coefficient samples are
    fixed at construction; the sensor grids need not match the solve grid.

    The model must be solver-facing (linear f branch, zero output bias) so
    that correct is exactly linear with correct(0) = 0.

    With augmented set, residual vectors live on the full lattice of a 2-d
    grid: the interior block feeds the residual function as usual, while the
    boundary rows (identity rows, so their residual is the boundary-value
    mismatch itself) are interpolated along the boundary parameter onto the
    sensor lattice's boundary ring; corrections come back on the full
    lattice. Passing the true fields f (and g when augmented) makes
    initial_guess sample them directly instead of going through the rhs.
    """

    def __init__(self, model: MionetModel, grid: StructuredGrid, k,
                 f=None, g=None, padding: str = PAD_REPLICATE,
                 augmented: bool = False):
        if not model.solver_facing:
            raise ValueError("model is not solver-facing: needs a linear "
                             "f branch and zero output bias")
        if model.dim != grid.dim:
            raise ValueError(f"model is {model.dim}-d, grid is {grid.dim}-d")
        if augmented and grid.dim != 2:
            raise ValueError("augmented residuals need a 2-d grid")
        if g is not None and not augmented:
            raise ValueError("boundary data g only applies to augmented mode")
        _check_sensors(model.k_sensors, grid.dim, "k sensor")
        _check_sensors(model.f_sensors, grid.dim, "f sensor")
        self.model = model
        self.grid = grid
        self.padding = padding
        self.augmented = bool(augmented)
        self._f_true = f
        self._g_true = g
        self._k_samples = np.asarray(_eval_field(k, model.k_sensors),
                                     dtype=np.float64)
        self._query = grid.full_coords() if augmented else grid.interior_coords()
        if augmented:
            fs = np.asarray(model.f_sensors, dtype=np.float64).reshape(-1, 2)
            self._ring = (fs[:, 0] == 0.0) | (fs[:, 0] == 1.0) | \
                         (fs[:, 1] == 0.0) | (fs[:, 1] == 1.0)
            self._ring_t = boundary_parameter(fs[self._ring])
            bmask = grid.boundary_mask()
            self._bmask = bmask
            t_nodes = boundary_parameter(grid.full_coords()[bmask])
            order = np.argsort(t_nodes)
            self._bnode_t = t_nodes[order]
            self._bnode_order = order

    def _f_vector(self, r: np.ndarray) -> np.ndarray:
        grid = self.grid
        if not self.augmented:
            beta = residual_to_function(r, grid, self.padding)
            return beta(np.asarray(self.model.f_sensors))
        rb = r[self._bmask][self._bnode_order]
        beta = residual_to_function(r[~self._bmask], grid, self.padding)
        fs = np.asarray(self.model.f_sensors, dtype=np.float64).reshape(-1, 2)
        out = np.empty(fs.shape[0])
        out[~self._ring] = beta(fs[~self._ring])
        out[self._ring] = np.interp(self._ring_t, self._bnode_t, rb,
                                    period=4.0)
        return out

    def correct(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=np.float64)
        expect = self.grid.n_total if self.augmented else self.grid.n_interior
        if r.shape != (expect,):
            raise ValueError(f"residual must have length {expect}")
        out = forward(self.model, self._k_samples, self._f_vector(r),
                      self._query)
        bad = ~np.isfinite(out)
        if np.any(bad):
            raise ValueError(f"non-finite correction at node "
                             f"{int(np.argmax(bad))}")
        return out

    def initial_guess(self, b: np.ndarray) -> np.ndarray:
        if self._f_true is None:
            return self.correct(b)
        fs = np.asarray(self.model.f_sensors, dtype=np.float64)
        if not self.augmented:
            f_vec = np.asarray(_eval_field(self._f_true, fs), dtype=np.float64)
        else:
            fs = fs.reshape(-1, 2)
            f_vec = np.empty(fs.shape[0])
            f_vec[~self._ring] = _eval_field(self._f_true, fs[~self._ring])
            if self._g_true is None:
                raise ValueError("augmented initial guess needs g")
            f_vec[self._ring] = _eval_field(self._g_true, self._ring_t)
        return forward(self.model, self._k_samples, f_vec, self._query)
