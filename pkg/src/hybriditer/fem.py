"""P1 finite element discretization of -div(k grad u) = f on the unit
interval and unit square.

Grids are uniform with n interior nodes per axis, h = 1/(n+1). In 2-d each
cell is split into two right triangles (diagonal from lower-left to
upper-right) and interior unknowns are ordered lexicographically, x fastest.
The diffusion coefficient is sampled once per element (midpoint in 1-d,
centroid in 2-d); loads use 2-point Gauss per interval and the 3-point
edge-midpoint rule per triangle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import CsrMatrix, csr_from_coo

PAD_ZERO = "zero"
PAD_REPLICATE = "replicate"
_PADDINGS = (PAD_ZERO, PAD_REPLICATE)

_GAUSS2 = (0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0))


@dataclass(frozen=True)
class StructuredGrid:
    """Uniform grid on the unit interval (dim 1) or unit square (dim 2)."""

    dim: int
    n: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if self.n < 1:
            raise ValueError("need at least one interior node per axis")

    @property
    def h(self) -> float:
        return 1.0 / (self.n + 1)

    @property
    def n_interior(self) -> int:
        return self.n ** self.dim

    @property
    def n_total(self) -> int:
        return (self.n + 2) ** self.dim

    def interior_coords(self) -> np.ndarray:
        """Interior node coordinates, shape (n,) in 1-d, (n*n, 2) in 2-d
        (lexicographic, x fastest)."""
        x = self.h * np.arange(1, self.n + 1)
        if self.dim == 1:
            return x
        xx, yy = np.meshgrid(x, x, indexing="xy")
        return np.column_stack([xx.ravel(), yy.ravel()])

    def full_coords(self) -> np.ndarray:
        """All lattice node coordinates including the boundary ring."""
        x = self.h * np.arange(0, self.n + 2)
        if self.dim == 1:
            return x
        xx, yy = np.meshgrid(x, x, indexing="xy")
        return np.column_stack([xx.ravel(), yy.ravel()])

    def boundary_mask(self) -> np.ndarray:
        """Boolean mask over the full lattice marking boundary nodes."""
        if self.dim == 1:
            m = np.zeros(self.n + 2, dtype=bool)
            m[0] = m[-1] = True
            return m
        m = np.zeros((self.n + 2, self.n + 2), dtype=bool)
        m[0, :] = m[-1, :] = m[:, 0] = m[:, -1] = True
        return m.ravel()


@dataclass
class GridFunction:
    """Nodal values on a structured grid; on the interior lattice by default,
    on the full lattice (boundary ring included) for augmented systems."""

    grid: StructuredGrid
    values: np.ndarray
    on_full_lattice: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        want = self.grid.n_total if self.on_full_lattice else self.grid.n_interior
        if self.values.shape != (want,):
            raise ValueError(f"values must have shape ({want},)")


def boundary_parameter(points: np.ndarray) -> np.ndarray:
    """Arc-length-style parameter t in [0, 4) of unit-square boundary points.

    Bottom edge t = x, right t = 1 + y, top t = 2 + (1 - x), left
    t = 3 + (1 - y); the four corner assignments agree modulo 4.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    x, y = pts[:, 0], pts[:, 1]
    on_bottom = y == 0.0
    on_right = x == 1.0
    on_top = y == 1.0
    on_left = x == 0.0
    if not np.all(on_bottom | on_right | on_top | on_left):
        raise ValueError("point not on the unit-square boundary")
    t = np.empty(pts.shape[0])
    t[on_left] = 3.0 + (1.0 - y[on_left])
    t[on_top] = 2.0 + (1.0 - x[on_top])
    t[on_right] = 1.0 + y[on_right]
    t[on_bottom] = x[on_bottom]
    return np.mod(t, 4.0)


def _eval_field(fn, points: np.ndarray) -> np.ndarray:
    """Evaluate a scalar field callable at points, tolerating non-vectorized
    callables."""
    pts = np.asarray(points, dtype=np.float64)
    npts = pts.shape[0]
    try:
        if pts.ndim == 1:
            out = np.asarray(fn(pts), dtype=np.float64)
        else:
            out = np.asarray(fn(pts[:, 0], pts[:, 1]), dtype=np.float64)
        if out.shape == (npts,):
            return out
        if out.ndim == 0:
            return np.full(npts, float(out))
    except (TypeError, ValueError):
        pass
    if pts.ndim == 1:
        return np.array([float(fn(p)) for p in pts])
    return np.array([float(fn(p[0], p[1])) for p in pts])


def _check_coefficient(values: np.ndarray, points: np.ndarray, what: str):
    bad = ~np.isfinite(values) | (values <= 0.0)
    if np.any(bad):
        i = int(np.argmax(bad))
        loc = points[i] if points.ndim == 1 else tuple(points[i])
        raise ValueError(f"coefficient k must be positive and finite; got "
                         f"{values[i]!r} at {what} {loc}")


def assemble_stiffness_1d(grid: StructuredGrid, k) -> CsrMatrix:
    """Tridiagonal stiffness matrix with k sampled at element midpoints.

    For k = 1 this is (1/h) tridiag(-1, 2, -1).
    """
    if grid.dim != 1:
        raise ValueError("grid must be 1-d")
    n, h = grid.n, grid.h
    mids = h * (np.arange(n + 1) + 0.5)
    km = _eval_field(k, mids)
    _check_coefficient(km, mids, "element midpoint")
    rows = np.concatenate([np.arange(n), np.arange(n - 1), np.arange(1, n)])
    cols = np.concatenate([np.arange(n), np.arange(1, n), np.arange(n - 1)])
    vals = np.concatenate([(km[:-1] + km[1:]) / h,
                           -km[1:-1] / h,
                           -km[1:-1] / h])
    return csr_from_coo(n, n, rows, cols, vals)


def assemble_load_1d(grid: StructuredGrid, f) -> np.ndarray:
    """Load vector b_i = int f phi_i dx by 2-point Gauss per element."""
    if grid.dim != 1:
        raise ValueError("grid must be 1-d")
    n, h = grid.n, grid.h
    left = h * np.arange(n + 1)
    b = np.zeros(n)
    for xi in _GAUSS2:
        pts = left + h * xi
        fv = _eval_field(f, pts)
        w = 0.5 * h
        # rising hat of the element's right node, falling hat of its left node
        b += w * fv[:-1] * xi
        b += w * fv[1:] * (1.0 - xi)
    return b


def _triangles(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vertex ids (full lattice, x fastest) and centroids of all triangles.

    Cell (ix, iy) splits along its lower-left to upper-right diagonal into
    the lower triangle (ix,iy)-(ix+1,iy)-(ix+1,iy+1) and the upper triangle
    (ix,iy)-(ix+1,iy+1)-(ix,iy+1).
    """
    h = 1.0 / (n + 1)
    stride = n + 2
    ix, iy = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="xy")
    ix, iy = ix.ravel(), iy.ravel()
    v00 = iy * stride + ix
    v10 = v00 + 1
    v01 = v00 + stride
    v11 = v01 + 1
    lower = np.column_stack([v00, v10, v11])
    upper = np.column_stack([v00, v11, v01])
    tris = np.vstack([lower, upper])
    cx = np.concatenate([(ix + ix + 1 + ix + 1) / 3.0, (ix + ix + 1 + ix) / 3.0])
    cy = np.concatenate([(iy + iy + iy + 1) / 3.0, (iy + iy + 1 + iy + 1) / 3.0])
    centroids = h * np.column_stack([cx, cy])
    return tris, centroids

# Element stiffness of the two triangle orientations divided by k(centroid),
# vertex order as produced by _triangles. Row sums vanish, so constants are
# in the kernel regardless of k.
_K_LOWER = 0.5 * np.array([[1.0, -1.0, 0.0],
                           [-1.0, 2.0, -1.0],
                           [0.0, -1.0, 1.0]])
_K_UPPER = 0.5 * np.array([[1.0, 0.0, -1.0],
                           [0.0, 1.0, -1.0],
                           [-1.0, -1.0, 2.0]])


def _stiffness_triplets(grid: StructuredGrid, k):
    n = grid.n
    tris, centroids = _triangles(n)
    kc = _eval_field(k, centroids)
    _check_coefficient(kc, centroids, "triangle centroid")
    ntri = tris.shape[0]
    half = ntri // 2
    local = np.empty((ntri, 3, 3))
    local[:half] = kc[:half, None, None] * _K_LOWER
    local[half:] = kc[half:, None, None] * _K_UPPER
    rows = np.repeat(tris, 3, axis=1).ravel()
    cols = np.tile(tris, (1, 3)).ravel()
    vals = local.reshape(ntri, 9).ravel()
    return rows, cols, vals


def assemble_stiffness_2d(grid: StructuredGrid, k) -> CsrMatrix:
    """Interior stiffness matrix on the right-triangulated square grid.

    For k = 1 every interior row carries the h-independent 5-point stencil
    (4 on the diagonal, -1 to each axis neighbour); the diagonal-neighbour
    couplings cancel exactly for any k.
    """
    if grid.dim != 2:
        raise ValueError("grid must be 2-d")
    n = grid.n
    rows, cols, vals = _stiffness_triplets(grid, k)
    full_to_int = _full_to_interior(n)
    ri, ci = full_to_int[rows], full_to_int[cols]
    keep = (ri >= 0) & (ci >= 0)
    return csr_from_coo(n * n, n * n, ri[keep], ci[keep], vals[keep])


def _full_to_interior(n: int) -> np.ndarray:
    stride = n + 2
    m = -np.ones((stride, stride), dtype=np.int64)
    inner = np.arange(n * n, dtype=np.int64).reshape(n, n)
    m[1:-1, 1:-1] = inner
    return m.ravel()


def assemble_load_2d(grid: StructuredGrid, f) -> np.ndarray:
    """Interior load vector by the 3-point edge-midpoint rule per triangle
    (exact for quadratics); f = 1 gives b_i = h^2 at every interior node."""
    if grid.dim != 2:
        raise ValueError("grid must be 2-d")
    n, h = grid.n, grid.h
    tris, _ = _triangles(n)
    coords = StructuredGrid(2, n).full_coords()
    p = coords[tris]                        # (ntri, 3, 2)
    area = 0.5 * h * h
    full_to_int = _full_to_interior(n)
    b = np.zeros(n * n)
    # midpoint of edge (a, b) carries phi = 1/2 for vertices a and b
    for ea, eb in ((0, 1), (1, 2), (0, 2)):
        mid = 0.5 * (p[:, ea, :] + p[:, eb, :])
        fv = _eval_field(f, mid)
        contrib = (area / 3.0) * 0.5 * fv
        for v in (ea, eb):
            idx = full_to_int[tris[:, v]]
            ok = idx >= 0
            np.add.at(b, idx[ok], contrib[ok])
    return b


def assemble_augmented_2d(grid: StructuredGrid, k, f, g) -> tuple[CsrMatrix, np.ndarray]:
    """Stiffness and rhs over the full lattice with Dirichlet data kept as
    unknowns: boundary rows are identity rows with rhs g(t), interior rows
    are the standard assembly (couplings to boundary unknowns included) with
    rhs int f phi_i. g is a callable of the boundary parameter t in [0, 4).
    """
    if grid.dim != 2:
        raise ValueError("grid must be 2-d")
    n = grid.n
    ntot = grid.n_total
    boundary = grid.boundary_mask()
    rows, cols, vals = _stiffness_triplets(grid, k)
    keep = ~boundary[rows]
    rows, cols, vals = rows[keep], cols[keep], vals[keep]
    bnd_ids = np.flatnonzero(boundary)
    rows = np.concatenate([rows, bnd_ids])
    cols = np.concatenate([cols, bnd_ids])
    vals = np.concatenate([vals, np.ones(bnd_ids.size)])
    a = csr_from_coo(ntot, ntot, rows, cols, vals)

    b_int = assemble_load_2d(grid, f)
    rhs = np.zeros(ntot)
    rhs[~boundary] = b_int
    t = boundary_parameter(grid.full_coords()[boundary])
    gv = _eval_field(g, t)
    if not np.all(np.isfinite(gv)):
        raise ValueError("boundary data g produced non-finite values")
    rhs[boundary] = gv
    return a, rhs


def integrated_hat(grid: StructuredGrid) -> np.ndarray:
    """int phi_i over the domain for every interior node (h in 1-d, h^2 on
    this triangulation in 2-d)."""
    w = grid.h if grid.dim == 1 else grid.h ** 2
    return np.full(grid.n_interior, w)


def pad_interior(grid: StructuredGrid, interior: np.ndarray, padding: str) -> np.ndarray:
    """Extend interior nodal values to the full lattice by the chosen padding.

    Replicate padding copies the nearest interior node (ties cannot occur on
    this lattice; index clamping is the nearest-neighbour rule).
    """
    if padding not in _PADDINGS:
        raise ValueError(f"unknown padding {padding!r}")
    n = grid.n
    interior = np.asarray(interior, dtype=np.float64)
    if interior.shape != (grid.n_interior,):
        raise ValueError("interior values have wrong length")
    if grid.dim == 1:
        full = np.zeros(n + 2)
        full[1:-1] = interior
        if padding == PAD_REPLICATE:
            full[0] = interior[0]
            full[-1] = interior[-1]
        return full
    full = np.zeros((n + 2, n + 2))
    full[1:-1, 1:-1] = interior.reshape(n, n)
    if padding == PAD_REPLICATE:
        full[0, 1:-1] = full[1, 1:-1]
        full[-1, 1:-1] = full[-2, 1:-1]
        full[:, 0] = full[:, 1]
        full[:, -1] = full[:, -2]
    return full.ravel()


class PiecewiseLinearFn:
    """Continuous piecewise-linear function on the unit interval or square.

    Holds nodal values on the full (n+2)^dim lattice and interpolates on the
    same elements the assembly uses (the two right triangles per cell in
    2-d), so evaluation at lattice nodes is exact.
    """

    def __init__(self, grid: StructuredGrid, full_values: np.ndarray):
        self.grid = grid
        self.full_values = np.asarray(full_values, dtype=np.float64)
        if self.full_values.shape != (grid.n_total,):
            raise ValueError(f"need {grid.n_total} nodal values")

    def __call__(self, points, y=None) -> np.ndarray:
        g = self.grid
        h = g.h
        if g.dim == 1:
            x = np.atleast_1d(np.asarray(points, dtype=np.float64))
            if np.any((x < 0.0) | (x > 1.0)):
                raise ValueError("evaluation point outside [0, 1]")
            nodes = h * np.arange(g.n + 2)
            return np.interp(x, nodes, self.full_values)
        if y is not None:
            points = np.column_stack([np.atleast_1d(points), np.atleast_1d(y)])
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if np.any((pts < 0.0) | (pts > 1.0)):
            raise ValueError("evaluation point outside the unit square")
        vals = self.full_values.reshape(g.n + 2, g.n + 2)
        cx = np.minimum((pts[:, 0] / h).astype(np.int64), g.n)
        cy = np.minimum((pts[:, 1] / h).astype(np.int64), g.n)
        u = pts[:, 0] / h - cx
        v = pts[:, 1] / h - cy
        a = vals[cy, cx]
        bb = vals[cy, cx + 1]
        c = vals[cy + 1, cx + 1]
        d = vals[cy + 1, cx]
        lower = u >= v
        out = np.where(lower,
                       a + (bb - a) * u + (c - bb) * v,
                       a + (c - d) * u + (d - a) * v)
        return out


def residual_to_function(r: np.ndarray, grid: StructuredGrid,
                         padding: str = PAD_REPLICATE) -> PiecewiseLinearFn:
    """Map an interior residual vector to a function on the closed domain.

    Nodal values are the lumped quotients r_i / int phi_i (r_i / h in 1-d,
    r_i / h^2 in 2-d), extended to the boundary ring by the padding rule.
    """
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (grid.n_interior,):
        raise ValueError("residual length does not match the grid")
    beta = r / integrated_hat(grid)
    return PiecewiseLinearFn(grid, pad_interior(grid, beta, padding))


def interpolate_at_nodes(u, grid: StructuredGrid,
                         include_boundary: bool = False) -> np.ndarray:
    """Evaluate a function at the grid nodes (nodal interpolation).

    Raises if any value comes back non-finite, naming the node.
    """
    pts = grid.full_coords() if include_boundary else grid.interior_coords()
    vals = np.asarray(_eval_field(u, pts), dtype=np.float64)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ValueError(f"non-finite interpolant value at node {i}")
    return vals
