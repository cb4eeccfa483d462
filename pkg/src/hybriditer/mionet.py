"""Multi-input operator network: two branch nets (coefficient and load
samples) and one trunk net (query point) merged by an elementwise product
and a sum over features,

    out(y) = sum_j branch_k(k)_j * branch_f(f)_j * trunk(y)_j + bias.

Solver-facing models keep the f branch strictly linear (one layer, no bias,
no activation) and the output bias at zero, which makes the network exactly
linear in f and maps f = 0 to the zero function; both are required for the
hybrid iteration to be a stationary linear method.

Everything here is plain numpy: forward, backprop, the Adam-style moment
optimizer and the finite-difference gradient check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .container import load_container, save_container
from .fem import PiecewiseLinearFn, StructuredGrid, pad_interior
from .gpfield import GpSpec, positivity_guard, sample_field
from .linalg import spmv
from .multigrid import build_hierarchy, vcycle

ACT_TANH = "tanh"
ACT_RELU = "relu"
ACT_NONE = "none"
_ACTS = (ACT_TANH, ACT_RELU, ACT_NONE)


def glorot_uniform(rng, fan_in: int, fan_out: int) -> np.ndarray:
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


@dataclass
class Mlp:
    """Dense multilayer perceptron; weights are (fan_in, fan_out).

    The activation acts after every hidden layer and, when activate_last is
    set, after the output layer too. biases entries may be None.
    """

    weights: list
    biases: list
    activation: str = ACT_TANH
    activate_last: bool = False

    def __post_init__(self):
        if self.activation not in _ACTS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ValueError("need one bias slot per weight matrix")
        for i in range(len(self.weights) - 1):
            if self.weights[i].shape[1] != self.weights[i + 1].shape[0]:
                raise ValueError("layer dimensions do not chain")

    @classmethod
    def create(cls, dims, activation=ACT_TANH, bias=True, rng=None,
               activate_last=False):
        """Glorot-uniform weights, zero biases; dims = [in, ..., out]."""
        if len(dims) < 2:
            raise ValueError("dims needs at least input and output size")
        rng = rng if rng is not None else np.random.default_rng(0)
        ws = [glorot_uniform(rng, dims[i], dims[i + 1])
              for i in range(len(dims) - 1)]
        bs = [np.zeros(dims[i + 1]) if bias else None
              for i in range(len(dims) - 1)]
        return cls(ws, bs, activation, activate_last)

    @property
    def dims(self):
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    @property
    def is_linear(self) -> bool:
        """True for a single layer with no bias and no effective activation."""
        return (len(self.weights) == 1 and self.biases[0] is None
                and (self.activation == ACT_NONE or not self.activate_last))

    def _activated(self, layer: int) -> bool:
        if self.activation == ACT_NONE:
            return False
        return layer < len(self.weights) - 1 or self.activate_last

    def forward(self, x: np.ndarray) -> np.ndarray:
        a, _, _ = _mlp_forward_cache(self, np.atleast_2d(x))
        out = a[-1]
        return out[0] if np.asarray(x).ndim == 1 else out


def _act(name, z):
    if name == ACT_TANH:
        return np.tanh(z)
    return np.maximum(z, 0.0)


def _act_grad(name, z, a):
    if name == ACT_TANH:
        return 1.0 - a * a
    return (z > 0.0).astype(np.float64)


def _mlp_forward_cache(mlp: Mlp, x: np.ndarray):
    acts = [x]
    pres = []
    for l, (w, b) in enumerate(zip(mlp.weights, mlp.biases)):
        z = acts[-1] @ w
        if b is not None:
            z = z + b
        pres.append(z)
        acts.append(_act(mlp.activation, z) if mlp._activated(l) else z)
    return acts, pres, mlp


def _mlp_backward(mlp: Mlp, acts, pres, d_out):
    """Returns (grads, d_input); grads interleave [dW0, db0, dW1, ...] with
    bias entries skipped where the layer has none."""
    grads = [None] * (2 * len(mlp.weights))
    da = d_out
    for l in range(len(mlp.weights) - 1, -1, -1):
        dz = da * _act_grad(mlp.activation, pres[l], acts[l + 1]) \
            if mlp._activated(l) else da
        grads[2 * l] = acts[l].T @ dz
        if mlp.biases[l] is not None:
            grads[2 * l + 1] = dz.sum(axis=0)
        da = dz @ mlp.weights[l].T
    return [g for g in grads if g is not None], da


@dataclass
class MionetModel:
    branch_k: Mlp
    branch_f: Mlp
    trunk: Mlp
    k_sensors: np.ndarray
    f_sensors: np.ndarray
    output_bias: np.ndarray = field(default_factory=lambda: np.zeros(()))

    def __post_init__(self):
        self.k_sensors = np.asarray(self.k_sensors, dtype=np.float64)
        self.f_sensors = np.asarray(self.f_sensors, dtype=np.float64)
        self.output_bias = np.asarray(self.output_bias, dtype=np.float64)
        if self.output_bias.shape != ():
            raise ValueError("output_bias must be a scalar")
        p = {self.branch_k.dims[-1], self.branch_f.dims[-1], self.trunk.dims[-1]}
        if len(p) != 1:
            raise ValueError("branch and trunk output widths must agree")
        if self.branch_k.dims[0] != self.k_sensors.shape[0]:
            raise ValueError("branch_k input width must match k_sensors")
        if self.branch_f.dims[0] != self.f_sensors.shape[0]:
            raise ValueError("branch_f input width must match f_sensors")

    @property
    def dim(self) -> int:
        return self.trunk.dims[0]

    @property
    def solver_facing(self) -> bool:
        """Linear in f with zero output bias: the convergence contract."""
        return self.branch_f.is_linear and float(self.output_bias) == 0.0


def _query_matrix(model, query_points):
    q = np.asarray(query_points, dtype=np.float64)
    if model.dim == 1:
        q = q.reshape(-1, 1)
    elif q.ndim != 2 or q.shape[1] != 2:
        raise ValueError("2-d query points must have shape (Q, 2)")
    return q


def _forward_batch(model, k_samples, f_samples, query_points):
    bk = _mlp_forward_cache(model.branch_k, k_samples)[0][-1]
    bf = _mlp_forward_cache(model.branch_f, f_samples)[0][-1]
    tr = _mlp_forward_cache(model.trunk, _query_matrix(model, query_points))[0][-1]
    return np.einsum("bj,bj,qj->bq", bk, bf, tr) + float(model.output_bias)


def forward(model: MionetModel, k_samples, f_samples, query_points) -> np.ndarray:
    """Evaluate the network for one record at a set of query points."""
    k = np.asarray(k_samples, dtype=np.float64)
    f = np.asarray(f_samples, dtype=np.float64)
    if k.ndim != 1 or f.ndim != 1:
        raise ValueError("forward takes one record; samples must be vectors")
    return _forward_batch(model, k[None, :], f[None, :], query_points)[0]


def _param_arrays(model: MionetModel, include_output_bias: bool):
    ps = []
    for net in (model.branch_k, model.branch_f, model.trunk):
        for w, b in zip(net.weights, net.biases):
            ps.append(w)
            if b is not None:
                ps.append(b)
    if include_output_bias:
        ps.append(model.output_bias)
    return ps


def _loss_and_grads(model, k_batch, f_batch, query_points, targets,
                    include_output_bias: bool):
    """Mean-square loss over the batch and its query points, with gradients
    aligned to _param_arrays order."""
    qm = _query_matrix(model, query_points)
    a_k, z_k, _ = _mlp_forward_cache(model.branch_k, k_batch)
    a_f, z_f, _ = _mlp_forward_cache(model.branch_f, f_batch)
    a_t, z_t, _ = _mlp_forward_cache(model.trunk, qm)
    bk, bf, tr = a_k[-1], a_f[-1], a_t[-1]
    out = np.einsum("bj,bj,qj->bq", bk, bf, tr) + float(model.output_bias)
    diff = out - targets
    nb, nq = diff.shape
    loss = float(np.mean(diff * diff))
    g = (2.0 / (nb * nq)) * diff
    gt = g @ tr
    d_bk = gt * bf
    d_bf = gt * bk
    d_tr = g.T @ (bk * bf)
    grads = []
    grads += _mlp_backward(model.branch_k, a_k, z_k, d_bk)[0]
    grads += _mlp_backward(model.branch_f, a_f, z_f, d_bf)[0]
    grads += _mlp_backward(model.trunk, a_t, z_t, d_tr)[0]
    if include_output_bias:
        grads.append(np.asarray(g.sum()))
    return loss, grads


class _Adam:
    """Moment-based adaptive step on a fixed list of parameter arrays."""

    def __init__(self, params, beta1=0.9, beta2=0.999, eps=1.0e-8):
        self.params = params
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, grads, lr):
        self.t += 1
        bc1 = 1.0 - self.beta1 ** self.t
        bc2 = 1.0 - self.beta2 ** self.t
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m[...] = self.beta1 * m + (1.0 - self.beta1) * g
            v[...] = self.beta2 * v + (1.0 - self.beta2) * (g * g)
            p[...] = p - lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)


@dataclass
class Dataset:
    """Sampled operator data: per-record sensor values and target solution
    values at shared query points."""

    k_samples: np.ndarray    # (N, n_k_sensors)
    f_samples: np.ndarray    # (N, n_f_sensors)
    targets: np.ndarray      # (N, Q)
    query_points: np.ndarray # (Q,) in 1-d, (Q, 2) in 2-d
    k_sensors: np.ndarray
    f_sensors: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def n_records(self) -> int:
        return int(self.k_samples.shape[0])


@dataclass
class TrainingOptions:
    branch_k_dims: list | None = None
    branch_f_dims: list | None = None
    trunk_dims: list | None = None
    hidden: int = 100
    depth: int = 3
    lr: float = 1.0e-3
    batch_size: int = 64
    epochs: int = 500
    lr_decay: str = "cosine"   # "cosine" | "none"
    activation: str = ACT_TANH
    trainable_output_bias: bool = False

    def __post_init__(self):
        if self.lr <= 0 or self.batch_size < 1 or self.epochs < 0:
            raise ValueError("bad training options")
        if self.lr_decay not in ("cosine", "none"):
            raise ValueError("lr_decay must be 'cosine' or 'none'")


# Reference widths: 100-wide, depth-3 nets in 1-d; 500-wide in 2-d.
def default_architecture(dim: int, n_k_sensors: int, n_f_sensors: int,
                         hidden: int | None = None, depth: int = 3) -> dict:
    if hidden is None:
        hidden = 100 if dim == 1 else 500
    return {
        "branch_k": [n_k_sensors] + [hidden] * depth,
        "branch_f": [n_f_sensors, hidden],
        "trunk": [dim] + [hidden] * depth,
    }


def build_model(arch: dict, k_sensors, f_sensors, activation=ACT_TANH,
                seed: int = 0, output_bias: float = 0.0) -> MionetModel:
    """Fresh Glorot-initialized model; the f branch is linear whenever its
    dims list has a single layer (the default architecture)."""
    rng = np.random.default_rng(seed)
    branch_k = Mlp.create(arch["branch_k"], activation, bias=True, rng=rng)
    f_dims = arch["branch_f"]
    f_linear = len(f_dims) == 2
    branch_f = Mlp.create(f_dims, ACT_NONE if f_linear else activation,
                          bias=not f_linear, rng=rng)
    trunk = Mlp.create(arch["trunk"], activation, bias=True, rng=rng,
                       activate_last=True)
    return MionetModel(branch_k, branch_f, trunk, k_sensors, f_sensors,
                       np.asarray(float(output_bias)))


def train(dataset: Dataset, opts: TrainingOptions, seed: int = 0,
          init_model: MionetModel | None = None):
    """Train (or resume) a model on the dataset; returns (model, history).

    Seeded init and shuffling plus fixed reduction order make the run
    reproducible. history carries per-epoch mean train loss and the
    learning rate actually used.
    """
    if init_model is not None:
        model = init_model
    else:
        arch = default_architecture(
            1 if dataset.query_points.ndim == 1 else 2,
            dataset.k_sensors.shape[0], dataset.f_sensors.shape[0],
            hidden=opts.hidden, depth=opts.depth)
        if opts.branch_k_dims:
            arch["branch_k"] = list(opts.branch_k_dims)
        if opts.branch_f_dims:
            arch["branch_f"] = list(opts.branch_f_dims)
        if opts.trunk_dims:
            arch["trunk"] = list(opts.trunk_dims)
        model = build_model(arch, dataset.k_sensors, dataset.f_sensors,
                            activation=opts.activation, seed=seed)
    rng = np.random.default_rng(seed + 1)
    params = _param_arrays(model, opts.trainable_output_bias)
    opt = _Adam(params)
    n = dataset.n_records
    losses, lrs = [], []
    for epoch in range(opts.epochs):
        if n == 0:
            break
        if opts.lr_decay == "cosine" and opts.epochs > 1:
            frac = epoch / (opts.epochs - 1)
            lr = opts.lr * (0.01 + 0.99 * 0.5 * (1.0 + math.cos(math.pi * frac)))
        else:
            lr = opts.lr
        perm = rng.permutation(n)
        batch_losses = []
        for s in range(0, n, opts.batch_size):
            idx = perm[s:s + opts.batch_size]
            loss, grads = _loss_and_grads(
                model, dataset.k_samples[idx], dataset.f_samples[idx],
                dataset.query_points, dataset.targets[idx],
                opts.trainable_output_bias)
            opt.step(grads, lr)
            batch_losses.append(loss)
        losses.append(float(np.mean(batch_losses)))
        lrs.append(lr)
    history = {"train_loss": np.asarray(losses), "lr": np.asarray(lrs)}
    return model, history


def relative_l2_error(model: MionetModel, dataset: Dataset) -> float:
    """Mean over records of ||prediction - target||_2 / ||target||_2."""
    if dataset.n_records == 0:
        raise ValueError("empty dataset")
    pred = _forward_batch(model, dataset.k_samples, dataset.f_samples,
                          dataset.query_points)
    num = np.sqrt(np.sum((pred - dataset.targets) ** 2, axis=1))
    den = np.sqrt(np.sum(dataset.targets ** 2, axis=1))
    den = np.maximum(den, 1.0e-300)
    return float(np.mean(num / den))


def grad_check(model: MionetModel, k_batch, f_batch, query_points, targets,
               n_probes: int = 100, eps: float = 1.0e-6, seed: int = 0,
               include_output_bias: bool = False) -> float:
    """Max relative mismatch between backprop and central differences over
    randomly probed parameter entries."""
    params = _param_arrays(model, include_output_bias)
    _, grads = _loss_and_grads(model, k_batch, f_batch, query_points, targets,
                               include_output_bias)
    sizes = np.array([p.size for p in params])
    total = int(sizes.sum())
    rng = np.random.default_rng(seed)
    probes = rng.choice(total, size=min(n_probes, total), replace=False)
    bounds = np.cumsum(sizes)
    worst = 0.0
    for flat in probes:
        pi = int(np.searchsorted(bounds, flat, side="right"))
        off = int(flat - (bounds[pi - 1] if pi else 0))
        p = params[pi]
        orig = p.flat[off] if p.ndim else float(p)
        step = eps * max(1.0, abs(orig))

        def _set(val):
            if p.ndim:
                p.flat[off] = val
            else:
                p[...] = val

        _set(orig + step)
        lp = _loss_and_grads(model, k_batch, f_batch, query_points, targets,
                             include_output_bias)[0]
        _set(orig - step)
        lm = _loss_and_grads(model, k_batch, f_batch, query_points, targets,
                             include_output_bias)[0]
        _set(orig)
        g_num = (lp - lm) / (2.0 * step)
        g_an = grads[pi].flat[off] if grads[pi].ndim else float(grads[pi])
        rel = abs(g_num - g_an) / max(abs(g_num), abs(g_an), 1.0e-10)
        worst = max(worst, rel)
    return worst


# ---------------------------------------------------------------------------
# dataset generation

class _TabulatedField:
    """Scalar field defined by exact values at a fixed point set; assembly
    quadrature points are re-derived bitwise identically, so lookups hit."""

    def __init__(self, points: np.ndarray, values: np.ndarray):
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        self._table = {pts[i].tobytes(): float(values[i])
                       for i in range(pts.shape[0])}

    def lookup(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        try:
            return np.array([self._table[row.tobytes()] for row in pts])
        except KeyError:
            raise KeyError("field queried off its tabulated point set") from None

    def __call__(self, x, y=None):
        if y is None:
            pts = np.atleast_1d(np.asarray(x, dtype=np.float64)).reshape(-1, 1)
            out = self.lookup(pts)
            return out if np.asarray(x).ndim else float(out[0])
        xx = np.atleast_1d(np.asarray(x, dtype=np.float64))
        yy = np.atleast_1d(np.asarray(y, dtype=np.float64))
        out = self.lookup(np.column_stack([xx, yy]))
        return out if np.asarray(x).ndim else float(out[0])


def _unique_rows(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        return np.unique(pts)
    return np.unique(pts, axis=0)


def _joint_points(dim: int, *sets) -> np.ndarray:
    """Union of point sets as one deduplicated array, (P,) or (P, 2)."""
    pts = np.concatenate([np.asarray(s, dtype=np.float64).reshape(-1, dim)
                          for s in sets])
    u = np.unique(pts, axis=0)
    return u.ravel() if dim == 1 else u


def _coefficient_points(grid: StructuredGrid) -> np.ndarray:
    """Element sample points of the stiffness assembly (midpoints in 1-d,
    centroids in 2-d), bitwise as the assembly computes them."""
    from .fem import _triangles
    if grid.dim == 1:
        return grid.h * (np.arange(grid.n + 1) + 0.5)
    return _triangles(grid.n)[1]


def _load_points(grid: StructuredGrid) -> np.ndarray:
    """Quadrature points of the load assembly, deduplicated."""
    from .fem import _GAUSS2, _triangles
    if grid.dim == 1:
        left = grid.h * np.arange(grid.n + 1)
        return _unique_rows(np.concatenate([left + grid.h * xi for xi in _GAUSS2]))
    tris, _ = _triangles(grid.n)
    coords = grid.full_coords()
    p = coords[tris]
    mids = [0.5 * (p[:, a, :] + p[:, b, :]) for a, b in ((0, 1), (1, 2), (0, 2))]
    return _unique_rows(np.vstack(mids))


def _default_levels(n: int) -> int:
    levels = 1
    m = n + 1
    while m % 2 == 0 and m // 2 >= 4:
        m //= 2
        levels += 1
    return levels


def generate_dataset(grid: StructuredGrid, gp_k: GpSpec, gp_f: GpSpec,
                     n_records: int, k_sensors, f_sensors, query_points,
                     seed: int, gp_g: GpSpec | None = None,
                     solve_tol: float = 1.0e-10,
                     mg_levels: int | None = None,
                     max_cycles: int = 100) -> Dataset:
    """Draw (k, f[, g]) fields, solve on the fine grid and tabulate solution
    values at the query points.

    Homogeneous problems are solved by V(2,2) multigrid down to solve_tol;
    a record whose solve stalls raises, naming the record. With gp_g given
    (2-d only) the augmented system is solved densely and f_sensors is the
    full sample lattice whose boundary-ring entries carry g.
    """
    from scipy.linalg import lu_factor, lu_solve

    from .fem import (assemble_augmented_2d, assemble_load_1d, assemble_load_2d,
                      assemble_stiffness_1d, boundary_parameter)

    k_sensors = np.asarray(k_sensors, dtype=np.float64)
    f_sensors = np.asarray(f_sensors, dtype=np.float64)
    query_points = np.asarray(query_points, dtype=np.float64)
    if gp_g is not None and grid.dim != 2:
        raise ValueError("boundary fields need a 2-d grid")
    if gp_g is not None and grid.n > 80:
        raise ValueError("augmented dense solves are desk-scale (n <= 80)")

    levels = mg_levels if mg_levels is not None else _default_levels(grid.n)

    # k is queried by the assembly on every multigrid level, so tabulate it
    # at the element sample points of each level grid plus the sensors
    level_pts = []
    n_level = grid.n
    for _ in range(levels if gp_g is None else 1):
        level_pts.append(_coefficient_points(StructuredGrid(grid.dim, n_level)))
        n_level = (n_level + 1) // 2 - 1
    k_pts = _joint_points(grid.dim, *level_pts, k_sensors)

    boundary_sensor = None
    f_sensor_pts = f_sensors
    if gp_g is not None:
        fs2 = f_sensors.reshape(-1, 2)
        boundary_sensor = (fs2[:, 0] == 0.0) | (fs2[:, 0] == 1.0) | \
                          (fs2[:, 1] == 0.0) | (fs2[:, 1] == 1.0)
        f_sensor_pts = fs2[~boundary_sensor]
    f_pts = _joint_points(grid.dim, _load_points(grid), f_sensor_pts)

    g_ts = None
    if gp_g is not None:
        bmask = grid.boundary_mask()
        node_t = boundary_parameter(grid.full_coords()[bmask])
        sensor_t = boundary_parameter(f_sensors.reshape(-1, 2)[boundary_sensor])
        g_ts = _unique_rows(np.concatenate([node_t, sensor_t]))

    n_sensor_k = k_sensors.reshape(-1, grid.dim).shape[0]
    n_sensor_f = f_sensors.reshape(-1, grid.dim).shape[0]
    nq = query_points.reshape(-1, grid.dim).shape[0]
    ks = np.empty((n_records, n_sensor_k))
    fs = np.empty((n_records, n_sensor_f))
    ys = np.empty((n_records, nq))
    clamped_total = 0

    children = np.random.SeedSequence(seed).spawn(n_records)
    for rec in range(n_records):
        rng = np.random.default_rng(children[rec])
        k_draw = sample_field(gp_k, k_pts, rng=rng)
        k_draw, n_clamped = positivity_guard(k_draw)
        clamped_total += n_clamped
        k_field = _TabulatedField(k_pts, k_draw)
        f_draw = sample_field(gp_f, f_pts, rng=rng)
        f_field = _TabulatedField(f_pts, f_draw)

        if gp_g is None:
            if grid.dim == 1:
                a = assemble_stiffness_1d(grid, k_field)
                b = assemble_load_1d(grid, f_field)
            else:
                from .fem import assemble_stiffness_2d
                a = assemble_stiffness_2d(grid, k_field)
                b = assemble_load_2d(grid, f_field)
            hier = build_hierarchy(grid, k_field, levels)
            mu = np.zeros(grid.n_interior)
            ok = False
            for _ in range(max_cycles):
                vcycle(hier, b, mu)
                r = b - spmv(a, mu)
                if np.sqrt(r @ r) <= solve_tol:
                    ok = True
                    break
            if not ok:
                raise RuntimeError(f"record {rec}: multigrid stalled above "
                                   f"tol {solve_tol:g}")
            fn = PiecewiseLinearFn(grid, pad_interior(grid, mu, "zero"))
            ys[rec] = fn(query_points)
            fs[rec] = f_field.lookup(f_sensors.reshape(-1, grid.dim))
        else:
            g_draw = sample_field(gp_g, g_ts, rng=rng)
            g_field_t = _TabulatedField(g_ts, g_draw)
            a, b = assemble_augmented_2d(grid, k_field, f_field,
                                         lambda t: g_field_t(t))
            mu = lu_solve(lu_factor(a.to_dense()), b)
            fn = PiecewiseLinearFn(grid, mu)
            ys[rec] = fn(query_points)
            combined = np.empty(n_sensor_f)
            fs2 = f_sensors.reshape(-1, 2)
            combined[~boundary_sensor] = f_field.lookup(fs2[~boundary_sensor])
            combined[boundary_sensor] = g_field_t(
                boundary_parameter(fs2[boundary_sensor]))
            fs[rec] = combined

        ks[rec] = k_field.lookup(k_sensors.reshape(-1, grid.dim))

    meta = {
        "dim": grid.dim, "fine_n": grid.n, "n_records": n_records,
        "seed": seed, "solve_tol": solve_tol,
        "bc": "dirichlet0" if gp_g is None else "inhomogeneous",
        "clamped_k_values": clamped_total,
        "gp_k": _gp_meta(gp_k), "gp_f": _gp_meta(gp_f),
        "gp_g": _gp_meta(gp_g) if gp_g is not None else None,
    }
    return Dataset(ks, fs, ys, query_points, k_sensors, f_sensors, meta)


def _gp_meta(spec: GpSpec) -> dict:
    return {"kernel": spec.kernel, "mean": spec.mean, "std": spec.std,
            "length_scale": spec.length_scale, "period": spec.period}


# ---------------------------------------------------------------------------
# container I/O

def save_model(path, model: MionetModel):
    tensors = {}
    nets = {}
    for name, net in (("branch_k", model.branch_k), ("branch_f", model.branch_f),
                      ("trunk", model.trunk)):
        for i, (w, b) in enumerate(zip(net.weights, net.biases)):
            tensors[f"{name}.w{i}"] = w
            if b is not None:
                tensors[f"{name}.b{i}"] = b
        nets[name] = {"dims": net.dims, "activation": net.activation,
                      "activate_last": net.activate_last,
                      "has_bias": [b is not None for b in net.biases]}
    tensors["k_sensors"] = model.k_sensors
    tensors["f_sensors"] = model.f_sensors
    meta = {"kind": "mionet_model", "dim": model.dim,
            "output_bias": float(model.output_bias), "nets": nets}
    save_container(path, tensors, meta)


def load_model(path) -> MionetModel:
    tensors, meta = load_container(path)
    if meta.get("kind") != "mionet_model":
        raise ValueError(f"{path} does not hold a model "
                         f"(kind={meta.get('kind')!r})")
    nets = {}
    for name in ("branch_k", "branch_f", "trunk"):
        spec = meta["nets"][name]
        n_layers = len(spec["dims"]) - 1
        ws = [tensors[f"{name}.w{i}"] for i in range(n_layers)]
        bs = [tensors[f"{name}.b{i}"] if spec["has_bias"][i] else None
              for i in range(n_layers)]
        nets[name] = Mlp(ws, bs, spec["activation"], spec["activate_last"])
    return MionetModel(nets["branch_k"], nets["branch_f"], nets["trunk"],
                       tensors["k_sensors"], tensors["f_sensors"],
                       np.asarray(float(meta["output_bias"])))


def save_dataset(path, ds: Dataset):
    tensors = {"k_samples": ds.k_samples, "f_samples": ds.f_samples,
               "targets": ds.targets, "query_points": ds.query_points,
               "k_sensors": ds.k_sensors, "f_sensors": ds.f_sensors}
    save_container(path, tensors, {"kind": "dataset", **ds.meta})


def load_dataset(path) -> Dataset:
    tensors, meta = load_container(path)
    if meta.get("kind") != "dataset":
        raise ValueError(f"{path} does not hold a dataset "
                         f"(kind={meta.get('kind')!r})")
    meta = {k: v for k, v in meta.items() if k != "kind"}
    return Dataset(tensors["k_samples"], tensors["f_samples"],
                   tensors["targets"], tensors["query_points"],
                   tensors["k_sensors"], tensors["f_sensors"], meta)
