"""Command-line front end.

Subcommands: gen-data (GP-sampled training sets), train (network fitting),
solve (plain or hybrid runs with trace export), sweep-m (correction-period
sweeps) and analyze (rate curves, spectral heatmaps, model-error spectra,
smoothing-factor report). Every run is driven by a JSON config plus
--set key=value overrides; unknown keys are rejected.

Exit codes: 0 success/converged, 1 usage or config error, 2 solver stopped
without converging (diverged or max_iter), 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .correctors import (MODE_CONTINUOUS_EIG, MODE_DISCRETE_EXACT,
                         MionetCorrector, SpectralOracleCorrector)
from .fem import (PAD_REPLICATE, PiecewiseLinearFn, StructuredGrid,
                  assemble_augmented_2d, assemble_load_1d, assemble_load_2d,
                  assemble_stiffness_1d, assemble_stiffness_2d)
from .gpfield import GpSpec, positivity_guard, sample_field
from .hybrid import (HybridConfig, hybrid_solve, solve_stationary, sweep_M,
                     sweep_to_csv)
from .iteration import STATUS_CONVERGED, StopRule
from .mionet import (TrainingOptions, generate_dataset, grad_check,
                     load_dataset, load_model, relative_l2_error,
                     save_dataset, save_model, train)
from .multigrid import build_hierarchy
from .smoothers import GAUSS_SEIDEL, JACOBI, RICHARDSON, SOR, Smoother
from .spectral import (RateParams, gs_symbol, heatmap_to_csv,
                       model_error_spectrum, rate_bound, rate_curve_to_csv,
                       smoothing_factor, spectral_heatmap)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
EXIT_INTERNAL = 3

# Dense-reference solves are a desk-scale convenience only.
_DENSE_LIMIT = 6000


class CliError(Exception):
    """Usage or configuration problem; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _load_config(args) -> dict:
    cfg = {}
    if args.config is not None:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise CliError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CliError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(cfg, dict):
            raise CliError("config must be a JSON object")
    for item in args.set or []:
        if "=" not in item:
            raise CliError(f"--set needs key=value, got {item!r}")
        key, _, raw = item.partition("=")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = cfg
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise CliError(f"config key {key!r} collides with a scalar")
        node[parts[-1]] = value
    return cfg


def _check_keys(d: dict, allowed, where: str):
    for k in d:
        if k not in allowed:
            raise CliError(f"unknown config key {k!r} in {where}")


def _require(cfg: dict, key: str, where: str):
    if key not in cfg:
        raise CliError(f"missing config key {key!r} in {where}")
    return cfg[key]


def _gp_spec(d: dict, dim: int, where: str, boundary: bool = False) -> GpSpec:
    _check_keys(d, {"type", "mean", "std", "length_scale", "period", "seed"},
                where)
    # defaults mirror the reference experiments: 1-d length scale 0.1,
    # 2-d length scale 0.2, boundary fields periodic with period 4
    ls = d.get("length_scale", 0.2 if dim == 2 else 0.1)
    kernel = "exp_sine_squared" if boundary else "rbf"
    try:
        return GpSpec(kernel=kernel, mean=float(d.get("mean", 0.0)),
                      std=float(d.get("std", 1.0)), length_scale=float(ls),
                      period=float(d.get("period", 4.0)))
    except ValueError as exc:
        raise CliError(f"bad GP spec in {where}: {exc}") from exc


def _field_from_spec(d, grid: StructuredGrid, where: str, seed: int,
                     positive: bool = False):
    """Materialize a scalar field callable from its config description.

    GP fields are drawn once on the grid's full lattice and interpolated
    piecewise-linearly, which keeps them continuous (sensor sampling works
    anywhere) and reproducible from the seed.
    """
    if d is None or isinstance(d, (int, float)):
        value = 1.0 if d is None and positive else float(d or 0.0)
        return lambda *args: np.full(np.shape(args[0]), value, dtype=np.float64) \
            if np.ndim(args[0]) else value
    if not isinstance(d, dict):
        raise CliError(f"{where} must be a number or an object")
    kind = d.get("type", "constant")
    if kind == "constant":
        _check_keys(d, {"type", "value"}, where)
        value = float(d.get("value", 1.0 if positive else 0.0))
        return lambda *args: np.full(np.shape(args[0]), value, dtype=np.float64) \
            if np.ndim(args[0]) else value
    if kind == "sine":
        _check_keys(d, {"type", "amplitude", "mode"}, where)
        amp = float(d.get("amplitude", 1.0))
        mode = d.get("mode", 1)
        if grid.dim == 1:
            i = int(mode)
            return lambda x: amp * np.sin(i * np.pi * np.asarray(x))
        i, j = (int(mode), int(mode)) if np.ndim(mode) == 0 else \
            (int(mode[0]), int(mode[1]))
        return lambda x, y: amp * np.sin(i * np.pi * np.asarray(x)) * \
            np.sin(j * np.pi * np.asarray(y))
    if kind == "gp":
        spec = _gp_spec(d, grid.dim, where)
        rng = np.random.default_rng(d.get("seed", seed))
        pts = grid.full_coords()
        vals = sample_field(spec, pts if grid.dim == 2 else pts, rng=rng)
        if positive:
            vals, clamped = positivity_guard(vals)
            if clamped:
                print(f"note: {where}: clamped {clamped} values to keep "
                      f"the coefficient positive")
        return PiecewiseLinearFn(grid, vals)
    raise CliError(f"unknown field type {kind!r} in {where}")


def _boundary_field_from_spec(d, where: str, seed: int):
    if d is None or isinstance(d, (int, float)):
        value = float(d or 0.0)
        return lambda t: np.full(np.shape(t), value, dtype=np.float64) \
            if np.ndim(t) else value
    kind = d.get("type", "constant")
    if kind == "constant":
        _check_keys(d, {"type", "value"}, where)
        value = float(d.get("value", 0.0))
        return lambda t: np.full(np.shape(t), value, dtype=np.float64) \
            if np.ndim(t) else value
    if kind == "gp_boundary":
        spec = _gp_spec(d, 1, where, boundary=True)
        rng = np.random.default_rng(d.get("seed", seed))
        ts = np.linspace(0.0, 4.0, 257)[:-1]
        vals = sample_field(spec, ts, rng=rng)
        return lambda t: np.interp(np.asarray(t, dtype=np.float64),
                                   ts, vals, period=4.0)
    raise CliError(f"unknown boundary field type {kind!r} in {where}")


def _sensor_points(dim: int, count: int) -> np.ndarray:
    if count < 2:
        raise CliError("sensor counts must be >= 2")
    axis = np.linspace(0.0, 1.0, count)
    if dim == 1:
        return axis
    x, y = np.meshgrid(axis, axis, indexing="xy")
    return np.column_stack([x.ravel(), y.ravel()])


def _problem_grid(cfg: dict, where: str) -> StructuredGrid:
    dim = int(_require(cfg, "dim", where))
    n = int(_require(cfg, "n", where))
    try:
        return StructuredGrid(dim, n)
    except ValueError as exc:
        raise CliError(f"bad grid in {where}: {exc}") from exc


# ---------------------------------------------------------------------------
# gen-data

def cmd_gen_data(cfg: dict) -> int:
    _check_keys(cfg, {"dim", "n", "n_records", "seed", "out", "k", "f", "g",
                      "k_sensors", "f_sensors", "query_n", "solve_tol",
                      "mg_levels"}, "gen-data")
    grid = _problem_grid(cfg, "gen-data")
    n_records = int(_require(cfg, "n_records", "gen-data"))
    seed = int(cfg.get("seed", 0))
    out = _require(cfg, "out", "gen-data")
    # coefficient draws default to mean 1, std 0.2; forcing to mean 0, std 1
    k_entry = {"mean": 1.0, "std": 0.2}
    k_entry.update(cfg.get("k") or {})
    f_entry = {"mean": 0.0, "std": 1.0}
    f_entry.update(cfg.get("f") or {})
    gp_k = _gp_spec(k_entry, grid.dim, "gen-data.k")
    gp_f = _gp_spec(f_entry, grid.dim, "gen-data.f")
    gp_g = None
    if cfg.get("g") is not None:
        gp_g = _gp_spec(dict(cfg["g"]), 1, "gen-data.g", boundary=True)
    k_sensors = _sensor_points(grid.dim, int(cfg.get("k_sensors", 50)))
    f_sensors = _sensor_points(grid.dim, int(cfg.get("f_sensors", 50)))
    query_n = int(cfg.get("query_n", 48 if grid.dim == 1 else 31))
    query = StructuredGrid(grid.dim, query_n).interior_coords()
    ds = generate_dataset(grid, gp_k, gp_f, n_records, k_sensors, f_sensors,
                          query, seed, gp_g=gp_g,
                          solve_tol=float(cfg.get("solve_tol", 1.0e-10)),
                          mg_levels=cfg.get("mg_levels"))
    save_dataset(out, ds)
    print(f"gen-data: wrote {n_records} records ({grid.dim}-d, fine n={grid.n}, "
          f"seed={seed}) to {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# train

def cmd_train(cfg: dict) -> int:
    _check_keys(cfg, {"dataset", "out", "loss_csv", "epochs", "lr",
                      "batch_size", "seed", "hidden", "depth",
                      "branch_k_dims", "branch_f_dims", "trunk_dims",
                      "lr_decay", "resume", "test_dataset",
                      "grad_check_tol"}, "train")
    ds = load_dataset(_require(cfg, "dataset", "train"))
    out = _require(cfg, "out", "train")
    seed = int(cfg.get("seed", 0))
    opts = TrainingOptions(
        branch_k_dims=cfg.get("branch_k_dims"),
        branch_f_dims=cfg.get("branch_f_dims"),
        trunk_dims=cfg.get("trunk_dims"),
        hidden=int(cfg.get("hidden", 100 if ds.query_points.ndim == 1 else 500)),
        depth=int(cfg.get("depth", 3)),
        lr=float(cfg.get("lr", 1.0e-3)),
        batch_size=int(cfg.get("batch_size", 64)),
        epochs=int(cfg.get("epochs", 500)),
        lr_decay=str(cfg.get("lr_decay", "cosine")),
    )
    init_model = None
    if cfg.get("resume"):
        init_model = load_model(cfg["resume"])

    # one cheap backprop-vs-finite-difference check before burning time
    if ds.n_records:
        probe_model, _ = train(ds, TrainingOptions(
            hidden=opts.hidden, depth=opts.depth, epochs=0,
            branch_k_dims=opts.branch_k_dims,
            branch_f_dims=opts.branch_f_dims,
            trunk_dims=opts.trunk_dims), seed=seed) \
            if init_model is None else (init_model, None)
        nb = min(4, ds.n_records)
        worst = grad_check(probe_model, ds.k_samples[:nb], ds.f_samples[:nb],
                           ds.query_points, ds.targets[:nb], n_probes=40,
                           seed=seed)
        tol = float(cfg.get("grad_check_tol", 1.0e-4))
        if worst > tol:
            raise RuntimeError(f"gradient check failed: max relative "
                               f"mismatch {worst:.3e} > {tol:g}")
        print(f"train: gradient check max relative mismatch {worst:.3e}")
        if init_model is None:
            init_model = probe_model

    t0 = time.perf_counter()
    model, history = train(ds, opts, seed=seed, init_model=init_model)
    wall = time.perf_counter() - t0
    save_model(out, model)
    if cfg.get("loss_csv"):
        with open(cfg["loss_csv"], "w", newline="") as fh:
            fh.write("epoch,loss,lr\n")
            for i, (lo, lr) in enumerate(zip(history["train_loss"],
                                             history["lr"])):
                fh.write(f"{i},{float(lo)!r},{float(lr)!r}\n")
    final = history["train_loss"][-1] if len(history["train_loss"]) else \
        float("nan")
    print(f"train: {opts.epochs} epochs on {ds.n_records} records in "
          f"{wall:.1f}s, final loss {final:.3e}, model -> {out}")
    if cfg.get("test_dataset"):
        test = load_dataset(cfg["test_dataset"])
        err = relative_l2_error(model, test)
        print(f"train: held-out relative l2 error {err:.4f} "
              f"({test.n_records} records)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve pieces shared by solve / sweep-m / analyze

_SMOOTHERS = {"richardson": RICHARDSON, "jacobi": JACOBI,
              "gauss_seidel": GAUSS_SEIDEL, "sor": SOR}


def _build_inner(cfg: dict, grid: StructuredGrid, k, where: str):
    d = dict(cfg or {"kind": "richardson"})
    kind = d.get("kind", "richardson")
    if kind == "multigrid":
        _check_keys(d, {"kind", "levels", "nu1", "nu2"}, where)
        try:
            return build_hierarchy(grid, k, int(d.get("levels", 2)),
                                   nu1=int(d.get("nu1", 2)),
                                   nu2=int(d.get("nu2", 2)))
        except ValueError as exc:
            raise CliError(f"bad multigrid config in {where}: {exc}") from exc
    if kind not in _SMOOTHERS:
        raise CliError(f"unknown inner kind {kind!r} in {where}")
    _check_keys(d, {"kind", "omega"}, where)
    omega = d.get("omega")
    if kind == "richardson" and omega is None:
        omega = grid.h / 4.0  # the classical safe step for the 1-d operator
    try:
        return Smoother(kind, None if omega is None else float(omega))
    except ValueError as exc:
        raise CliError(f"bad smoother in {where}: {exc}") from exc


def _assemble(cfg: dict, grid: StructuredGrid, seed: int):
    """Returns (a, b, k_field, f_field, g_field, augmented)."""
    k = _field_from_spec(cfg.get("k"), grid, "problem.k", seed, positive=True)
    f = _field_from_spec(cfg.get("f"), grid, "problem.f", seed + 1)
    g_spec = cfg.get("g")
    if g_spec is not None:
        if grid.dim != 2:
            raise CliError("boundary data g needs a 2-d problem")
        g = _boundary_field_from_spec(g_spec, "problem.g", seed + 2)
        a, b = assemble_augmented_2d(grid, k, f, g)
        return a, b, k, f, g, True
    if grid.dim == 1:
        a, b = assemble_stiffness_1d(grid, k), assemble_load_1d(grid, f)
    else:
        a, b = assemble_stiffness_2d(grid, k), assemble_load_2d(grid, f)
    return a, b, k, f, None, False


def _build_corrector(d, grid: StructuredGrid, k, f, g, augmented: bool,
                     where: str):
    if d is None:
        return None
    kind = d.get("type")
    if kind == "oracle":
        _check_keys(d, {"type", "n0", "mode", "k_const"}, where)
        mode = {"discrete_exact": MODE_DISCRETE_EXACT,
                "continuous_eig": MODE_CONTINUOUS_EIG}.get(
            d.get("mode", "discrete_exact"))
        if mode is None:
            raise CliError(f"unknown oracle mode in {where}")
        if augmented:
            raise CliError("the spectral oracle applies to the interior "
                           "system, not the augmented one")
        try:
            return SpectralOracleCorrector(grid, int(_require(d, "n0", where)),
                                           mode=mode,
                                           k_const=float(d.get("k_const", 1.0)))
        except ValueError as exc:
            raise CliError(f"bad oracle config in {where}: {exc}") from exc
    if kind == "mionet":
        _check_keys(d, {"type", "model", "padding"}, where)
        model = load_model(_require(d, "model", where))
        try:
            return MionetCorrector(model, grid, k, f=f, g=g,
                                   padding=d.get("padding", PAD_REPLICATE),
                                   augmented=augmented)
        except ValueError as exc:
            raise CliError(f"model/problem mismatch in {where}: {exc}") from exc
    raise CliError(f"unknown corrector type {kind!r} in {where}")


def _dense_reference(a, b):
    from scipy.linalg import lu_factor, lu_solve
    if a.nrows > _DENSE_LIMIT:
        raise CliError(f"dense reference limited to {_DENSE_LIMIT} unknowns; "
                       f"got {a.nrows}")
    return lu_solve(lu_factor(a.to_dense()), b)


_PROBLEM_KEYS = {"dim", "n", "k", "f", "g", "seed"}
_SOLVE_KEYS = _PROBLEM_KEYS | {"inner", "corrector", "M", "tol", "max_iter",
                               "use_initial_guess", "trace_csv", "reference",
                               "compare_plain", "record_spectral"}


def _run_solve(cfg: dict, where: str):
    grid = _problem_grid(cfg, where)
    seed = int(cfg.get("seed", 0))
    a, b, k, f, g, augmented = _assemble(cfg, grid, seed)
    stop = StopRule(tol=float(cfg.get("tol", 1.0e-10)),
                    max_iter=int(cfg.get("max_iter", 100000)))
    inner = _build_inner(cfg.get("inner"), grid, k, f"{where}.inner")
    corrector = _build_corrector(cfg.get("corrector"), grid, k, f, g,
                                 augmented, f"{where}.corrector")
    reference = None
    if cfg.get("reference") == "dense" or cfg.get("record_spectral"):
        reference = _dense_reference(a, b)
    if corrector is None:
        trace = solve_stationary(a, b, inner, stop, reference=reference,
                                 record_spectral=bool(
                                     cfg.get("record_spectral")))
        return a, b, grid, inner, corrector, stop, trace
    hc = HybridConfig(inner=inner, period=int(cfg.get("M", 20)), stop=stop,
                      use_initial_guess=bool(cfg.get("use_initial_guess",
                                                     True)))
    trace = hybrid_solve(a, b, corrector, hc, reference=reference,
                         record_spectral=bool(cfg.get("record_spectral")))
    return a, b, grid, inner, corrector, stop, trace


def cmd_solve(cfg: dict) -> int:
    _check_keys(cfg, _SOLVE_KEYS, "solve")
    a, b, grid, inner, corrector, stop, trace = _run_solve(cfg, "solve")
    wall = trace.times_ms[-1] if trace.iterations else 0.0
    final = trace.residual_norms[-1] if trace.iterations \
        else trace.initial_residual
    print(f"solve: status {trace.status}, {trace.iterations} iterations, "
          f"residual {final:.3e}, {wall:.1f} ms "
          f"(corrector {trace.corrector_time_ms:.1f} ms)")
    if cfg.get("trace_csv"):
        trace.to_csv(cfg["trace_csv"])
        print(f"solve: trace -> {cfg['trace_csv']}")
    if cfg.get("compare_plain") and corrector is not None:
        plain = solve_stationary(a, b, inner, stop)
        print(f"solve: plain status {plain.status}, {plain.iterations} "
              f"iterations")
        if trace.status == STATUS_CONVERGED and \
                plain.status == STATUS_CONVERGED and trace.iterations:
            print(f"solve: iteration speedup "
                  f"{plain.iterations / trace.iterations:.1f}x")
    return EXIT_OK if trace.status == STATUS_CONVERGED else EXIT_NOT_CONVERGED


def cmd_sweep_m(cfg: dict) -> int:
    _check_keys(cfg, _PROBLEM_KEYS | {"inner", "corrector", "periods", "tol",
                                      "max_iter", "out"}, "sweep-m")
    grid = _problem_grid(cfg, "sweep-m")
    seed = int(cfg.get("seed", 0))
    a, b, k, f, g, augmented = _assemble(cfg, grid, seed)
    stop = StopRule(tol=float(cfg.get("tol", 1.0e-10)),
                    max_iter=int(cfg.get("max_iter", 100000)))
    inner = _build_inner(cfg.get("inner"), grid, k, "sweep-m.inner")
    corrector = _build_corrector(_require(cfg, "corrector", "sweep-m"), grid,
                                 k, f, g, augmented, "sweep-m.corrector")
    periods = _require(cfg, "periods", "sweep-m")
    try:
        rows = sweep_M(a, b, corrector, periods, inner, stop)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    text = sweep_to_csv(rows, cfg.get("out"))
    sys.stdout.write(text)
    if cfg.get("out"):
        print(f"sweep-m: table -> {cfg['out']}")
    return EXIT_OK


def cmd_analyze(cfg: dict) -> int:
    _check_keys(cfg, {"rate_curve", "gs_report", "heatmap", "model_error"},
                "analyze")
    did = False
    if cfg.get("rate_curve") is not None:
        d = dict(cfg["rate_curve"])
        _check_keys(d, {"eta1", "eta2", "eps", "R", "m_max", "out"},
                    "analyze.rate_curve")
        try:
            p = RateParams(eta1=float(_require(d, "eta1", "rate_curve")),
                           eta2=float(_require(d, "eta2", "rate_curve")),
                           eps=float(_require(d, "eps", "rate_curve")),
                           big_r=float(_require(d, "R", "rate_curve")))
        except ValueError as exc:
            raise CliError(f"bad rate parameters: {exc}") from exc
        m_max = int(d.get("m_max", 200))
        ms = list(range(1, m_max + 1))
        rates = [rate_bound(m, p) for m in ms]
        text = rate_curve_to_csv(ms, rates, d.get("out"))
        if d.get("out"):
            print(f"analyze: rate curve -> {d['out']}")
        else:
            sys.stdout.write(text)
        did = True
    if cfg.get("gs_report") is not None:
        d = dict(cfg["gs_report"] or {})
        _check_keys(d, {"rho", "resolution"}, "analyze.gs_report")
        rho = float(d.get("rho", 0.5))
        res = int(d.get("resolution", 512))
        z_half = gs_symbol(np.pi / 2.0, np.arccos(0.8))
        print(f"analyze: gs symbol at (pi/2, arccos(4/5)) = {z_half:.4f}")
        print(f"analyze: gs symbol at (0, 0) = {gs_symbol(0.0, 0.0):.4f}")
        mu = smoothing_factor(rho, res)
        print(f"analyze: gs smoothing factor over max|theta| >= {rho:g}*pi "
              f"= {mu:.6f}")
        print("analyze: note: the low-mode factor zeta0 used by the GS rate "
              "bound is an empirical estimate, not a closed form")
        did = True
    if cfg.get("heatmap") is not None:
        d = dict(cfg["heatmap"])
        _check_keys(d, _SOLVE_KEYS | {"out"}, "analyze.heatmap")
        out = d.pop("out", None)
        d["record_spectral"] = True
        if int(d.get("dim", 1)) != 1:
            raise CliError("spectral heatmaps are 1-d only")
        _, _, grid, _, _, _, trace = _run_solve(d, "analyze.heatmap")
        hm = spectral_heatmap(trace, grid.n)
        text = heatmap_to_csv(hm, out)
        if out:
            print(f"analyze: heatmap ({hm.shape[0]} modes x {hm.shape[1]} "
                  f"steps) -> {out}")
        else:
            sys.stdout.write(text)
        did = True
    if cfg.get("model_error") is not None:
        d = dict(cfg["model_error"])
        _check_keys(d, {"n", "n0", "corrector", "out"}, "analyze.model_error")
        grid = StructuredGrid(1, int(_require(d, "n", "model_error")))
        n0 = int(d.get("n0", 10))
        corrector = _build_corrector(_require(d, "corrector", "model_error"),
                                     grid, lambda x: np.ones_like(
                                         np.asarray(x, dtype=np.float64)),
                                     None, None, False,
                                     "analyze.model_error.corrector")
        norms, eps, big_r = model_error_spectrum(corrector, grid, n0)
        if d.get("out"):
            with open(d["out"], "w", newline="") as fh:
                fh.write("mode,error_l2\n")
                for i, v in enumerate(norms, start=1):
                    fh.write(f"{i},{float(v)!r}\n")
            print(f"analyze: model error spectrum -> {d['out']}")
        print(f"analyze: eps (modes 1..{n0}) = {eps:.6e}, "
              f"R (modes {n0 + 1}..{grid.n}) = {big_r:.6e}")
        did = True
    if not did:
        raise CliError("analyze config selects nothing; provide one of "
                       "rate_curve, gs_report, heatmap, model_error")
    return EXIT_OK


_COMMANDS = {"gen-data": cmd_gen_data, "train": cmd_train,
             "solve": cmd_solve, "sweep-m": cmd_sweep_m,
             "analyze": cmd_analyze}


def main(argv=None) -> int:
    parser = _Parser(prog="hybriditer",
                     description="Hybrid iterative Poisson solvers: data "
                                 "generation, training, solving and analysis")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config entry (dotted keys, JSON "
                            "values)")
    try:
        args = parser.parse_args(argv)
        cfg = _load_config(args)
        return _COMMANDS[args.command](cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # keep the contract: internal errors exit 3
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
