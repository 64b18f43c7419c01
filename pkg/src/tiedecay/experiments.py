"""Experiment harness: validated configs, deterministic runs, CSV output.

A config is a single JSON file::

    {
      "experiment": "ahmad-gcc",        # one of EXPERIMENTS
      "seed": 20260811,                 # mandatory; never defaulted
      "realizations": 200,              # where the experiment is an ensemble
      "params": { ... }                 # model block, validated per experiment
    }

``run`` writes ``<experiment>.csv`` into the output directory, atomically,
with a ``#``-prefixed JSON manifest on the first line recording the
experiment id, toolkit version, seed, a SHA-256 of the canonical config,
the parameter block, and analytic reference values for overlays.  The same
config and seed produce byte-identical files at any worker count: every
realization draws from its own ``(seed, ...)`` substream and aggregation
is ordered by realization index.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__, additive, fdsolver, reset, sir, walk
from .errors import ConfigError
from .graph import MODE_AT_LEAST, TieMatrix, components, threshold_edges
from .seeding import substream


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int
    params: dict
    realizations: int | None = None
    source_sha256: str = ""

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        raw = Path(path).read_bytes()
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(doc) - {"experiment", "seed", "params", "realizations"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        experiment = doc.get("experiment")
        if experiment not in EXPERIMENTS:
            raise ConfigError(
                f"experiment must be one of {sorted(EXPERIMENTS)}, got {experiment!r}"
            )
        if "seed" not in doc:
            raise ConfigError("seed is mandatory (wall-clock defaults are not allowed)")
        seed = doc["seed"]
        if not isinstance(seed, int):
            raise ConfigError("seed must be an integer")
        params = doc.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("params must be an object")
        realizations = doc.get("realizations")
        if realizations is not None and (
            not isinstance(realizations, int) or realizations < 1
        ):
            raise ConfigError("realizations must be a positive integer")
        canonical = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
        return cls(
            experiment=experiment,
            seed=seed,
            params=params,
            realizations=realizations,
            source_sha256=hashlib.sha256(canonical).hexdigest(),
        )


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: list[tuple]
    analytics: dict


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: Path, manifest: dict, table: Table) -> None:
    """Write a manifest-stamped CSV atomically (temp file + rename)."""
    lines = ["# " + json.dumps(manifest, sort_keys=True, separators=(",", ":"))]
    lines.append(",".join(table.columns))
    for row in table.rows:
        if len(row) != len(table.columns):
            raise ValueError("row width does not match the column count")
        lines.append(",".join(_fmt(v) for v in row))
    payload = "\n".join(lines) + "\n"
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(path: str | Path) -> tuple[dict, tuple[str, ...], list[tuple]]:
    """Parse a manifest-stamped CSV back into (manifest, columns, rows)."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("# "):
        raise ValueError("missing manifest header line")
    manifest = json.loads(lines[0][2:])
    columns = tuple(lines[1].split(","))
    rows = []
    for line in lines[2:]:
        if not line:
            continue
        cells = []
        for cell in line.split(","):
            try:
                cells.append(int(cell))
            except ValueError:
                try:
                    cells.append(float(cell))
                except ValueError:
                    cells.append(cell)
        rows.append(tuple(cells))
    return manifest, columns, rows


def _map_indexed(fn: Callable[[int], object], count: int, workers: int) -> list:
    """Evaluate ``fn(0..count-1)``, in parallel if asked, ordered by index."""
    if workers <= 1 or count <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def _need(params: dict, key: str, kind, violations: list[str]):
    if key not in params:
        violations.append(f"params.{key} is required")
        return None
    value = params[key]
    if kind is float and isinstance(value, int):
        value = float(value)
    if not isinstance(value, kind):
        violations.append(f"params.{key} must be {getattr(kind, '__name__', kind)}")
        return None
    return value


# --------------------------------------------------------------------------
# validators and runners, one pair per experiment id
# --------------------------------------------------------------------------


def _validate_additive_block(params: dict, violations: list[str], need_n: bool) -> None:
    if need_n:
        n = _need(params, "n", int, violations)
        if n is not None and n < 2:
            violations.append("params.n must be at least 2")
    p = _need(params, "p", float, violations)
    if p is not None and not 0.0 <= p < 1.0:
        violations.append("params.p must lie in [0, 1)")
    alpha = _need(params, "alpha", float, violations)
    if alpha is not None and alpha <= 0.0:
        violations.append("params.alpha must be positive")
    steps = _need(params, "steps", int, violations)
    if steps is not None and steps < 0:
        violations.append("params.steps must be non-negative")


def _validate_ahmad_trace(config: ExperimentConfig) -> list[str]:
    v: list[str] = []
    _validate_additive_block(config.params, v, need_n=False)
    return v


def _run_ahmad_trace(config: ExperimentConfig, workers: int) -> Table:
    p = config.params
    params = additive.AdditiveParams(
        n=2, p=float(p["p"]), alpha=float(p["alpha"]), steps=int(p["steps"]),
        s0=float(p.get("s0", 0.0)),
    )
    rng = substream(config.seed, 0)
    s = params.s0
    rows = [(0, s)]
    for t in range(1, params.steps + 1):
        s = additive.step_edge(s, bool(rng.random() < params.p), params.alpha)
        rows.append((t, s))
    analytics = {"mean_stationary": additive.mean_stationary(params.p, params.alpha)}
    return Table(("t", "strength"), rows, analytics)


def _validate_ahmad_moments(config: ExperimentConfig) -> list[str]:
    v: list[str] = []
    _validate_additive_block(config.params, v, need_n=True)
    record = config.params.get("record_at")
    if not isinstance(record, list) or not all(isinstance(t, int) for t in record):
        v.append("params.record_at must be a list of integers")
    return v


def _run_ahmad_moments(config: ExperimentConfig, workers: int) -> Table:
    p = config.params
    params = additive.AdditiveParams(
        n=int(p["n"]), p=float(p["p"]), alpha=float(p["alpha"]), steps=int(p["steps"])
    )
    record_at = sorted(int(t) for t in p["record_at"])
    ensemble = additive.simulate_edge_ensemble(
        params, params.n_pairs, config.seed, record_at=record_at
    )
    rows = []
    for t in record_at:
        mean, sem = ensemble.records[t]
        rows.append((t, mean, sem, additive.mean_finite_time(params, t)))
    moments = additive.raw_moments_stationary(params.p, params.alpha, 2)
    analytics = {
        "mean_stationary": additive.mean_stationary(params.p, params.alpha),
        "variance_stationary": additive.variance_stationary(params.p, params.alpha),
        "m2_stationary": moments[1],
    }
    return Table(("t", "mc_mean", "mc_sem", "analytic_mean"), rows, analytics)


def _validate_ahmad_gcc(config: ExperimentConfig) -> list[str]:
    v: list[str] = []
    params = dict(config.params)
    alphas = params.get("alphas")
    if not isinstance(alphas, list) or not alphas:
        v.append("params.alphas must be a non-empty list")
        alphas = []
    for a in alphas:
        if not isinstance(a, (int, float)) or a <= 0:
            v.append("params.alphas entries must be positive numbers")
    thresholds = params.get("thresholds")
    if thresholds is None:
        # per-alpha grids around the predicted threshold are also accepted
        factors = params.get("threshold_factors")
        if not isinstance(factors, list) or not factors:
            v.append("params.thresholds or params.threshold_factors is required")
    _need(params, "n", int, v)
    _need(params, "p", float, v)
    _need(params, "steps", int, v)
    if config.realizations is None:
        v.append("realizations is required")
    return v


def _run_ahmad_gcc(config: ExperimentConfig, workers: int) -> Table:
    p = config.params
    realizations = config.realizations or 1
    rows = []
    crit: dict[str, float] = {}
    for ai, alpha in enumerate(p["alphas"]):
        params = additive.AdditiveParams(
            n=int(p["n"]), p=float(p["p"]), alpha=float(alpha), steps=int(p["steps"])
        )
        g_crit = additive.critical_threshold(params)
        crit[repr(float(alpha))] = g_crit
        if "thresholds" in p:
            thresholds = [float(g) for g in p["thresholds"]]
        else:
            thresholds = [f * g_crit for f in p["threshold_factors"]]

        def one(r: int, params=params, thresholds=thresholds, ai=ai):
            rng = substream(config.seed, ai, r)
            tm = TieMatrix(
                params.n, additive.sample_final_strengths(params, params.n_pairs, rng)
            )
            return [
                components(params.n, threshold_edges(tm, g, MODE_AT_LEAST)).largest_fraction
                for g in thresholds
            ]

        fractions = np.asarray(_map_indexed(one, realizations, workers))
        for gi, g in enumerate(thresholds):
            col = fractions[:, gi]
            sem = (
                float(col.std(ddof=1) / math.sqrt(realizations))
                if realizations > 1
                else 0.0
            )
            rows.append((float(alpha), g, float(col.mean()), sem))
    return Table(
        ("alpha", "g", "mean_fraction", "stderr"), rows, {"g_crit": crit}
    )


def _validate_b2u_trace(config: ExperimentConfig) -> list[str]:
    v: list[str] = []
    p = _need(config.params, "p", float, v)
    if p is not None and not 0.0 <= p <= 1.0:
        v.append("params.p must lie in [0, 1]")
    alpha = _need(config.params, "alpha", float, v)
    if alpha is not None and alpha <= 0.0:
        v.append("params.alpha must be positive")
    steps = _need(config.params, "steps", int, v)
    if steps is not None and steps < 0:
        v.append("params.steps must be non-negative")
    return v


def _run_b2u_trace(config: ExperimentConfig, workers: int) -> Table:
    p = config.params
    alpha = float(p["alpha"])
    prob = float(p["p"])
    rng = substream(config.seed, 0)
    s = 0.0
    rows = [(0, s)]
    for t in range(1, int(p["steps"]) + 1):
        s = reset.step_edge(s, bool(rng.random() < prob), alpha)
        rows.append((t, s))
    analytics = {"mean_stationary": reset.moment_stationary(prob, alpha, 1)}
    return Table(("t", "strength"), rows, analytics)


def _validate_b2u_gcc_sweep(config: ExperimentConfig) -> list[str]:
    v: list[str] = []
    p = config.params
    n = _need(p, "n", int, v)
    if n is not None and n < 2:
        v.append("params.n must be at least 2")
    g = _need(p, "g", float, v)
    if g is not None and not 0.0 < g <= 1.0:
        v.append("params.g must lie in (0, 1]")
    _need(p, "steps", int, v)
    sweeps = p.get("sweeps")
    if not isinstance(sweeps, list) or not sweeps:
        v.append("params.sweeps must be a non-empty list of {alpha, p_values}")
    else:
        for block in sweeps:
            if not isinstance(block, dict) or "alpha" not in block or "p_values" not in block:
                v.append("each sweep block needs alpha and p_values")
    if config.realizations is None:
        v.append("realizations is required")
    return v


def _run_b2u_gcc_sweep(config: ExperimentConfig, workers: int) -> Table:
    p = config.params
    realizations = config.realizations or 1
    rows = []
    crit: dict[str, dict[str, float]] = {}
    for ai, block in enumerate(p["sweeps"]):
        alpha = float(block["alpha"])
        base = reset.ResetParams(
            n=int(p["n"]), p=0.5, alpha=alpha, steps=int(p["steps"]), g=float(p["g"])
        )
        crit[repr(alpha)] = {
            "exact": reset.critical_p(base.n, alpha, base.g),
            "approx": reset.critical_p_approx(base.n, alpha, base.g),
        }
        for pi, prob in enumerate(block["p_values"]):
            run = reset.ResetParams(base.n, float(prob), alpha, base.steps, base.g)

            def one(r: int, run=run, ai=ai, pi=pi):
                rng = substream(config.seed, ai, pi, r)
                tm = TieMatrix(
                    run.n, reset.sample_final_strengths(run, run.n_pairs, rng)
                )
                edges = threshold_edges(tm, run.g, MODE_AT_LEAST)
                return components(run.n, edges).largest_fraction

            fractions = np.asarray(_map_indexed(one, realizations, workers))
            sem = (
                float(fractions.std(ddof=1) / math.sqrt(realizations))
                if realizations > 1
                else 0.0
            )
            rows.append((alpha, float(prob), float(fractions.mean()), sem))
    return Table(("alpha", "p", "mean_fraction", "stderr"), rows, {"p_crit": crit})


def _validate_b2u_components(config: ExperimentConfig) -> list[str]:
    v: list[str] = []
    p = config.params
    n = _need(p, "n", int, v)
    if n is not None and n < 2:
        v.append("params.n must be at least 2")
    _need(p, "p", float, v)
    _need(p, "alpha", float, v)
    _need(p, "steps", int, v)
    g = _need(p, "g", float, v)
    if g is not None and not 0.0 < g <= 1.0:
        v.append("params.g must lie in (0, 1]")
    return v


def _run_b2u_components(config: ExperimentConfig, workers: int) -> Table:
    p = config.params
    params = reset.ResetParams(
        n=int(p["n"]), p=float(p["p"]), alpha=float(p["alpha"]),
        steps=int(p["steps"]), g=float(p["g"]),
    )
    rng = substream(config.seed, 0)
    tm = TieMatrix(params.n, reset.sample_final_strengths(params, params.n_pairs, rng))
    report = components(params.n, threshold_edges(tm, params.g, MODE_AT_LEAST))
    rows = [(idx, size) for idx, size in enumerate(report.component_sizes)]
    analytics = {
        "prob_active": reset.prob_active(params.p, params.alpha, params.g),
        "gcc_predicted": reset.gcc_predicted(params.n, params.p, params.alpha, params.g),
        "largest_fraction": report.largest_fraction,
    }
    return Table(("component", "size"), rows, analytics)


def _walk_params_from(config: ExperimentConfig, need_bound: bool) -> tuple[walk.WalkParams, list[str]]:
    v: list[str] = []
    p = config.params
    dx = _need(p, "dx", float, v)
    dt = _need(p, "dt", float, v)
    t_total = _need(p, "t_total", float, v)
    delta = float(p.get("delta", 0.0))
    w = p.get("w", None)
    lower = p.get("lower", None)
    if need_bound and w is None:
        v.append("params.w is required")
    if v:
        return None, v  # type: ignore[return-value]
    try:
        params = walk.WalkParams(
            dx=float(dx), dt=float(dt), t_total=float(t_total), delta=delta,
            w=math.inf if w is None else float(w),
            lower=None if lower is None else float(lower),
        )
    except ValueError as exc:
        return None, [str(exc)]  # type: ignore[return-value]
    if not 0.0 <= delta < 0.5:
        v.append("params.delta must lie in [0, 1/2)")
    if params.lower is not None and params.lower < params.speed * params.t_total:
        v.append(
            "params.lower is below the propagation range: need lower >= "
            f"{params.speed * params.t_total!r}"
        )
    return params, v


def _validate_walk_trace(config: ExperimentConfig) -> list[str]:
    _, v = _walk_params_from(config, need_bound=False)
    return v


def _run_walk_trace(config: ExperimentConfig, workers: int) -> Table:
    params, _ = _walk_params_from(config, need_bound=False)
    path = walk.simulate_walk_trajectory(params, config.seed)
    stride = int(config.params.get("stride", 1))
    rows = [
        (t, t * params.dt, float(path[t])) for t in range(0, params.steps + 1, stride)
    ]
    analytics = {"diffusivity": params.k, "beta": params.beta}
    return Table(("step", "t", "x"), rows, analytics)


def _validate_walk_stationary(config: ExperimentConfig) -> list[str]:
    params, v = _walk_params_from(config, need_bound=True)
    if params is not None and params.delta <= 0.0:
        v.append("params.delta must be positive to reach a stationary profile")
    n_edges = _need(config.params, "n_edges", int, v)
    if n_edges is not None and n_edges < 1:
        v.append("params.n_edges must be positive")
    if config.realizations is None:
        v.append("realizations is required")
    return v


def _run_walk_stationary(config: ExperimentConfig, workers: int) -> Table:
    params, _ = _walk_params_from(config, need_bound=True)
    n_edges = int(config.params["n_edges"])
    realizations = config.realizations or 1
    top = params.top_index
    # histogram support: every lattice site the walk can reach in-time
    low = top - params.steps if top is not None else -params.steps
    size = top - low + 1

    def one(r: int) -> np.ndarray:
        idx = _walk_realization(params, n_edges, config.seed, r)
        return np.bincount(idx - low, minlength=size)

    counts = np.zeros(size, dtype=np.int64)
    for block in _map_indexed(one, realizations, workers):
        counts += block
    total = realizations * n_edges
    density = counts / (total * params.dx)
    occupied = np.nonzero(counts)[0]
    first, last = int(occupied.min()), int(occupied.max())
    rows = []
    for site in range(first, last + 1):
        x = (low + site) * params.dx
        rows.append((float(x), float(density[site]), int(counts[site])))
    ts = walk.timescales(params)
    analytics = {
        "beta": params.beta,
        "w": params.w,
        "boundary_density_continuum": 4.0 * params.beta,
        "boundary_density_discrete": walk.stationary_density_discrete(0, params),
        "adjacent_ratio": (0.5 + params.delta) / (0.5 - params.delta),
        "tau": ts.tau,
        "peclet": ts.peclet,
        "samples": total,
    }
    return Table(("x", "density", "count"), rows, analytics)


def _walk_realization(
    params: walk.WalkParams, n_edges: int, seed: int, realization: int
) -> np.ndarray:
    rng = substream(seed, realization)
    j = np.zeros(n_edges, dtype=np.int64)
    walk._walk_inner(params, j, rng)
    return j


def _fd_setup(config: ExperimentConfig) -> tuple[fdsolver.Grid, fdsolver.SchemeCoeffs, list[str]]:
    v: list[str] = []
    p = config.params
    dx = _need(p, "dx", float, v)
    delta = _need(p, "delta", float, v)
    w = _need(p, "w", float, v)
    lower = _need(p, "lower", float, v)
    if v:
        return None, None, v  # type: ignore[return-value]
    try:
        coeffs = fdsolver.SchemeCoeffs.from_drift(float(delta))
        grid = fdsolver.Grid(float(dx), float(lower), float(w))
    except ValueError as exc:
        return None, None, [str(exc)]  # type: ignore[return-value]
    return grid, coeffs, v


def _validate_fd_evolve(config: ExperimentConfig) -> list[str]:
    grid, _, v = _fd_setup(config)
    p = config.params
    dt = _need(p, "dt", float, v)
    t_total = _need(p, "t_total", float, v)
    if v:
        return v
    speed = float(p["dx"]) / float(dt)
    if float(p["lower"]) < speed * float(t_total):
        v.append(
            "params.lower is below the propagation range: need lower >= "
            f"{speed * float(t_total)!r}"
        )
    return v


def _run_fd_evolve(config: ExperimentConfig, workers: int) -> Table:
    grid, coeffs, _ = _fd_setup(config)
    p = config.params
    steps = int(round(float(p["t_total"]) / float(p["dt"])))
    result = fdsolver.evolve(fdsolver.Field.delta_mass(grid), coeffs, steps)
    rows = [(float(x), float(u)) for x, u in zip(grid.x, result.field.values)]
    analytics = {
        "steps": steps,
        "mass_drift": result.max_mass_drift,
        "delta": float(p["delta"]),
        "beta": float(p["delta"]) / float(p["dx"]),
        "w": float(p["w"]),
    }
    return Table(("x", "u"), rows, analytics)


def _validate_fd_stationary(config: ExperimentConfig) -> list[str]:
    _, _, v = _fd_setup(config)
    return v


def _run_fd_stationary(config: ExperimentConfig, workers: int) -> Table:
    grid, coeffs, _ = _fd_setup(config)
    op = fdsolver.build_transition_matrix(grid, coeffs)
    state = fdsolver.stationary_state(op, grid)
    u = state.values
    rows = [(float(x), float(val)) for x, val in zip(grid.x, u)]
    delta = float(config.params["delta"])
    beta = delta / grid.dx
    analytics = {
        "boundary_value": float(u[-1]),
        "boundary_value_continuum": 4.0 * beta,
        "adjacent_ratio": (0.5 + delta) / (0.5 - delta),
        "delta": delta,
        "beta": beta,
        "w": grid.upper,
        "residual": float(np.max(np.abs(op.apply(u) - u))),
    }
    return Table(("x", "u"), rows, analytics)


def _validate_sir_compare(config: ExperimentConfig) -> list[str]:
    v: list[str] = []
    p = config.params
    bb = _need(p, "beta_bar", float, v)
    if bb is not None and not 0.0 <= bb <= 1.0:
        v.append("params.beta_bar must lie in [0, 1]")
    gb = _need(p, "gamma_bar", float, v)
    if gb is not None and not 0.0 <= gb <= 1.0:
        v.append("params.gamma_bar must lie in [0, 1]")
    n_pop = _need(p, "n_pop", int, v)
    if n_pop is not None and n_pop < 2:
        v.append("params.n_pop must be at least 2")
    i0 = _need(p, "i0", int, v)
    if i0 is not None and n_pop is not None and not 0 < i0 < n_pop:
        v.append("params.i0 must lie in (0, n_pop)")
    _need(p, "steps", int, v)
    lambdas = p.get("lambdas")
    if not isinstance(lambdas, list) or not lambdas:
        v.append("params.lambdas must be a non-empty list")
    if config.realizations is None:
        v.append("realizations is required")
    return v


def _run_sir_compare(config: ExperimentConfig, workers: int) -> Table:
    p = config.params
    n_pop = int(p["n_pop"])
    i0 = int(p["i0"])
    initial = (n_pop - i0, i0, 0)
    steps = int(p["steps"])
    lambdas = [float(l) for l in p["lambdas"]]
    realizations = config.realizations or 1

    comparison = _sir_compare_parallel(
        lambdas, float(p["beta_bar"]), float(p["gamma_bar"]), n_pop, initial,
        steps, realizations, config.seed, workers,
    )
    rows = []
    disc = comparison.discrete
    for t in range(steps + 1):
        rows.append(
            ("discrete", 0.0, t, float(disc.s[t]), float(disc.i[t]), float(disc.r[t]),
             0.0, 0.0, 0.0)
        )
    for lam in lambdas:
        ens = comparison.ensembles[lam]
        for t in range(steps + 1):
            rows.append(
                ("tiedecay", lam, t,
                 float(ens.mean[t, 0]), float(ens.mean[t, 1]), float(ens.mean[t, 2]),
                 float(ens.sem[t, 0]), float(ens.sem[t, 1]), float(ens.sem[t, 2]))
            )
    analytics = {
        "beta_bar": float(p["beta_bar"]),
        "gamma_bar": float(p["gamma_bar"]),
        "n_pop": n_pop,
        "i0": i0,
        "discrete_peak_step": disc.peak_step,
        "discrete_attack_rate": disc.attack_rate,
    }
    return Table(
        ("series", "lambda", "step", "s", "i", "r", "s_sem", "i_sem", "r_sem"),
        rows,
        analytics,
    )


def _sir_compare_parallel(
    lambdas, beta_bar, gamma_bar, n_pop, initial, steps, realizations, seed, workers
) -> sir.SirComparison:
    discrete_params = sir.SirParams.from_lambda(beta_bar, gamma_bar, n_pop, 1.0)
    discrete = sir.sir_discrete_trajectory(discrete_params, initial, steps)
    ensembles: dict[float, sir.SirEnsemble] = {}
    for li, lam in enumerate(lambdas):
        params = sir.SirParams.from_lambda(beta_bar, gamma_bar, n_pop, float(lam))

        def one(rlz: int, params=params, li=li):
            return sir.run_realization(params, initial, steps, substream(seed, li, rlz))

        runs = np.asarray(_map_indexed(one, realizations, workers))
        ensembles[float(lam)] = sir.SirEnsemble.from_runs(runs, n_pop)
    return sir.SirComparison(discrete, ensembles)


EXPERIMENTS: dict[str, tuple[Callable, Callable, str]] = {
    "ahmad-trace": (_validate_ahmad_trace, _run_ahmad_trace, "single-edge additive-model strength trace"),
    "ahmad-moments": (_validate_ahmad_moments, _run_ahmad_moments, "additive-model ensemble means vs analytic values"),
    "ahmad-gcc": (_validate_ahmad_gcc, _run_ahmad_gcc, "additive-model largest-component sweep over thresholds"),
    "b2u-trace": (_validate_b2u_trace, _run_b2u_trace, "single-edge reset-model strength trace"),
    "b2u-gcc-sweep": (_validate_b2u_gcc_sweep, _run_b2u_gcc_sweep, "reset-model largest-component sweep over interaction probability"),
    "b2u-components": (_validate_b2u_components, _run_b2u_components, "reset-model component census of one realization"),
    "walk-trace": (_validate_walk_trace, _run_walk_trace, "single-edge log-strength walk trace"),
    "walk-stationary": (_validate_walk_stationary, _run_walk_stationary, "bounded-walk stationary histogram"),
    "fd-evolve": (_validate_fd_evolve, _run_fd_evolve, "finite-difference density after time marching"),
    "fd-stationary": (_validate_fd_stationary, _run_fd_stationary, "finite-difference stationary density"),
    "sir-compare": (_validate_sir_compare, _run_sir_compare, "SIR on tie-decay contacts vs the discrete recursion"),
}


def validate(config: ExperimentConfig) -> list[str]:
    """Dry-run schema and stability checks; returns the violation list."""
    return EXPERIMENTS[config.experiment][0](config)


def run(
    config: ExperimentConfig, out_dir: str | Path, workers: int = 1
) -> Path:
    """Execute the experiment and write its manifest-stamped CSV."""
    violations = validate(config)
    if violations:
        raise ConfigError("; ".join(violations))
    table = EXPERIMENTS[config.experiment][1](config, workers)
    manifest = {
        "experiment": config.experiment,
        "version": __version__,
        "seed": config.seed,
        "config_sha256": config.source_sha256,
        "params": config.params,
        "realizations": config.realizations,
        "analytics": table.analytics,
        "columns": list(table.columns),
    }
    path = Path(out_dir) / f"{config.experiment}.csv"
    write_csv(path, manifest, table)
    return path
