"""Command-line experiment driver.

Subcommands (each takes --config <path> plus --seed/--n-steps/--out overrides):

  solve          solve for equilibrium gains, write gains.json / riccati.csv /
                 diagnostics.json
  chaos          conditional propagation-of-chaos experiment: per flock size,
                 time-averaged cross-replicate correlation matrices
  trajectories   leader/follower velocity and position paths per weight panel
  nash-check     certify the solved equilibrium by unilateral-deviation probes
  simulate       one finite-game replicate under the solved equilibrium

The config is one JSON document with sections {model | flocking, grid,
simulation, experiment}.  Outputs are deterministic given the config (only
the timestamp inside metadata.json varies between reruns), and every file
embeds the config hash.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .equilibrium import (
    EquilibriumError,
    best_response_iteration,
    solve_closed_loop,
    solve_open_loop,
    zero_strategy,
)
from .evaluator import InitialState, nash_gap
from .flocking import circle_free_will, embed_weights
from .model import Dims, InvalidModelError, MajorMinorLqModel, require_valid
from .noise import normals, stream_seed
from .riccati import TimeGrid
from .simulator import SimConfig, conditional_component_stats, simulate_finite_game

__all__ = ["main", "RunConfig", "load_config"]

#: Cross-replicate variance below this is treated as degenerate (correlation
#: undefined); such nodes are excluded from the time average.
VARIANCE_FLOOR = 1e-14

_POSITION_TAG = 0x706F736974696F6E  # tags the follower position-scatter streams


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration: model, grid, simulation inputs, experiment params."""

    model: MajorMinorLqModel
    grid: TimeGrid
    sim: SimConfig
    experiment: dict
    flocking: dict | None
    config_hash: str
    raw: dict


def _as_matrix(value, rows, cols, name):
    if np.isscalar(value):
        if rows != cols:
            raise ConfigError(f"{name}: scalar shorthand needs a square matrix")
        return float(value) * np.eye(rows)
    arr = np.asarray(value, dtype=float)
    if arr.shape != (rows, cols):
        raise ConfigError(f"{name}: expected shape {(rows, cols)}, got {arr.shape}")
    return arr


def _init_pair(section, dim, name, default_mean=None, default_cov=None):
    if section is None:
        mean = np.zeros(dim) if default_mean is None else np.asarray(default_mean, float)
        cov = np.eye(dim) if default_cov is None else np.asarray(default_cov, float)
        return mean, cov
    mean = np.asarray(section.get("mean", np.zeros(dim)), dtype=float)
    if mean.shape != (dim,):
        raise ConfigError(f"{name}.mean: expected length {dim}")
    cov = section.get("cov", 1.0)
    return mean, _as_matrix(cov, dim, dim, f"{name}.cov")


def _doubled_init(mean_v, cov_v):
    mean = np.concatenate([mean_v, mean_v])
    cov = np.block([[cov_v, cov_v], [cov_v, cov_v]])
    return mean, cov


def _build_flocking_model(section) -> tuple:
    dv = int(section.get("dv", 2))
    try:
        weights = tuple(float(section[w]) for w in ("lambda0", "lambda1", "l0", "l1"))
    except KeyError as missing:
        raise ConfigError(f"flocking section misses weight {missing}") from None
    Sigma0 = _as_matrix(section.get("sigma0", 0.5), dv, dv, "flocking.sigma0")
    Sigma = _as_matrix(section.get("sigma", 0.5), dv, dv, "flocking.sigma")
    T = float(section.get("T", 5.0))
    model = embed_weights(dv, *weights, Sigma0, Sigma, circle_free_will, T)
    info = {
        "dv": dv,
        "weights": weights,
        "Sigma0": Sigma0,
        "Sigma": Sigma,
        "T": T,
    }
    return model, info


def _build_raw_model(section) -> MajorMinorLqModel:
    try:
        dims = Dims(**{k: int(v) for k, v in section["dims"].items()})
    except (KeyError, TypeError) as err:
        raise ConfigError(f"model.dims malformed: {err}") from None
    shapes = {
        "L0": (dims.d0, dims.d0),
        "B0": (dims.d0, dims.k0),
        "F0": (dims.d0, dims.d),
        "D0": (dims.d0, dims.m0),
        "L": (dims.d, dims.d),
        "B": (dims.d, dims.k),
        "F": (dims.d, dims.d),
        "G": (dims.d, dims.d0),
        "D": (dims.d, dims.m),
        "Q0": (dims.d0, dims.d0),
        "Q": (dims.d, dims.d),
        "R0": (dims.k0, dims.k0),
        "R": (dims.k, dims.k),
        "H0": (dims.d0, dims.d),
        "H": (dims.d, dims.d0),
        "H1": (dims.d, dims.d),
    }
    fields = {}
    for name, (r, c) in shapes.items():
        if name not in section:
            raise ConfigError(f"model section misses matrix {name}")
        fields[name] = _as_matrix(section[name], r, c, f"model.{name}")
    eta0 = np.asarray(section.get("eta0", np.zeros(dims.d0)), dtype=float)
    eta = np.asarray(section.get("eta", np.zeros(dims.d)), dtype=float)
    T = float(section.get("T", 1.0))
    return MajorMinorLqModel(dims=dims, eta0=eta0, eta=eta, T=T, **fields)


def load_config(path, seed=None, n_steps=None) -> RunConfig:
    """Load and validate a JSON run configuration, applying CLI overrides."""
    raw = json.loads(Path(path).read_text())
    if seed is not None:
        raw.setdefault("simulation", {})["master_seed"] = int(seed)
    if n_steps is not None:
        raw.setdefault("grid", {})["n_steps"] = int(n_steps)
    digest = hashlib.sha256(
        json.dumps(raw, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()[:16]

    flocking_info = None
    if "flocking" in raw:
        model, flocking_info = _build_flocking_model(raw["flocking"])
    elif "model" in raw:
        model = _build_raw_model(raw["model"])
    else:
        raise ConfigError("config needs a 'flocking' or 'model' section")
    model = require_valid(model)

    grid_sec = raw.get("grid", {})
    n = int(grid_sec.get("n_steps", 5000))
    grid = TimeGrid(model.T, n)

    sim_sec = raw.get("simulation", {})
    d0, d = model.dims.d0, model.dims.d
    if flocking_info is not None:
        dv = flocking_info["dv"]
        mean0, cov0 = _init_pair(
            sim_sec.get("init_major"),
            dv,
            "simulation.init_major",
            default_mean=circle_free_will(0.0),
            default_cov=0.25 * np.eye(dv),
        )
        meanm, covm = _init_pair(sim_sec.get("init_minor"), dv, "simulation.init_minor")
        init_major = _doubled_init(mean0, cov0)
        init_minor = _doubled_init(meanm, covm)
    else:
        init_major = _init_pair(sim_sec.get("init_major"), d0, "simulation.init_major")
        init_minor = _init_pair(sim_sec.get("init_minor"), d, "simulation.init_minor")
    sim = SimConfig(
        n_minor=int(sim_sec.get("n_minor", 10)),
        grid=grid,
        master_seed=int(sim_sec.get("master_seed", 0)),
        init_major=init_major,
        init_minor=init_minor,
    )
    return RunConfig(
        model=model,
        grid=grid,
        sim=sim,
        experiment=raw.get("experiment", {}),
        flocking=flocking_info,
        config_hash=digest,
        raw=raw,
    )


def _initial_state(cfg: RunConfig) -> InitialState:
    mean0, cov0 = cfg.sim.init_major
    meanm, covm = cfg.sim.init_minor
    return InitialState(meanm, covm, mean0, cov0)


def _fmt(x) -> str:
    return repr(float(x))


def _write_csv(path, header, rows, config_hash) -> None:
    with open(path, "w") as fh:
        fh.write(f"# config_hash={config_hash}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if not isinstance(v, str) else v for v in row) + "\n")


def _write_json(path, payload, config_hash) -> None:
    payload = {"config_hash": config_hash, **payload}
    Path(path).write_text(json.dumps(payload, indent=1, sort_keys=True))


def _write_metadata(outdir, cfg: RunConfig, command: str, extra=None) -> None:
    payload = {
        "command": command,
        "config_hash": cfg.config_hash,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "grid": {"horizon": cfg.grid.horizon, "n_steps": cfg.grid.n_steps},
        "master_seed": cfg.sim.master_seed,
    }
    if extra:
        payload.update(extra)
    Path(outdir, "metadata.json").write_text(json.dumps(payload, indent=1, sort_keys=True))


def _solve_strategy(cfg: RunConfig):
    """Solve the configured equilibrium; returns (strategy, diagnostics)."""
    exp = cfg.experiment
    solver = exp.get("solver", "closed-loop")
    diagnostics = {"solver": solver}
    if solver == "closed-loop":
        sol = solve_closed_loop(cfg.model, cfg.grid)
        diagnostics["fixed_point_residual"] = sol.residual
        diagnostics["polish_iterations"] = sol.polish_iterations
        strategy, paths = sol.strategy, {
            "K": sol.K, "k": sol.k, "S": sol.S, "SS": sol.SS, "s": sol.s
        }
    elif solver == "open-loop":
        sol = solve_open_loop(cfg.model, cfg.grid)
        diagnostics["consistency_error"] = sol.consistency_error
        strategy, paths = sol.strategy, {
            "P": sol.P, "p": sol.p, "S": sol.S, "SS": sol.SS, "s": sol.s
        }
    elif solver == "best-response-iteration":
        res = best_response_iteration(
            cfg.model,
            zero_strategy(cfg.model, cfg.grid),
            max_iter=int(exp.get("max_iter", 50)),
            tol=float(exp.get("tol", 1e-8)),
            damping=float(exp.get("damping", 1.0)),
        )
        diagnostics["converged"] = res.converged
        diagnostics["iteration_changes"] = list(res.changes)
        strategy, paths = res.strategy, {}
    else:
        raise ConfigError(f"unknown solver {solver!r}")
    if exp.get("open_loop_diagnostics") and solver != "open-loop":
        diagnostics["consistency_error"] = solve_open_loop(cfg.model, cfg.grid).consistency_error
    return strategy, paths, diagnostics


def cmd_solve(cfg: RunConfig, outdir: Path) -> int:
    strategy, paths, diagnostics = _solve_strategy(cfg)
    gains = {"grid": {"horizon": cfg.grid.horizon, "n_steps": cfg.grid.n_steps}}
    gains.update(strategy.to_dict())
    _write_json(outdir / "gains.json", gains, cfg.config_hash)
    _write_json(outdir / "diagnostics.json", diagnostics, cfg.config_hash)

    if paths:
        header = ["t"]
        blocks = []
        for name, path in paths.items():
            flat = path.values.reshape(cfg.grid.n_nodes, -1)
            shape = path.values.shape[1:]
            for j in range(flat.shape[1]):
                idx = np.unravel_index(j, shape) if shape else ()
                header.append(name + "".join(f"_{i}" for i in idx))
            blocks.append(flat)
        data = np.hstack([cfg.grid.times()[:, None]] + blocks)
        _write_csv(outdir / "riccati.csv", header, data, cfg.config_hash)
    _write_metadata(outdir, cfg, "solve")
    return 0


def _correlation_over_time(S, M1, M2):
    """Per-node correlation matrices from cross-replicate moment sums."""
    mean = M1 / S
    cov = (M2 - S * np.einsum("nk,nl->nkl", mean, mean)) / (S - 1)
    var = np.einsum("nkk->nk", cov)
    bad = var < VARIANCE_FLOOR
    denom = np.sqrt(np.where(bad, np.nan, var))
    corr = cov / denom[:, :, None] / denom[:, None, :]
    K = corr.shape[1]
    diag_ok = ~bad
    for k in range(K):
        corr[diag_ok[:, k], k, k] = 1.0
    return corr


def cmd_chaos(cfg: RunConfig, outdir: Path) -> int:
    exp = cfg.experiment
    sizes = [int(n) for n in exp.get("flock_sizes", [5, 10, 20, 50, 100])]
    S = int(exp.get("replicates", 500))
    if S < 2:
        raise ConfigError("chaos experiment needs at least 2 replicates")
    n_track = int(exp.get("n_track", 5))
    component = int(exp.get("component", 0))
    strategy, _, _ = _solve_strategy(cfg)

    from dataclasses import replace

    summary = []
    for N in sizes:
        sim = replace(cfg.sim, n_minor=N)
        count, M1, M2 = conditional_component_stats(
            cfg.model, strategy, sim, S, n_track=n_track, component=component
        )
        corr = _correlation_over_time(count, M1, M2)
        excluded = int(np.sum(~np.all(np.isfinite(corr), axis=(1, 2))))
        if excluded == corr.shape[0]:
            print(
                f"warning: all {excluded} nodes have degenerate cross-replicate "
                f"variance at N={N}; correlations undefined",
                file=sys.stderr,
            )
            avg = np.full(corr.shape[1:], np.nan)
        else:
            with np.errstate(invalid="ignore"):
                avg = np.nanmean(corr, axis=0)
        K = avg.shape[0]
        rows = [[avg[i, j] for j in range(K)] for i in range(K)]
        _write_csv(
            outdir / f"chaos_N{N}.csv",
            [f"c{j}" for j in range(K)],
            rows,
            cfg.config_hash,
        )
        off = ~np.eye(K, dtype=bool)
        finite_off = avg[off][np.isfinite(avg[off])]
        mean_abs = float(np.mean(np.abs(finite_off))) if finite_off.size else float("nan")
        summary.append((N, mean_abs, excluded))
    _write_csv(
        outdir / "summary.csv",
        ["N", "mean_abs_offdiag", "excluded_nodes"],
        [[str(n), m, str(e)] for n, m, e in summary],
        cfg.config_hash,
    )
    _write_metadata(outdir, cfg, "chaos", {"replicates": S, "flock_sizes": sizes})
    return 0


def _integrate_positions(velocities, dt, initial):
    # velocities: (n_nodes, dv); trapezoidal cumulative integral.
    increments = 0.5 * dt * (velocities[1:] + velocities[:-1])
    pos = np.vstack([initial, initial + np.cumsum(increments, axis=0)])
    return pos


def cmd_trajectories(cfg: RunConfig, outdir: Path) -> int:
    if cfg.flocking is None:
        raise ConfigError("trajectories experiment needs a flocking config")
    exp = cfg.experiment
    panels = exp.get("panels")
    if not panels:
        raise ConfigError("trajectories experiment needs a nonempty 'panels' list")
    n_seeds = int(exp.get("n_seeds", 1))
    scatter = float(exp.get("position_scatter_std", 1.0))
    dv = cfg.flocking["dv"]
    info = cfg.flocking
    metrics = {}
    for panel in panels:
        name = panel.get("name") or "_".join(
            f"{k}{panel[k]:g}" for k in ("lambda0", "lambda1", "l0", "l1") if k in panel
        )
        weights = [float(panel.get(w, base)) for w, base in zip(
            ("lambda0", "lambda1", "l0", "l1"), info["weights"]
        )]
        model = embed_weights(
            dv, *weights, info["Sigma0"], info["Sigma"], circle_free_will, info["T"]
        )
        model = require_valid(model)
        sol = solve_closed_loop(model, cfg.grid)
        track_err, cohesion_err = [], []
        rows = []
        for rep in range(n_seeds):
            bundle = simulate_finite_game(model, sol.strategy, cfg.sim, replicate=rep)
            times = bundle.times
            vel_leader = bundle.major_path[:, :dv]
            vel_minors = bundle.minor_paths[:, :, :dv]
            nu_path = np.array([circle_free_will(t) for t in times])
            vbar = vel_minors.mean(axis=0)
            T = times[-1]
            track_err.append(
                float(np.trapezoid(np.linalg.norm(vel_leader - nu_path, axis=1), times) / T)
            )
            cohesion_err.append(
                float(np.trapezoid(np.linalg.norm(vbar - vel_leader, axis=1), times) / T)
            )
            if rep == 0:
                pos_leader = _integrate_positions(vel_leader, cfg.grid.dt, np.zeros(dv))
                pos_seed = stream_seed(
                    cfg.sim.master_seed ^ _POSITION_TAG, np.arange(1, bundle.minor_paths.shape[0] + 1), rep
                )
                init_pos = scatter * normals(pos_seed, 0, dv)
                for i, t in enumerate(times):
                    rows.append([t, "0", *pos_leader[i], *vel_leader[i]])
                pos_minors = [
                    _integrate_positions(vel_minors[a], cfg.grid.dt, init_pos[a])
                    for a in range(vel_minors.shape[0])
                ]
                for a in range(vel_minors.shape[0]):
                    for i, t in enumerate(times):
                        rows.append([t, str(a + 1), *pos_minors[a][i], *vel_minors[a][i]])
        header = ["t", "agent_id"] + [f"pos{j}" for j in range(dv)] + [f"vel{j}" for j in range(dv)]
        rows.sort(key=lambda r: (r[0], int(r[1])))
        _write_csv(outdir / f"traj_{name}.csv", header, rows, cfg.config_hash)
        metrics[name] = {
            "weights": dict(zip(("lambda0", "lambda1", "l0", "l1"), weights)),
            "time_avg_leader_to_freewill": float(np.mean(track_err)),
            "time_avg_flock_to_leader": float(np.mean(cohesion_err)),
            "per_seed_leader_to_freewill": track_err,
            "per_seed_flock_to_leader": cohesion_err,
        }
    _write_json(outdir / "metrics.json", {"panels": metrics}, cfg.config_hash)
    _write_metadata(outdir, cfg, "trajectories", {"n_seeds": n_seeds})
    return 0


def cmd_nash_check(cfg: RunConfig, outdir: Path) -> int:
    exp = cfg.experiment
    n_directions = int(exp.get("n_directions", 5))
    epsilon = float(exp.get("epsilon", 1e-3))
    tolerance = float(exp.get("tolerance", 1e-4))
    seeds = exp.get("seeds", {"major": 42, "minor": 43})
    strategy, _, diagnostics = _solve_strategy(cfg)
    init = _initial_state(cfg)
    report = {"tolerance": tolerance, "solver_diagnostics": diagnostics}
    passed = True
    for player in ("major", "minor"):
        gap = nash_gap(
            cfg.model,
            strategy,
            player,
            init,
            n_directions=n_directions,
            epsilon=epsilon,
            seed=int(seeds.get(player, 0)),
        )
        report[player] = gap.to_dict()
        if gap.max_relative_first_derivative > tolerance:
            passed = False
        if any(s < 0 for s in gap.second_differences):
            passed = False
    report["passed"] = passed
    _write_json(outdir / "nash_report.json", report, cfg.config_hash)
    _write_metadata(outdir, cfg, "nash-check")
    if not passed:
        print(
            "nash-check failed: a unilateral deviation improves on the candidate "
            "equilibrium beyond tolerance",
            file=sys.stderr,
        )
        return 2
    return 0


def cmd_simulate(cfg: RunConfig, outdir: Path) -> int:
    exp = cfg.experiment
    if exp.get("strategy", "equilibrium") == "zero":
        strategy = zero_strategy(cfg.model, cfg.grid)
    else:
        strategy, _, _ = _solve_strategy(cfg)
    replicate = int(exp.get("replicate", 0))
    bundle = simulate_finite_game(cfg.model, strategy, cfg.sim, replicate=replicate)
    d0 = bundle.major_path.shape[1]
    d = bundle.minor_paths.shape[2]
    width = max(d0, d)
    rows = []
    for i, t in enumerate(bundle.times):
        rows.append([t, "0", *bundle.major_path[i], *([""] * (width - d0))])
        for a in range(bundle.minor_paths.shape[0]):
            rows.append([t, str(a + 1), *bundle.minor_paths[a, i], *([""] * (width - d))])
    header = ["t", "agent_id"] + [f"x{j}" for j in range(width)]
    _write_csv(outdir / "paths.csv", header, rows, cfg.config_hash)
    _write_metadata(outdir, cfg, "simulate", {"replicate": replicate})
    return 0


_COMMANDS = {
    "solve": cmd_solve,
    "chaos": cmd_chaos,
    "trajectories": cmd_trajectories,
    "nash-check": cmd_nash_check,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mfglq",
        description="Equilibrium solver and simulator for major/minor LQ mean field games",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the JSON run configuration")
        p.add_argument("--seed", type=int, default=None, help="override simulation.master_seed")
        p.add_argument("--n-steps", type=int, default=None, help="override grid.n_steps")
        p.add_argument("--out", default=".", help="output directory (created if missing)")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config, seed=args.seed, n_steps=args.n_steps)
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](cfg, outdir)
    except (ConfigError, InvalidModelError, EquilibriumError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
