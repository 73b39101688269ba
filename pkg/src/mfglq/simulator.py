"""Seeded Euler-Maruyama simulation of the finite game and its mean-field limit.

Strategies are evaluated at the left node of every step (explicit scheme) on
the same grid the gains were solved on, so feedback is exact at nodes.  All
randomness flows through counter-based streams keyed by
(master_seed, agent, replicate): agent 0 is the major player, agents 1..N the
minors, and conditional ensembles reuse the major's replicate-0 stream as the
common noise while giving each replicate fresh minor streams.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .equilibrium import FeedbackStrategy, MinorGains
from .model import MajorMinorLqModel
from .noise import normals, psd_factor, stream_seed
from .riccati import TimeGrid

__all__ = [
    "SimConfig",
    "PathBundle",
    "MeanFieldPaths",
    "SimulationError",
    "simulate_finite_game",
    "simulate_mean_field",
    "simulate_conditional_ensemble",
    "conditional_component_stats",
    "monte_carlo_costs",
]


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SimConfig:
    """Simulation inputs: population size, grid, seed, and initial laws.

    ``init_major`` and ``init_minor`` are (mean, cov) pairs; minor initial
    states are drawn i.i.d. from the minor law, and the mean-field limit
    starts its conditional mean at the configured minor mean.
    """

    n_minor: int
    grid: TimeGrid
    master_seed: int
    init_major: tuple
    init_minor: tuple
    scheme: str = "euler"

    def __post_init__(self):
        if self.n_minor < 1:
            raise ValueError("n_minor must be >= 1")
        if self.scheme != "euler":
            raise ValueError("only the euler scheme is supported")
        for name in ("init_major", "init_minor"):
            mean, cov = getattr(self, name)
            mean = np.asarray(mean, dtype=float)
            cov = np.asarray(cov, dtype=float)
            if cov.shape != (mean.size, mean.size):
                raise ValueError(f"{name} covariance shape does not match its mean")
            object.__setattr__(self, name, (mean, cov))


@dataclass(frozen=True)
class PathBundle:
    """Simulated trajectories of one finite-game replicate.

    ``minor_paths`` is (N, n_nodes, d); ``empirical_mean`` is the in-loop
    average of the minor states (the quantity fed back into the dynamics).
    Controls are recorded at the left node of each step.
    """

    times: np.ndarray
    major_path: np.ndarray
    minor_paths: np.ndarray
    empirical_mean: np.ndarray
    major_controls: np.ndarray
    minor_controls: np.ndarray
    seed_info: dict = field(repr=False)

    def to_csv(self, path) -> None:
        """Rows (t, agent_id, state components ...); agent 0 is the major."""
        d0 = self.major_path.shape[1]
        d = self.minor_paths.shape[2]
        width = max(d0, d)
        with open(path, "w") as fh:
            fh.write("t,agent_id," + ",".join(f"x{j}" for j in range(width)) + "\n")
            for i, t in enumerate(self.times):
                row = [repr(float(t)), "0"] + [repr(float(v)) for v in self.major_path[i]]
                row += [""] * (width - d0)
                fh.write(",".join(row) + "\n")
                for a in range(self.minor_paths.shape[0]):
                    row = [repr(float(t)), str(a + 1)] + [
                        repr(float(v)) for v in self.minor_paths[a, i]
                    ]
                    row += [""] * (width - d)
                    fh.write(",".join(row) + "\n")


def _gain_arrays(strategy: FeedbackStrategy) -> dict:
    mj, mn = strategy.major, strategy.minor
    return {
        "off0": mj.offset.values,
        "g0_major": mj.gain_major.values,
        "g0_mean": mj.gain_mean.values,
        "off": mn.offset.values,
        "g_self": mn.gain_self.values,
        "g_major": mn.gain_major.values,
        "g_mean": mn.gain_mean.values,
    }


def _check_grid(strategy: FeedbackStrategy, grid: TimeGrid) -> None:
    if strategy.grid.n_steps != grid.n_steps or not np.isclose(
        strategy.grid.horizon, grid.horizon
    ):
        raise ValueError("strategy grid does not match the simulation grid")


def _draw_initial(mean, cov, seeds, dim) -> np.ndarray:
    z = normals(seeds, 0, dim)
    return mean + z @ psd_factor(cov).T


def simulate_finite_game(
    model: MajorMinorLqModel,
    strategy: FeedbackStrategy,
    config: SimConfig,
    replicate: int = 0,
    share_common_noise: bool = False,
) -> PathBundle:
    """Euler-Maruyama paths of the (N+1)-player system under affine feedback.

    ``replicate`` selects the noise replicate for every agent;
    ``share_common_noise`` pins the major player (stream and initial state)
    to replicate 0, which is how conditional ensembles share one common noise.
    """
    _check_grid(strategy, config.grid)
    grid = config.grid
    dims = model.dims
    N = config.n_minor
    dt = grid.dt
    sqdt = np.sqrt(dt)
    gains = _gain_arrays(strategy)

    major_rep = 0 if share_common_noise else replicate
    seed_major = stream_seed(config.master_seed, 0, major_rep)
    seeds_minor = stream_seed(
        config.master_seed, np.arange(1, N + 1), np.uint64(replicate)
    )

    mean0, cov0 = config.init_major
    meanm, covm = config.init_minor
    X0 = _draw_initial(mean0, cov0, seed_major, dims.d0)
    X = _draw_initial(meanm[None], covm, seeds_minor, dims.d)

    nn = grid.n_nodes
    major_path = np.empty((nn, dims.d0))
    minor_paths = np.empty((N, nn, dims.d))
    emp_mean = np.empty((nn, dims.d))
    major_controls = np.empty((grid.n_steps, dims.k0))
    minor_controls = np.empty((N, grid.n_steps, dims.k))
    major_path[0] = X0
    minor_paths[:, 0, :] = X
    emp_mean[0] = X.mean(axis=0)

    L0T, B0T, F0T = model.L0.T, model.B0.T, model.F0.T
    LT, BT, FT, GT = model.L.T, model.B.T, model.F.T, model.G.T
    D0, D = model.D0, model.D

    for i in range(grid.n_steps):
        Xbar = X.mean(axis=0)
        a0 = gains["off0"][i] + gains["g0_major"][i] @ X0 + gains["g0_mean"][i] @ Xbar
        aM = (
            gains["off"][i]
            + X @ gains["g_self"][i].T
            + (gains["g_major"][i] @ X0 + gains["g_mean"][i] @ Xbar)[None]
        )
        major_controls[i] = a0
        minor_controls[:, i, :] = aM
        drift0 = X0 @ L0T + a0 @ B0T + Xbar @ F0T
        driftM = X @ LT + aM @ BT + (Xbar @ FT + X0 @ GT)[None]
        dW0 = sqdt * normals(seed_major, dims.d0 + i * dims.m0, dims.m0)
        dWm = sqdt * normals(seeds_minor, dims.d + i * dims.m, dims.m)
        X0 = X0 + dt * drift0 + D0 @ dW0
        X = X + dt * driftM + dWm @ D.T
        if not np.all(np.isfinite(X0)):
            raise SimulationError(f"non-finite major state at node {i + 1} (agent 0)")
        if not np.all(np.isfinite(X)):
            agent = int(np.argwhere(~np.isfinite(X))[0][0]) + 1
            raise SimulationError(f"non-finite minor state at node {i + 1}, agent {agent}")
        major_path[i + 1] = X0
        minor_paths[:, i + 1, :] = X
        emp_mean[i + 1] = X.mean(axis=0)

    return PathBundle(
        times=grid.times(),
        major_path=major_path,
        minor_paths=minor_paths,
        empirical_mean=emp_mean,
        major_controls=major_controls,
        minor_controls=minor_controls,
        seed_info={
            "master_seed": config.master_seed,
            "replicate": replicate,
            "major_replicate": major_rep,
            "agents": ["major"] + [f"minor_{i}" for i in range(1, N + 1)],
        },
    )


@dataclass(frozen=True)
class MeanFieldPaths:
    """Mean-field limit paths: major state, conditional mean, tagged minor."""

    times: np.ndarray
    major_path: np.ndarray
    cond_mean_path: np.ndarray
    representative_path: np.ndarray


def _mean_field_batch(
    model, strategy, config, replicates, share_common_noise=False, tagged=None
):
    """Vectorized mean-field simulation over a batch of replicates.

    Yields (node_index, X0, Xbar, Xt, a0, a_tagged) with leading batch axis;
    states are the values at that node, controls the feedback evaluated there.
    ``tagged`` optionally replaces the tagged minor's feedback (the population
    and the conditional mean keep following ``strategy``).
    """
    _check_grid(strategy, config.grid)
    grid = config.grid
    dims = model.dims
    dt = grid.dt
    sqdt = np.sqrt(dt)
    gains = _gain_arrays(strategy)
    tg = strategy.minor if tagged is None else tagged
    tg_off = tg.offset.values
    tg_self = tg.gain_self.values
    tg_major = tg.gain_major.values
    tg_mean = tg.gain_mean.values
    reps = np.asarray(replicates, dtype=np.uint64)

    major_reps = np.zeros_like(reps) if share_common_noise else reps
    seeds_major = stream_seed(config.master_seed, 0, major_reps)
    seeds_rep = stream_seed(config.master_seed, 1, reps)

    mean0, cov0 = config.init_major
    meanm, covm = config.init_minor
    X0 = _draw_initial(mean0[None], cov0, seeds_major, dims.d0)
    Xt = _draw_initial(meanm[None], covm, seeds_rep, dims.d)
    Xbar = np.tile(meanm, (reps.size, 1))

    L0T, B0T, F0T = model.L0.T, model.B0.T, model.F0.T
    LT, BT, FT, GT = model.L.T, model.B.T, model.F.T, model.G.T

    def controls(i, X0, Xbar, Xt):
        a0 = gains["off0"][i] + X0 @ gains["g0_major"][i].T + Xbar @ gains["g0_mean"][i].T
        abar = (
            gains["off"][i]
            + Xbar @ gains["g_self"][i].T
            + X0 @ gains["g_major"][i].T
            + Xbar @ gains["g_mean"][i].T
        )
        at = (
            tg_off[i]
            + Xt @ tg_self[i].T
            + X0 @ tg_major[i].T
            + Xbar @ tg_mean[i].T
        )
        return a0, abar, at

    a0, abar, at = controls(0, X0, Xbar, Xt)
    yield 0, X0, Xbar, Xt, a0, at
    for i in range(grid.n_steps):
        drift0 = X0 @ L0T + a0 @ B0T + Xbar @ F0T
        driftbar = Xbar @ LT + abar @ BT + Xbar @ FT + X0 @ GT
        driftt = Xt @ LT + at @ BT + Xbar @ FT + X0 @ GT
        dW0 = sqdt * normals(seeds_major, dims.d0 + i * dims.m0, dims.m0)
        dWt = sqdt * normals(seeds_rep, dims.d + i * dims.m, dims.m)
        X0 = X0 + dt * drift0 + dW0 @ model.D0.T
        Xbar = Xbar + dt * driftbar
        Xt = Xt + dt * driftt + dWt @ model.D.T
        if not (np.all(np.isfinite(X0)) and np.all(np.isfinite(Xt))):
            raise SimulationError(f"non-finite mean-field state at node {i + 1}")
        a0, abar, at = controls(i + 1, X0, Xbar, Xt)
        yield i + 1, X0, Xbar, Xt, a0, at


def simulate_mean_field(
    model: MajorMinorLqModel,
    strategy: FeedbackStrategy,
    config: SimConfig,
    replicate: int = 0,
    share_common_noise: bool = False,
) -> MeanFieldPaths:
    """Simulate (Xbar, X0) of the mean-field limit plus one tagged minor.

    The conditional mean follows its noise-free ODE driven by the major's
    noisy path; the tagged minor (agent stream 1) is an independent copy
    living in that environment.
    """
    grid = config.grid
    dims = model.dims
    nn = grid.n_nodes
    major_path = np.empty((nn, dims.d0))
    cond_mean = np.empty((nn, dims.d))
    rep_path = np.empty((nn, dims.d))
    for i, X0, Xbar, Xt, _, _ in _mean_field_batch(
        model, strategy, config, np.array([replicate]), share_common_noise
    ):
        major_path[i] = X0[0]
        cond_mean[i] = Xbar[0]
        rep_path[i] = Xt[0]
    return MeanFieldPaths(
        times=grid.times(),
        major_path=major_path,
        cond_mean_path=cond_mean,
        representative_path=rep_path,
    )


def simulate_conditional_ensemble(
    model: MajorMinorLqModel,
    strategy: FeedbackStrategy,
    config: SimConfig,
    n_replicates: int,
) -> list:
    """Finite-game replicates sharing one common-noise realization.

    Replicate s reuses the major's replicate-0 stream (same W0 increments and
    major initial state) while the minors draw fresh streams keyed by s.  The
    major's realized path still varies across replicates whenever its dynamics
    or feedback touch the empirical mean; both the common increments and the
    realized paths are recorded in the bundles.
    """
    if n_replicates < 2:
        raise ValueError("a conditional ensemble needs at least 2 replicates")
    return [
        simulate_finite_game(model, strategy, config, replicate=s, share_common_noise=True)
        for s in range(n_replicates)
    ]


def conditional_component_stats(
    model: MajorMinorLqModel,
    strategy: FeedbackStrategy,
    config: SimConfig,
    n_replicates: int,
    n_track: int = 5,
    component: int = 0,
) -> tuple:
    """Cross-replicate moments of tracked minor state components per node.

    Vectorized equivalent of running :func:`simulate_conditional_ensemble`
    and, at every node, accumulating first and second moments (across
    replicates) of state component ``component`` of the first
    min(n_track, N) minors.  Returns (n_replicates, M1, M2) with M1 of shape
    (n_nodes, K) and M2 of shape (n_nodes, K, K).
    """
    if n_replicates < 2:
        raise ValueError("a conditional ensemble needs at least 2 replicates")
    _check_grid(strategy, config.grid)
    grid = config.grid
    dims = model.dims
    N = config.n_minor
    K = min(n_track, N)
    S = n_replicates
    dt = grid.dt
    sqdt = np.sqrt(dt)
    gains = _gain_arrays(strategy)

    seed_major = stream_seed(config.master_seed, 0, 0)
    agents = np.arange(1, N + 1)
    reps = np.arange(S, dtype=np.uint64)
    seeds_minor = stream_seed(config.master_seed, agents[None, :], reps[:, None])

    mean0, cov0 = config.init_major
    meanm, covm = config.init_minor
    X0 = np.tile(_draw_initial(mean0, cov0, seed_major, dims.d0), (S, 1))
    Xm = _draw_initial(meanm[None, None], covm, seeds_minor, dims.d)

    M1 = np.zeros((grid.n_nodes, K))
    M2 = np.zeros((grid.n_nodes, K, K))

    def accumulate(node, Xm):
        v = Xm[:, :K, component]
        M1[node] = v.sum(axis=0)
        M2[node] = v.T @ v

    accumulate(0, Xm)
    L0T, B0T, F0T = model.L0.T, model.B0.T, model.F0.T
    LT, BT, FT, GT = model.L.T, model.B.T, model.F.T, model.G.T
    for i in range(grid.n_steps):
        Xbar = Xm.mean(axis=1)
        a0 = gains["off0"][i] + X0 @ gains["g0_major"][i].T + Xbar @ gains["g0_mean"][i].T
        aM = (
            gains["off"][i]
            + Xm @ gains["g_self"][i].T
            + (X0 @ gains["g_major"][i].T + Xbar @ gains["g_mean"][i].T)[:, None, :]
        )
        drift0 = X0 @ L0T + a0 @ B0T + Xbar @ F0T
        driftM = Xm @ LT + aM @ BT + (Xbar @ FT + X0 @ GT)[:, None, :]
        dW0 = sqdt * normals(seed_major, dims.d0 + i * dims.m0, dims.m0)
        dWm = sqdt * normals(seeds_minor, dims.d + i * dims.m, dims.m)
        X0 = X0 + dt * drift0 + dW0 @ model.D0.T
        Xm = Xm + dt * driftM + dWm @ model.D.T
        if not np.all(np.isfinite(Xm)):
            raise SimulationError(f"non-finite state at node {i + 1}")
        accumulate(i + 1, Xm)
    return S, M1, M2


@dataclass(frozen=True)
class MonteCarloCosts:
    """Sampled expected costs with standard errors."""

    n_replicates: int
    major_mean: float
    major_se: float
    minor_mean: float
    minor_se: float


def monte_carlo_costs(
    model: MajorMinorLqModel,
    strategy: FeedbackStrategy,
    config: SimConfig,
    n_replicates: int,
    deviation: MinorGains | None = None,
    base_replicate: int = 0,
) -> MonteCarloCosts:
    """Monte-Carlo estimates of major and tagged-minor expected costs.

    Simulates the mean-field system (independent common noise per replicate),
    accumulating the running costs with the same trapezoidal quadrature the
    moment-based evaluator uses.  ``deviation`` replaces the tagged minor's
    feedback while the environment stays at ``strategy``.
    """
    grid = config.grid
    reps = np.arange(base_replicate, base_replicate + n_replicates, dtype=np.uint64)
    R = reps.size
    major_acc = np.zeros(R)
    minor_acc = np.zeros(R)
    H0T, HT, H1T = model.H0.T, model.H.T, model.H1.T

    batch = _mean_field_batch(model, strategy, config, reps, tagged=deviation)
    for i, X0, Xbar, Xt, a0, at in batch:
        t = i * grid.dt
        w = grid.dt * (0.5 if i in (0, grid.n_steps) else 1.0)
        e0 = model.eta0_at(t)
        resid0 = X0 - Xbar @ H0T - e0
        major_acc += w * (
            np.einsum("ri,ij,rj->r", resid0, model.Q0, resid0)
            + np.einsum("ri,ij,rj->r", a0, model.R0, a0)
        )
        residm = Xt - X0 @ HT - Xbar @ H1T - model.eta
        minor_acc += w * (
            np.einsum("ri,ij,rj->r", residm, model.Q, residm)
            + np.einsum("ri,ij,rj->r", at, model.R, at)
        )

    def mean_se(x):
        return float(x.mean()), float(x.std(ddof=1) / np.sqrt(x.size))

    mj, mj_se = mean_se(major_acc)
    mn, mn_se = mean_se(minor_acc)
    return MonteCarloCosts(
        n_replicates=n_replicates,
        major_mean=mj,
        major_se=mj_se,
        minor_mean=mn,
        minor_se=mn_se,
    )
