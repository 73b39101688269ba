"""Exact expected costs for affine strategies, and Nash-gap certification.

Under affine feedback the reduced state and any tagged-along individual state
form a Gaussian linear system, so expected quadratic running costs close at
the level of the first two moments.  Costs are therefore computed from moment
ODEs (no sampling noise), which is what makes the unilateral-deviation checks
sharp enough to certify equilibrium gains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .equilibrium import FeedbackStrategy, MajorGains, MinorGains
from .model import MajorMinorLqModel, full_environment
from .riccati import (
    MatrixPath,
    TimeGrid,
    half_grid_fn,
    half_grid_values,
    integrate_forward_stacked,
    symmetrize,
)

__all__ = [
    "InitialState",
    "MomentPath",
    "NashGapReport",
    "propagate_moments",
    "major_cost",
    "minor_cost",
    "nash_gap",
]


@dataclass(frozen=True)
class InitialState:
    """Initial distribution: minor players i.i.d., major independent of them.

    The reduced state XX0 = [Xbar0; X0_0] gets mean [minor_mean; major_mean]
    and covariance blockdiag(0, major_cov): the conditional mean of the minor
    population at time zero is deterministic when minor initial states are
    i.i.d. with known mean.
    """

    minor_mean: np.ndarray
    minor_cov: np.ndarray
    major_mean: np.ndarray
    major_cov: np.ndarray

    def __post_init__(self):
        for name in ("minor_mean", "minor_cov", "major_mean", "major_cov"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))

    def reduced(self) -> tuple:
        d = self.minor_mean.shape[0]
        d0 = self.major_mean.shape[0]
        mean = np.concatenate([self.minor_mean, self.major_mean])
        cov = np.zeros((d + d0, d + d0))
        cov[d:, d:] = self.major_cov
        return mean, cov

    def joint_with_minor(self) -> tuple:
        """Mean/cov of (Xtilde, XX) for an independent tagged minor."""
        mean_r, cov_r = self.reduced()
        d = self.minor_mean.shape[0]
        n = mean_r.shape[0]
        mean = np.concatenate([self.minor_mean, mean_r])
        cov = np.zeros((d + n, d + n))
        cov[:d, :d] = self.minor_cov
        cov[d:, d:] = cov_r
        return mean, cov

    @staticmethod
    def zero(model: MajorMinorLqModel) -> "InitialState":
        d, d0 = model.dims.d, model.dims.d0
        return InitialState(np.zeros(d), np.zeros((d, d)), np.zeros(d0), np.zeros((d0, d0)))


@dataclass(frozen=True)
class MomentPath:
    """Mean and covariance paths of a linear-Gaussian state."""

    mean: MatrixPath
    cov: MatrixPath

    def min_cov_eigenvalue(self) -> float:
        return float(min(np.min(np.linalg.eigvalsh(c)) for c in self.cov.values))


def propagate_moments(drift, noise: np.ndarray, init: tuple, grid: TimeGrid) -> MomentPath:
    """Propagate (mean, cov) of dx = (A(t) x + c(t)) dt + noise dW forward.

    ``drift(t)`` returns the pair (A(t), c(t)); the covariance solves the
    Lyapunov ODE cov' = A cov + cov A' + noise noise' and is symmetrized each
    step.
    """
    noise = np.asarray(noise, dtype=float)
    NN = noise @ noise.T
    mean0, cov0 = init
    mean0 = np.asarray(mean0, dtype=float)
    cov0 = np.asarray(cov0, dtype=float)

    def rhs(t, state):
        m, C = state
        A, c = drift(t)
        AC = A @ C
        return [A @ m + c, AC + AC.T + NN]

    def project(state):
        state[1] = symmetrize(state[1])
        return state

    mean_n, cov_n = integrate_forward_stacked(
        rhs, [mean0, cov0], grid, project=project, context="moment propagation"
    )
    return MomentPath(mean=MatrixPath(grid, mean_n), cov=MatrixPath(grid, cov_n))


def _env_drift(model, major_strategy, minor_strategy):
    Lcl, Ccl = full_environment(model, major_strategy, minor_strategy)
    grid = Lcl.grid
    L_fn = half_grid_fn(half_grid_values(Lcl.values), grid)
    c_fn = half_grid_fn(half_grid_values(Ccl.values), grid)
    return grid, lambda t: (L_fn(t), c_fn(t))


def _quadratic_expectation(W: np.ndarray, mean: np.ndarray, cov: np.ndarray) -> float:
    # E[(W x)' (W x)] for x ~ N(mean, cov) with W weighting rows.
    return float(np.trace(W @ cov @ W.T)) + float(mean @ W.T @ W @ mean)


def major_cost(
    model: MajorMinorLqModel,
    major_strategy: FeedbackStrategy,
    minor_strategy: FeedbackStrategy,
    init: InitialState,
) -> float:
    """Expected cost of the major player under the given feedback pair.

    Integrates E[XX' FF0 XX + 2 XX' f0 + eta0' Q0 eta0 + a0' R0 a0] over the
    horizon (trapezoidal in time) from the closed-loop moments of XX.
    """
    from .model import assemble_blocks

    blocks = assemble_blocks(model)
    grid, drift = _env_drift(model, major_strategy, minor_strategy)
    moments = propagate_moments(drift, blocks.DD0, init.reduced(), grid)

    d = model.dims.d
    mj = major_strategy.major
    gain_full = np.concatenate([mj.gain_mean.values, mj.gain_major.values], axis=2)
    offs = mj.offset.values
    times = grid.times()
    vals = np.empty(grid.n_nodes)
    for i, t in enumerate(times):
        m = moments.mean.values[i]
        C = moments.cov.values[i]
        f0t = blocks.f0(t)
        e0 = model.eta0_at(t)
        state_term = float(np.sum(blocks.FF0 * C)) + m @ blocks.FF0 @ m
        affine_term = 2.0 * m @ f0t + e0 @ model.Q0 @ e0
        G = gain_full[i]
        abar = offs[i] + G @ m
        ctrl_term = float(np.sum((G.T @ model.R0 @ G) * C)) + abar @ model.R0 @ abar
        vals[i] = state_term + affine_term + ctrl_term
    return float(np.trapezoid(vals, times))


def minor_cost(
    model: MajorMinorLqModel,
    deviation: MinorGains,
    major_strategy: FeedbackStrategy,
    minor_strategy: FeedbackStrategy,
    init: InitialState,
) -> float:
    """Expected cost of a virtual tagged minor playing ``deviation``.

    The environment (XX dynamics) is pinned by (major_strategy,
    minor_strategy); the tagged minor's feedback acts on (Xtilde, X0, Xbar).
    The joint state (Xtilde, XX) is linear-Gaussian, so the cost closes over
    its first two moments.
    """
    Lcl, Ccl = full_environment(model, major_strategy, minor_strategy)
    grid = Lcl.grid
    d, d0 = model.dims.d, model.dims.d0
    n = model.dims.n
    dim = d + n

    # Tagged-minor feedback ordered as (self, mean, major) against (Xt, XX).
    dev_gain = np.concatenate(
        [deviation.gain_self.values, deviation.gain_mean.values, deviation.gain_major.values],
        axis=2,
    )
    A_nodes = np.zeros((grid.n_nodes, dim, dim))
    A_nodes[:, :d, :d] = model.L[None]
    A_nodes[:, :d, d : d + d] = model.F[None]
    A_nodes[:, :d, d + d :] = model.G[None]
    A_nodes[:, :d, :] += np.einsum("ij,tjk->tik", model.B, dev_gain)
    A_nodes[:, d:, d:] = Lcl.values
    c_nodes = np.zeros((grid.n_nodes, dim))
    c_nodes[:, :d] = deviation.offset.values @ model.B.T
    c_nodes[:, d:] = Ccl.values
    A_fn = half_grid_fn(half_grid_values(A_nodes), grid)
    c_fn = half_grid_fn(half_grid_values(c_nodes), grid)

    noise = np.zeros((dim, model.dims.m + model.dims.m0))
    noise[:d, : model.dims.m] = model.D
    noise[d + d :, model.dims.m :] = model.D0

    moments = propagate_moments(
        lambda t: (A_fn(t), c_fn(t)), noise, init.joint_with_minor(), grid
    )

    W = np.zeros((d, dim))
    W[:, :d] = np.eye(d)
    W[:, d : d + d] = -model.H1
    W[:, d + d :] = -model.H
    times = grid.times()
    vals = np.empty(grid.n_nodes)
    for i in range(grid.n_nodes):
        m = moments.mean.values[i]
        C = moments.cov.values[i]
        track = W @ m - model.eta
        WQW = W.T @ model.Q @ W
        state_term = float(np.sum(WQW * C)) + track @ model.Q @ track
        G = dev_gain[i]
        abar = deviation.offset.values[i] + G @ m
        ctrl_term = float(np.sum((G.T @ model.R @ G) * C)) + abar @ model.R @ abar
        vals[i] = state_term + ctrl_term
    return float(np.trapezoid(vals, times))


@dataclass(frozen=True)
class NashGapReport:
    """Central-difference optimality profile along random gain perturbations."""

    player: str
    epsilon: float
    baseline: float
    first_derivatives: tuple
    second_differences: tuple

    @property
    def max_relative_first_derivative(self) -> float:
        scale = max(1.0, abs(self.baseline))
        return max(abs(g) for g in self.first_derivatives) / scale

    def to_dict(self) -> dict:
        return {
            "player": self.player,
            "epsilon": self.epsilon,
            "baseline_cost": self.baseline,
            "first_derivatives": list(self.first_derivatives),
            "second_differences": list(self.second_differences),
            "max_relative_first_derivative": self.max_relative_first_derivative,
        }


def _random_major_direction(model, rng) -> dict:
    d0, d, k0 = model.dims.d0, model.dims.d, model.dims.k0
    parts = {
        "offset": rng.normal(size=k0),
        "gain_major": rng.normal(size=(k0, d0)),
        "gain_mean": rng.normal(size=(k0, d)),
    }
    top = max(np.max(np.abs(v)) for v in parts.values())
    return {k: v / top for k, v in parts.items()}


def _random_minor_direction(model, rng) -> dict:
    d0, d, k = model.dims.d0, model.dims.d, model.dims.k
    parts = {
        "offset": rng.normal(size=k),
        "gain_self": rng.normal(size=(k, d)),
        "gain_major": rng.normal(size=(k, d0)),
        "gain_mean": rng.normal(size=(k, d)),
    }
    top = max(np.max(np.abs(v)) for v in parts.values())
    return {k: v / top for k, v in parts.items()}


def _shift_major(strategy: FeedbackStrategy, direction: dict, eps: float) -> FeedbackStrategy:
    grid = strategy.grid
    mj = strategy.major
    shifted = MajorGains(
        offset=MatrixPath(grid, mj.offset.values + eps * direction["offset"]),
        gain_major=MatrixPath(grid, mj.gain_major.values + eps * direction["gain_major"]),
        gain_mean=MatrixPath(grid, mj.gain_mean.values + eps * direction["gain_mean"]),
    )
    return FeedbackStrategy(grid=grid, major=shifted, minor=strategy.minor)


def _shift_minor_gains(gains: MinorGains, grid, direction: dict, eps: float) -> MinorGains:
    return MinorGains(
        offset=MatrixPath(grid, gains.offset.values + eps * direction["offset"]),
        gain_self=MatrixPath(grid, gains.gain_self.values + eps * direction["gain_self"]),
        gain_major=MatrixPath(grid, gains.gain_major.values + eps * direction["gain_major"]),
        gain_mean=MatrixPath(grid, gains.gain_mean.values + eps * direction["gain_mean"]),
    )


def nash_gap(
    model: MajorMinorLqModel,
    strategy: FeedbackStrategy,
    player: str,
    init: InitialState,
    n_directions: int = 5,
    epsilon: float = 1e-3,
    seed: int = 0,
) -> NashGapReport:
    """Probe unilateral deviations of one player around a candidate equilibrium.

    For each seeded random sup-norm-1 direction, perturbs that player's gains
    by +/- epsilon (the other player's strategy and, for a minor deviation,
    the population environment stay fixed) and reports the central first
    derivative and second difference of the expected cost.   At an
    equilibrium the first derivatives vanish to solver precision and the
    second differences are nonnegative.
    """
    if player not in ("major", "minor"):
        raise ValueError("player must be 'major' or 'minor'")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    rng = np.random.default_rng(seed)
    first, second = [], []
    if player == "major":
        baseline = major_cost(model, strategy, strategy, init)
        for _ in range(n_directions):
            direction = _random_major_direction(model, rng)
            j_plus = major_cost(model, _shift_major(strategy, direction, epsilon), strategy, init)
            j_minus = major_cost(model, _shift_major(strategy, direction, -epsilon), strategy, init)
            first.append((j_plus - j_minus) / (2.0 * epsilon))
            second.append(j_plus - 2.0 * baseline + j_minus)
    else:
        baseline = minor_cost(model, strategy.minor, strategy, strategy, init)
        for _ in range(n_directions):
            direction = _random_minor_direction(model, rng)
            dev_plus = _shift_minor_gains(strategy.minor, strategy.grid, direction, epsilon)
            dev_minus = _shift_minor_gains(strategy.minor, strategy.grid, direction, -epsilon)
            j_plus = minor_cost(model, dev_plus, strategy, strategy, init)
            j_minus = minor_cost(model, dev_minus, strategy, strategy, init)
            first.append((j_plus - j_minus) / (2.0 * epsilon))
            second.append(j_plus - 2.0 * baseline + j_minus)
    return NashGapReport(
        player=player,
        epsilon=epsilon,
        baseline=baseline,
        first_derivatives=tuple(first),
        second_differences=tuple(second),
    )
