"""Best responses and Nash equilibria for the major/minor LQ game.

All adjoint/Riccati systems use one self-consistent Pontryagin normalization:
optimal controls are a0 = -1/2 R0^{-1} BB0' y and a = -1/2 R^{-1} B' y, the
adjoint drivers carry 2*FF0, 2*f0, 2*Q, and the forward drifts carry
-1/2 BB0 R0^{-1} BB0' y and -1/2 B R^{-1} B' y.  The observable gain paths are
invariant under rescaling this convention (halving the Riccati variables and
doubling the gain map gives the same gains); the ``half_convention`` switch on
the best responses exists to verify exactly that.

Both best responses are computed as a single symmetric matrix Riccati solve on
the state augmented by a constant component equal to 1: the augmented Riccati
variable's off-diagonal column is precisely the linear adjoint term, so the
quadratic and affine backward equations are integrated jointly with shared
Runge-Kutta stages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    MajorMinorLqModel,
    assemble_blocks,
    full_environment,
    major_environment,
    require_valid,
)
from .riccati import (
    BlowUpError,
    MatrixPath,
    TimeGrid,
    half_grid_fn,
    half_grid_values,
    integrate_backward_stacked,
    solve_symmetric_riccati,
    symmetrize,
)

__all__ = [
    "MajorGains",
    "MinorGains",
    "FeedbackStrategy",
    "MajorBestResponse",
    "MinorBestResponse",
    "ClosedLoopSolution",
    "OpenLoopSolution",
    "IterationResult",
    "EquilibriumError",
    "major_best_response",
    "minor_best_response",
    "solve_closed_loop",
    "solve_open_loop",
    "best_response_iteration",
    "fixed_point_residual",
    "zero_strategy",
]


class EquilibriumError(RuntimeError):
    """An equilibrium system blew up before reaching t = 0."""


@dataclass(frozen=True)
class MajorGains:
    """Major player's affine feedback a0(t, X0, Xbar) = offset + gain_major X0 + gain_mean Xbar."""

    offset: MatrixPath
    gain_major: MatrixPath
    gain_mean: MatrixPath

    def components(self) -> dict:
        return {
            "offset": self.offset,
            "gain_major": self.gain_major,
            "gain_mean": self.gain_mean,
        }


@dataclass(frozen=True)
class MinorGains:
    """Minor player's affine feedback a(t, X, X0, Xbar) = offset + gain_self X + gain_major X0 + gain_mean Xbar."""

    offset: MatrixPath
    gain_self: MatrixPath
    gain_major: MatrixPath
    gain_mean: MatrixPath

    def components(self) -> dict:
        return {
            "offset": self.offset,
            "gain_self": self.gain_self,
            "gain_major": self.gain_major,
            "gain_mean": self.gain_mean,
        }


@dataclass(frozen=True)
class FeedbackStrategy:
    """Time-varying affine gains for both player types on one shared grid."""

    grid: TimeGrid
    major: MajorGains
    minor: MinorGains

    def sup_distance(self, other: "FeedbackStrategy") -> float:
        """Sup over grid nodes and gain components of the entrywise gap."""
        gap = 0.0
        for mine, theirs in (
            (self.major.components(), other.major.components()),
            (self.minor.components(), other.minor.components()),
        ):
            for name, path in mine.items():
                gap = max(gap, float(np.max(np.abs(path.values - theirs[name].values))))
        return gap

    def to_dict(self) -> dict:
        return {
            "major": {k: p.values.tolist() for k, p in self.major.components().items()},
            "minor": {k: p.values.tolist() for k, p in self.minor.components().items()},
        }


def zero_strategy(model: MajorMinorLqModel, grid: TimeGrid) -> FeedbackStrategy:
    d0, d, k0, k = model.dims.d0, model.dims.d, model.dims.k0, model.dims.k
    nn = grid.n_nodes
    zp = lambda *shape: MatrixPath(grid, np.zeros((nn,) + shape))
    return FeedbackStrategy(
        grid=grid,
        major=MajorGains(offset=zp(k0), gain_major=zp(k0, d0), gain_mean=zp(k0, d)),
        minor=MinorGains(
            offset=zp(k), gain_self=zp(k, d), gain_major=zp(k, d0), gain_mean=zp(k, d)
        ),
    )


def _scales(half_convention: bool) -> tuple:
    # (adjoint driver, quadratic drift, gain map) prefactors.
    return (2.0, 0.5, 0.5) if half_convention else (1.0, 1.0, 1.0)


def _major_gains_from(model, grid, K_nodes, k_nodes, gain_scale) -> MajorGains:
    d = model.dims.d
    blocks_B0T = np.hstack([np.zeros((model.dims.k0, d)), model.B0.T])  # BB0'
    R0inv_B0T = np.linalg.solve(model.R0, blocks_B0T)
    G = -gain_scale * np.einsum("ij,tjk->tik", R0inv_B0T, K_nodes)
    offset = -gain_scale * k_nodes @ R0inv_B0T.T
    return MajorGains(
        offset=MatrixPath(grid, offset),
        gain_major=MatrixPath(grid, G[:, :, d:]),
        gain_mean=MatrixPath(grid, G[:, :, :d]),
    )


def _minor_gains_from(model, grid, S_nodes, SS_nodes, s_nodes, gain_scale) -> MinorGains:
    d = model.dims.d
    Rinv_BT = np.linalg.solve(model.R, model.B.T)
    g_self = -gain_scale * np.einsum("ij,tjk->tik", Rinv_BT, S_nodes)
    G = -gain_scale * np.einsum("ij,tjk->tik", Rinv_BT, SS_nodes)
    offset = -gain_scale * s_nodes @ Rinv_BT.T
    return MinorGains(
        offset=MatrixPath(grid, offset),
        gain_self=MatrixPath(grid, g_self),
        gain_major=MatrixPath(grid, G[:, :, d:]),
        gain_mean=MatrixPath(grid, G[:, :, :d]),
    )


@dataclass(frozen=True)
class MajorBestResponse:
    K: MatrixPath
    k: MatrixPath
    gains: MajorGains


@dataclass(frozen=True)
class MinorBestResponse:
    S: MatrixPath
    SS: MatrixPath
    s: MatrixPath
    gains: MinorGains


def major_best_response(
    model: MajorMinorLqModel,
    minor_strategy: FeedbackStrategy,
    half_convention: bool = True,
) -> MajorBestResponse:
    """Major player's optimal feedback against a fixed minor-population feedback.

    Solves the backward system (with Lcl0, Ccl0 the environment under the
    minor feedback)

        K' + K Lcl0 + Lcl0' K - 1/2 K BB0 R0^{-1} BB0' K + 2 FF0 = 0, K(T) = 0
        k' + (Lcl0' - 1/2 K BB0 R0^{-1} BB0') k + K Ccl0 + 2 f0(t) = 0, k(T) = 0

    and returns the gains [gain_mean, gain_major] = -1/2 R0^{-1} BB0' K and
    offset = -1/2 R0^{-1} BB0' k.
    """
    driver, quad, gain = _scales(half_convention)
    grid = minor_strategy.grid
    blocks = assemble_blocks(model)
    n = blocks.n
    Lcl0, Ccl0 = major_environment(model, minor_strategy)

    A_nodes = np.zeros((grid.n_nodes, n + 1, n + 1))
    A_nodes[:, :n, :n] = Lcl0.values
    A_nodes[:, :n, n] = Ccl0.values
    A_fn = half_grid_fn(half_grid_values(A_nodes), grid)

    B0aug = np.vstack([blocks.BB0, np.zeros((1, model.dims.k0))])
    Mquad = quad * (B0aug @ np.linalg.solve(model.R0, B0aug.T))

    # Cost block on the half grid; f0 and eta0 are evaluated analytically.
    half_times = np.linspace(0.0, grid.horizon, 2 * grid.n_steps + 1)
    C_half = np.zeros((half_times.size, n + 1, n + 1))
    C_half[:, :n, :n] = driver * blocks.FF0
    Q0 = model.Q0
    for j, t in enumerate(half_times):
        f0t = blocks.f0(t)
        e0 = model.eta0_at(t)
        C_half[j, :n, n] = driver * f0t
        C_half[j, n, :n] = driver * f0t
        C_half[j, n, n] = driver * float(e0 @ Q0 @ e0)
    C_fn = half_grid_fn(C_half, grid)

    theta = solve_symmetric_riccati(
        A_fn, Mquad, C_fn, grid, context="major best response"
    )
    K_nodes = theta.values[:, :n, :n]
    k_nodes = theta.values[:, :n, n]
    return MajorBestResponse(
        K=MatrixPath(grid, K_nodes),
        k=MatrixPath(grid, k_nodes),
        gains=_major_gains_from(model, grid, K_nodes, k_nodes, gain),
    )


def minor_best_response(
    model: MajorMinorLqModel,
    major_strategy: FeedbackStrategy,
    minor_strategy: FeedbackStrategy,
    half_convention: bool = True,
) -> MinorBestResponse:
    """Virtual minor player's optimal feedback in a fixed environment.

    The environment (Lcl, Ccl) is generated by the major feedback and the
    feedback of the minor field.  Solves, jointly,

        S'  + S L + L' S - 1/2 S B R^{-1} B' S + 2 Q = 0
        SS' + SS Lcl + L' SS - 1/2 S B R^{-1} B' SS + S [F, G] - 2 Q [H1, H] = 0
        s'  + (L' - 1/2 S B R^{-1} B') s + SS Ccl - 2 Q eta = 0

    with zero terminal conditions.  S is independent of both input strategies.
    """
    driver, quad, gain = _scales(half_convention)
    grid = minor_strategy.grid
    d, d0 = model.dims.d, model.dims.d0
    n = model.dims.n
    dim = d + n + 1
    Lcl, Ccl = full_environment(model, major_strategy, minor_strategy)

    A_nodes = np.zeros((grid.n_nodes, dim, dim))
    A_nodes[:, :d, :d] = model.L[None]
    A_nodes[:, :d, d : d + d] = model.F[None]
    A_nodes[:, :d, d + d : d + n] = model.G[None]
    A_nodes[:, d : d + n, d : d + n] = Lcl.values
    A_nodes[:, d : d + n, dim - 1] = Ccl.values
    A_fn = half_grid_fn(half_grid_values(A_nodes), grid)

    Baug = np.vstack([model.B, np.zeros((n + 1, model.dims.k))])
    Mquad = quad * (Baug @ np.linalg.solve(model.R, Baug.T))

    V = np.zeros((d, dim))
    V[:, :d] = np.eye(d)
    V[:, d : d + d] = -model.H1
    V[:, d + d : d + n] = -model.H
    V[:, dim - 1] = -model.eta
    C_const = driver * (V.T @ model.Q @ V)

    theta = solve_symmetric_riccati(
        A_fn, Mquad, C_const, grid, context="minor best response"
    )
    S_nodes = theta.values[:, :d, :d]
    SS_nodes = theta.values[:, :d, d : d + n]
    s_nodes = theta.values[:, :d, dim - 1]
    return MinorBestResponse(
        S=MatrixPath(grid, S_nodes),
        SS=MatrixPath(grid, SS_nodes),
        s=MatrixPath(grid, s_nodes),
        gains=_minor_gains_from(model, grid, S_nodes, SS_nodes, s_nodes, gain),
    )


def fixed_point_residual(model: MajorMinorLqModel, strategy: FeedbackStrategy) -> float:
    """Sup-norm gap between a strategy and its (joint) best-response image."""
    br_major = major_best_response(model, strategy)
    br_minor = minor_best_response(model, strategy, strategy)
    image = FeedbackStrategy(grid=strategy.grid, major=br_major.gains, minor=br_minor.gains)
    return strategy.sup_distance(image)


@dataclass(frozen=True)
class ClosedLoopSolution:
    """Closed-loop Nash equilibrium: Riccati paths, gains, and its residual."""

    K: MatrixPath
    k: MatrixPath
    S: MatrixPath
    SS: MatrixPath
    s: MatrixPath
    strategy: FeedbackStrategy
    residual: float
    polish_iterations: int
    polish_correction: float


def _direct_closed_loop_paths(model: MajorMinorLqModel, grid: TimeGrid) -> tuple:
    """One stacked backward pass of the substituted coupled system.

    The stack is block-triangular (S alone; then K and SS mutually coupled;
    then k and s), so this single pass reproduces the staged solve S first,
    (K, SS) jointly, (k, s) jointly, with shared Runge-Kutta stages.
    """
    blocks = assemble_blocks(model)
    d, d0 = model.dims.d, model.dims.d0
    n = blocks.n
    L, F, G, F0, L0 = model.L, model.F, model.G, model.F0, model.L0
    LT = L.T
    BRB = model.B @ np.linalg.solve(model.R, model.B.T)
    B0R0B0 = blocks.BB0 @ np.linalg.solve(model.R0, blocks.BB0.T)
    FG = np.hstack([F, G])
    QH1H = model.Q @ np.hstack([model.H1, model.H])
    Qeta = model.Q @ model.eta
    twoQ = 2.0 * model.Q
    twoFF0 = 2.0 * blocks.FF0
    f0 = blocks.f0

    def rhs(t, state):
        S, K, SS, k, s = state
        SBRB = S @ BRB
        # Environment with the fixed-point gain identities substituted.
        Lcl0 = np.empty((n, n))
        Lcl0[:d, :d] = L + F - 0.5 * BRB @ (S + SS[:, :d])
        Lcl0[:d, d:] = G - 0.5 * BRB @ SS[:, d:]
        Lcl0[d:, :d] = F0
        Lcl0[d:, d:] = L0
        Lcl = Lcl0 - 0.5 * B0R0B0 @ K
        c0 = np.concatenate([-0.5 * BRB @ s, np.zeros(d0)])
        c = c0 - 0.5 * B0R0B0 @ k
        Sdot = -(S @ L + LT @ S - 0.5 * SBRB @ S + twoQ)
        Kdot = -(K @ Lcl0 + Lcl0.T @ K - 0.5 * K @ B0R0B0 @ K + twoFF0)
        SSdot = -(SS @ Lcl + LT @ SS - 0.5 * SBRB @ SS + S @ FG - 2.0 * QH1H)
        kdot = -(Lcl0.T @ k - 0.5 * K @ (B0R0B0 @ k) + K @ c0 + 2.0 * f0(t))
        sdot = -(LT @ s - 0.5 * SBRB @ s + SS @ c - 2.0 * Qeta)
        return [Sdot, Kdot, SSdot, kdot, sdot]

    def project(state):
        state[0] = symmetrize(state[0])
        state[1] = symmetrize(state[1])
        return state

    terminals = [
        np.zeros((d, d)),
        np.zeros((n, n)),
        np.zeros((d, n)),
        np.zeros(n),
        np.zeros(d),
    ]
    return integrate_backward_stacked(
        rhs, terminals, grid, project=project, context="closed-loop coupled system"
    )


def solve_closed_loop(
    model: MajorMinorLqModel,
    grid: TimeGrid,
    polish: bool = True,
    polish_tol: float = 1e-9,
    max_polish: int = 60,
) -> ClosedLoopSolution:
    """Closed-loop Nash equilibrium in the affine feedback class.

    First integrates the substituted coupled Riccati/linear system directly
    (S first, then K and SS jointly, then k and s jointly, via one stacked
    backward pass).  The direct paths sample couplings at internal
    Runge-Kutta stages while the best-response map samples solved gain paths
    by node interpolation, so the direct strategy sits a discretization-level
    distance from the fixed point of the discrete best-response map; the
    polish phase closes that gap by applying the best-response map until the
    strategy is stationary, making the reported residual meaningful at any
    grid resolution.
    """
    model = require_valid(model)
    try:
        S_n, K_n, SS_n, k_n, s_n = _direct_closed_loop_paths(model, grid)
    except BlowUpError as err:
        raise EquilibriumError(
            f"closed-loop equilibrium does not exist on [0, {model.T:g}] at this "
            f"horizon: coupled Riccati system blew up at t = {err.time:.6g}"
        ) from err
    strategy = FeedbackStrategy(
        grid=grid,
        major=_major_gains_from(model, grid, K_n, k_n, 0.5),
        minor=_minor_gains_from(model, grid, S_n, SS_n, s_n, 0.5),
    )
    K_path, k_path = MatrixPath(grid, K_n), MatrixPath(grid, k_n)
    S_path, SS_path, s_path = (
        MatrixPath(grid, S_n),
        MatrixPath(grid, SS_n),
        MatrixPath(grid, s_n),
    )

    direct_strategy = strategy
    iterations = 0
    if polish:
        try:
            for iterations in range(1, max_polish + 1):
                br_major = major_best_response(model, strategy)
                br_minor = minor_best_response(model, strategy, strategy)
                updated = FeedbackStrategy(
                    grid=grid, major=br_major.gains, minor=br_minor.gains
                )
                change = strategy.sup_distance(updated)
                strategy = updated
                K_path, k_path = br_major.K, br_major.k
                S_path, SS_path, s_path = br_minor.S, br_minor.SS, br_minor.s
                if change <= polish_tol:
                    break
        except BlowUpError as err:
            raise EquilibriumError(
                f"closed-loop equilibrium does not exist on [0, {model.T:g}] at "
                f"this horizon: best response blew up at t = {err.time:.6g}"
            ) from err

    return ClosedLoopSolution(
        K=K_path,
        k=k_path,
        S=S_path,
        SS=SS_path,
        s=s_path,
        strategy=strategy,
        residual=fixed_point_residual(model, strategy),
        polish_iterations=iterations,
        polish_correction=direct_strategy.sup_distance(strategy),
    )


@dataclass(frozen=True)
class IterationResult:
    strategy: FeedbackStrategy
    changes: tuple
    converged: bool


def best_response_iteration(
    model: MajorMinorLqModel,
    initial: FeedbackStrategy,
    max_iter: int = 50,
    tol: float = 1e-8,
    damping: float = 1.0,
) -> IterationResult:
    """Iterate the joint best-response map from ``initial`` until stationary.

    Each sweep replaces both players' gains simultaneously (optionally damped
    by ``damping`` in (0, 1]); the history of sup-norm gain changes is
    returned, and failure to converge within ``max_iter`` is reported through
    the ``converged`` flag rather than raised.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not 0 < damping <= 1:
        raise ValueError("damping must be in (0, 1]")
    model = require_valid(model)
    strategy = initial
    changes = []
    for _ in range(max_iter):
        br_major = major_best_response(model, strategy)
        br_minor = minor_best_response(model, strategy, strategy)
        image = FeedbackStrategy(grid=strategy.grid, major=br_major.gains, minor=br_minor.gains)
        if damping < 1.0:
            image = _blend(strategy, image, damping)
        change = strategy.sup_distance(image)
        changes.append(change)
        strategy = image
        if change <= tol:
            return IterationResult(strategy, tuple(changes), True)
    return IterationResult(strategy, tuple(changes), False)


def _blend(old: FeedbackStrategy, new: FeedbackStrategy, theta: float) -> FeedbackStrategy:
    mix = lambda a, b: MatrixPath(old.grid, (1.0 - theta) * a.values + theta * b.values)
    return FeedbackStrategy(
        grid=old.grid,
        major=MajorGains(
            offset=mix(old.major.offset, new.major.offset),
            gain_major=mix(old.major.gain_major, new.major.gain_major),
            gain_mean=mix(old.major.gain_mean, new.major.gain_mean),
        ),
        minor=MinorGains(
            offset=mix(old.minor.offset, new.minor.offset),
            gain_self=mix(old.minor.gain_self, new.minor.gain_self),
            gain_major=mix(old.minor.gain_major, new.minor.gain_major),
            gain_mean=mix(old.minor.gain_mean, new.minor.gain_mean),
        ),
    )


@dataclass(frozen=True)
class OpenLoopSolution:
    """Open-loop equilibrium from the affine decoupling of the reduced FBSDE.

    P maps the reduced state XX to the stacked adjoints [YY; Ybar] (so P has
    2d + d0 rows), p is the affine part, and (S, SS, s) decouple the
    individual minor's adjoint along the equilibrium XX dynamics.
    ``consistency_error`` is the sup-norm defect of the identity
    S [I, 0] + SS = (Ybar rows of P) and s = (Ybar rows of p).
    """

    P: MatrixPath
    p: MatrixPath
    S: MatrixPath
    SS: MatrixPath
    s: MatrixPath
    consistency_error: float
    strategy: FeedbackStrategy


def solve_open_loop(model: MajorMinorLqModel, grid: TimeGrid) -> OpenLoopSolution:
    """Open-loop Nash equilibrium via the non-symmetric Riccati decoupling.

    Solves, in one stacked backward pass,

        P' + P LL0 - P M P + A P + C = 0,   P(T) = 0
        p' + (A - P M) p + c(t) = 0,        p(T) = 0

    with M = [1/2 BB0 R0^{-1} BB0', 1/2 BB R^{-1} B'], A = diag(LL0', L'),
    C = [2 FF0; 2([Q, 0] - Q [H1, H])], c = [2 f0(t); -2 Q eta], followed by
    the individual-minor decoupling (S, SS, s) along the equilibrium XX
    dynamics (drift LL0 - M P, forcing -M p).  The returned strategy is the
    equilibrium control expressed through the decoupling fields.
    """
    model = require_valid(model)
    blocks = assemble_blocks(model)
    d, d0 = model.dims.d, model.dims.d0
    n = blocks.n
    L = model.L
    LT = L.T
    BRB = model.B @ np.linalg.solve(model.R, model.B.T)
    BB_RBT = blocks.BB @ np.linalg.solve(model.R, model.B.T)  # n x d
    B0R0B0 = blocks.BB0 @ np.linalg.solve(model.R0, blocks.BB0.T)
    M = np.hstack([0.5 * B0R0B0, 0.5 * BB_RBT])  # n x (n + d)
    A_blk = np.zeros((n + d, n + d))
    A_blk[:n, :n] = blocks.LL0.T
    A_blk[n:, n:] = LT
    C_blk = np.vstack(
        [
            2.0 * blocks.FF0,
            2.0 * (np.hstack([model.Q, np.zeros((d, d0))]) - model.Q @ np.hstack([model.H1, model.H])),
        ]
    )
    FG = np.hstack([model.F, model.G])
    QH1H = model.Q @ np.hstack([model.H1, model.H])
    Qeta = model.Q @ model.eta
    twoQ = 2.0 * model.Q
    f0 = blocks.f0

    def cvec(t):
        return np.concatenate([2.0 * f0(t), -2.0 * Qeta])

    def rhs(t, state):
        P, p, S, SS, s = state
        MP = M @ P
        SBRB = S @ BRB
        Pdot = -(P @ blocks.LL0 - P @ MP + A_blk @ P + C_blk)
        pdot = -(A_blk @ p - P @ (M @ p) + cvec(t))
        drift = blocks.LL0 - MP
        force = -(M @ p)
        Sdot = -(S @ L + LT @ S - 0.5 * SBRB @ S + twoQ)
        SSdot = -(SS @ drift + LT @ SS - 0.5 * SBRB @ SS + S @ FG - 2.0 * QH1H)
        sdot = -(LT @ s - 0.5 * SBRB @ s + SS @ force - 2.0 * Qeta)
        return [Pdot, pdot, Sdot, SSdot, sdot]

    def project(state):
        state[2] = symmetrize(state[2])
        return state

    terminals = [
        np.zeros((n + d, n)),
        np.zeros(n + d),
        np.zeros((d, d)),
        np.zeros((d, n)),
        np.zeros(d),
    ]
    try:
        P_n, p_n, S_n, SS_n, s_n = integrate_backward_stacked(
            rhs, terminals, grid, project=project, context="open-loop decoupling"
        )
    except BlowUpError as err:
        raise EquilibriumError(
            f"open-loop equilibrium FBSDE decoupling failed: non-symmetric "
            f"Riccati system blew up at t = {err.time:.6g}"
        ) from err

    # Conditional-expectation identity: E[Ytilde | common noise] = Ybar.
    S_pad = np.concatenate([S_n, np.zeros((grid.n_nodes, d, d0))], axis=2)
    gap_matrix = np.max(np.abs(S_pad + SS_n - P_n[:, n:, :]))
    gap_vector = np.max(np.abs(s_n - p_n[:, n:]))
    consistency = float(max(gap_matrix, gap_vector))

    strategy = FeedbackStrategy(
        grid=grid,
        major=_major_gains_from(model, grid, P_n[:, :n, :], p_n[:, :n], 0.5),
        minor=_minor_gains_from(model, grid, S_n, SS_n, s_n, 0.5),
    )
    return OpenLoopSolution(
        P=MatrixPath(grid, P_n),
        p=MatrixPath(grid, p_n),
        S=MatrixPath(grid, S_n),
        SS=MatrixPath(grid, SS_n),
        s=MatrixPath(grid, s_n),
        consistency_error=consistency,
        strategy=strategy,
    )
