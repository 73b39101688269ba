"""Linear-quadratic major/minor game specification and its block reduction.

The game couples one major player (state X0, dim d0) with a continuum of
minor players (representative state X, dim d) through the conditional mean
Xbar of the minor population.  All solvers work on the reduced state
XX = [Xbar; X0] of dimension n = d + d0; this module builds the block-lifted
drift/control/noise/cost objects of that reduction and the closed-loop
environment matrices induced by affine feedback strategies.

Everything here is purely algebraic and immutable after construction, so
values can be shared freely across concurrent solver calls.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .riccati import MatrixPath, TimeGrid

__all__ = [
    "Dims",
    "MajorMinorLqModel",
    "BlockSystem",
    "ClosedLoopAggregates",
    "ValidationReport",
    "InvalidModelError",
    "validate",
    "require_valid",
    "assemble_blocks",
    "major_environment",
    "full_environment",
    "closed_loop_aggregates",
]

SYM_RTOL = 1e-12  # relative symmetry tolerance for weight matrices


@dataclass(frozen=True)
class Dims:
    """State/control/noise dimensions: major (d0, k0, m0) and minor (d, k, m)."""

    d0: int
    d: int
    k0: int
    k: int
    m0: int
    m: int

    def __post_init__(self):
        for name in ("d0", "d", "k0", "k", "m0", "m"):
            if getattr(self, name) < 1:
                raise ValueError(f"dimension {name} must be >= 1")

    @property
    def n(self) -> int:
        """Reduced state dimension d + d0 (conditional mean stacked over major)."""
        return self.d + self.d0


@dataclass(frozen=True)
class MajorMinorLqModel:
    """Coefficients, cost weights, target maps and horizon of the game.

    Dynamics (mean-field limit):
        dX0 = (L0 X0 + B0 a0 + F0 Xbar) dt + D0 dW0
        dX  = (L X + B a + F Xbar + G X0) dt + D dW
    Running costs:
        major:  (X0 - H0 Xbar - eta0(t))' Q0 (.) + a0' R0 a0
        minor:  (X - H X0 - H1 Xbar - eta)' Q (.) + a' R a

    ``eta0`` may be a constant vector or a function of time; it is normalized
    to a callable.  R0, R must be symmetric positive definite; Q0, Q symmetric
    positive semi-definite.
    """

    dims: Dims
    L0: np.ndarray
    B0: np.ndarray
    F0: np.ndarray
    D0: np.ndarray
    L: np.ndarray
    B: np.ndarray
    F: np.ndarray
    G: np.ndarray
    D: np.ndarray
    Q0: np.ndarray
    Q: np.ndarray
    R0: np.ndarray
    R: np.ndarray
    H0: np.ndarray
    H: np.ndarray
    H1: np.ndarray
    eta0: Callable[[float], np.ndarray] | np.ndarray
    eta: np.ndarray
    T: float

    def __post_init__(self):
        for name in _MATRIX_SHAPES:
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        object.__setattr__(self, "eta", np.asarray(self.eta, dtype=float))
        if not callable(self.eta0):
            const = np.asarray(self.eta0, dtype=float)
            object.__setattr__(self, "eta0", lambda t, _c=const: _c)

    def eta0_at(self, t: float) -> np.ndarray:
        return np.asarray(self.eta0(t), dtype=float)


def _matrix_shapes(dims: Dims) -> dict:
    d0, d, k0, k, m0, m = dims.d0, dims.d, dims.k0, dims.k, dims.m0, dims.m
    return {
        "L0": (d0, d0),
        "B0": (d0, k0),
        "F0": (d0, d),
        "D0": (d0, m0),
        "L": (d, d),
        "B": (d, k),
        "F": (d, d),
        "G": (d, d0),
        "D": (d, m),
        "Q0": (d0, d0),
        "Q": (d, d),
        "R0": (k0, k0),
        "R": (k, k),
        "H0": (d0, d),
        "H": (d, d0),
        "H1": (d, d),
    }


_MATRIX_SHAPES = tuple(_matrix_shapes(Dims(1, 1, 1, 1, 1, 1)))


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        return "valid model" if self.ok else "; ".join(self.violations)


class InvalidModelError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(f"invalid model: {report}")


def _is_symmetric(a: np.ndarray) -> bool:
    scale = max(1.0, float(np.max(np.abs(a))))
    return float(np.max(np.abs(a - a.T))) <= SYM_RTOL * scale


def validate(model: MajorMinorLqModel) -> ValidationReport:
    """Report every violated invariant; an empty report means valid."""
    v = []
    shapes = _matrix_shapes(model.dims)
    for name, shape in shapes.items():
        got = getattr(model, name).shape
        if got != shape:
            v.append(f"{name} has shape {got}, expected {shape}")
    if model.eta.shape != (model.dims.d,):
        v.append(f"eta has shape {model.eta.shape}, expected ({model.dims.d},)")
    if not model.T > 0:
        v.append("T must be positive")
    else:
        for t in (0.0, 0.5 * model.T, model.T):
            e0 = model.eta0_at(t)
            if e0.shape != (model.dims.d0,):
                v.append(f"eta0({t:g}) has shape {e0.shape}, expected ({model.dims.d0},)")
                break
            if not np.all(np.isfinite(e0)):
                v.append(f"eta0({t:g}) is not finite")
                break
    if v:
        return ValidationReport(tuple(v))

    for name in ("Q0", "Q", "R0", "R"):
        if not _is_symmetric(getattr(model, name)):
            v.append(f"{name} not symmetric")
    for name in ("R0", "R"):
        a = getattr(model, name)
        if _is_symmetric(a) and np.min(np.linalg.eigvalsh(0.5 * (a + a.T))) <= 0.0:
            v.append(f"{name} not positive definite")
    for name in ("Q0", "Q"):
        a = getattr(model, name)
        if _is_symmetric(a) and np.min(np.linalg.eigvalsh(0.5 * (a + a.T))) < -1e-12:
            v.append(f"{name} not positive semi-definite")
    return ValidationReport(tuple(v))


def require_valid(model: MajorMinorLqModel) -> MajorMinorLqModel:
    """Validate and return the model with weight matrices exactly symmetrized."""
    report = validate(model)
    if not report.ok:
        raise InvalidModelError(report)
    sym = lambda a: 0.5 * (a + a.T)
    return replace(
        model, Q0=sym(model.Q0), Q=sym(model.Q), R0=sym(model.R0), R=sym(model.R)
    )


@dataclass(frozen=True)
class BlockSystem:
    """Block-lifted objects of the reduced state XX = [Xbar; X0].

    LL0 drives XX, BB0/BB inject major/mean-minor controls, DD0 carries the
    common noise, and (FF0, f0) encode the major's running cost as
    XX' FF0 XX + 2 XX' f0(t) + eta0(t)' Q0 eta0(t).
    """

    n: int
    LL0: np.ndarray
    BB0: np.ndarray
    BB: np.ndarray
    DD0: np.ndarray
    FF0: np.ndarray
    f0: Callable[[float], np.ndarray]


def assemble_blocks(model: MajorMinorLqModel) -> BlockSystem:
    """Build the reduced block system; rejects dimension mismatches by field name."""
    shapes = _matrix_shapes(model.dims)
    for name, shape in shapes.items():
        got = getattr(model, name).shape
        if got != shape:
            raise InvalidModelError(
                ValidationReport((f"{name} has shape {got}, expected {shape}",))
            )
    d, d0 = model.dims.d, model.dims.d0
    n = model.dims.n
    LL0 = np.block([[model.L + model.F, model.G], [model.F0, model.L0]])
    BB0 = np.vstack([np.zeros((d, model.dims.k0)), model.B0])
    BB = np.vstack([model.B, np.zeros((d0, model.dims.k))])
    DD0 = np.vstack([np.zeros((d, model.dims.m0)), model.D0])
    H0Q0 = model.H0.T @ model.Q0
    FF0 = np.block([[H0Q0 @ model.H0, -H0Q0], [-model.Q0 @ model.H0, model.Q0]])
    FF0 = 0.5 * (FF0 + FF0.T)

    def f0(t: float, _H0Q0=H0Q0, _Q0=model.Q0) -> np.ndarray:
        e0 = model.eta0_at(t)
        return np.concatenate([_H0Q0 @ e0, -_Q0 @ e0])

    return BlockSystem(n=n, LL0=LL0, BB0=BB0, BB=BB, DD0=DD0, FF0=FF0, f0=f0)


def _strategy_grid(strategy) -> TimeGrid:
    return strategy.grid


def major_environment(model: MajorMinorLqModel, minor_strategy) -> tuple:
    """Reduced-state drift and offset seen by the major player.

    With the minor population playing the affine feedback ``minor_strategy``,
    XX evolves as dXX = (Lcl0(t) XX + BB0 a0 + Ccl0(t)) dt + DD0 dW0.
    Returns ``(Lcl0, Ccl0)`` as node paths on the strategy's grid.
    """
    grid = _strategy_grid(minor_strategy)
    d, d0 = model.dims.d, model.dims.d0
    n = model.dims.n
    m = minor_strategy.minor
    g_self = m.gain_self.values
    g_mean = m.gain_mean.values
    g_major = m.gain_major.values
    offs = m.offset.values
    nn = grid.n_nodes
    L_env = np.empty((nn, n, n))
    L_env[:, :d, :d] = (model.L + model.F)[None] + np.einsum(
        "ij,tjk->tik", model.B, g_self + g_mean
    )
    L_env[:, :d, d:] = model.G[None] + np.einsum("ij,tjk->tik", model.B, g_major)
    L_env[:, d:, :d] = model.F0[None]
    L_env[:, d:, d:] = model.L0[None]
    C_env = np.zeros((nn, n))
    C_env[:, :d] = offs @ model.B.T
    return MatrixPath(grid, L_env), MatrixPath(grid, C_env)


def full_environment(model: MajorMinorLqModel, major_strategy, minor_strategy) -> tuple:
    """Reduced-state drift and offset with both players' feedbacks applied.

    XX evolves autonomously: dXX = (Lcl(t) XX + Ccl(t)) dt + DD0 dW0.
    """
    if major_strategy.grid.n_steps != minor_strategy.grid.n_steps or not np.isclose(
        major_strategy.grid.horizon, minor_strategy.grid.horizon
    ):
        raise ValueError("major and minor strategies live on different grids")
    Lcl0, Ccl0 = major_environment(model, minor_strategy)
    grid = Lcl0.grid
    d = model.dims.d
    mj = major_strategy.major
    L_env = Lcl0.values.copy()
    L_env[:, d:, :d] += np.einsum("ij,tjk->tik", model.B0, mj.gain_mean.values)
    L_env[:, d:, d:] += np.einsum("ij,tjk->tik", model.B0, mj.gain_major.values)
    C_env = Ccl0.values.copy()
    C_env[:, d:] += mj.offset.values @ model.B0.T
    return MatrixPath(grid, L_env), MatrixPath(grid, C_env)


@dataclass(frozen=True)
class ClosedLoopAggregates:
    """Environment matrices of the closed-loop analysis, grouped.

    Lcl0/Ccl0: major's environment under the minor feedback alone;
    Lcl/Ccl: full equilibrium environment; Lmod: the reduced drift with the
    minor's self-feedback (through its Riccati variable S) absorbed.
    """

    Lcl0: MatrixPath
    Ccl0: MatrixPath
    Lcl: MatrixPath
    Ccl: MatrixPath
    Lmod: MatrixPath


def closed_loop_aggregates(
    model: MajorMinorLqModel, strategy, S: MatrixPath
) -> ClosedLoopAggregates:
    """Assemble all closed-loop environment matrices for a strategy pair.

    ``S`` is the minor player's self-feedback Riccati path (convention with
    gain phi1 = -1/2 R^{-1} B' S, so the absorbed drift term is
    -1/2 B R^{-1} B' S -- invariant under the gain normalization).
    """
    blocks = assemble_blocks(model)
    Lcl0, Ccl0 = major_environment(model, strategy)
    Lcl, Ccl = full_environment(model, strategy, strategy)
    d = model.dims.d
    BRB = model.B @ np.linalg.solve(model.R, model.B.T)
    Lmod = np.tile(blocks.LL0, (S.grid.n_nodes, 1, 1))
    Lmod[:, :d, :d] -= 0.5 * np.einsum("ij,tjk->tik", BRB, S.values)
    return ClosedLoopAggregates(
        Lcl0=Lcl0, Ccl0=Ccl0, Lcl=Lcl, Ccl=Ccl, Lmod=MatrixPath(S.grid, Lmod)
    )
