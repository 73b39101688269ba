"""Fixed-step integration of matrix-valued ODEs on a uniform time grid.

Everything downstream (best responses, moment propagation, simulation) shares
one grid, so couplings between solved paths never cross grids.  Paths are
evaluated between nodes by linear interpolation; integration marches with
classical 4-stage Runge-Kutta steps (an explicit Euler switch is kept for
replication runs).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TimeGrid",
    "MatrixPath",
    "BlowUpError",
    "integrate_backward",
    "integrate_forward",
    "integrate_backward_stacked",
    "integrate_forward_stacked",
    "solve_symmetric_riccati",
    "solve_linear_matrix_ode",
    "as_time_fn",
    "half_grid_values",
    "half_grid_fn",
    "symmetrize",
]

#: Any path entry beyond this magnitude is treated as a Riccati blow-up.
MAX_MAGNITUDE = 1e12


class BlowUpError(RuntimeError):
    """Raised when an integration produces non-finite or exploding values."""

    def __init__(self, time: float, context: str = ""):
        self.time = float(time)
        self.context = context
        where = f" in {context}" if context else ""
        super().__init__(
            f"integration blew up{where}: non-finite or > {MAX_MAGNITUDE:.0e} "
            f"entry at t = {self.time:.6g}"
        )


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_i = i * dt, i = 0..n_steps, with dt = horizon / n_steps."""

    horizon: float
    n_steps: int

    def __post_init__(self):
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if self.n_steps < 2:
            raise ValueError("n_steps must be at least 2")

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    @property
    def n_nodes(self) -> int:
        return self.n_steps + 1

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.n_nodes)


class MatrixPath:
    """One array value per grid node; linear interpolation between nodes.

    ``values`` has shape (n_nodes, *entry_shape) where entry_shape is the
    shape of a single node value (matrix, vector or scalar).  Instances are
    treated as immutable once constructed.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: TimeGrid, values: np.ndarray):
        values = np.asarray(values, dtype=float)
        if values.shape[0] != grid.n_nodes:
            raise ValueError(
                f"expected {grid.n_nodes} node values, got {values.shape[0]}"
            )
        self.grid = grid
        self.values = values

    @property
    def entry_shape(self) -> tuple:
        return self.values.shape[1:]

    def at(self, t: float) -> np.ndarray:
        """Value at time t by linear interpolation (clamped to [0, T])."""
        dt = self.grid.dt
        x = t / dt
        if x <= 0.0:
            return self.values[0]
        if x >= self.grid.n_steps:
            return self.values[-1]
        i = int(x)
        w = x - i
        return (1.0 - w) * self.values[i] + w * self.values[i + 1]

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return self.grid.n_nodes

    def to_csv(self, path) -> None:
        """Write one row per node: t, entries in row-major order."""
        times = self.grid.times()
        flat = self.values.reshape(self.grid.n_nodes, -1)
        with open(path, "w") as fh:
            ncols = flat.shape[1]
            header = ["t"] + [f"x{j}" for j in range(ncols)]
            fh.write(",".join(header) + "\n")
            for t, row in zip(times, flat):
                fh.write(",".join(repr(float(v)) for v in [t, *row]) + "\n")


def as_time_fn(arg):
    """Wrap a constant array as a function of time; pass callables through."""
    if callable(arg):
        return arg
    const = np.asarray(arg, dtype=float)
    return lambda t: const


def half_grid_values(node_values: np.ndarray) -> np.ndarray:
    """Interleave node values with midpoint averages (linear interpolation).

    Fixed-step RK4 only ever samples coefficients at nodes and midpoints, so
    presampling a path on the half grid reproduces its linear interpolant
    exactly while turning every evaluation into an index lookup.
    """
    node_values = np.asarray(node_values, dtype=float)
    n_nodes = node_values.shape[0]
    out = np.empty((2 * n_nodes - 1,) + node_values.shape[1:])
    out[0::2] = node_values
    out[1::2] = 0.5 * (node_values[:-1] + node_values[1:])
    return out


def half_grid_fn(half_values: np.ndarray, grid: TimeGrid):
    """Time function indexing an array sampled on the half grid of ``grid``."""
    inv = 2.0 / grid.dt
    top = half_values.shape[0] - 1

    def fn(t: float) -> np.ndarray:
        j = int(t * inv + 0.5)
        if j < 0:
            j = 0
        elif j > top:
            j = top
        return half_values[j]

    return fn


def symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def _check_state(values, t: float, context: str) -> None:
    for v in values:
        if not np.all(np.isfinite(v)) or np.max(np.abs(v)) > MAX_MAGNITUDE:
            raise BlowUpError(t, context)


def _step_stacked(rhs, t: float, h: float, state: list, scheme: str) -> list:
    """One RK4 (or Euler) step of size h for a list-of-arrays state."""
    if scheme == "euler":
        k1 = rhs(t, state)
        return [x + h * k for x, k in zip(state, k1)]
    k1 = rhs(t, state)
    s2 = [x + 0.5 * h * k for x, k in zip(state, k1)]
    k2 = rhs(t + 0.5 * h, s2)
    s3 = [x + 0.5 * h * k for x, k in zip(state, k2)]
    k3 = rhs(t + 0.5 * h, s3)
    s4 = [x + h * k for x, k in zip(state, k3)]
    k4 = rhs(t + h, s4)
    return [
        x + (h / 6.0) * (a + 2.0 * (b + c) + d)
        for x, a, b, c, d in zip(state, k1, k2, k3, k4)
    ]


def integrate_backward_stacked(
    rhs,
    terminals: list,
    grid: TimeGrid,
    scheme: str = "rk4",
    project=None,
    context: str = "",
) -> list:
    """March a list-of-arrays state from t = T down to t = 0.

    ``rhs(t, state)`` returns the list of time derivatives; ``project`` (if
    given) maps the state after each step (e.g. symmetrization).  Returns one
    (n_nodes, *shape) array per state block.
    """
    if scheme not in ("rk4", "euler"):
        raise ValueError(f"unknown scheme {scheme!r}")
    times = grid.times()
    state = [np.array(v, dtype=float) for v in terminals]
    out = [np.empty((grid.n_nodes,) + v.shape) for v in state]
    for o, v in zip(out, state):
        o[-1] = v
    h = -grid.dt
    for i in range(grid.n_steps, 0, -1):
        state = _step_stacked(rhs, times[i], h, state, scheme)
        if project is not None:
            state = project(state)
        _check_state(state, times[i - 1], context)
        for o, v in zip(out, state):
            o[i - 1] = v
    return out


def integrate_forward_stacked(
    rhs,
    initials: list,
    grid: TimeGrid,
    scheme: str = "rk4",
    project=None,
    context: str = "",
) -> list:
    """Forward analogue of :func:`integrate_backward_stacked` (t = 0 up to T)."""
    if scheme not in ("rk4", "euler"):
        raise ValueError(f"unknown scheme {scheme!r}")
    times = grid.times()
    state = [np.array(v, dtype=float) for v in initials]
    out = [np.empty((grid.n_nodes,) + v.shape) for v in state]
    for o, v in zip(out, state):
        o[0] = v
    h = grid.dt
    for i in range(grid.n_steps):
        state = _step_stacked(rhs, times[i], h, state, scheme)
        if project is not None:
            state = project(state)
        _check_state(state, times[i + 1], context)
        for o, v in zip(out, state):
            o[i + 1] = v
    return out


def integrate_backward(
    rhs,
    terminal,
    grid: TimeGrid,
    scheme: str = "rk4",
    project=None,
    context: str = "",
) -> MatrixPath:
    """Solve dX/dt = rhs(t, X) backward from X(T) = terminal.

    Non-finite values or entries beyond ``MAX_MAGNITUDE`` abort with a
    :class:`BlowUpError` naming the time at which the step failed.
    """
    wrapped = lambda t, state: [rhs(t, state[0])]
    proj = None if project is None else (lambda state: [project(state[0])])
    (values,) = integrate_backward_stacked(
        wrapped, [np.asarray(terminal, dtype=float)], grid, scheme, proj, context
    )
    return MatrixPath(grid, values)


def integrate_forward(
    rhs,
    initial,
    grid: TimeGrid,
    scheme: str = "rk4",
    project=None,
    context: str = "",
) -> MatrixPath:
    """Solve dX/dt = rhs(t, X) forward from X(0) = initial."""
    wrapped = lambda t, state: [rhs(t, state[0])]
    proj = None if project is None else (lambda state: [project(state[0])])
    (values,) = integrate_forward_stacked(
        wrapped, [np.asarray(initial, dtype=float)], grid, scheme, proj, context
    )
    return MatrixPath(grid, values)


def solve_symmetric_riccati(
    A,
    Mquad: np.ndarray,
    C,
    grid: TimeGrid,
    scheme: str = "rk4",
    context: str = "symmetric Riccati",
) -> MatrixPath:
    """Solve dS/dt + S A(t) + A(t)' S - S Mquad S + C(t) = 0 with S(T) = 0.

    ``A`` and ``C`` may be constant matrices or functions of time; ``Mquad``
    is a constant symmetric PSD matrix.  The output is symmetrized after
    every step, so S stays symmetric to roundoff.
    """
    A_fn = as_time_fn(A)
    C_fn = as_time_fn(C)
    Mquad = np.asarray(Mquad, dtype=float)
    dim = Mquad.shape[0]

    def rhs(t, S):
        # S stays symmetric along the integration, so A(t)' S = (S A(t))'.
        SA = S @ A_fn(t)
        return -(SA + SA.T - S @ Mquad @ S + C_fn(t))

    return integrate_backward(
        rhs,
        np.zeros((dim, dim)),
        grid,
        scheme=scheme,
        project=symmetrize,
        context=context,
    )


def solve_linear_matrix_ode(
    Aleft,
    Aright,
    forcing,
    terminal,
    grid: TimeGrid,
    scheme: str = "rk4",
    context: str = "linear matrix ODE",
) -> MatrixPath:
    """Solve dX/dt + Aleft(t) X + X Aright(t) + forcing(t) = 0 backward.

    ``Aright`` may be None for vector-valued unknowns (no right coefficient).
    Solutions are additive in (forcing, terminal).
    """
    Al = as_time_fn(Aleft)
    Ar = None if Aright is None else as_time_fn(Aright)
    F = as_time_fn(forcing)
    terminal = np.asarray(terminal, dtype=float)

    def rhs(t, X):
        out = Al(t) @ X + F(t)
        if Ar is not None:
            out = out + X @ Ar(t)
        return -out

    return integrate_backward(rhs, terminal, grid, scheme=scheme, context=context)
