"""Solvers, simulators, and certification tools for linear-quadratic mean
field games with one major player and a continuum of minor players."""

from .equilibrium import (
    ClosedLoopSolution,
    FeedbackStrategy,
    IterationResult,
    MajorGains,
    MinorGains,
    OpenLoopSolution,
    best_response_iteration,
    fixed_point_residual,
    major_best_response,
    minor_best_response,
    solve_closed_loop,
    solve_open_loop,
    zero_strategy,
)
from .evaluator import InitialState, NashGapReport, major_cost, minor_cost, nash_gap
from .flocking import FlockingParams, demo_weights, embed, paper_preset
from .model import (
    BlockSystem,
    Dims,
    MajorMinorLqModel,
    assemble_blocks,
    full_environment,
    major_environment,
    require_valid,
    validate,
)
from .riccati import (
    BlowUpError,
    MatrixPath,
    TimeGrid,
    integrate_backward,
    solve_linear_matrix_ode,
    solve_symmetric_riccati,
)
from .simulator import (
    PathBundle,
    SimConfig,
    monte_carlo_costs,
    simulate_conditional_ensemble,
    simulate_finite_game,
    simulate_mean_field,
)

__version__ = "0.1.0"
