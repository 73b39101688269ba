"""Certify the solved equilibrium by probing unilateral deviations.

Costs are computed exactly from moment ODEs (no sampling noise), so central
differences along random gain perturbations expose any first-order
improvement.  At the equilibrium the first derivatives vanish to solver
precision; deliberately halving all gains (the classic factor-of-two mistake
in Riccati gain conventions) is caught immediately.
"""

import numpy as np

from mfglq import InitialState, MatrixPath, TimeGrid, nash_gap, solve_closed_loop
from mfglq.equilibrium import FeedbackStrategy, MajorGains, MinorGains
from mfglq.flocking import demo_weights, embed, paper_preset

model = embed(paper_preset(*demo_weights))
grid = TimeGrid(model.T, 1000)
solution = solve_closed_loop(model, grid)

doubled = lambda C: np.block([[C, C], [C, C]])
init = InitialState(
    minor_mean=np.zeros(4),
    minor_cov=doubled(np.eye(2)),
    major_mean=np.zeros(4),
    major_cov=doubled(0.25 * np.eye(2)),
)

print("equilibrium strategy:")
for player, seed in (("major", 42), ("minor", 43)):
    report = nash_gap(model, solution.strategy, player, init, n_directions=5, seed=seed)
    print(
        f"  {player:>5}: baseline cost {report.baseline:9.4f}, "
        f"max |dJ/deps| / max(1, |J|) = {report.max_relative_first_derivative:.2e}, "
        f"min curvature {min(report.second_differences):.2e}"
    )

halve = lambda p: MatrixPath(p.grid, 0.5 * p.values)
halved = FeedbackStrategy(
    grid=grid,
    major=MajorGains(
        offset=halve(solution.strategy.major.offset),
        gain_major=halve(solution.strategy.major.gain_major),
        gain_mean=halve(solution.strategy.major.gain_mean),
    ),
    minor=MinorGains(
        offset=halve(solution.strategy.minor.offset),
        gain_self=halve(solution.strategy.minor.gain_self),
        gain_major=halve(solution.strategy.minor.gain_major),
        gain_mean=halve(solution.strategy.minor.gain_mean),
    ),
)
print("\nhalved gains (not an equilibrium):")
for player, seed in (("major", 42), ("minor", 43)):
    report = nash_gap(model, halved, player, init, n_directions=5, seed=seed)
    print(
        f"  {player:>5}: max relative first derivative = "
        f"{report.max_relative_first_derivative:.2e}"
    )
