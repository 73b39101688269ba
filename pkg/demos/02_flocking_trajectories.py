"""Simulate a flock under equilibrium feedback and write trajectory data.

The leader chases a circular free-will velocity while the followers balance
tracking the leader against sticking together.  Positions are obtained by
trapezoidal integration of the simulated velocities: the leader starts at the
origin and followers start from a Gaussian scatter.
"""

import numpy as np

from mfglq import SimConfig, TimeGrid, simulate_finite_game, solve_closed_loop
from mfglq.flocking import demo_weights, embed, paper_preset

model = embed(paper_preset(*demo_weights))
grid = TimeGrid(model.T, 1000)
solution = solve_closed_loop(model, grid)

doubled = lambda C: np.block([[C, C], [C, C]])
config = SimConfig(
    n_minor=12,
    grid=grid,
    master_seed=20260808,
    init_major=(np.concatenate([[0.0, 2 * np.pi]] * 2), doubled(0.25 * np.eye(2))),
    init_minor=(np.zeros(4), doubled(np.eye(2))),
)
bundle = simulate_finite_game(model, solution.strategy, config)

# Velocities are the first two components of the doubled state.
times = bundle.times
vel_leader = bundle.major_path[:, :2]
vel_minors = bundle.minor_paths[:, :, :2]

rng = np.random.default_rng(11)
positions = [np.zeros(2)] + list(rng.normal(scale=1.0, size=(config.n_minor, 2)))


def integrate(vel, p0):
    steps = 0.5 * grid.dt * (vel[1:] + vel[:-1])
    return np.vstack([p0, p0 + np.cumsum(steps, axis=0)])


pos_leader = integrate(vel_leader, positions[0])
pos_minors = [integrate(vel_minors[a], positions[a + 1]) for a in range(config.n_minor)]

nu = np.array([[-2 * np.pi * np.sin(2 * np.pi * t), 2 * np.pi * np.cos(2 * np.pi * t)] for t in times])
tracking = np.trapezoid(np.linalg.norm(vel_leader - nu, axis=1), times) / times[-1]
cohesion = np.trapezoid(
    np.linalg.norm(vel_minors.mean(axis=0) - vel_leader, axis=1), times
) / times[-1]
print(f"time-averaged |V_leader - nu|:     {tracking:.3f}")
print(f"time-averaged |V_flock - V_leader|: {cohesion:.3f}")

with open("demo_trajectories.csv", "w") as fh:
    fh.write("t,agent_id,pos0,pos1,vel0,vel1\n")
    for i, t in enumerate(times):
        fh.write(f"{t!r},0,{pos_leader[i,0]!r},{pos_leader[i,1]!r},"
                 f"{vel_leader[i,0]!r},{vel_leader[i,1]!r}\n")
        for a in range(config.n_minor):
            fh.write(f"{t!r},{a+1},{pos_minors[a][i,0]!r},{pos_minors[a][i,1]!r},"
                     f"{vel_minors[a,i,0]!r},{vel_minors[a,i,1]!r}\n")
print("wrote demo_trajectories.csv "
      "(render with: plot trajectories demo_trajectories.csv flock.svg)")
