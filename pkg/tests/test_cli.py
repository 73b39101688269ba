import json

import numpy as np
import pytest

from mfglq.cli import load_config, main


def write_config(tmp_path, **updates):
    config = {
        "flocking": {
            "dv": 2,
            "lambda0": 0.6,
            "lambda1": 0.2,
            "l0": 0.5,
            "l1": 0.3,
            "sigma0": 0.5,
            "sigma": 0.5,
            "T": 5.0,
        },
        "grid": {"n_steps": 400},
        "simulation": {
            "n_minor": 6,
            "master_seed": 20260808,
            "init_major": {"mean": [0.0, 6.283185307179586], "cov": 0.25},
            "init_minor": {"mean": [0.0, 0.0], "cov": 1.0},
        },
        "experiment": {},
    }
    for key, value in updates.items():
        if isinstance(value, dict) and key in config:
            config[key].update(value)
        else:
            config[key] = value
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return path


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    assert lines[0].startswith("# config_hash=")
    return lines


def test_load_config_builds_doubled_inits(tmp_path):
    cfg = load_config(write_config(tmp_path))
    mean0, cov0 = cfg.sim.init_major
    assert mean0.shape == (4,)
    assert np.allclose(mean0[:2], mean0[2:])
    assert np.allclose(cov0[:2, :2], cov0[2:, 2:])
    assert cfg.model.dims.d0 == 4


def test_overrides_change_hash(tmp_path):
    path = write_config(tmp_path)
    base = load_config(path)
    reseeded = load_config(path, seed=1)
    refined = load_config(path, n_steps=100)
    assert base.config_hash != reseeded.config_hash
    assert refined.grid.n_steps == 100


def test_solve_writes_gains_riccati_diagnostics(tmp_path):
    path = write_config(tmp_path, experiment={"open_loop_diagnostics": True})
    out = tmp_path / "out"
    assert main(["solve", "--config", str(path), "--out", str(out)]) == 0
    gains = json.loads((out / "gains.json").read_text())
    assert len(gains["major"]["offset"]) == 401
    assert len(gains["minor"]["gain_self"]) == 401
    diag = json.loads((out / "diagnostics.json").read_text())
    assert diag["fixed_point_residual"] <= 1e-6
    assert diag["consistency_error"] <= 1e-6
    lines = read_csv(out / "riccati.csv")
    assert len(lines) == 2 + 401
    header = lines[1].split(",")
    assert header[0] == "t" and any(c.startswith("K_") for c in header)
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["config_hash"] == diag["config_hash"]


def test_solve_zero_costs_zero_gains(tmp_path):
    config = {
        "model": {
            "dims": {"d0": 1, "d": 1, "k0": 1, "k": 1, "m0": 1, "m": 1},
            "L0": [[0.0]], "B0": [[1.0]], "F0": [[0.0]], "D0": [[1.0]],
            "L": [[0.0]], "B": [[1.0]], "F": [[0.0]], "G": [[0.0]], "D": [[1.0]],
            "Q0": [[0.0]], "Q": [[0.0]], "R0": [[1.0]], "R": [[1.0]],
            "H0": [[0.0]], "H": [[0.0]], "H1": [[0.0]],
            "T": 1.0,
        },
        "grid": {"n_steps": 50},
    }
    path = tmp_path / "zero.json"
    path.write_text(json.dumps(config))
    out = tmp_path / "out"
    assert main(["solve", "--config", str(path), "--out", str(out)]) == 0
    gains = json.loads((out / "gains.json").read_text())
    assert np.max(np.abs(gains["major"]["gain_major"])) == 0.0
    assert np.max(np.abs(gains["minor"]["gain_self"])) == 0.0


def test_invalid_weights_exit_with_message(tmp_path, capsys):
    path = write_config(tmp_path, flocking={"lambda0": 0.6, "lambda1": 0.4})
    code = main(["solve", "--config", str(path), "--out", str(tmp_path / "o")])
    assert code == 1
    assert "R0 not positive definite" in capsys.readouterr().err


def test_solver_choices(tmp_path):
    out_ol = tmp_path / "ol"
    path = write_config(tmp_path, experiment={"solver": "open-loop"})
    assert main(["solve", "--config", str(path), "--out", str(out_ol)]) == 0
    diag = json.loads((out_ol / "diagnostics.json").read_text())
    assert diag["consistency_error"] <= 1e-9
    lines = read_csv(out_ol / "riccati.csv")
    assert any(c.startswith("P_") for c in lines[1].split(","))

    out_it = tmp_path / "it"
    path = write_config(tmp_path, experiment={"solver": "best-response-iteration", "tol": 1e-6})
    assert main(["solve", "--config", str(path), "--out", str(out_it)]) == 0
    diag = json.loads((out_it / "diagnostics.json").read_text())
    assert diag["converged"] is True
    assert diag["iteration_changes"][-1] <= 1e-6


def test_chaos_outputs_decay_and_diagonals(tmp_path):
    path = write_config(
        tmp_path,
        experiment={"flock_sizes": [5, 10], "replicates": 50},
    )
    out = tmp_path / "chaos"
    assert main(["chaos", "--config", str(path), "--out", str(out)]) == 0
    for N in (5, 10):
        lines = read_csv(out / f"chaos_N{N}.csv")
        matrix = np.array([[float(v) for v in line.split(",")] for line in lines[2:]])
        assert matrix.shape == (5, 5)
        assert np.allclose(np.diag(matrix), 1.0)
        assert np.allclose(matrix, matrix.T, atol=1e-12)
    lines = read_csv(out / "summary.csv")
    rows = [line.split(",") for line in lines[2:]]
    assert [r[0] for r in rows] == ["5", "10"]
    assert float(rows[1][1]) < float(rows[0][1])


def test_chaos_degenerate_variance_emits_nan(tmp_path, capsys):
    path = write_config(
        tmp_path,
        flocking={"sigma": 0.0},
        simulation={"init_minor": {"mean": [0.0, 0.0], "cov": 0.0}},
        experiment={"flock_sizes": [5], "replicates": 10},
    )
    out = tmp_path / "chaos"
    assert main(["chaos", "--config", str(path), "--out", str(out)]) == 0
    assert "degenerate" in capsys.readouterr().err
    lines = read_csv(out / f"chaos_N5.csv")
    matrix = np.array([[float(v) for v in line.split(",")] for line in lines[2:]])
    assert np.all(np.isnan(matrix))


def test_chaos_rejects_single_replicate(tmp_path, capsys):
    path = write_config(tmp_path, experiment={"flock_sizes": [5], "replicates": 1})
    assert main(["chaos", "--config", str(path), "--out", str(tmp_path / "o")]) == 1


def test_trajectories_comparative_metrics(tmp_path):
    path = write_config(
        tmp_path,
        experiment={
            "panels": [
                {"name": "leader_focused", "lambda0": 0.8, "lambda1": 0.1},
                {"name": "flock_focused", "lambda0": 0.1, "lambda1": 0.8},
            ],
            "n_seeds": 2,
        },
    )
    out = tmp_path / "traj"
    assert main(["trajectories", "--config", str(path), "--out", str(out)]) == 0
    metrics = json.loads((out / "metrics.json").read_text())["panels"]
    assert (
        metrics["leader_focused"]["time_avg_leader_to_freewill"]
        < metrics["flock_focused"]["time_avg_leader_to_freewill"]
    )
    lines = read_csv(out / "traj_leader_focused.csv")
    assert lines[1] == "t,agent_id,pos0,pos1,vel0,vel1"
    assert len(lines) == 2 + 401 * 7


def test_trajectories_zero_weight_zero_noise_straight_lines(tmp_path):
    path = write_config(
        tmp_path,
        flocking={"sigma0": 0.0, "sigma": 0.0},
        simulation={
            "init_major": {"mean": [1.0, 0.5], "cov": 0.0},
            "init_minor": {"mean": [-0.5, 1.0], "cov": 0.0},
        },
        experiment={
            "panels": [{"name": "free", "lambda0": 0.0, "lambda1": 0.0, "l0": 0.0, "l1": 0.0}]
        },
    )
    out = tmp_path / "traj"
    assert main(["trajectories", "--config", str(path), "--out", str(out)]) == 0
    lines = read_csv(out / "traj_free.csv")
    rows = np.array(
        [[float(v) for v in line.split(",")] for line in lines[2:]]
    )
    leader = rows[rows[:, 1] == 0.0]
    # Zero weights and zero noise: velocities constant, positions linear in t.
    assert np.allclose(leader[:, 4:], leader[0, 4:], atol=1e-12)
    expect = leader[0, 2:4] + np.outer(leader[:, 0], leader[0, 4:])
    assert np.allclose(leader[:, 2:4], expect, atol=1e-10)


def test_nash_check_passes_and_fails(tmp_path):
    path = write_config(
        tmp_path,
        grid={"n_steps": 2000},
        experiment={"n_directions": 2, "tolerance": 1e-4},
    )
    out = tmp_path / "nash"
    assert main(["nash-check", "--config", str(path), "--out", str(out)]) == 0
    report = json.loads((out / "nash_report.json").read_text())
    assert report["passed"] is True
    assert report["major"]["max_relative_first_derivative"] <= 1e-4

    # An implausibly tight tolerance must flip the exit status.
    path_tight = write_config(
        tmp_path,
        grid={"n_steps": 2000},
        experiment={"n_directions": 2, "tolerance": 1e-12},
    )
    assert main(["nash-check", "--config", str(path_tight), "--out", str(out)]) == 2


def test_simulate_writes_paths(tmp_path):
    path = write_config(tmp_path, experiment={"strategy": "zero"})
    out = tmp_path / "sim"
    assert main(["simulate", "--config", str(path), "--out", str(out)]) == 0
    lines = read_csv(out / "paths.csv")
    assert lines[1] == "t,agent_id,x0,x1,x2,x3"
    assert len(lines) == 2 + 401 * 7


def test_outputs_deterministic_across_reruns(tmp_path):
    path = write_config(tmp_path, experiment={"flock_sizes": [5], "replicates": 20})
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["chaos", "--config", str(path), "--out", str(out1)]) == 0
    assert main(["chaos", "--config", str(path), "--out", str(out2)]) == 0
    assert (out1 / "summary.csv").read_bytes() == (out2 / "summary.csv").read_bytes()
    assert (out1 / "chaos_N5.csv").read_bytes() == (out2 / "chaos_N5.csv").read_bytes()
    meta1 = json.loads((out1 / "metadata.json").read_text())
    meta2 = json.loads((out2 / "metadata.json").read_text())
    meta1.pop("timestamp"), meta2.pop("timestamp")
    assert meta1 == meta2
