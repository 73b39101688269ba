import numpy as np
import pytest

from conftest import make_model
from mfglq.flocking import demo_weights, embed, paper_preset
from mfglq.model import (
    Dims,
    InvalidModelError,
    assemble_blocks,
    closed_loop_aggregates,
    full_environment,
    major_environment,
    require_valid,
    validate,
)
from mfglq.equilibrium import zero_strategy
from mfglq.riccati import MatrixPath, TimeGrid


def test_dims_positive():
    with pytest.raises(ValueError):
        Dims(0, 1, 1, 1, 1, 1)
    assert Dims(2, 3, 1, 1, 1, 1).n == 5


def test_validate_rejects_zero_R():
    model = make_model(R=np.zeros((1, 1)))
    report = validate(model)
    assert not report.ok
    assert any("R not positive definite" in v for v in report.violations)


def test_validate_rejects_asymmetric_Q0():
    model = make_model(d0=2, m0=2, k0=2, Q0=np.array([[1.0, 2.0], [0.0, 1.0]]))
    report = validate(model)
    assert any("Q0 not symmetric" in v for v in report.violations)


def test_validate_names_bad_shapes():
    model = make_model(F0=np.zeros((2, 2)))
    report = validate(model)
    assert any(v.startswith("F0") for v in report.violations)
    with pytest.raises(InvalidModelError):
        require_valid(model)
    with pytest.raises(InvalidModelError, match="F0"):
        assemble_blocks(model)


def test_flocking_demo_weights_validate_clean():
    model = embed(paper_preset(*demo_weights))
    assert validate(model).ok


def test_assemble_blocks_scalar_substitution():
    model = make_model(
        L=np.array([[0.1]]),
        F=np.array([[0.2]]),
        G=np.array([[0.3]]),
        F0=np.array([[0.4]]),
        L0=np.array([[0.5]]),
    )
    blocks = assemble_blocks(model)
    assert np.allclose(blocks.LL0, [[0.3, 0.3], [0.4, 0.5]])
    assert np.allclose(blocks.BB0, [[0.0], [1.0]])
    assert np.allclose(blocks.BB, [[1.0], [0.0]])
    assert np.allclose(blocks.DD0, [[0.0], [1.0]])


def test_assemble_blocks_zero_target_map():
    model = make_model(d0=2, k0=2, m0=2, Q0=np.diag([1.0, 2.0]))
    blocks = assemble_blocks(model)
    assert np.allclose(blocks.FF0[:1, :], 0.0)
    assert np.allclose(blocks.FF0[1:, 1:], np.diag([1.0, 2.0]))
    for t in (0.0, 0.3, 1.0):
        assert np.allclose(blocks.f0(t), 0.0)


def test_flocking_blocks_structure():
    lam0, lam1 = 0.6, 0.2
    model = embed(paper_preset(lam0, lam1, 0.5, 0.3))
    blocks = assemble_blocks(model)
    diag = np.diag(blocks.FF0)
    expect = [0, 0, lam1, lam1, lam0, lam0, lam1, lam1]
    assert np.allclose(diag, expect)
    # Off-diagonal coupling between the mean state's second copy and the
    # major state's second copy is -lambda1.
    assert np.allclose(blocks.FF0[2:4, 6:8], -lam1 * np.eye(2))
    assert np.allclose(blocks.FF0[6:8, 2:4], -lam1 * np.eye(2))


def test_FF0_exact_factorization():
    rng = np.random.default_rng(11)
    for _ in range(5):
        d0, d = rng.integers(1, 4), rng.integers(1, 4)
        H0 = rng.normal(size=(d0, d))
        Qh = rng.normal(size=(d0, d0))
        Q0 = Qh @ Qh.T
        model = make_model(
            d0=int(d0), d=int(d), m0=int(d0), m=int(d), k0=int(d0), k=int(d),
            H0=H0, Q0=Q0,
        )
        blocks = assemble_blocks(model)
        M = np.hstack([-H0, np.eye(d0)])
        recon = M.T @ Q0 @ M
        scale = max(1.0, np.max(np.abs(recon)))
        assert np.max(np.abs(blocks.FF0 - recon)) <= 1e-14 * scale


def test_reduced_cost_identity():
    # XX' FF0 XX + 2 XX' f0 + eta0' Q0 eta0 equals the original major cost
    # (x0 - H0 xbar - eta0)' Q0 (x0 - H0 xbar - eta0) for random samples.
    rng = np.random.default_rng(5)
    d0, d = 2, 3
    H0 = rng.normal(size=(d0, d))
    Qh = rng.normal(size=(d0, d0))
    Q0 = Qh @ Qh.T
    eta0 = rng.normal(size=d0)
    model = make_model(d0=d0, d=d, k0=2, k=2, m0=2, m=3, H0=H0, Q0=Q0, eta0=eta0)
    blocks = assemble_blocks(model)
    t = 0.37
    for _ in range(100):
        xbar = rng.normal(size=d)
        x0 = rng.normal(size=d0)
        xx = np.concatenate([xbar, x0])
        reduced = xx @ blocks.FF0 @ xx + 2.0 * xx @ blocks.f0(t) + eta0 @ Q0 @ eta0
        resid = x0 - H0 @ xbar - eta0
        original = resid @ Q0 @ resid
        assert abs(reduced - original) <= 1e-10 * max(1.0, abs(original))


def test_assemble_blocks_deterministic():
    model = embed(paper_preset(*demo_weights))
    b1, b2 = assemble_blocks(model), assemble_blocks(model)
    assert np.array_equal(b1.LL0, b2.LL0)
    assert np.array_equal(b1.FF0, b2.FF0)


def test_major_environment_zero_feedback():
    model = make_model()
    grid = TimeGrid(1.0, 10)
    strat = zero_strategy(model, grid)
    Lcl0, Ccl0 = major_environment(model, strat)
    blocks = assemble_blocks(model)
    assert np.allclose(Lcl0.values, blocks.LL0[None])
    assert np.allclose(Ccl0.values, 0.0)


def test_major_environment_scalar_substitution():
    model = make_model(L=np.array([[0.3]]), F=np.array([[0.1]]), G=np.array([[0.2]]))
    grid = TimeGrid(1.0, 4)
    strat = zero_strategy(model, grid)
    ones = np.ones((grid.n_nodes, 1, 1))
    strat = strat.__class__(
        grid=grid,
        major=strat.major,
        minor=strat.minor.__class__(
            offset=strat.minor.offset,
            gain_self=MatrixPath(grid, ones),
            gain_major=MatrixPath(grid, 2.0 * ones),
            gain_mean=MatrixPath(grid, ones),
        ),
    )
    Lcl0, _ = major_environment(model, strat)
    # top row: [L + F + B(phi1 + phi3), G + B phi2] = [0.3+0.1+2, 0.2+2]
    assert np.allclose(Lcl0.values[:, 0, :], [2.4, 2.2])
    assert np.allclose(Lcl0.values[:, 1, :], [0.0, 0.0])


def test_full_environment_trivial_and_scalar():
    model = make_model()
    grid = TimeGrid(1.0, 4)
    z = zero_strategy(model, grid)
    Lcl, Ccl = full_environment(model, z, z)
    blocks = assemble_blocks(model)
    assert np.allclose(Lcl.values, blocks.LL0[None])
    assert np.allclose(Ccl.values, 0.0)

    ones = np.ones((grid.n_nodes, 1, 1))
    strat = z.__class__(
        grid=grid,
        major=z.major.__class__(
            offset=z.major.offset,
            gain_major=MatrixPath(grid, ones),
            gain_mean=z.major.gain_mean,
        ),
        minor=z.minor,
    )
    Lcl, _ = full_environment(model, strat, strat)
    assert np.allclose(Lcl.values[:, 1, 1], model.L0[0, 0] + 1.0)


def test_environment_grid_mismatch_rejected():
    model = make_model()
    s1 = zero_strategy(model, TimeGrid(1.0, 4))
    s2 = zero_strategy(model, TimeGrid(1.0, 8))
    with pytest.raises(ValueError):
        full_environment(model, s1, s2)


def test_closed_loop_aggregates_block_structure(demo_model, demo_grid, demo_solution):
    agg = closed_loop_aggregates(demo_model, demo_solution.strategy, demo_solution.S)
    d = demo_model.dims.d
    strat = demo_solution.strategy
    # Top-right block equals B phi2 + G, bottom rows equal [F0, L0], at every node.
    B = demo_model.B
    expected_tr = demo_model.G[None] + np.einsum(
        "ij,tjk->tik", B, strat.minor.gain_major.values
    )
    assert np.max(np.abs(agg.Lcl0.values[:, :d, d:] - expected_tr)) <= 1e-12
    assert np.max(np.abs(agg.Lcl0.values[:, d:, :d] - demo_model.F0[None])) == 0.0
    assert np.max(np.abs(agg.Lcl0.values[:, d:, d:] - demo_model.L0[None])) == 0.0
    # Lmod absorbs the minor self-feedback drift into the top-left block.
    BRB = B @ np.linalg.solve(demo_model.R, B.T)
    expect_tl = (demo_model.L + demo_model.F)[None] - 0.5 * np.einsum(
        "ij,tjk->tik", BRB, demo_solution.S.values
    )
    assert np.max(np.abs(agg.Lmod.values[:, :d, :d] - expect_tl)) <= 1e-12
