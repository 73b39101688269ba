import numpy as np
import pytest

from mfglq.flocking import (
    FlockingParams,
    circle_free_will,
    demo_weights,
    double_state,
    embed,
    paper_preset,
)
from mfglq.model import validate


def test_preset_free_will_values():
    p = paper_preset(*demo_weights)
    assert np.allclose(p.nu(0.0), [0.0, 2.0 * np.pi])
    assert np.allclose(p.nu(0.25), [-2.0 * np.pi, 0.0], atol=1e-12)
    assert p.T == 5.0
    assert np.allclose(p.Sigma0, 0.5 * np.eye(2))
    assert np.allclose(p.Sigma, 0.5 * np.eye(2))


def test_free_will_is_periodic_constant_speed():
    for t in np.linspace(0.0, 5.0, 17):
        assert np.isclose(np.linalg.norm(circle_free_will(t)), 2.0 * np.pi)
        assert np.allclose(circle_free_will(t), circle_free_will(t + 1.0), atol=1e-12)


def test_weight_constraints_enforced():
    with pytest.raises(ValueError, match="R0 not positive definite"):
        paper_preset(0.6, 0.4, 0.5, 0.3)
    with pytest.raises(ValueError, match="R not positive definite"):
        paper_preset(0.6, 0.2, 0.5, 0.5)
    with pytest.raises(ValueError):
        paper_preset(-0.1, 0.2, 0.5, 0.3)


def test_embedding_weights():
    model = embed(paper_preset(0.6, 0.2, 0.5, 0.3))
    assert np.allclose(model.Q0, np.diag([0.6, 0.6, 0.2, 0.2]))
    assert np.allclose(model.R0, 0.2 * np.eye(2))
    assert np.allclose(model.Q, np.diag([0.5, 0.5, 0.3, 0.3]))
    assert np.allclose(model.R, 0.2 * np.eye(2))
    assert np.allclose(model.B0, np.vstack([np.eye(2), np.eye(2)]))
    assert np.allclose(model.D, np.vstack([0.5 * np.eye(2), 0.5 * np.eye(2)]))
    assert np.allclose(model.eta0_at(0.0), [0.0, 2 * np.pi, 0.0, 0.0])
    assert validate(model).ok


def test_leader_cost_identity():
    # Embedded major running cost equals
    # lambda0 |V0 - nu|^2 + lambda1 |V0 - Vbar|^2 + (1-lambda0-lambda1)|a0|^2.
    lam0, lam1 = 0.55, 0.25
    model = embed(paper_preset(lam0, lam1, 0.5, 0.3))
    rng = np.random.default_rng(2)
    for _ in range(100):
        v0 = rng.normal(size=2)
        vbar = rng.normal(size=2)
        a0 = rng.normal(size=2)
        t = rng.uniform(0.0, 5.0)
        x0 = double_state(v0)
        xbar = double_state(vbar)
        resid = x0 - model.H0 @ xbar - model.eta0_at(t)
        embedded = resid @ model.Q0 @ resid + a0 @ model.R0 @ a0
        nu = model.eta0_at(t)[:2]
        direct = (
            lam0 * np.sum((v0 - nu) ** 2)
            + lam1 * np.sum((v0 - vbar) ** 2)
            + (1 - lam0 - lam1) * np.sum(a0**2)
        )
        assert abs(embedded - direct) <= 1e-10 * max(1.0, abs(direct))


def test_follower_cost_identity():
    l0, l1 = 0.45, 0.35
    model = embed(paper_preset(0.6, 0.2, l0, l1))
    rng = np.random.default_rng(3)
    for _ in range(100):
        v = rng.normal(size=2)
        v0 = rng.normal(size=2)
        vbar = rng.normal(size=2)
        a = rng.normal(size=2)
        x, x0, xbar = double_state(v), double_state(v0), double_state(vbar)
        resid = x - model.H @ x0 - model.H1 @ xbar - model.eta
        embedded = resid @ model.Q @ resid + a @ model.R @ a
        direct = (
            l0 * np.sum((v - v0) ** 2)
            + l1 * np.sum((v - vbar) ** 2)
            + (1 - l0 - l1) * np.sum(a**2)
        )
        assert abs(embedded - direct) <= 1e-10 * max(1.0, abs(direct))


def test_custom_dimension_embedding():
    p = FlockingParams(
        dv=3,
        lambda0=0.3,
        lambda1=0.3,
        l0=0.2,
        l1=0.2,
        Sigma0=0.1 * np.eye(3),
        Sigma=0.2 * np.eye(3),
        nu=lambda t: np.array([1.0, 0.0, -1.0]),
        T=2.0,
    )
    model = embed(p)
    assert model.dims.d0 == model.dims.d == 6
    assert model.dims.k0 == model.dims.k == 3
    assert validate(model).ok
