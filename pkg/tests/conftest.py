import numpy as np
import pytest
from scipy.integrate import solve_ivp

from mfglq.flocking import demo_weights, embed, paper_preset
from mfglq.model import Dims, MajorMinorLqModel
from mfglq.riccati import TimeGrid


def make_model(
    d0=1,
    d=1,
    k0=1,
    k=1,
    m0=1,
    m=1,
    T=1.0,
    **overrides,
) -> MajorMinorLqModel:
    """Scalar-ish model builder: zero couplings and unit weights by default."""
    fields = dict(
        L0=np.zeros((d0, d0)),
        B0=np.eye(d0, k0),
        F0=np.zeros((d0, d)),
        D0=np.eye(d0, m0),
        L=np.zeros((d, d)),
        B=np.eye(d, k),
        F=np.zeros((d, d)),
        G=np.zeros((d, d0)),
        D=np.eye(d, m),
        Q0=np.eye(d0),
        Q=np.eye(d),
        R0=np.eye(k0),
        R=np.eye(k),
        H0=np.zeros((d0, d)),
        H=np.zeros((d, d0)),
        H1=np.zeros((d, d)),
        eta0=np.zeros(d0),
        eta=np.zeros(d),
    )
    fields.update(overrides)
    return MajorMinorLqModel(dims=Dims(d0, d, k0, k, m0, m), T=T, **fields)


def random_coupled_model(rng, d0=2, d=2, k0=1, k=2, T=1.0, scale=0.4):
    """Random fully-coupled model with PSD state weights and PD control weights."""
    mat = lambda r, c: scale * rng.normal(size=(r, c))
    psd = lambda n: (lambda a: a @ a.T / n)(rng.normal(size=(n, n)))
    pd = lambda n: psd(n) + 0.5 * np.eye(n)
    return make_model(
        d0=d0,
        d=d,
        k0=k0,
        k=k,
        m0=d0,
        m=d,
        T=T,
        L0=mat(d0, d0),
        B0=mat(d0, k0),
        F0=mat(d0, d),
        D0=mat(d0, d0),
        L=mat(d, d),
        B=mat(d, k),
        F=mat(d, d),
        G=mat(d, d0),
        D=mat(d, d),
        Q0=psd(d0),
        Q=psd(d),
        R0=pd(k0),
        R=pd(k),
        H0=mat(d0, d),
        H=mat(d, d0),
        H1=mat(d, d),
        eta0=rng.normal(size=d0),
        eta=rng.normal(size=d),
    )


def decoupled_model(rng, d0=2, d=2, k0=1, k=2, T=1.0):
    """All cross-couplings zero: two independent standalone LQR problems."""
    m = random_coupled_model(rng, d0=d0, d=d, k0=k0, k=k, T=T)
    zero = np.zeros
    from dataclasses import replace

    return replace(
        m,
        F=zero((d, d)),
        G=zero((d, d0)),
        H=zero((d, d0)),
        H1=zero((d, d)),
        F0=zero((d0, d)),
        H0=zero((d0, d)),
        eta0=zero(d0),
        eta=zero(d),
    )


def lqr_gain_path(A, B, Q, R, grid: TimeGrid) -> np.ndarray:
    """Independent finite-horizon LQR oracle (standard normalization).

    Solves Pi' + Pi A + A' Pi - Pi B R^{-1} B' Pi + Q = 0, Pi(T) = 0 with a
    tight-tolerance adaptive integrator and returns the gain path
    -R^{-1} B' Pi(t) at the grid nodes.
    """
    A, B, Q, R = map(np.asarray, (A, B, Q, R))
    nx = A.shape[0]
    RinvBT = np.linalg.solve(R, B.T)

    def rhs(t, y):
        Pi = y.reshape(nx, nx)
        dPi = -(Pi @ A + A.T @ Pi - Pi @ B @ RinvBT @ Pi + Q)
        return dPi.reshape(-1)

    # Integrate in reversed time s = T - t (solve_ivp marches forward).
    sol = solve_ivp(
        lambda s, y: -rhs(grid.horizon - s, y),
        (0.0, grid.horizon),
        np.zeros(nx * nx),
        rtol=1e-11,
        atol=1e-13,
        dense_output=True,
        method="RK45",
    )
    gains = np.empty((grid.n_nodes, B.shape[1], nx))
    for i, t in enumerate(grid.times()):
        Pi = sol.sol(grid.horizon - t).reshape(nx, nx)
        gains[i] = -RinvBT @ Pi
    return gains


@pytest.fixture(scope="session")
def demo_model():
    return embed(paper_preset(*demo_weights))


@pytest.fixture(scope="session")
def demo_grid():
    return TimeGrid(5.0, 5000)


@pytest.fixture(scope="session")
def demo_solution(demo_model, demo_grid):
    from mfglq.equilibrium import solve_closed_loop

    return solve_closed_loop(demo_model, demo_grid)
