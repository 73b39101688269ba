import numpy as np
import pytest

from mfglq.riccati import (
    BlowUpError,
    MatrixPath,
    TimeGrid,
    integrate_backward,
    integrate_forward,
    solve_linear_matrix_ode,
    solve_symmetric_riccati,
)


def test_grid_nodes():
    grid = TimeGrid(horizon=5.0, n_steps=10)
    assert grid.dt == 0.5
    times = grid.times()
    assert times[0] == 0.0 and times[-1] == 5.0
    assert len(times) == 11
    with pytest.raises(ValueError):
        TimeGrid(horizon=1.0, n_steps=1)


def test_path_interpolation_and_csv(tmp_path):
    grid = TimeGrid(1.0, 4)
    values = np.arange(5.0).reshape(5, 1, 1)
    path = MatrixPath(grid, values)
    assert path.at(0.125)[0, 0] == pytest.approx(0.5)
    assert path.at(-1.0)[0, 0] == 0.0
    assert path.at(2.0)[0, 0] == 4.0
    out = tmp_path / "p.csv"
    path.to_csv(out)
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "t,x0"
    assert len(lines) == 6


def test_zero_rhs_constant_identity():
    grid = TimeGrid(1.0, 10)
    path = integrate_backward(lambda t, x: np.zeros((2, 2)), np.eye(2), grid)
    assert np.allclose(path.values, np.eye(2), atol=0.0)


def test_linear_rhs_exact():
    # dx/dt = -1, x(5) = 0  =>  x(t) = 5 - t; RK4 is exact on polynomials.
    grid = TimeGrid(5.0, 50)
    path = integrate_backward(lambda t, x: np.array(-1.0), np.array(0.0), grid)
    assert np.max(np.abs(path.values - (5.0 - grid.times()))) <= 1e-12


def test_scalar_riccati_tanh_oracle():
    # dx/dt = x^2 - 1, x(1) = 0 has solution x(t) = tanh(1 - t).
    grid = TimeGrid(1.0, 1000)
    path = integrate_backward(
        lambda t, x: x * x - 1.0, np.array(0.0), grid, context="tanh test"
    )
    exact = np.tanh(1.0 - grid.times())
    assert np.max(np.abs(path.values - exact)) <= 1e-8


def test_refinement_order_at_least_35():
    def solve(n):
        grid = TimeGrid(1.0, n)
        path = integrate_backward(lambda t, x: x * x - 1.0, np.array(0.0), grid)
        return abs(path.values[0] - np.tanh(1.0))

    e1, e2 = solve(250), solve(500)
    order = np.log2(e1 / e2)
    assert order >= 3.5


def test_euler_scheme_is_first_order():
    def solve(n, scheme):
        grid = TimeGrid(1.0, n)
        path = integrate_backward(
            lambda t, x: x * x - 1.0, np.array(0.0), grid, scheme=scheme
        )
        return abs(path.values[0] - np.tanh(1.0))

    e1, e2 = solve(250, "euler"), solve(500, "euler")
    assert 0.8 <= np.log2(e1 / e2) <= 1.2
    # Euler at the same step is far less accurate than RK4.
    assert e2 > 100 * solve(500, "rk4")


def test_blowup_reports_time():
    # Backward from x(2) = 0, dx/dt = -(1 + x^2): x(t) = tan(2 - t) explodes
    # as t decreases through 2 - pi/2.
    grid = TimeGrid(2.0, 2000)
    with pytest.raises(BlowUpError) as err:
        integrate_backward(
            lambda t, x: -(1.0 + x * x), np.array(0.0), grid, context="tan test"
        )
    assert abs(err.value.time - (2.0 - np.pi / 2)) < 0.05
    assert "tan test" in str(err.value)


def test_symmetric_riccati_trivial_and_forced():
    grid = TimeGrid(2.0, 200)
    d = 3
    zero = solve_symmetric_riccati(np.zeros((d, d)), np.zeros((d, d)), np.zeros((d, d)), grid)
    assert np.allclose(zero.values, 0.0, atol=0.0)

    rng = np.random.default_rng(0)
    Q = rng.normal(size=(d, d))
    Q = Q @ Q.T
    forced = solve_symmetric_riccati(np.zeros((d, d)), np.zeros((d, d)), Q, grid)
    expect = Q[None] * (2.0 - grid.times())[:, None, None]
    assert np.max(np.abs(forced.values - expect)) <= 1e-10


def test_symmetric_riccati_tanh():
    # Scalar: dS/dt + 0 + 0 - S*1*S + 1 = 0, S(1) = 0  =>  S(t) = tanh(1 - t).
    grid = TimeGrid(1.0, 1000)
    S = solve_symmetric_riccati(np.zeros((1, 1)), np.eye(1), np.eye(1), grid)
    exact = np.tanh(1.0 - grid.times())
    assert np.max(np.abs(S.values[:, 0, 0] - exact)) <= 1e-8


def test_symmetry_preserved():
    rng = np.random.default_rng(1)
    d = 4
    A = rng.normal(size=(d, d))
    M = rng.normal(size=(d, d))
    M = M @ M.T
    C = rng.normal(size=(d, d))
    C = C @ C.T
    grid = TimeGrid(1.0, 500)
    S = solve_symmetric_riccati(A, M, C, grid)
    for v in S.values[:: 50]:
        assert np.max(np.abs(v - v.T)) <= 1e-12 * max(1.0, np.max(np.abs(v)))


def test_comparison_principle_scalar():
    # C1 >= C2 pointwise implies S1 >= S2 for all t (scalar problems).
    rng = np.random.default_rng(7)
    grid = TimeGrid(1.0, 300)
    for _ in range(20):
        a = rng.normal()
        m = abs(rng.normal())
        c2 = rng.normal()
        c1 = c2 + abs(rng.normal())
        S1 = solve_symmetric_riccati(
            np.array([[a]]), np.array([[m]]), np.array([[c1]]), grid
        )
        S2 = solve_symmetric_riccati(
            np.array([[a]]), np.array([[m]]), np.array([[c2]]), grid
        )
        assert np.min(S1.values - S2.values) >= -1e-12


def test_linear_matrix_ode_trivials():
    grid = TimeGrid(2.0, 100)
    d = 2
    zero = solve_linear_matrix_ode(
        np.zeros((d, d)), np.zeros((d, d)), np.zeros((d, d)), np.zeros((d, d)), grid
    )
    assert np.allclose(zero.values, 0.0, atol=0.0)

    F = np.array([[1.0, -2.0], [0.5, 3.0]])
    forced = solve_linear_matrix_ode(np.zeros((d, d)), np.zeros((d, d)), F, np.zeros((d, d)), grid)
    expect = F[None] * (2.0 - grid.times())[:, None, None]
    assert np.max(np.abs(forced.values - expect)) <= 1e-12


def test_linear_matrix_ode_matches_generic_integrator():
    rng = np.random.default_rng(3)
    d = 2
    Al = rng.normal(size=(d, d))
    Ar = rng.normal(size=(d, d))
    F = rng.normal(size=(d, d))
    term = rng.normal(size=(d, d))
    grid = TimeGrid(1.0, 400)
    via_linear = solve_linear_matrix_ode(Al, Ar, F, term, grid)
    via_generic = integrate_backward(
        lambda t, X: -(Al @ X + X @ Ar + F), term, grid
    )
    assert np.max(np.abs(via_linear.values - via_generic.values)) <= 1e-12


def test_linear_superposition():
    rng = np.random.default_rng(4)
    d = 3
    Al = rng.normal(size=(d, d))
    Ar = rng.normal(size=(d, d))
    F1, F2 = rng.normal(size=(d, d)), rng.normal(size=(d, d))
    T1, T2 = rng.normal(size=(d, d)), rng.normal(size=(d, d))
    grid = TimeGrid(1.0, 200)
    s12 = solve_linear_matrix_ode(Al, Ar, F1 + F2, T1 + T2, grid)
    s1 = solve_linear_matrix_ode(Al, Ar, F1, T1, grid)
    s2 = solve_linear_matrix_ode(Al, Ar, F2, T2, grid)
    assert np.max(np.abs(s12.values - (s1.values + s2.values))) <= 1e-12


def test_forward_integration():
    # dx/dt = -x, x(0) = 1  =>  e^{-t}.
    grid = TimeGrid(2.0, 500)
    path = integrate_forward(lambda t, x: -x, np.array(1.0), grid)
    assert np.max(np.abs(path.values - np.exp(-grid.times()))) <= 1e-10
