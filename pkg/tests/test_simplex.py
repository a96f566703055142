import numpy as np
import pytest
from scipy.optimize import linprog

from hyperell.errors import SolverError
from hyperell.simplex import solve_inequality_lp


def test_single_variable_floor():
    # min x subject to x >= 3 and x >= -1
    x, value = solve_inequality_lp(np.array([[1.0], [1.0]]), np.array([3.0, -1.0]), np.array([1.0]))
    assert value == pytest.approx(3.0, abs=1e-9)
    assert x[0] == pytest.approx(3.0, abs=1e-9)


def test_two_variable_hand_solution():
    # min x + y subject to x + 2y >= 4, 3x + y >= 6: optimum at (8/5, 6/5)
    A = np.array([[1.0, 2.0], [3.0, 1.0]])
    b = np.array([4.0, 6.0])
    c = np.array([1.0, 1.0])
    x, value = solve_inequality_lp(A, b, c)
    assert value == pytest.approx(14 / 5, abs=1e-9)
    assert x == pytest.approx([8 / 5, 6 / 5], abs=1e-9)


def test_negative_objective_entry():
    # min -x subject to x <= 5 (written as -x >= -5), x >= 0
    A = np.array([[-1.0], [1.0]])
    b = np.array([-5.0, 0.0])
    x, value = solve_inequality_lp(A, b, np.array([-1.0]))
    assert value == pytest.approx(-5.0, abs=1e-9)


def test_unbounded_detected():
    # min -x subject to x >= 0: unbounded below
    with pytest.raises(SolverError):
        solve_inequality_lp(np.array([[1.0]]), np.array([0.0]), np.array([-1.0]))


def test_degenerate_constant_fit():
    # min a subject to a >= t_i: the max of the data
    t = np.array([0.3, -1.2, 2.5, 2.5, 0.0])
    A = np.ones((5, 1))
    x, value = solve_inequality_lp(A, t, np.array([1.0]))
    assert value == pytest.approx(2.5, abs=1e-12)


def test_against_scipy_on_random_instances():
    rng = np.random.default_rng(42)
    for trial in range(40):
        m = int(rng.integers(5, 60))
        n = int(rng.integers(1, 8))
        A = rng.normal(size=(m, n))
        x0 = rng.normal(size=n)
        b = A @ x0 - np.abs(rng.normal(size=m))  # x0 strictly feasible
        c = rng.normal(size=n)
        ref = linprog(c, A_ub=-A, b_ub=-b, bounds=[(None, None)] * n, method="highs")
        if not ref.success:
            continue  # unbounded draw: skip, covered by the dedicated test
        x, value = solve_inequality_lp(A, b, c)
        assert value == pytest.approx(ref.fun, abs=1e-7 * (1 + abs(ref.fun)))
        assert np.all(A @ x >= b - 1e-7)


def test_cosine_fit_shape():
    # minimal-mean majorant of a sampled parabola by a degree-2 cosine block
    thetas = np.arange(200) / 200.0
    basis = np.column_stack(
        [np.ones_like(thetas)]
        + [np.cos(2 * np.pi * k * thetas) for k in (1, 2)]
        + [np.sin(2 * np.pi * k * thetas) for k in (1, 2)]
    )
    target = (thetas - 0.5) ** 2
    c = np.zeros(5)
    c[0] = 1.0
    x, value = solve_inequality_lp(basis, target, c)
    assert np.all(basis @ x >= target - 1e-9)
    assert value >= np.mean(target) - 1e-6  # majorant mean dominates the mean
