import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drsubmax.linprog import (LinearProgram, LpStatus, NumericalFailure, solve_lp)
from drsubmax.verify import brute_force_max, enumerate_vertices, random_lp


def test_single_active_bound():
    sol = solve_lp(LinearProgram([1.0], [[1.0]], [1.0], [0.0], [1.0]))
    assert sol.status is LpStatus.OPTIMAL
    assert sol.point == pytest.approx([1.0])
    assert sol.objective_value == pytest.approx(1.0)


def test_polygon_vertex():
    A, b, lo, hi = [[1.0, 1.0]], [1.5], [0.0, 0.0], [1.0, 1.0]
    # the polygon has five vertices; the best one for (2, 1) is (1, 0.5)
    V = enumerate_vertices(np.array(A), np.array(b), np.array(lo), np.array(hi))
    assert len(V) == 5
    best = V[np.argmax(V @ [2.0, 1.0])]
    sol = solve_lp(LinearProgram([2.0, 1.0], A, b, lo, hi))
    assert np.allclose(best, [1.0, 0.5])
    assert np.allclose(sol.point, best)
    assert sol.objective_value == pytest.approx(2.5)


def test_zero_objective_returns_feasible_point():
    A = np.array([[1.0, 2.0], [3.0, -1.0]])
    sol = solve_lp(LinearProgram([0.0, 0.0], A, [1.0, 1.0], [0.0, 0.0], [1.0, 1.0]))
    assert sol.objective_value == 0.0
    assert np.all(A @ sol.point <= 1.0 + 1e-9)


def test_phase_one_positive_lower_bounds():
    # origin is infeasible; x1 + x2 >= 1.2 forces phase 1
    lp = LinearProgram([-1.0, -2.0], [[-1.0, -1.0]], [-1.2], [0.1, 0.1], [1.0, 1.0])
    sol = solve_lp(lp)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.point == pytest.approx([1.0, 0.2])


def test_infeasible():
    lp = LinearProgram([1.0, 1.0], [[1.0, 1.0]], [-0.5], [0.0, 0.0], [1.0, 1.0])
    assert solve_lp(lp).status is LpStatus.INFEASIBLE


def test_degenerate_instance_terminates():
    # many constraints through the same vertex
    A = np.array([[1.0, 1.0], [2.0, 2.0], [1.0, 0.0], [0.0, 1.0], [3.0, 3.0]])
    b = np.array([1.0, 2.0, 1.0, 1.0, 3.0])
    sol = solve_lp(LinearProgram([1.0, 1.0], A, b, [0.0, 0.0], [1.0, 1.0]))
    assert sol.objective_value == pytest.approx(1.0)


def test_iteration_cap(monkeypatch):
    import drsubmax.linprog as lpmod

    def fake_kernel(*args):
        return lpmod._ITER_CAP, 10
    monkeypatch.setattr(lpmod, "_simplex_kernel", fake_kernel)
    with pytest.raises(NumericalFailure):
        solve_lp(LinearProgram([1.0], [[1.0]], [1.0], [0.0], [1.0]))


@pytest.mark.parametrize("bad", [
    dict(lower_bounds=[1.0, 0.0], upper_bounds=[0.0, 1.0]),
    dict(objective=[math.nan, 1.0]),
])
def test_malformed_programs_rejected(bad):
    kwargs = dict(objective=[1.0, 1.0], constraint_matrix=[[1.0, 1.0]], constraint_rhs=[1.0],
                  lower_bounds=[0.0, 0.0], upper_bounds=[1.0, 1.0])
    kwargs.update(bad)
    with pytest.raises(ValueError):
        LinearProgram(**kwargs)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_matches_vertex_enumeration(seed):
    lp = random_lp(np.random.default_rng(seed))
    sol = solve_lp(lp)
    ref = brute_force_max(lp.objective, lp.constraint_matrix, lp.constraint_rhs,
                          lp.lower_bounds, lp.upper_bounds)
    if ref == -math.inf:
        assert sol.status is LpStatus.INFEASIBLE
        return
    assert sol.status is LpStatus.OPTIMAL
    assert abs(sol.objective_value - ref) <= 1e-8
    A, b = lp.constraint_matrix, lp.constraint_rhs
    assert np.all(A @ sol.point <= b + 1e-9)
    assert np.all(sol.point >= lp.lower_bounds - 1e-9)
    assert np.all(sol.point <= lp.upper_bounds + 1e-9)


def test_bitwise_deterministic():
    rng = np.random.default_rng(7)
    A = rng.uniform(size=(15, 25))
    c = rng.normal(size=25)
    lp = LinearProgram(c, A, np.ones(15), np.zeros(25), np.ones(25))
    first, second = solve_lp(lp), solve_lp(lp)
    assert first.point.tobytes() == second.point.tobytes()
