import numpy as np
import pytest
from scipy.optimize import linprog

from blackwell_inmi.experiments import random_experiment, random_garbling
from blackwell_inmi.feasibility import (
    LinearProgram,
    LpOutcome,
    LpStatus,
    constraint_residual,
    garbling_feasibility_program,
    solve,
    split_garbling_solution,
)

TOL = 1e-9


def lp_min_t(a, b):
    lp = garbling_feasibility_program(a, b)
    out = solve(lp)
    assert out.status is LpStatus.OPTIMAL
    return lp, out


class TestSmallPrograms:
    def test_single_equality(self):
        out = solve(LinearProgram([0.0], [[1.0]], [1.0]))
        assert out.status is LpStatus.OPTIMAL
        np.testing.assert_allclose(out.x, [1.0])

    def test_negative_rhs_infeasible(self):
        out = solve(LinearProgram([0.0], [[1.0]], [-1.0]))
        assert out.status is LpStatus.INFEASIBLE
        assert out.x is None

    def test_unbounded(self):
        # min -x subject to x - y = 0
        out = solve(LinearProgram([-1.0, 0.0], [[1.0, -1.0]], [0.0]))
        assert out.status is LpStatus.UNBOUNDED

    def test_iteration_limit(self):
        a = np.hstack([np.eye(3), np.eye(3)])
        out = solve(LinearProgram(np.r_[np.ones(3), -np.ones(3)], a, np.ones(3)), max_iters=1)
        assert out.status is LpStatus.ITERATION_LIMIT

    def test_degenerate_cycling_example_terminates(self):
        # classic instance on which pure Dantzig pricing cycles; optimum -5/4
        c = [0, 0, 0, -0.75, 20, -0.5, 6]
        a = [
            [1, 0, 0, 0.25, -8, -1, 9],
            [0, 1, 0, 0.5, -12, -0.5, 3],
            [0, 0, 1, 0, 0, 1, 0],
        ]
        out = solve(LinearProgram(c, a, [0, 0, 1]))
        assert out.status is LpStatus.OPTIMAL
        assert out.objective_value == pytest.approx(-1.25, abs=1e-12)

    def test_outcome_invariant(self):
        with pytest.raises(ValueError):
            LpOutcome(LpStatus.OPTIMAL)
        with pytest.raises(ValueError):
            LpOutcome(LpStatus.INFEASIBLE, x=np.zeros(1))

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            LinearProgram([0.0, 0.0], [[1.0]], [1.0])
        with pytest.raises(ValueError):
            LinearProgram([0.0], [[1.0]], [1.0, 2.0])


class TestGarblingProgram:
    def test_identity_source_recovers_target(self, rng):
        for n in range(2, 5):
            b = random_experiment(n, n, rng).mat
            lp, out = lp_min_t(np.eye(n), b)
            g, t = split_garbling_solution(out.x, n, n)
            assert t <= TOL
            np.testing.assert_allclose(g, b, atol=1e-9)

    def test_self_pair(self, rng):
        a = random_experiment(3, 3, rng).mat
        _, out = lp_min_t(a, a)
        assert split_garbling_solution(out.x, 3, 3)[1] <= TOL

    def test_not_dominated_pair(self):
        a = [[0.9, 0.4], [0.1, 0.6]]
        b = [[0.6, 0.1], [0.4, 0.9]]
        _, out = lp_min_t(a, b)
        assert out.objective_value > 1e-6

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            garbling_feasibility_program(np.eye(2), np.eye(3))

    def test_variable_layout(self):
        lp = garbling_feasibility_program(np.eye(3), np.eye(3))
        assert lp.n_vars == 9 + 1 + 2 * 9
        assert lp.n_constraints == 2 * 9 + 3

    def test_feasible_instances_recognized(self, rng):
        for _ in range(300):
            n = rng.integers(2, 5)
            a = random_experiment(n, n, rng).mat
            b = random_garbling(n, rng).mat @ a
            _, out = lp_min_t(a, b)
            assert out.objective_value <= TOL

    def test_replay_reproduces_rhs(self, rng):
        for _ in range(300):
            n = rng.integers(2, 5)
            lp, out = lp_min_t(random_experiment(n, n, rng), random_experiment(n, n, rng))
            assert constraint_residual(lp, out.x) <= 10 * TOL

    def test_deterministic(self, rng):
        a, b = random_experiment(4, 4, rng), random_experiment(4, 4, rng)
        lp = garbling_feasibility_program(a, b)
        first, second = solve(lp), solve(lp)
        assert first.pivots == second.pivots
        np.testing.assert_array_equal(first.x, second.x)

    def test_optimum_matches_highs(self, rng):
        for _ in range(200):
            n = rng.integers(2, 5)
            lp = garbling_feasibility_program(random_experiment(n, n, rng), random_experiment(n, n, rng))
            ours = solve(lp)
            ref = linprog(lp.c, A_eq=lp.a_eq, b_eq=lp.b_eq, bounds=(0, None), method="highs")
            assert ref.status == 0
            assert ours.objective_value == pytest.approx(ref.fun, abs=1e-9)

    def test_general_programs_match_highs(self, rng):
        # random feasible bounded programs: b = A x0 with x0 >= 0, c >= 0
        for _ in range(200):
            m, n = rng.integers(1, 6), rng.integers(6, 12)
            a = rng.standard_normal((m, n))
            b = a @ rng.uniform(size=n)
            c = rng.uniform(size=n)
            ours = solve(LinearProgram(c, a, b))
            ref = linprog(c, A_eq=a, b_eq=b, bounds=(0, None), method="highs")
            assert ours.status is LpStatus.OPTIMAL
            assert ours.objective_value == pytest.approx(ref.fun, rel=1e-7, abs=1e-9)
