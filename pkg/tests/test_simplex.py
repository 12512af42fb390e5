"""In-house simplex vs an independent LP solver, plus duals and edge cases."""

import random

import numpy as np
import pytest
from scipy.optimize import linprog

from fcuc.milp import EQ, GE, LE, MilpProblem
from fcuc.simplex import solve_lp


def _random_lp(rng: random.Random, n=6, m=5) -> MilpProblem:
    p = MilpProblem("rand")
    for j in range(n):
        lb = rng.uniform(0.0, 2.0)
        ub = lb + rng.uniform(0.5, 8.0) if rng.random() < 0.8 else np.inf
        p.add_var(f"x{j}", lb, ub, cost=rng.uniform(-5.0, 5.0))
    for i in range(m):
        coeffs = {
            j: rng.uniform(-4.0, 4.0) for j in range(n) if rng.random() < 0.7
        }
        if not coeffs:
            coeffs = {rng.randrange(n): 1.0}
        sense = rng.choice((LE, GE, EQ if i == 0 else LE))
        rhs = rng.uniform(-10.0, 20.0)
        p.add_row(f"r{i}", coeffs, sense, rhs)
    return p


def _scipy_solve(p: MilpProblem):
    a_ub, b_ub, a_eq, b_eq = p.split_rows()
    lb, ub = p.bounds()
    return linprog(
        p.objective(),
        A_ub=a_ub if a_ub.shape[0] else None,
        b_ub=b_ub if len(b_ub) else None,
        A_eq=a_eq if a_eq.shape[0] else None,
        b_eq=b_eq if len(b_eq) else None,
        bounds=np.column_stack([lb, ub]),
        method="highs",
    )


def test_matches_reference_solver_on_random_lps():
    rng = random.Random(42)
    solved = 0
    for _ in range(60):
        p = _random_lp(rng)
        ours = solve_lp(p)
        ref = _scipy_solve(p)
        if ref.status == 2:
            assert ours.status == "infeasible"
        elif ref.status == 3:
            assert ours.status == "unbounded"
        else:
            assert ours.status == "optimal"
            assert ours.objective == pytest.approx(float(ref.fun), abs=1e-6, rel=1e-7)
            solved += 1
            # our x must be feasible, not merely cost-matching
            dense, rhs, senses = p.dense()
            ax = dense @ ours.x
            for i, sense in enumerate(senses):
                if sense == LE:
                    assert ax[i] <= rhs[i] + 1e-7
                elif sense == GE:
                    assert ax[i] >= rhs[i] - 1e-7
                else:
                    assert ax[i] == pytest.approx(rhs[i], abs=1e-7)
    assert solved >= 20  # the generator must actually produce solvable LPs


def test_duals_price_rhs_perturbations():
    rng = random.Random(5)
    priced = 0
    for _ in range(20):
        p = _random_lp(rng, n=5, m=4)
        base = solve_lp(p)
        if base.status != "optimal":
            continue
        eps = 1e-5
        for i, row in enumerate(p.rows):
            bumped = p.copy()
            bumped.rows[i].rhs += eps
            after = solve_lp(bumped)
            if after.status != "optimal":
                continue
            predicted = base.objective + base.duals[i] * eps
            assert after.objective == pytest.approx(predicted, abs=1e-7)
            priced += 1
    assert priced >= 20


def test_simple_known_optimum():
    p = MilpProblem()
    p.add_var("x", 0.0, 10.0, cost=-1.0)
    p.add_var("y", 0.0, 10.0, cost=-2.0)
    p.add_row("cap", {0: 1.0, 1: 1.0}, LE, 6.0)
    res = solve_lp(p)
    assert res.status == "optimal"
    assert res.objective == pytest.approx(-12.0)
    assert res.x[1] == pytest.approx(6.0)


def test_unbounded_detected():
    p = MilpProblem()
    p.add_var("x", 0.0, np.inf, cost=-1.0)
    p.add_row("r", {0: -1.0}, LE, 0.0)
    assert solve_lp(p).status == "unbounded"


def test_infeasible_detected():
    p = MilpProblem()
    p.add_var("x", 0.0, 1.0, cost=1.0)
    p.add_row("lo", {0: 1.0}, GE, 5.0)
    assert solve_lp(p).status == "infeasible"


def test_equality_row_honoured():
    p = MilpProblem()
    p.add_var("x", 0.0, 10.0, cost=1.0)
    p.add_var("y", 0.0, 10.0, cost=3.0)
    p.add_row("fix", {0: 1.0, 1: 1.0}, EQ, 4.0)
    res = solve_lp(p)
    assert res.status == "optimal"
    assert res.x[0] == pytest.approx(4.0)
    assert res.objective == pytest.approx(4.0)


def test_lower_bounds_shifted_correctly():
    p = MilpProblem()
    p.add_var("x", 2.0, 9.0, cost=1.0)
    res = solve_lp(p)
    assert res.status == "optimal"
    assert res.x[0] == pytest.approx(2.0)
    assert res.objective == pytest.approx(2.0)
