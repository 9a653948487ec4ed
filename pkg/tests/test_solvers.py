# tests/test_solvers.py
"""
Unit tests for mcpoly.solvers: brute force, the fixed-point iteration,
pruning, the ellipsoid search and the solve() pipeline.
"""

import logging
import random
from fractions import Fraction

import numpy as np
import pytest
import scipy.optimize

from mcpoly.chain import State, StateFamilies, cost, intersection_point
from mcpoly.config import THREADS_ENV_VAR, SolverParams
from mcpoly.errors import (
    BudgetExceededError,
    InvariantViolationError,
    IterationCapExceededError,
    PruneDivergedError,
    ValidationError,
)
from mcpoly.polytope import Box, envelope, lp_rows, phi_bound
from mcpoly.solvers import (
    EllipsoidState,
    Method,
    SolveReport,
    brute_force,
    cost_shift,
    default_budget,
    ellipsoid_max_y,
    iterate,
    prune,
    solve,
    step_F,
)
from mcpoly.workflows.generate import random_families, transient_instance

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def hand() -> StateFamilies:
    """Singleton families whose only chain costs 4/3; its planes meet at x = 2/3."""
    return StateFamilies(2, ((State(1, (HALF, HALF), "A"),), (State(2, (1, 0), "B"),)))


@pytest.fixture(scope="module")
def choice() -> StateFamilies:
    return StateFamilies(
        2,
        ((State(1, (HALF, HALF), "A"),), (State(2, (1, 0), "B"), State(1, (1, 0), "C"))),
    )


@pytest.fixture(scope="module")
def transient() -> StateFamilies:
    """Type 0 is absorbing; the optimal chain leaves type 1 transient."""
    return StateFamilies(
        2,
        ((State(1, (1, 0), "A"),), (State(5, (1, 0), "B"), State(3, (HALF, HALF), "C"))),
    )


# --- Brute force ---

def test_brute_force_singleton(hand):
    report = brute_force(hand)
    assert report.cost == Fraction(4, 3)
    assert report.chain.indices == (0, 0)
    assert report.iterations == 1


def test_brute_force_picks_cheaper_state(choice):
    report = brute_force(choice)
    assert report.cost == 1
    assert report.chain[1].label == "C"


def test_brute_force_ties_are_lexicographic():
    s = State(1, (1, 0))
    fams = StateFamilies(2, ((s, s), (s, s)))
    assert brute_force(fams).chain.indices == (0, 0)


def test_brute_force_budget(choice):
    with pytest.raises(BudgetExceededError):
        brute_force(choice, budget=1)


def test_brute_force_parallel_matches_serial(monkeypatch):
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
    fams = random_families(random.Random(41), 3, 4)
    serial = brute_force(fams)
    parallel = brute_force(fams, cores=2)
    assert parallel.cost == serial.cost
    assert parallel.chain.indices == serial.chain.indices


def test_brute_force_respects_thread_cap(monkeypatch, caplog):
    monkeypatch.setenv(THREADS_ENV_VAR, "1")
    caplog.set_level(logging.INFO)
    brute_force(random_families(random.Random(42), 2, 2), cores=8)
    assert "1 worker(s)" in caplog.text


# --- Step map and iteration ---

def test_step_F_singletons_constant(hand):
    for z in [(Fraction(0),), (Fraction(5),), (Fraction(-3, 7),)]:
        assert step_F(hand, z) == (Fraction(2, 3),)


def test_step_F_fixed_point(hand):
    assert step_F(hand, (Fraction(2, 3),)) == (Fraction(2, 3),)


def test_iterate_singletons(hand):
    report = iterate(hand, (Fraction(9),))
    assert report.cost == Fraction(4, 3)
    assert report.iterations <= 2
    assert report.trace[-1].x == (Fraction(2, 3),)


def test_iterate_fixed_point_is_level():
    fams = random_families(random.Random(43), 3, 3)
    report = iterate(fams)
    env = envelope(fams, report.trace[-1].x)
    assert env.is_level()
    assert env.h == report.cost == cost(report.chain)
    assert all(g == report.cost for g in report.trace[-1].g)


def test_iterate_transient_optimum(transient):
    report = iterate(transient)
    assert report.cost == 1
    assert [r.x for r in report.trace] == [(Fraction(0),), (Fraction(4),)]
    assert report.chain[1].label == "B"


def test_iterate_notes_box_excursions(transient, caplog):
    report = iterate(transient, box=Box.unit(2))
    assert report.trace[0].note == "outside box"
    assert "left the box" in caplog.text


def test_iterate_cap(transient):
    with pytest.raises(IterationCapExceededError) as excinfo:
        iterate(transient, cap=1)
    assert len(excinfo.value.trace) == 1


def test_iterate_start_dimension(hand):
    with pytest.raises(ValidationError):
        iterate(hand, (0, 0))


def test_iterate_matches_brute_force():
    rng = random.Random(44)
    for _ in range(30):
        m = rng.choice([2, 3])
        fams = random_families(rng, m, 3)
        assert iterate(fams).cost == brute_force(fams).cost


@pytest.mark.slow
def test_iterate_matches_brute_force_many():
    rng = random.Random(45)
    for _ in range(200):
        m = rng.choice([2, 3, 4])
        fams = random_families(rng, m, rng.randint(1, 4))
        expected = brute_force(fams).cost
        assert iterate(fams).cost == expected
        x0 = tuple(Fraction(rng.randint(-8, 8), 4) for _ in range(m - 1))
        assert iterate(fams, x0).cost == expected


def test_brute_cost_bounds_envelope():
    """No point of the envelope lies above the optimal cost."""
    rng = random.Random(46)
    for _ in range(10):
        fams = random_families(rng, 3, 3)
        best = brute_force(fams).cost
        for _ in range(100):
            x = tuple(Fraction(rng.randint(-16, 32), 8) for _ in range(2))
            assert envelope(fams, x).h <= best


# --- Pruning ---

def test_prune_level_point_keeps_everything():
    fams = random_families(random.Random(47), 3, 3)
    report = iterate(fams)
    result = prune(fams, report.trace[-1].x, report.cost)
    assert result.restriction.allowed == frozenset({0, 1, 2})
    assert result.shrinks == 0
    assert cost(result.chain) == report.cost


def test_prune_transient(transient):
    result = prune(transient, (Fraction(0),), 1)
    assert result.restriction.allowed == frozenset({0})
    assert result.shrinks == 1
    assert result.chain[1].label == "B"
    assert cost(result.chain) == 1
    assert cost(result.chain) == brute_force(transient).cost


def test_prune_rejects_points_that_are_not_highest(transient):
    with pytest.raises(PruneDivergedError):
        prune(transient, (Fraction(0),), 2)


def test_prune_shrinks_at_most_m_minus_one():
    rng = random.Random(48)
    for _ in range(20):
        m = rng.choice([2, 3, 4])
        fams = transient_instance(rng, m)
        best = brute_force(fams).cost
        result = prune(fams, tuple(Fraction(0) for _ in range(m - 1)), best)
        assert result.shrinks <= m - 1
        assert cost(result.chain) == best


# --- Ellipsoid ---

def test_default_budget(hand):
    assert default_budget(hand) == 10 * 4 * (phi_bound(hand) + 64)


def test_ellipsoid_state_cut_shrinks_volume():
    state = EllipsoidState.ball(np.zeros(3), 2.0, budget=10, eps=1e-9)
    before = np.linalg.det(state.shape)
    assert state.cut(np.array([1.0, 0.0, 0.0]))
    assert np.linalg.det(state.shape) < before
    assert state.center[0] < 0
    state.check()


def test_ellipsoid_state_degenerate_cut():
    state = EllipsoidState.ball(np.zeros(2), 1.0, budget=10, eps=1e-9)
    assert not state.cut(np.zeros(2))


def test_ellipsoid_state_check_rejects_indefinite():
    state = EllipsoidState(np.zeros(2), np.array([[1.0, 0.0], [0.0, -1.0]]), 10, 1e-9)
    with pytest.raises(InvariantViolationError):
        state.check()


def test_ellipsoid_hand_instance(hand):
    outcome = ellipsoid_max_y(hand, Box.unit(2), eps=1e-9)
    assert outcome.converged
    assert outcome.y == pytest.approx(4 / 3, abs=1e-6)
    assert outcome.x[0] == pytest.approx(2 / 3, abs=1e-3)
    assert len(outcome.trace) == outcome.calls


def test_ellipsoid_singletons_random():
    rng = random.Random(49)
    checked = 0
    while checked < 5:
        fams = random_families(rng, 3, 1)
        x, y = intersection_point(fams.chain((0, 0, 0)))
        if not Box.unit(3).contains(x):
            continue
        outcome = ellipsoid_max_y(fams, Box.unit(3), eps=1e-8)
        assert outcome.y == pytest.approx(float(y), abs=1e-5)
        checked += 1


def test_ellipsoid_budget_keeps_best(hand):
    with pytest.raises(BudgetExceededError) as excinfo:
        ellipsoid_max_y(hand, Box.unit(2), budget=1)
    best = excinfo.value.best
    assert best is not None
    assert not best.converged
    assert best.y == pytest.approx(0.5)


def test_ellipsoid_budget_without_feasible_point():
    fams = StateFamilies(2, ((State(10, (HALF, HALF)),), (State(0, (1, 0)),)))
    with pytest.raises(BudgetExceededError) as excinfo:
        ellipsoid_max_y(fams, Box.unit(2), budget=1)
    assert excinfo.value.best is None


def test_ellipsoid_box_dimension(hand):
    with pytest.raises(ValidationError):
        ellipsoid_max_y(hand, Box.unit(3))


# --- Pipeline ---

def test_method_parse():
    assert Method.parse("brute") is Method.BRUTE_FORCE
    assert Method.parse("ellipsoid") is Method.ELLIPSOID
    with pytest.raises(ValidationError):
        Method.parse("simplex")


def test_cost_shift():
    fams = StateFamilies(2, ((State(-3, (1, 0)),), (State(2, (1, 0)),)))
    assert cost_shift(fams) == 4
    assert cost_shift(StateFamilies(2, ((State(0, (1, 0)),), (State(2, (1, 0)),)))) == 0


@pytest.mark.parametrize("method", list(Method))
def test_solve_hand_instance(hand, method):
    report = solve(hand, method)
    assert isinstance(report, SolveReport)
    assert report.cost == Fraction(4, 3)
    assert report.shift == 0


@pytest.mark.parametrize("method", list(Method))
def test_solve_equal_costs(method):
    rng = random.Random(50)
    base = random_families(rng, 3, 2)
    fams = StateFamilies(
        3, tuple(tuple(State(Fraction(5, 2), s.transitions) for s in family) for family in base.families)
    )
    assert solve(fams, method).cost == Fraction(5, 2)


@pytest.mark.parametrize("method", list(Method))
def test_solve_negative_costs(method):
    fams = StateFamilies(
        2,
        (
            (State(-3, (HALF, HALF), "A"), State(-1, (1, 0), "A2")),
            (State(-2, (1, 0), "B"), State(-5, (HALF, HALF), "C")),
        ),
    )
    report = solve(fams, method)
    assert report.shift == 6
    assert report.cost == brute_force(fams).cost
    assert report.chain[0].cost < 0


def test_solve_ellipsoid_phases(transient):
    report = solve(transient, Method.ELLIPSOID)
    assert report.cost == 1
    assert report.restriction is not None
    assert len(report.phases) == 3
    assert report.phases[0].startswith("ellipsoid")


def test_solve_methods_agree():
    rng = random.Random(51)
    for _ in range(10):
        fams = random_families(rng, rng.choice([2, 3]), 3)
        costs = {method: solve(fams, method).cost for method in Method}
        assert len(set(costs.values())) == 1, costs


def _lp_top(fams: StateFamilies, box: Box) -> float:
    """max y over the defining rows with x restricted to box, via scipy's LP solver."""
    rows = lp_rows(fams)
    a_ub = np.array([[float(a) for a in row.normal] for row in rows])
    b_ub = np.array([float(row.rhs) for row in rows])
    objective = np.zeros(fams.m)
    objective[-1] = -1.0
    bounds = [(float(lo), float(hi)) for lo, hi in zip(box.lower, box.upper)] + [(None, None)]
    result = scipy.optimize.linprog(objective, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    assert result.status == 0, result.message
    return -result.fun


@pytest.mark.slow
def test_solve_methods_agree_many():
    rng = random.Random(52)
    params = SolverParams()
    for _ in range(200):
        fams = random_families(rng, rng.choice([2, 3]), rng.randint(1, 4))
        exact = brute_force(fams).cost
        costs = {method: solve(fams, method, params).cost for method in Method}
        assert set(costs.values()) == {exact}, costs

        box = Box.unit(fams.m)
        outcome = ellipsoid_max_y(fams, box, eps=params.eps)
        assert outcome.converged
        assert outcome.y <= float(exact) + params.eps
        assert outcome.y == pytest.approx(_lp_top(fams, box), abs=params.eps + 1e-9)


def test_polytope_top_matches_linprog():
    """The LP max y over the defining rows equals the optimal chain cost."""
    rng = random.Random(53)
    for _ in range(10):
        fams = random_families(rng, rng.choice([2, 3]), 3)
        rows = lp_rows(fams)
        a_ub = np.array([[float(a) for a in row.normal] for row in rows])
        b_ub = np.array([float(row.rhs) for row in rows])
        objective = np.zeros(fams.m)
        objective[-1] = -1.0
        result = scipy.optimize.linprog(objective, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * fams.m, method="highs")
        assert result.status == 0, result.message
        assert -result.fun == pytest.approx(float(iterate(fams).cost), abs=1e-7)
