# src/mcpoly/chain/markov.py
"""
Stationary behaviour of permissible chains and their type-k hyperplanes.

Every state moves to type 0 with positive probability, so each chain is a
unichain and has a unique stationary distribution. Its cost (gain) is the
stationary average of the state costs; the same number is the height of the
point where the chain's m hyperplanes meet.
"""

import logging
from fractions import Fraction
from typing import Sequence, Tuple

from mcpoly.chain.state import Chain, PointX, State
from mcpoly.errors import InvariantViolationError
from mcpoly.numerics import Matrix, Vector, as_matrix, as_vector, solve_linear

logger = logging.getLogger(__name__)


def transition_matrix(c: Chain) -> Matrix:
    """Q with Q[k][j] = q_j(S_k)."""
    return as_matrix([s.transitions for s in c.states])


def stationary_distribution(c: Chain) -> Vector:
    """
    Unique stationary distribution of a chain.

    Solves pi (Q - I) = 0 together with sum(pi) = 1. The balance equation for
    type 0 is redundant and is replaced by the normalization.

    Args:
        c: A permissible chain.

    Returns:
        Exact vector pi; entries of transient states are exactly 0.
    """
    m = c.m
    rows = [[Fraction(1)] * m]
    for j in range(1, m):
        rows.append([c.states[k].transitions[j] - (1 if k == j else 0) for k in range(m)])
    rhs = [Fraction(1)] + [Fraction(0)] * (m - 1)
    return solve_linear(as_matrix(rows), as_vector(rhs))


def cost(c: Chain) -> Fraction:
    """Average steady-state cost sum_k l(S_k) pi_k of a chain."""
    pi = stationary_distribution(c)
    return sum((s.cost * p for s, p in zip(c.states, pi)), Fraction(0))


def recurrent_indices(c: Chain) -> frozenset[int]:
    """Types with positive stationary probability."""
    return frozenset(k for k, p in enumerate(stationary_distribution(c)) if p > 0)


def f(k: int, x: Sequence[Fraction], s: State) -> Fraction:
    """
    Value at x of the type-k hyperplane of state s.

    f_0(x, S) = l(S) + sum_{j>=1} q_j(S) x_j and, for k > 0, the same minus x_k.
    """
    q = s.transitions
    value = s.cost
    for j in range(1, len(q)):
        if q[j]:
            value += q[j] * x[j - 1]
    if k > 0:
        value -= x[k - 1]
    return value


def intersection_point(c: Chain, verify: bool = False) -> Tuple[PointX, Fraction]:
    """
    The unique common point of the chain's m hyperplanes.

    Writes the equalities y = f_k(x, S_k) as M (-y, x_1, ..., x_{m-1}) = -l,
    where M is Q - I with its first column replaced by ones.

    Args:
        c: A permissible chain.
        verify: Also check that the height equals cost(c).

    Returns:
        (x, y) with y = f_k(x, S_k) for every k.

    Raises:
        SingularMatrixError: Never for a valid chain; signals bad input.
        InvariantViolationError: If verify is set and the height differs
            from the stationary cost.
    """
    m = c.m
    rows = []
    for k, s in enumerate(c.states):
        rows.append([Fraction(1)] + [s.transitions[j] - (1 if j == k else 0) for j in range(1, m)])
    rhs = [-s.cost for s in c.states]
    solution = solve_linear(as_matrix(rows), as_vector(rhs))
    y = -solution[0]
    x = tuple(solution[1:])
    if verify:
        expected = cost(c)
        if y != expected:
            raise InvariantViolationError(f"intersection height {y} differs from chain cost {expected}")
        logger.debug("Intersection height %s matches the stationary cost", y)
    return x, y


def weighted_plane_identity(c: Chain, x: Sequence[Fraction]) -> Fraction:
    """sum_k f_k(x, S_k) pi_k; equals cost(c) at every x."""
    pi = stationary_distribution(c)
    return sum((f(k, x, s) * pi[k] for k, s in enumerate(c.states)), Fraction(0))
