# tests/test_numerics.py
"""
Unit tests for mcpoly.numerics: exact rationals and linear algebra.
"""

import random
from fractions import Fraction

import numpy as np
import pytest

from mcpoly.errors import ParseError, SingularMatrixError, ValidationError
from mcpoly.numerics import (
    as_matrix,
    as_vector,
    bit_size,
    format_rational,
    identity,
    mat_vec,
    parse_rational,
    rank,
    solve_linear,
    to_float,
    vec_mat,
)


def test_parse_rational_accepts_exact_forms():
    assert parse_rational("3/8") == Fraction(3, 8)
    assert parse_rational(" 2 ") == Fraction(2)
    assert parse_rational("0.125") == Fraction(1, 8)
    assert parse_rational(5) == Fraction(5)
    assert parse_rational(Fraction(1, 3)) == Fraction(1, 3)


@pytest.mark.parametrize("bad", [0.5, True, "one half", "1/0", None])
def test_parse_rational_rejects(bad):
    with pytest.raises(ParseError):
        parse_rational(bad)


def test_format_rational():
    assert format_rational(Fraction(3, 8)) == "3/8"
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"


@pytest.mark.parametrize(
    "value, expected",
    [(Fraction(3, 8), 5), (Fraction(1), 0), (Fraction(7, 12), 7), (Fraction(-3, 8), 5)],
)
def test_bit_size(value, expected):
    assert bit_size(value) == expected, f"bit_size({value})"


def test_solve_identity():
    x = solve_linear(identity(3), as_vector([1, 2, 3]))
    assert list(x) == [1, 2, 3]
    assert all(isinstance(v, Fraction) for v in x)


def test_solve_diagonal():
    x = solve_linear(as_matrix([[2, 0], [0, 4]]), as_vector([1, 1]))
    assert list(x) == [Fraction(1, 2), Fraction(1, 4)]


def test_solve_needs_pivoting():
    a = as_matrix([[0, 1], [1, 0]])
    assert list(solve_linear(a, as_vector(["1/3", "2/5"]))) == [Fraction(2, 5), Fraction(1, 3)]


def test_solve_random_exact():
    """a x = b is recovered exactly for random rational systems."""
    rng = random.Random(7)
    solved = 0
    while solved < 5:
        a = as_matrix([[Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(5)] for _ in range(5)])
        if rank(a) < 5:
            continue
        x = as_vector([Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(5)])
        b = mat_vec(a, x)
        assert list(solve_linear(a, b)) == list(x)
        solved += 1


def test_solve_singular():
    with pytest.raises(SingularMatrixError):
        solve_linear(as_matrix([[1, 2], [2, 4]]), as_vector([1, 2]))


def test_solve_shape_mismatch():
    with pytest.raises(ValidationError):
        solve_linear(as_matrix([[1, 2, 3], [4, 5, 6]]), as_vector([1, 2]))
    with pytest.raises(ValidationError):
        solve_linear(identity(2), as_vector([1, 2, 3]))


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[0, 0], [0, 0]], 0),
        ([[int(i == j) for j in range(4)] for i in range(4)], 4),
        ([[1, 2], [2, 4]], 1),
        ([[1, 2, 3], [2, 4, 6], [1, 0, 1]], 2),
        ([["1/2", "1/3"], ["1/4", "1/6"]], 1),
    ],
)
def test_rank(rows, expected):
    assert rank(as_matrix(rows)) == expected


def test_matrices_are_read_only():
    a = identity(2)
    with pytest.raises(ValueError):
        a[0, 0] = Fraction(5)


def test_ragged_matrix_rejected():
    with pytest.raises(ValidationError):
        as_matrix([[1, 2], [3]])


def test_products_and_float_view():
    a = as_matrix([["1/2", "1/2"], [1, 0]])
    pi = as_vector(["2/3", "1/3"])
    # pi is stationary for a
    assert list(vec_mat(pi, a)) == list(pi)
    assert list(mat_vec(a, as_vector([2, 4]))) == [3, 2]
    np.testing.assert_allclose(to_float(pi), [2 / 3, 1 / 3])


def test_exact_round_trip_arithmetic():
    rng = random.Random(11)
    for _ in range(100):
        a = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
        b = Fraction(rng.randint(1, 50), rng.randint(1, 50))
        assert (a + b) - b == a
        assert (a * b) / b == a
