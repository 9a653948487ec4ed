"""Exact rational arithmetic and dense exact linear algebra."""

from mcpoly.numerics.linalg import (
    Matrix,
    Vector,
    as_matrix,
    as_vector,
    identity,
    mat_vec,
    rank,
    solve_linear,
    to_float,
    vec_mat,
)
from mcpoly.numerics.rational import (
    ONE,
    ZERO,
    Rational,
    RationalLike,
    bit_size,
    format_rational,
    parse_rational,
)

__all__ = [
    "Matrix",
    "ONE",
    "Rational",
    "RationalLike",
    "Vector",
    "ZERO",
    "as_matrix",
    "as_vector",
    "bit_size",
    "format_rational",
    "identity",
    "mat_vec",
    "parse_rational",
    "rank",
    "solve_linear",
    "to_float",
    "vec_mat",
]
