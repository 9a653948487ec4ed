# src/mcpoly/numerics/linalg.py
"""
Dense exact linear algebra over the rationals.

Matrices and vectors are read-only NumPy object arrays holding Fractions.
Elimination is fraction-free (Bareiss): every row is first scaled to integers,
after which all intermediate values stay integral and every division is exact.
"""

import math
from fractions import Fraction
from typing import Iterable, List, Sequence

import numpy as np
import numpy.typing as npt

from mcpoly.errors import SingularMatrixError, ValidationError
from mcpoly.numerics.rational import RationalLike, parse_rational

Matrix = npt.NDArray[np.object_]
Vector = npt.NDArray[np.object_]


def _freeze(a: npt.NDArray[np.object_]) -> npt.NDArray[np.object_]:
    a.setflags(write=False)
    return a


def as_vector(values: Iterable[RationalLike], length: int | None = None) -> Vector:
    """
    Builds an immutable exact vector.

    Args:
        values: Entries, each an int, Fraction or "p/q" string.
        length: Expected length; checked when given.

    Returns:
        A 1-D read-only object array of Fractions.

    Raises:
        ValidationError: If the length does not match.
    """
    entries = [parse_rational(v) for v in values]
    if length is not None and len(entries) != length:
        raise ValidationError(f"expected {length} entries, got {len(entries)}")
    out = np.empty(len(entries), dtype=object)
    out[:] = entries
    return _freeze(out)


def as_matrix(rows: Iterable[Iterable[RationalLike]]) -> Matrix:
    """
    Builds an immutable exact matrix from row sequences.

    Raises:
        ValidationError: If the rows have different lengths.
    """
    parsed = [[parse_rational(v) for v in row] for row in rows]
    cols = len(parsed[0]) if parsed else 0
    for i, row in enumerate(parsed):
        if len(row) != cols:
            raise ValidationError(f"row {i} has {len(row)} entries, expected {cols}")
    out = np.empty((len(parsed), cols), dtype=object)
    for i, row in enumerate(parsed):
        out[i, :] = row
    return _freeze(out)


def identity(n: int) -> Matrix:
    """The n x n exact identity matrix."""
    return as_matrix([[int(i == j) for j in range(n)] for i in range(n)])


def to_float(a: npt.NDArray[np.object_]) -> npt.NDArray[np.float64]:
    """Explicit conversion of an exact vector or matrix to float64."""
    return np.asarray(a, dtype=np.float64)


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    # Scale each row by the lcm of its denominators.
    out = []
    for row in rows:
        scale = math.lcm(*(Fraction(v).denominator for v in row)) if row else 1
        out.append([int(Fraction(v) * scale) for v in row])
    return out


def _bareiss(m: List[List[int]], ncols: int) -> List[tuple[int, int]]:
    """In-place fraction-free row echelon form; returns (row, col) pivots."""
    nrows = len(m)
    pivots: List[tuple[int, int]] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[p], m[r] = m[r], m[p]
        pivot = m[r][c]
        for i in range(r + 1, nrows):
            lead = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c + 1, len(row_i)):
                row_i[j] = (row_i[j] * pivot - lead * row_r[j]) // prev
            row_i[c] = 0
        prev = pivot
        pivots.append((r, c))
        r += 1
    return pivots


def rank(a: Matrix) -> int:
    """
    Exact rank of a rational matrix.

    Args:
        a: Any 2-D exact matrix.

    Returns:
        The rank over the rationals.
    """
    a = np.asarray(a, dtype=object)
    if a.size == 0:
        return 0
    work = _integer_rows(a.tolist())
    return len(_bareiss(work, a.shape[1]))


def solve_linear(a: Matrix, b: Vector) -> Vector:
    """
    Solves a x = b exactly.

    Args:
        a: Square n x n exact matrix.
        b: Right-hand side of length n.

    Returns:
        The unique exact solution x.

    Raises:
        ValidationError: If the shapes do not match.
        SingularMatrixError: If a has rank below n.
    """
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"solve_linear needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if b.shape != (n,):
        raise ValidationError(f"right-hand side has shape {b.shape}, expected ({n},)")

    augmented = [list(a[i]) + [b[i]] for i in range(n)]
    work = _integer_rows(augmented)
    pivots = _bareiss(work, n)
    if len(pivots) < n:
        raise SingularMatrixError(f"matrix of size {n} has rank {len(pivots)}")

    x: List[Fraction] = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(work[i][n])
        for j in range(i + 1, n):
            acc -= work[i][j] * x[j]
        x[i] = acc / work[i][i]
    return as_vector(x)


def mat_vec(a: Matrix, x: Vector) -> Vector:
    """Exact matrix-vector product."""
    return as_vector(np.dot(np.asarray(a, dtype=object), np.asarray(x, dtype=object)))


def vec_mat(x: Vector, a: Matrix) -> Vector:
    """Exact row-vector times matrix product."""
    return as_vector(np.dot(np.asarray(x, dtype=object), np.asarray(a, dtype=object)))
