# src/mcpoly/numerics/rational.py
"""
Exact rational scalars.

`fractions.Fraction` already keeps values in lowest terms with a positive
denominator, so equal rationals hash and compare identically. This module adds
parsing, the "p/q" text form used by every file format, and bit sizes.
"""

from fractions import Fraction
from numbers import Integral, Rational as _RationalABC
from typing import Union

from mcpoly.errors import ParseError

Rational = Fraction
RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(value: RationalLike) -> Fraction:
    """
    Converts an int, Fraction or "p/q" string to an exact Fraction.

    Floats are rejected because their binary value is rarely the intended one.

    Args:
        value: The value to convert. Strings may be "p/q", "p" or a finite
            decimal such as "0.125".

    Returns:
        The exact rational value.

    Raises:
        ParseError: If the value is a float, a bool, or an unparsable string.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"Expected an exact rational, got {type(value).__name__} {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, _RationalABC):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Not a rational number: {value!r}") from e
    raise ParseError(f"Expected an exact rational, got {type(value).__name__} {value!r}")


def format_rational(r: Fraction) -> str:
    """Formats a rational as "p/q", or "p" when the denominator is 1."""
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def _ceil_log2(k: int) -> int:
    # ceil(log2(k)) for k >= 1
    return (k - 1).bit_length()


def bit_size(r: Fraction) -> int:
    """
    Number of bits needed to write a rational number.

    The size of p/q in lowest terms is ceil(log2 |p|) + ceil(log2 q), with the
    convention that the size of 0 is 1.

    Args:
        r: The rational number.

    Returns:
        The bit size as a non-negative integer.
    """
    r = Fraction(r)
    if r == 0:
        return 1
    return _ceil_log2(abs(r.numerator)) + _ceil_log2(r.denominator)
