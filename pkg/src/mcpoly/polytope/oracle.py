# src/mcpoly/polytope/oracle.py
"""
Separation oracle for the Markov chain polytope intersected with a box.

Points are z = (x_1, ..., x_{m-1}, y). A separating plane is returned as a
normal a and offset b with a.z > b while a.w <= b for every w in the body.
"""

import dataclasses
import enum
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from mcpoly.chain import StateFamilies
from mcpoly.errors import ParseError, ValidationError
from mcpoly.numerics import RationalLike, bit_size, format_rational, parse_rational
from mcpoly.polytope.envelope import EnvelopeResult, FloatFamilies, Restriction, envelope, envelope_float

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Box:
    """Closed box prod_k [lower_k, upper_k] over x_1..x_{m-1}."""
    lower: Tuple[Fraction, ...]
    upper: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        lower = tuple(parse_rational(v) for v in self.lower)
        upper = tuple(parse_rational(v) for v in self.upper)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if len(lower) != len(upper):
            raise ValidationError(f"{len(lower)} lower bounds but {len(upper)} upper bounds", field="box")
        for k, (lo, hi) in enumerate(zip(lower, upper), start=1):
            if lo > hi:
                raise ValidationError(f"interval [{lo}, {hi}] is empty", field=f"box[{k}]")

    @classmethod
    def unit(cls, m: int) -> "Box":
        """The cube [0, 1]^{m-1}."""
        return cls(tuple(Fraction(0) for _ in range(m - 1)), tuple(Fraction(1) for _ in range(m - 1)))

    @classmethod
    def from_intervals(cls, intervals: Sequence[Tuple[RationalLike, RationalLike]]) -> "Box":
        return cls(tuple(lo for lo, _ in intervals), tuple(hi for _, hi in intervals))

    @classmethod
    def parse(cls, text: str) -> "Box":
        """
        Parses "l1,r1;l2,r2;..." into a box.

        Raises:
            ParseError: If an interval is not a pair of rationals.
        """
        intervals = []
        for part in text.split(";"):
            bounds = part.split(",")
            if len(bounds) != 2:
                raise ParseError(f"Box interval {part!r} must be 'low,high'")
            intervals.append((parse_rational(bounds[0]), parse_rational(bounds[1])))
        return cls.from_intervals(intervals)

    @property
    def dimension(self) -> int:
        return len(self.lower)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(lo <= v <= hi for v, lo, hi in zip(x, self.lower, self.upper))

    def center(self) -> Tuple[Fraction, ...]:
        return tuple((lo + hi) / 2 for lo, hi in zip(self.lower, self.upper))

    def __str__(self) -> str:
        return ";".join(f"{format_rational(lo)},{format_rational(hi)}" for lo, hi in zip(self.lower, self.upper))


class Verdict(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"


@dataclasses.dataclass(frozen=True)
class SeparationResult:
    """Oracle answer for one query point.

    Attributes:
        verdict: INSIDE or OUTSIDE.
        normal: Plane normal over (x_1, ..., x_{m-1}, y) when OUTSIDE.
        offset: Plane offset when OUTSIDE.
        provenance: Which constraint produced the plane.
        envelope: Envelope at x when it was evaluated.
    """
    verdict: Verdict
    normal: Optional[Tuple[Fraction, ...]] = None
    offset: Optional[Fraction] = None
    provenance: str = ""
    envelope: Optional[EnvelopeResult] = None

    @property
    def inside(self) -> bool:
        return self.verdict is Verdict.INSIDE

    def evaluate(self, z: Sequence[Fraction]) -> Fraction:
        """a.z for a point z; only meaningful when OUTSIDE."""
        if self.normal is None:
            raise ValueError("an INSIDE verdict has no plane")
        return sum((a * v for a, v in zip(self.normal, z)), Fraction(0))


def _unit(m: int, index: int, sign: int) -> Tuple[Fraction, ...]:
    return tuple(Fraction(sign) if i == index else Fraction(0) for i in range(m))


def plane_normal(k: int, transitions: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Normal of the row y + x_k - sum_{j>=1} q_j x_j <= l over (x, y)."""
    m = len(transitions)
    normal = [-transitions[j] for j in range(1, m)]
    if k > 0:
        normal[k - 1] += 1
    normal.append(Fraction(1))
    return tuple(normal)


def _box_cut(x: Sequence[Fraction], box: Box) -> Optional[Tuple[int, int, Fraction, str]]:
    for i, v in enumerate(x):
        if v < box.lower[i]:
            return i, -1, -box.lower[i], f"box: x_{i + 1} >= {box.lower[i]}"
        if v > box.upper[i]:
            return i, 1, box.upper[i], f"box: x_{i + 1} <= {box.upper[i]}"
    return None


def separate(
    fams: StateFamilies,
    z: Sequence[RationalLike],
    box: Box,
    y_floor: RationalLike = 0,
    p: Optional[Restriction] = None,
) -> SeparationResult:
    """
    Decides whether z lies under h inside box x [y_floor, inf).

    The floor is checked first, then the box facets, then the envelope. Above
    the envelope, the cut is the plane of the state attaining h(x) at the
    lowest minimizing type.

    Args:
        fams: State families.
        z: Query point (x_1, ..., x_{m-1}, y).
        box: Box bounding x.
        y_floor: Lower bound on y.
        p: Optional restriction applied to the envelope.

    Returns:
        A SeparationResult.

    Raises:
        ValidationError: If z or box has the wrong dimension.
        EmptyRestrictedFamilyError: Propagated from the envelope.
    """
    m = fams.m
    z = tuple(parse_rational(v) for v in z)
    if len(z) != m:
        raise ValidationError(f"query point needs {m} coordinates, got {len(z)}", field="z")
    if box.dimension != m - 1:
        raise ValidationError(f"box has dimension {box.dimension}, expected {m - 1}", field="box")
    x, y = z[:-1], z[-1]
    y_floor = parse_rational(y_floor)

    if y < y_floor:
        return SeparationResult(Verdict.OUTSIDE, _unit(m, m - 1, -1), -y_floor, f"floor: y >= {y_floor}")
    cut = _box_cut(x, box)
    if cut is not None:
        index, sign, offset, provenance = cut
        return SeparationResult(Verdict.OUTSIDE, _unit(m, index, sign), offset, provenance)

    env = envelope(fams, x, p)
    if y <= env.h:
        return SeparationResult(Verdict.INSIDE, envelope=env)
    k = env.minimizing_type
    state = fams[k][env.argmin[k]]
    label = state.label or f"#{env.argmin[k]}"
    logger.debug("y = %s above h = %s; cutting with type %d state %s", y, env.h, k, label)
    return SeparationResult(
        Verdict.OUTSIDE,
        plane_normal(k, state.transitions),
        state.cost,
        f"plane: type {k} state {label}",
        env,
    )


@dataclasses.dataclass(frozen=True)
class FloatCut:
    """Float oracle answer used by the ellipsoid loop."""
    inside: bool
    normal: Optional[npt.NDArray[np.float64]]
    provenance: str
    h: Optional[float] = None


def separate_float(
    ff: FloatFamilies,
    z: npt.NDArray[np.float64],
    lower: npt.NDArray[np.float64],
    upper: npt.NDArray[np.float64],
    y_floor: float,
) -> FloatCut:
    """Float counterpart of separate; same step order and tie-break."""
    m = ff.m
    x, y = z[:-1], float(z[-1])
    if y < y_floor:
        normal = np.zeros(m)
        normal[-1] = -1.0
        return FloatCut(False, normal, "floor")
    for i in range(m - 1):
        if x[i] < lower[i] or x[i] > upper[i]:
            normal = np.zeros(m)
            normal[i] = -1.0 if x[i] < lower[i] else 1.0
            return FloatCut(False, normal, f"box x_{i + 1}")
    g, argmin, h = envelope_float(ff, x)
    if y <= h:
        return FloatCut(True, None, "inside", h)
    k = int(np.argmin(g))
    normal = np.empty(m)
    normal[:-1] = -ff.transitions[k][argmin[k]]
    if k > 0:
        normal[k - 1] += 1.0
    normal[-1] = 1.0
    return FloatCut(False, normal, f"plane type {k}", h)


@dataclasses.dataclass(frozen=True)
class LpRow:
    """One defining inequality normal . (x, y) <= rhs of the polytope."""
    type_index: int
    state_index: int
    normal: Tuple[Fraction, ...]
    rhs: Fraction

    def size(self) -> int:
        """Total bit size of the coefficients and the right-hand side."""
        return sum(bit_size(a) for a in self.normal) + bit_size(self.rhs)


def lp_rows(fams: StateFamilies) -> List[LpRow]:
    """All rows y + x_k - sum_j q_j x_j <= l(S), one per (type, state)."""
    return [
        LpRow(k, i, plane_normal(k, s.transitions), s.cost)
        for k, family in enumerate(fams.families)
        for i, s in enumerate(family)
    ]


def phi_bound(fams: StateFamilies) -> int:
    """
    Facet complexity of the polytope: the largest bit size of a defining row.

    Used to size the ellipsoid budget.
    """
    return max(row.size() for row in lp_rows(fams))
