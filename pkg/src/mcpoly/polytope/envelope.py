# src/mcpoly/polytope/envelope.py
"""
Lower envelopes of the type-k hyperplanes.

g_k(x) is the minimum of f_k(x, S) over the (possibly restricted) type-k
family and h(x) = min_k g_k(x). The region under h is the Markov chain
polytope. Ties between states are broken by the lowest index in the family.
"""

import dataclasses
import logging
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from mcpoly.chain import Chain, State, StateFamilies, f
from mcpoly.errors import EmptyRestrictedFamilyError, ValidationError

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Restriction:
    """A set P of allowed transition targets; always contains type 0."""
    allowed: frozenset[int]

    def __post_init__(self) -> None:
        allowed = frozenset(int(k) for k in self.allowed)
        object.__setattr__(self, "allowed", allowed)
        if 0 not in allowed:
            raise ValidationError("restriction must contain type 0", field="allowed")
        if any(k < 0 for k in allowed):
            raise ValidationError(f"negative type index in {sorted(allowed)}", field="allowed")

    @classmethod
    def full(cls, m: int) -> "Restriction":
        return cls(frozenset(range(m)))

    @classmethod
    def of(cls, types: Iterable[int]) -> "Restriction":
        return cls(frozenset(types))

    def admits(self, s: State) -> bool:
        """True if P(S) is a subset of the allowed types."""
        return all(v == 0 or j in self.allowed for j, v in enumerate(s.transitions))

    def is_full(self, m: int) -> bool:
        return all(k in self.allowed for k in range(m))

    def __repr__(self) -> str:
        return f"<Restriction {sorted(self.allowed)}>"


@dataclasses.dataclass(frozen=True)
class EnvelopeResult:
    """Per-type minima at a point.

    Attributes:
        values: g_k(x) for k = 0..m-1.
        argmin: Index, within family k, of the state attaining g_k(x).
        h: min_k g_k(x).
    """
    values: Tuple[Fraction, ...]
    argmin: Tuple[int, ...]
    h: Fraction

    @property
    def minimizing_type(self) -> int:
        """Lowest type index k with g_k(x) = h(x)."""
        return next(k for k, v in enumerate(self.values) if v == self.h)

    def chain(self, fams: StateFamilies) -> Chain:
        """The chain S(x) made of the minimizing states."""
        return fams.chain(self.argmin)

    def is_level(self) -> bool:
        """True if all g_k(x) coincide, i.e. x is a fixed point of the step map."""
        return all(v == self.h for v in self.values)


def restrict_family(fams: StateFamilies, p: Restriction) -> StateFamilies:
    """
    Keeps only states that transition into allowed types.

    Families that end up empty are logged; callers decide whether that is
    fatal (see require_nonempty).

    Args:
        fams: The unrestricted families.
        p: The restriction.

    Returns:
        Restricted families, possibly with empty members.
    """
    restricted = tuple(tuple(s for s in family if p.admits(s)) for family in fams.families)
    empty = [k for k, family in enumerate(restricted) if not family]
    if empty:
        logger.warning(f"Restriction {sorted(p.allowed)} leaves families {empty} empty")
    return StateFamilies(fams.m, restricted, restricted=True)


def require_nonempty(fams: StateFamilies) -> None:
    """
    Raises:
        EmptyRestrictedFamilyError: If any family has no states.
    """
    for k, family in enumerate(fams.families):
        if not family:
            raise EmptyRestrictedFamilyError("no state satisfies the restriction", field=f"families[{k}]")


def _family_min(k: int, x: Sequence[Fraction], family: Sequence[State], p: Optional[Restriction]) -> Tuple[Fraction, int]:
    best_value: Optional[Fraction] = None
    best_index = -1
    for i, s in enumerate(family):
        if p is not None and not p.admits(s):
            continue
        value = f(k, x, s)
        if best_value is None or value < best_value:
            best_value, best_index = value, i
    if best_value is None:
        raise EmptyRestrictedFamilyError("no state satisfies the restriction", field=f"families[{k}]")
    return best_value, best_index


def envelope(fams: StateFamilies, x: Sequence[Fraction], p: Optional[Restriction] = None) -> EnvelopeResult:
    """
    Exact lower envelopes g_{k|P}(x) and h(x).

    Args:
        fams: State families.
        x: Point with m - 1 coordinates.
        p: Optional restriction; None means all types are allowed.

    Returns:
        An EnvelopeResult whose argmin indices refer to the unrestricted
        families.

    Raises:
        ValidationError: If x has the wrong dimension.
        EmptyRestrictedFamilyError: If the restriction empties a family.
    """
    if len(x) != fams.m - 1:
        raise ValidationError(f"point needs {fams.m - 1} coordinates, got {len(x)}", field="x")
    if p is not None and p.is_full(fams.m):
        p = None
    values: List[Fraction] = []
    argmin: List[int] = []
    for k, family in enumerate(fams.families):
        value, index = _family_min(k, x, family, p)
        values.append(value)
        argmin.append(index)
    return EnvelopeResult(tuple(values), tuple(argmin), min(values))


class FloatFamilies:
    """
    Float64 shadow of a set of state families for fast envelope evaluation.

    Each family is stored as a cost vector and a matrix of the transition
    entries q_1..q_{m-1}.
    """

    def __init__(self, fams: StateFamilies) -> None:
        self.m = fams.m
        self.costs: List[npt.NDArray[np.float64]] = []
        self.transitions: List[npt.NDArray[np.float64]] = []
        for family in fams.families:
            self.costs.append(np.array([float(s.cost) for s in family], dtype=np.float64))
            self.transitions.append(
                np.array([[float(v) for v in s.transitions[1:]] for s in family], dtype=np.float64).reshape(
                    len(family), self.m - 1
                )
            )

    def plane_values(self, k: int, x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        """f_k(x, S) for every state S of family k."""
        values = self.costs[k] + self.transitions[k] @ x
        if k > 0:
            values = values - x[k - 1]
        return values

    def __repr__(self) -> str:
        return f"<FloatFamilies m={self.m} sizes={tuple(len(c) for c in self.costs)}>"


def envelope_float(
    ff: FloatFamilies, x: npt.NDArray[np.float64]
) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.int64], float]:
    """
    Float evaluation of g_k(x) and h(x).

    Returns:
        (g, argmin, h) where argmin picks the first minimal state, matching
        the exact tie-break.
    """
    x = np.asarray(x, dtype=np.float64)
    g = np.empty(ff.m, dtype=np.float64)
    argmin = np.empty(ff.m, dtype=np.int64)
    for k in range(ff.m):
        values = ff.plane_values(k, x)
        i = int(np.argmin(values))
        argmin[k] = i
        g[k] = values[i]
    return g, argmin, float(g.min())
