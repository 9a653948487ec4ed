# src/mcpoly/chain/state.py
"""
States, state families and permissible chains.

A type-k state is a cost together with a transition distribution over the m
types. A permissible chain picks one state from each family.
"""

import dataclasses
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Tuple

from mcpoly.errors import ValidationError
from mcpoly.numerics import RationalLike, parse_rational

PointX = Tuple[Fraction, ...]


def as_point(values: Iterable[RationalLike], m: int) -> PointX:
    """
    Builds a point x = (x_1, ..., x_{m-1}); x_0 is implicitly 0.

    Raises:
        ValidationError: If the number of coordinates is not m - 1.
    """
    coords = tuple(parse_rational(v) for v in values)
    if len(coords) != m - 1:
        raise ValidationError(f"point needs {m - 1} coordinates, got {len(coords)}", field="x")
    return coords


def origin(m: int) -> PointX:
    """The all-zeros point in m - 1 dimensions."""
    return tuple(Fraction(0) for _ in range(m - 1))


@dataclasses.dataclass(frozen=True)
class State:
    """A Markov state with a cost and a transition distribution.

    Attributes:
        cost: The reward or length of the state.
        transitions: Probabilities q_0, ..., q_{m-1} of moving to each type.
        label: Opaque identifier used in reports.
    """
    cost: Fraction
    transitions: Tuple[Fraction, ...]
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "cost", parse_rational(self.cost))
        q = tuple(parse_rational(v) for v in self.transitions)
        object.__setattr__(self, "transitions", q)
        if len(q) < 2:
            raise ValidationError(f"needs at least 2 transition entries, got {len(q)}", field="transitions")
        for j, v in enumerate(q):
            if v < 0:
                raise ValidationError(f"q_{j} = {v} is negative", field="transitions")
        total = sum(q, Fraction(0))
        if total != 1:
            raise ValidationError(f"entries sum to {total}, not 1", field="transitions")
        if q[0] <= 0:
            raise ValidationError("q_0 must be positive", field="transitions")

    @property
    def m(self) -> int:
        """Number of types this state can transition to."""
        return len(self.transitions)

    def support(self) -> frozenset[int]:
        """The set P(S) of types reachable with positive probability."""
        return frozenset(j for j, v in enumerate(self.transitions) if v > 0)

    def __repr__(self) -> str:
        q = ", ".join(str(v) for v in self.transitions)
        name = f" {self.label!r}" if self.label else ""
        return f"<State{name} cost={self.cost} q=({q})>"


@dataclasses.dataclass(frozen=True)
class Chain:
    """One state per type; states[k] is the type-k state.

    Attributes:
        states: The m states.
        indices: Positions of the states in their families, when known.
    """
    states: Tuple[State, ...]
    indices: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        m = len(self.states)
        if m < 2:
            raise ValidationError(f"a chain needs at least 2 states, got {m}")
        for k, s in enumerate(self.states):
            if s.m != m:
                raise ValidationError(f"state has {s.m} transitions, chain has {m} types", field=f"states[{k}]")
        if self.indices is not None:
            object.__setattr__(self, "indices", tuple(self.indices))
            if len(self.indices) != m:
                raise ValidationError(f"{len(self.indices)} indices for {m} states", field="indices")

    @property
    def m(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return self.m

    def __getitem__(self, k: int) -> State:
        return self.states[k]

    def __iter__(self) -> Iterator[State]:
        return iter(self.states)


@dataclasses.dataclass(frozen=True)
class StateFamilies:
    """The per-type candidate state lists.

    Attributes:
        m: Number of types (at least 2).
        families: families[k] lists the type-k states in a fixed order; that
            order breaks ties between equally good states.
        restricted: True for families produced by a restriction, which may
            be empty.
    """
    m: int
    families: Tuple[Tuple[State, ...], ...]
    restricted: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "families", tuple(tuple(f) for f in self.families))
        if self.m < 2:
            raise ValidationError(f"m must be at least 2, got {self.m}", field="m")
        if len(self.families) != self.m:
            raise ValidationError(f"expected {self.m} families, got {len(self.families)}", field="families")
        for k, family in enumerate(self.families):
            if not family and not self.restricted:
                raise ValidationError("family is empty", field=f"families[{k}]")
            for i, s in enumerate(family):
                if s.m != self.m:
                    raise ValidationError(
                        f"state has {s.m} transition entries, expected {self.m}",
                        field=f"families[{k}][{i}].transitions",
                    )

    def __getitem__(self, k: int) -> Tuple[State, ...]:
        return self.families[k]

    def sizes(self) -> Tuple[int, ...]:
        """Number of states in each family."""
        return tuple(len(f) for f in self.families)

    def chain_count(self) -> int:
        """Number of permissible chains, the product of the family sizes."""
        total = 1
        for size in self.sizes():
            total *= size
        return total

    def all_states(self) -> Iterator[State]:
        for family in self.families:
            yield from family

    def chain(self, indices: Sequence[int]) -> Chain:
        """Materializes the chain picking families[k][indices[k]] for each k."""
        return Chain(tuple(self.families[k][i] for k, i in enumerate(indices)), tuple(indices))

    def shifted(self, delta: Fraction) -> "StateFamilies":
        """Copy with delta added to every state cost."""
        return StateFamilies(
            self.m,
            tuple(
                tuple(dataclasses.replace(s, cost=s.cost + delta) for s in family)
                for family in self.families
            ),
            self.restricted,
        )

    def __repr__(self) -> str:
        return f"<StateFamilies m={self.m} sizes={self.sizes()}>"
