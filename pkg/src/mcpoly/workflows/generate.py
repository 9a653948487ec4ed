# src/mcpoly/workflows/generate.py
"""
Seeded random instances.

Every generator takes a random.Random instance so that callers control the
seed; nothing here touches the global generator.
"""

import logging
import random
from fractions import Fraction
from typing import List, Tuple

from mcpoly.aifv import SourceSpec
from mcpoly.chain import Chain, State, StateFamilies
from mcpoly.config import GeneratorParams
from mcpoly.errors import ValidationError

logger = logging.getLogger(__name__)


def _composition(rng: random.Random, total: int, parts: int, first_positive: bool = False) -> List[int]:
    # Uniform cut points give a random composition of total into parts >= 0.
    floor = 1 if first_positive else 0
    cuts = sorted(rng.randint(0, total - floor) for _ in range(parts - 1))
    bounds = [0] + cuts + [total - floor]
    counts = [bounds[i + 1] - bounds[i] for i in range(parts)]
    counts[0] += floor
    return counts


def random_state(rng: random.Random, m: int, max_denominator: int = 8, label: str = "") -> State:
    """A state with q_0 > 0 and cost in [0, 4], all denominators <= max_denominator."""
    d = rng.randint(1, max_denominator)
    counts = _composition(rng, d, m, first_positive=True)
    transitions = tuple(Fraction(c, d) for c in counts)
    cost = Fraction(rng.randint(0, 4 * d), d)
    return State(cost, transitions, label)


def random_families(rng: random.Random, m: int, states_per_family: int = 3, max_denominator: int = 8) -> StateFamilies:
    """m families of states_per_family random states, labelled "k.i"."""
    return StateFamilies(
        m,
        tuple(
            tuple(random_state(rng, m, max_denominator, f"{k}.{i}") for i in range(states_per_family))
            for k in range(m)
        ),
    )


def random_chain(rng: random.Random, m: int, max_denominator: int = 8) -> Chain:
    return Chain(tuple(random_state(rng, m, max_denominator, str(k)) for k in range(m)))


def transient_instance(rng: random.Random, m: int, states_per_family: int = 3, max_denominator: int = 8) -> StateFamilies:
    """
    Families in which type 0 is absorbing and cheapest.

    Family 0 only has states that stay at type 0. Every other family holds
    one absorbing state plus random ones, all costing more than any type-0
    state, so the optimal chain never leaves type 0 once there and every
    type k >= 1 is transient.
    """
    absorbing = tuple(Fraction(int(j == 0)) for j in range(m))
    zero = tuple(
        State(Fraction(rng.randint(0, max_denominator), max_denominator), absorbing, f"0.{i}")
        for i in range(states_per_family)
    )
    ceiling = max(s.cost for s in zero)
    families = [zero]
    for k in range(1, m):
        family = [State(ceiling + 1 + Fraction(rng.randint(0, max_denominator), max_denominator), absorbing, f"{k}.0")]
        for i in range(1, states_per_family):
            s = random_state(rng, m, max_denominator, f"{k}.{i}")
            family.append(State(ceiling + 1 + s.cost, s.transitions, s.label))
        families.append(tuple(family))
    return StateFamilies(m, tuple(families))


def random_dyadic_source(rng: random.Random, n: int, b: int) -> SourceSpec:
    """
    n positive probabilities, each a multiple of 2^-b, sorted descending.

    Raises:
        ValidationError: If 2^b < n, so that no such source exists.
    """
    total = 2**b
    if total < n:
        raise ValidationError(f"cannot split 2^{b} into {n} positive parts", field="symbols")
    # Composition of total - n into n parts, then one unit added to each.
    counts = [c + 1 for c in _composition(rng, total - n, n)]
    probs = sorted((Fraction(c, total) for c in counts), reverse=True)
    return SourceSpec(tuple(probs))


def generate(kind: str, params: GeneratorParams) -> Tuple[str, object]:
    """
    Builds the object requested by the `gen` command.

    Args:
        kind: "chain" for random state families, "transient" for an
            instance with transient types, "source" for a dyadic source.
        params: Seed and sizes.

    Returns:
        The kind and the generated StateFamilies or SourceSpec.
    """
    logger.info(f"Generating a random {kind} instance with seed {params.seed}")
    rng = random.Random(params.seed)
    if kind == "chain":
        return kind, random_families(rng, params.m, params.states_per_family, params.max_denominator)
    if kind == "transient":
        return kind, transient_instance(rng, params.m, params.states_per_family, params.max_denominator)
    if kind == "source":
        return kind, random_dyadic_source(rng, params.symbols, params.bits)
    raise ValidationError(f"unknown instance kind {kind!r}", field="kind")
