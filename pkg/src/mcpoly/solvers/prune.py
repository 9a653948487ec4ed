# src/mcpoly/solvers/prune.py
"""
Recovering an optimal chain from a highest point of the polytope.

At a highest point (x, y) not every g_k need reach y when the optimal chain has
transient states. Shrinking the allowed transition targets to the types whose
restricted envelope does reach y terminates with a chain of cost y.
"""

import logging
from fractions import Fraction
from typing import NamedTuple, Sequence

from mcpoly.chain import Chain, StateFamilies, cost
from mcpoly.errors import PruneDivergedError
from mcpoly.numerics import RationalLike, parse_rational
from mcpoly.polytope import EnvelopeResult, Restriction, envelope

logger = logging.getLogger(__name__)


class PruneResult(NamedTuple):
    restriction: Restriction
    chain: Chain
    shrinks: int
    envelope: EnvelopeResult


def prune(
    fams: StateFamilies,
    x_hat: Sequence[Fraction],
    y_hat: RationalLike,
    eq_tol: RationalLike = 0,
) -> PruneResult:
    """
    Shrinks R from all types until every g_{k|R}(x_hat) is within eq_tol of y_hat.

    Args:
        fams: State families.
        x_hat: x-part of a highest point.
        y_hat: Height of that point.
        eq_tol: Equality tolerance; 0 on the exact path.

    Returns:
        The final restriction, the chain S_{|R}(x_hat), the number of shrink
        steps and the final envelope.

    Raises:
        PruneDivergedError: If type 0 drops out of R, or, with eq_tol = 0,
            the resulting chain does not cost y_hat. Either means the input
            was not a highest point.
        EmptyRestrictedFamilyError: If some family has no state confined to R.
    """
    y_hat = parse_rational(y_hat)
    eq_tol = parse_rational(eq_tol)
    allowed = frozenset(range(fams.m))
    shrinks = 0
    while True:
        env = envelope(fams, x_hat, Restriction(allowed))
        kept = frozenset(k for k in allowed if abs(env.values[k] - y_hat) <= eq_tol)
        logger.debug(f"Prune pass {shrinks}: R = {sorted(allowed)}, g = {env.values}, keep {sorted(kept)}")
        if 0 not in kept:
            raise PruneDivergedError(
                f"type 0 left the index set at y = {y_hat}: g_0 = {env.values[0]} (R = {sorted(allowed)})"
            )
        if kept == allowed:
            break
        allowed = kept
        shrinks += 1

    chain = env.chain(fams)
    if eq_tol == 0:
        value = cost(chain)
        if value != y_hat:
            raise PruneDivergedError(f"pruned chain costs {value}, expected {y_hat}")
    logger.info(f"Pruned to R = {sorted(allowed)} in {shrinks} shrink step(s)")
    return PruneResult(Restriction(allowed), chain, shrinks, env)
