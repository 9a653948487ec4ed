# src/mcpoly/solvers/iterate.py
"""
Fixed-point iteration on the Markov chain polytope.

Starting from any x, pick the minimizing state of every type at x and jump to
the point where those m planes meet. The sequence stops at a point that maps
to itself; the chain chosen there has minimum cost.
"""

import logging
from typing import List, Optional, Sequence

from mcpoly.chain import PointX, StateFamilies, cost, intersection_point, origin
from mcpoly.errors import InvariantViolationError, IterationCapExceededError, ValidationError
from mcpoly.polytope import Box, envelope
from mcpoly.solvers.report import SolveReport, TraceRecord

logger = logging.getLogger(__name__)

DEFAULT_ITERATION_CAP = 10_000


def step_F(fams: StateFamilies, z: Sequence) -> PointX:
    """The x-part of the intersection point of the chain S(z)."""
    env = envelope(fams, z)
    x, _ = intersection_point(env.chain(fams))
    return x


def iterate(
    fams: StateFamilies,
    x0: Optional[Sequence] = None,
    cap: int = DEFAULT_ITERATION_CAP,
    box: Optional[Box] = None,
) -> SolveReport:
    """
    Runs the step map until x stops changing.

    Args:
        fams: State families, all nonempty.
        x0: Starting point; defaults to the origin.
        cap: Maximum number of steps.
        box: If given, steps landing outside it are logged and noted in the
            trace. The iteration itself is not constrained.

    Returns:
        A SolveReport whose chain is S(x*) at the fixed point x*. Its trace
        has one record per visited point with the envelope values there.

    Raises:
        IterationCapExceededError: If the cap is hit or a point repeats
            without being fixed. The partial trace is attached.
    """
    x = tuple(x0) if x0 is not None else origin(fams.m)
    if len(x) != fams.m - 1:
        raise ValidationError(f"start point needs {fams.m - 1} coordinates, got {len(x)}", field="x0")
    trace: List[TraceRecord] = []
    seen = {x}
    logger.info(f"Iterating from x0 = {tuple(str(v) for v in x)} (cap {cap})")

    for i in range(cap):
        env = envelope(fams, x)
        chain = env.chain(fams)
        x_next, y = intersection_point(chain)
        note = ""
        if box is not None and not box.contains(x_next):
            note = "outside box"
            logger.warning(f"Step {i + 1} left the box {box}: x = {tuple(str(v) for v in x_next)}")
        trace.append(TraceRecord(i, x, env.values, env.h, note))
        logger.debug(f"Step {i}: h = {env.h}, chain {env.argmin}, next height {y}")

        if x_next == x:
            value = cost(chain)
            if value != y or not env.is_level():
                raise InvariantViolationError(f"fixed point {x} is not level: g = {env.values}, cost {value}")
            logger.info(f"Fixed point reached after {i + 1} step(s), cost {value}")
            return SolveReport("iterate", chain, value, iterations=i + 1, trace=trace, phases=["iterate"])
        if x_next in seen:
            raise IterationCapExceededError(
                f"step map revisited {tuple(str(v) for v in x_next)} after {i + 1} steps", trace=trace
            )
        seen.add(x_next)
        x = x_next

    raise IterationCapExceededError(f"no fixed point within {cap} steps", trace=trace)
