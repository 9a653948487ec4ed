# src/mcpoly/solvers/pipeline.py
"""
Entry point choosing and chaining the solvers.
"""

import enum
import logging
from fractions import Fraction
from typing import Optional, Sequence

from mcpoly.chain import StateFamilies, cost
from mcpoly.config import SolverParams
from mcpoly.errors import BudgetExceededError, ValidationError
from mcpoly.polytope import Box
from mcpoly.solvers.brute import brute_force
from mcpoly.solvers.ellipsoid import ellipsoid_max_y
from mcpoly.solvers.iterate import iterate
from mcpoly.solvers.prune import prune
from mcpoly.solvers.report import SolveReport

logger = logging.getLogger(__name__)


class Method(enum.Enum):
    BRUTE_FORCE = "brute"
    ITERATE = "iterate"
    ELLIPSOID = "ellipsoid"

    @classmethod
    def parse(cls, name: str) -> "Method":
        try:
            return cls(name)
        except ValueError as e:
            choices = ", ".join(m.value for m in cls)
            raise ValidationError(f"unknown method {name!r} (choose from {choices})", field="method") from e


def cost_shift(fams: StateFamilies) -> Fraction:
    """max(0, -min l) + 1 if any cost is negative, else 0."""
    lowest = min(s.cost for s in fams.all_states())
    if lowest < 0:
        return max(Fraction(0), -lowest) + 1
    return Fraction(0)


def _ellipsoid_pipeline(
    fams: StateFamilies, params: SolverParams, box: Box
) -> SolveReport:
    try:
        outcome = ellipsoid_max_y(fams, box, params.eps, params.budget, params.ellipsoid_y_floor)
    except BudgetExceededError as e:
        if e.best is None:
            raise
        logger.warning(f"{e}; continuing from the best center found")
        outcome = e.best

    x_round = tuple(Fraction(float(v)).limit_denominator(params.rounding_denominator) for v in outcome.x)
    logger.info(f"Rounded ellipsoid point to {tuple(str(v) for v in x_round)}")
    exact = iterate(fams, x_round, params.iteration_cap, box)
    x_star = exact.trace[-1].x
    pruned = prune(fams, x_star, exact.cost, 0)

    phases = [
        f"ellipsoid: y = {outcome.y:.12g} after {outcome.calls} calls (converged: {outcome.converged})",
        f"iterate: {exact.iterations} step(s) to cost {exact.cost}",
        f"prune: R = {sorted(pruned.restriction.allowed)} after {pruned.shrinks} shrink(s)",
    ]
    return SolveReport(
        "ellipsoid",
        pruned.chain,
        cost(pruned.chain),
        iterations=exact.iterations,
        trace=list(outcome.trace) + exact.trace,
        phases=phases,
        restriction=tuple(sorted(pruned.restriction.allowed)),
    )


def solve(
    fams: StateFamilies,
    method: Method = Method.ITERATE,
    params: Optional[SolverParams] = None,
    x0: Optional[Sequence[Fraction]] = None,
    box: Optional[Box] = None,
) -> SolveReport:
    """
    Finds a minimum-cost permissible chain.

    If some state cost is negative, every cost is shifted up by a constant
    before solving; the reported chain uses the original states and cost.

    Args:
        fams: State families.
        method: Which solver to run.
        params: Solver parameters; defaults to SolverParams().
        x0: Start point for the iterative method.
        box: Box for the ellipsoid search; defaults to [0, 1]^{m-1}. Steps of
            the iterative method leaving it are noted in the trace.

    Returns:
        A SolveReport whose cost is checked against its chain.
    """
    params = params or SolverParams()
    shift = cost_shift(fams)
    work = fams.shifted(shift) if shift else fams
    if shift:
        logger.info(f"Shifting all state costs by {shift}")
    logger.info(f"Solving {fams} with method {method.value}")

    if method is Method.BRUTE_FORCE:
        report = brute_force(work, params.brute_force_budget, params.cores)
    elif method is Method.ITERATE:
        report = iterate(work, x0, params.iteration_cap, box)
    else:
        report = _ellipsoid_pipeline(work, params, box or Box.unit(fams.m))

    indices = report.chain.indices
    chain = fams.chain(indices) if indices is not None else report.chain
    report.chain = chain
    report.cost = cost(chain)
    report.shift = shift
    return report.check()
