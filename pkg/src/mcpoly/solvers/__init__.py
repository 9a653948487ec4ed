"""Minimum-cost chain solvers: brute force, fixed-point iteration, ellipsoid."""

from mcpoly.solvers.brute import brute_force
from mcpoly.solvers.ellipsoid import EllipsoidOutcome, EllipsoidState, default_budget, ellipsoid_max_y
from mcpoly.solvers.iterate import iterate, step_F
from mcpoly.solvers.pipeline import Method, cost_shift, solve
from mcpoly.solvers.prune import PruneResult, prune
from mcpoly.solvers.report import SolveReport, TraceRecord

__all__ = [
    "EllipsoidOutcome",
    "EllipsoidState",
    "Method",
    "PruneResult",
    "SolveReport",
    "TraceRecord",
    "brute_force",
    "cost_shift",
    "default_budget",
    "ellipsoid_max_y",
    "iterate",
    "prune",
    "solve",
    "step_F",
]
