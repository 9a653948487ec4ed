# src/mcpoly/solvers/ellipsoid.py
"""
Central-cut ellipsoid method maximizing y over the polytope within a box.

Runs in float64. Its answer only seeds the exact iterate/prune phases, so
the float error never reaches the reported chain.
"""

import dataclasses
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
import numpy.typing as npt
import scipy.linalg

from mcpoly.chain import StateFamilies
from mcpoly.errors import BudgetExceededError, InvariantViolationError, ValidationError
from mcpoly.polytope import Box, FloatFamilies, phi_bound, separate_float
from mcpoly.solvers.report import TraceRecord

logger = logging.getLogger(__name__)


def default_budget(fams: StateFamilies) -> int:
    """Oracle call budget 10 m^2 (phi + 64)."""
    return 10 * fams.m**2 * (phi_bound(fams) + 64)


@dataclasses.dataclass
class EllipsoidState:
    """The current ellipsoid {z : (z - c)^T P^-1 (z - c) <= 1}.

    Attributes:
        center: c, of length m.
        shape: P, symmetric positive definite.
        budget: Remaining oracle calls.
        eps: Objective gap at which the search stops.
    """
    center: npt.NDArray[np.float64]
    shape: npt.NDArray[np.float64]
    budget: int
    eps: float

    @classmethod
    def ball(cls, center: npt.NDArray[np.float64], radius: float, budget: int, eps: float) -> "EllipsoidState":
        n = len(center)
        return cls(np.array(center, dtype=np.float64), radius**2 * np.eye(n), budget, eps)

    @property
    def dimension(self) -> int:
        return len(self.center)

    def check(self, tol: float = 1e-9) -> None:
        """
        Raises:
            InvariantViolationError: If the shape matrix is not symmetric or
                not positive definite.
        """
        scale = max(1.0, float(np.max(np.abs(self.shape))))
        if not np.allclose(self.shape, self.shape.T, atol=tol * scale):
            raise InvariantViolationError("ellipsoid shape matrix lost symmetry")
        try:
            scipy.linalg.cholesky(self.shape, lower=True)
        except np.linalg.LinAlgError as e:
            raise InvariantViolationError("ellipsoid shape matrix is not positive definite") from e

    def objective_bound(self) -> float:
        """Largest y over the ellipsoid."""
        return float(self.center[-1] + math.sqrt(max(self.shape[-1, -1], 0.0)))

    def cut(self, a: npt.NDArray[np.float64]) -> bool:
        """
        Replaces the ellipsoid by the smallest one containing its half
        {z : a.z <= a.c}. Returns False if the cut is degenerate.
        """
        n = self.dimension
        pa = self.shape @ a
        norm_sq = float(a @ pa)
        if not math.isfinite(norm_sq) or norm_sq <= 0.0:
            return False
        g = pa / math.sqrt(norm_sq)
        self.center = self.center - g / (n + 1)
        shape = (n * n / (n * n - 1.0)) * (self.shape - (2.0 / (n + 1)) * np.outer(g, g))
        self.shape = 0.5 * (shape + shape.T)
        return True


@dataclasses.dataclass(frozen=True)
class EllipsoidOutcome:
    """Best feasible center found.

    Attributes:
        x: Its x-part.
        y: Its height.
        calls: Oracle calls made.
        converged: True if the objective gap fell below eps.
        trace: One record per oracle call.
    """
    x: npt.NDArray[np.float64]
    y: float
    calls: int
    converged: bool
    trace: Tuple[TraceRecord, ...]


def _initial_state(fams: StateFamilies, box: Box, y_floor: float, budget: int, eps: float) -> EllipsoidState:
    lower = np.array([float(v) for v in box.lower])
    upper = np.array([float(v) for v in box.upper])
    top = max(max(float(s.cost) for s in fams.all_states()), y_floor + 1.0)
    center = np.append((lower + upper) / 2.0, (y_floor + top) / 2.0)
    half_widths = np.append((upper - lower) / 2.0, (top - y_floor) / 2.0)
    # Slightly larger than the circumscribed ball of the bounding box, so that
    # zero-width box intervals still leave a full-dimensional start.
    radius = 1.01 * float(np.linalg.norm(half_widths)) + 1e-6
    return EllipsoidState.ball(center, radius, budget, eps)


def ellipsoid_max_y(
    fams: StateFamilies,
    box: Box,
    eps: float = 1e-9,
    budget: Optional[int] = None,
    y_floor: float = -1.0,
) -> EllipsoidOutcome:
    """
    Approximates the highest point of the polytope with x in box.

    The start ball covers box x [y_floor, U] with U the largest state cost,
    which bounds h everywhere. Infeasible centers are cut by the oracle's
    plane; feasible ones by the objective y >= c_y.

    Args:
        fams: State families with non-negative costs.
        box: Box that contains the x-part of some highest point.
        eps: Stop once the largest y in the ellipsoid is within eps of the
            best feasible center.
        budget: Oracle calls allowed; defaults to default_budget(fams).
        y_floor: Lower face of the search region, below 0.

    Returns:
        An EllipsoidOutcome.

    Raises:
        ValidationError: If the box dimension does not match.
        BudgetExceededError: If the budget runs out before the gap closes.
            The best outcome so far, if any, is attached.
    """
    if box.dimension != fams.m - 1:
        raise ValidationError(f"box has dimension {box.dimension}, expected {fams.m - 1}", field="box")
    if budget is None:
        budget = default_budget(fams)
    ff = FloatFamilies(fams)
    lower = np.array([float(v) for v in box.lower])
    upper = np.array([float(v) for v in box.upper])
    state = _initial_state(fams, box, y_floor, budget, eps)
    logger.info(f"Ellipsoid search in dimension {fams.m}, budget {budget}, eps {eps}")

    best_z: Optional[npt.NDArray[np.float64]] = None
    trace: List[TraceRecord] = []
    calls = 0
    converged = False
    objective = np.zeros(fams.m)
    objective[-1] = -1.0

    while state.budget > 0:
        z = state.center
        result = separate_float(ff, z, lower, upper, y_floor)
        calls += 1
        state.budget -= 1
        trace.append(TraceRecord(calls - 1, tuple(float(v) for v in z[:-1]), (), float(z[-1]), result.provenance))
        if result.inside:
            if best_z is None or z[-1] > best_z[-1]:
                best_z = z.copy()
            normal = objective
        else:
            normal = result.normal
        if best_z is not None and state.objective_bound() - best_z[-1] <= eps:
            converged = True
            break
        if not state.cut(normal):
            logger.warning(f"Degenerate ellipsoid cut after {calls} calls; stopping")
            break
        if calls % 100 == 0:
            try:
                state.check()
            except InvariantViolationError as e:
                logger.warning(f"Stopping ellipsoid after {calls} calls: {e}")
                break
            logger.debug(f"Ellipsoid call {calls}: center {z}, bound {state.objective_bound()}")

    if best_z is None:
        raise BudgetExceededError(f"ellipsoid found no feasible point in {calls} oracle calls")
    outcome = EllipsoidOutcome(best_z[:-1].copy(), float(best_z[-1]), calls, converged, tuple(trace))
    if not converged and state.budget <= 0:
        raise BudgetExceededError(
            f"ellipsoid budget of {budget} calls exhausted, best y = {outcome.y:.12g}", best=outcome
        )
    logger.info(f"Ellipsoid best y = {outcome.y:.12g} after {calls} calls (converged: {converged})")
    return outcome
