# src/mcpoly/solvers/report.py
"""
Solver results.
"""

import dataclasses
from fractions import Fraction
from typing import List, Optional, Tuple

import pandas as pd

from mcpoly.chain import Chain, cost
from mcpoly.errors import InvariantViolationError


@dataclasses.dataclass(frozen=True)
class TraceRecord:
    """One step of a solver.

    Attributes:
        iteration: Step index, starting at 0.
        x: The point visited (floats for the ellipsoid phase).
        g: Envelope values g_k(x), when evaluated.
        h: min_k g_k(x), when evaluated.
        note: Free-form annotation such as an oracle verdict.
    """
    iteration: int
    x: Tuple
    g: Tuple = ()
    h: Optional[object] = None
    note: str = ""


@dataclasses.dataclass
class SolveReport:
    """Outcome of a solver run.

    Attributes:
        solver: Name of the method that produced the chain.
        chain: An optimal chain.
        cost: Its exact cost, after undoing any cost shift.
        iterations: Number of steps taken by the final phase.
        trace: Per-step records.
        shift: Constant added to every state cost during solving.
        phases: Names and summaries of the pipeline phases that ran.
        restriction: Final index set of the pruning phase, if it ran.
    """
    solver: str
    chain: Chain
    cost: Fraction
    iterations: int = 0
    trace: List[TraceRecord] = dataclasses.field(default_factory=list)
    shift: Fraction = Fraction(0)
    phases: List[str] = dataclasses.field(default_factory=list)
    restriction: Optional[Tuple[int, ...]] = None

    def check(self) -> "SolveReport":
        """
        Recomputes the chain cost and compares it to the reported one.

        Raises:
            InvariantViolationError: On mismatch.
        """
        actual = cost(self.chain)
        if actual != self.cost:
            raise InvariantViolationError(f"{self.solver}: reported cost {self.cost} but chain costs {actual}")
        return self

    def trace_frame(self) -> pd.DataFrame:
        """The trace as a table with one column per coordinate and envelope value."""
        rows = []
        for record in self.trace:
            row = {"iteration": record.iteration, "note": record.note}
            for i, v in enumerate(record.x, start=1):
                row[f"x{i}"] = float(v)
            for k, v in enumerate(record.g):
                row[f"g{k}"] = float(v)
            row["h"] = float(record.h) if record.h is not None else float("nan")
            rows.append(row)
        return pd.DataFrame(rows)
