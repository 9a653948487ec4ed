# src/mcpoly/config.py
"""
Configuration dataclasses for the mcpoly package.

Defines the structure for solver, AIFV search, instance generation and output
parameters using dataclasses, and provides the default values used by the
library and the command-line interface.
"""

import dataclasses
import logging
import os
from dataclasses import field
from pathlib import Path
from typing import Optional, Tuple

from mcpoly.errors import ValidationError

logger = logging.getLogger(__name__)

# Name of the environment variable capping the number of worker processes.
THREADS_ENV_VAR = "MCPOLY_THREADS"


@dataclasses.dataclass(frozen=True)
class SolverParams:
    """Parameters controlling the minimum-cost chain solvers."""
    method: str = "iterate"  # One of "brute", "iterate", "ellipsoid"
    eps: float = 1e-9  # Objective gap at which the ellipsoid stops
    budget: Optional[int] = None  # Ellipsoid oracle calls; None means 10*m^2*(phi+64)
    iteration_cap: int = 10_000  # Safety cap for the iterative algorithm
    brute_force_budget: int = 10**6  # Maximum number of chains brute force may evaluate
    ellipsoid_y_floor: float = -1.0  # Lower face of the ellipsoid search region, below 0
    rounding_denominator: int = 10**6  # Float ellipsoid centers are rounded to this denominator
    cores: int = 1  # Worker processes for brute force (capped by MCPOLY_THREADS)


@dataclasses.dataclass(frozen=True)
class AifvParams:
    """Parameters controlling the AIFV-m tree search."""
    m: int = 2  # Number of code trees
    height_cap: Optional[int] = None  # None means n + m
    full_height: bool = False  # Use the (n-1)(m+1)+1 bound instead of the default cap
    max_trees: int = 2_000_000  # Enumeration budget per tree type
    strict: bool = False  # Treat normalization warnings as errors


@dataclasses.dataclass(frozen=True)
class GeneratorParams:
    """Parameters for seeded random instance generation."""
    seed: int = 0
    m: int = 2
    states_per_family: int = 3
    max_denominator: int = 8  # Denominators of generated rationals are at most this
    symbols: int = 4  # Source size for generated AIFV sources
    bits: int = 4  # Generated probabilities are multiples of 2^-bits


@dataclasses.dataclass(frozen=True)
class OutputParams:
    """Parameters controlling output generation."""
    verbosity_level: int = 1  # Verbosity level (0-3)
    json_errors: bool = False  # Emit machine-readable errors on stderr
    float_digits: int = 12  # Significant digits of floats in CSV outputs


@dataclasses.dataclass(frozen=True)
class MCPolyConfig:
    """Main configuration object holding parameters for an mcpoly run."""
    solver: SolverParams = field(default_factory=SolverParams)
    aifv: AifvParams = field(default_factory=AifvParams)
    generator: GeneratorParams = field(default_factory=GeneratorParams)
    output: OutputParams = field(default_factory=OutputParams)


def load_default_config() -> MCPolyConfig:
    """
    Instantiates and returns the default mcpoly configuration settings.

    Returns:
        An immutable MCPolyConfig object populated with default parameter values.
    """
    return MCPolyConfig()


def effective_cores(requested: int) -> int:
    """
    Caps a requested worker count by the MCPOLY_THREADS environment variable.

    Args:
        requested: Number of workers asked for by the caller.

    Returns:
        The requested count, lowered to the environment cap when one is set.
        Never less than 1.
    """
    raw = os.environ.get(THREADS_ENV_VAR)
    cores = max(1, requested)
    if raw is None:
        return cores
    try:
        cap = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {THREADS_ENV_VAR}={raw!r}")
        return cores
    return max(1, min(cores, cap))


def default_height_cap(n: int, m: int, full_height: bool = False) -> int:
    """
    Height cap used for AIFV tree enumeration.

    Args:
        n: Number of source symbols.
        m: Number of code trees.
        full_height: If True, return the (n-1)(m+1)+1 bound that holds for
            every normalized tree; otherwise the pragmatic cap n + m.

    Returns:
        The maximal node depth allowed in enumerated trees. Never below m,
        the depth a type-(m-1) tree needs to reach its slave-1 node's child.
    """
    if full_height:
        return max((n - 1) * (m + 1) + 1, m)
    return n + m


# Commands that read an input file named on the command line.
_READ_COMMANDS = {"solve", "aifv-solve", "oracle", "envelope-dump"}
# Commands that need a code file.
_CODE_COMMANDS = {"aifv-encode", "aifv-decode"}


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Settings for one command-line invocation, layered over MCPolyConfig."""
    command: str
    base: MCPolyConfig = field(default_factory=MCPolyConfig)
    input: Optional[Path] = None
    output: Optional[Path] = None
    trace: Optional[Path] = None
    code: Optional[Path] = None  # Code file read by aifv encode/decode
    code_out: Optional[Path] = None  # Code file written by aifv solve
    box: Optional[str] = None
    x: Optional[str] = None
    y: Optional[str] = None
    x_range: Tuple[float, float, float] = (0.0, 1.0, 0.05)
    plot: Optional[Path] = None
    length: Optional[int] = None
    kind: str = "chain"

    @property
    def solver(self) -> SolverParams:
        return self.base.solver

    @property
    def aifv(self) -> AifvParams:
        return self.base.aifv

    def validate(self) -> "RunConfig":
        """
        Checks cross-field constraints.

        Raises:
            ValidationError: If an input file is missing, eps is not positive,
                or a budget is not positive.
        """
        if self.command in _READ_COMMANDS and self.input is None:
            raise ValidationError("an input file is required", field="input")
        if self.input is not None and not Path(self.input).is_file():
            raise ValidationError(f"input file not found: {self.input}", field="input")
        if self.command in _CODE_COMMANDS and self.code is None:
            raise ValidationError("a code file is required", field="code")
        if self.code is not None and not Path(self.code).is_file():
            raise ValidationError(f"code file not found: {self.code}", field="code")
        if not self.solver.eps > 0:
            raise ValidationError(f"eps must be positive, got {self.solver.eps}", field="eps")
        if self.solver.budget is not None and self.solver.budget <= 0:
            raise ValidationError(f"budget must be positive, got {self.solver.budget}", field="budget")
        if self.solver.brute_force_budget <= 0:
            raise ValidationError("brute-force budget must be positive", field="brute_force_budget")
        lo, hi, step = self.x_range
        if not (hi >= lo and step > 0):
            raise ValidationError(f"bad x range {self.x_range}", field="x_range")
        return self
