# src/mcpoly/aifv/facets.py
"""
Sampled check that the AIFV envelopes cross inside the unit cube.

For sources with n >= 2^m - 1 symbols, g_0 <= g_k on the face x_k = 0 and
g_k <= g_0 on the face x_k = 1. Together these place a highest point of the
polytope in [0, 1]^{m-1}.
"""

import dataclasses
import logging
import random
from fractions import Fraction
from typing import List, Optional, Tuple

from mcpoly.aifv.enumerate import families_from_source
from mcpoly.aifv.tree import SourceSpec
from mcpoly.chain import StateFamilies
from mcpoly.polytope import envelope

logger = logging.getLogger(__name__)

SAMPLE_DENOMINATOR = 64


@dataclasses.dataclass(frozen=True)
class FacetViolation:
    k: int
    face: int
    x: Tuple[Fraction, ...]
    g0: Fraction
    gk: Fraction


@dataclasses.dataclass
class FacetReport:
    """Outcome of check_pointool.

    Attributes:
        points: Number of sampled facet points.
        violations: Points where the facet inequality fails.
        coupling_violations: Points where g_0 <= g_k + x_k fails.
    """
    points: int = 0
    violations: List[FacetViolation] = dataclasses.field(default_factory=list)
    coupling_violations: List[FacetViolation] = dataclasses.field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_pointool(
    src: SourceSpec,
    m: int,
    samples: int = 20,
    seed: int = 0,
    height_cap: Optional[int] = None,
    fams: Optional[StateFamilies] = None,
) -> FacetReport:
    """
    Samples points on the faces x_k = 0 and x_k = 1 of the unit cube and
    compares g_0 with g_k there, with exact arithmetic.

    Args:
        src: The source.
        m: Number of code trees.
        samples: Points per (k, face) pair.
        seed: Seed of the point sampler.
        height_cap: Height cap for the families.
        fams: Precomputed families for src; built when omitted.

    Returns:
        A FacetReport. Violations are expected only for small sources.
    """
    if src.n < 2**m - 1:
        logger.warning(f"n = {src.n} < 2^{m} - 1; the facet inequalities need not hold")
    if fams is None:
        fams = families_from_source(src, m, height_cap)
    rng = random.Random(seed)
    logger.info(f"Sampling {samples} facet point(s) per face with seed {seed}")
    report = FacetReport()
    for k in range(1, m):
        for face in (0, 1):
            for _ in range(samples):
                x = [Fraction(rng.randint(0, SAMPLE_DENOMINATOR), SAMPLE_DENOMINATOR) for _ in range(m - 1)]
                x[k - 1] = Fraction(face)
                env = envelope(fams, x)
                g0, gk = env.values[0], env.values[k]
                report.points += 1
                record = FacetViolation(k, face, tuple(x), g0, gk)
                if (face == 0 and g0 > gk) or (face == 1 and gk > g0):
                    report.violations.append(record)
                if g0 > gk + x[k - 1]:
                    report.coupling_violations.append(record)
    if report.violations:
        logger.warning(f"{len(report.violations)} facet violation(s) in {report.points} points")
    return report
