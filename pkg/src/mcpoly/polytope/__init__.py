"""Lower envelopes, restrictions and the separation oracle."""

from mcpoly.polytope.envelope import (
    EnvelopeResult,
    FloatFamilies,
    Restriction,
    envelope,
    envelope_float,
    require_nonempty,
    restrict_family,
)
from mcpoly.polytope.oracle import (
    Box,
    FloatCut,
    LpRow,
    SeparationResult,
    Verdict,
    lp_rows,
    phi_bound,
    plane_normal,
    separate,
    separate_float,
)

__all__ = [
    "Box",
    "EnvelopeResult",
    "FloatCut",
    "FloatFamilies",
    "LpRow",
    "Restriction",
    "SeparationResult",
    "Verdict",
    "envelope",
    "envelope_float",
    "lp_rows",
    "phi_bound",
    "plane_normal",
    "require_nonempty",
    "restrict_family",
    "separate",
    "separate_float",
]
