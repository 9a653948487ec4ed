"""Binary AIFV-m codes: trees, codec, tree search and baselines."""

from mcpoly.aifv.codec import DecodeStats, decode, encode
from mcpoly.aifv.enumerate import (
    best_tree,
    code_from_chain,
    enumerate_shapes,
    enumerate_trees,
    families_from_source,
    monotone_assignments,
    optimal_assignment,
    plane_value,
    slot_profiles,
)
from mcpoly.aifv.facets import FacetReport, FacetViolation, check_pointool
from mcpoly.aifv.huffman import huffman
from mcpoly.aifv.stats import (
    TreeStats,
    code_chain,
    code_cost,
    code_stationary,
    entropy,
    redundancy,
    to_state,
    tree_stats,
)
from mcpoly.aifv.tree import Code, CodeTree, Node, NodeKind, SourceSpec
from mcpoly.aifv.validate import Violation, check_code, errors, height_bound, validate

__all__ = [
    "Code",
    "CodeTree",
    "DecodeStats",
    "FacetReport",
    "FacetViolation",
    "Node",
    "NodeKind",
    "SourceSpec",
    "TreeStats",
    "Violation",
    "best_tree",
    "check_code",
    "check_pointool",
    "code_chain",
    "code_cost",
    "code_from_chain",
    "code_stationary",
    "decode",
    "encode",
    "entropy",
    "enumerate_shapes",
    "enumerate_trees",
    "errors",
    "families_from_source",
    "height_bound",
    "huffman",
    "monotone_assignments",
    "optimal_assignment",
    "plane_value",
    "redundancy",
    "slot_profiles",
    "to_state",
    "tree_stats",
    "validate",
]
