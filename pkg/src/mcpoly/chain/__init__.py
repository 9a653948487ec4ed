"""Markov chains with rewards: states, costs and type-k hyperplanes."""

from mcpoly.chain.markov import (
    cost,
    f,
    intersection_point,
    recurrent_indices,
    stationary_distribution,
    transition_matrix,
    weighted_plane_identity,
)
from mcpoly.chain.state import Chain, PointX, State, StateFamilies, as_point, origin

__all__ = [
    "Chain",
    "PointX",
    "State",
    "StateFamilies",
    "as_point",
    "cost",
    "f",
    "intersection_point",
    "origin",
    "recurrent_indices",
    "stationary_distribution",
    "transition_matrix",
    "weighted_plane_identity",
]
