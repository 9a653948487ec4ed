# src/mcpoly/aifv/stats.py
"""
Per-tree statistics and the cost of a code.

A type-k tree becomes a type-k Markov state: its cost is the average
codeword length and q_j is the probability of emitting from a degree-j
master, after which the encoder moves to tree j.
"""

import dataclasses
import logging
from fractions import Fraction
from typing import Tuple

import numpy as np

from mcpoly.aifv.tree import Code, CodeTree, SourceSpec
from mcpoly.chain import Chain, State, cost, stationary_distribution

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class TreeStats:
    lengths: Tuple[int, ...]
    degrees: Tuple[int, ...]
    average_length: Fraction
    transitions: Tuple[Fraction, ...]


def tree_stats(t: CodeTree, src: SourceSpec, m: int) -> TreeStats:
    """
    Codeword lengths, master degrees, average length and transition vector.

    Args:
        t: A labeled tree.
        src: The source its symbols index into.
        m: Number of trees in the code; the length of the transition vector.
    """
    lengths = [0] * src.n
    degrees = [0] * src.n
    for path, node in t.masters():
        lengths[node.symbol] = len(path)
        degrees[node.symbol] = node.degree
    q = [Fraction(0)] * m
    for p, d in zip(src.probabilities, degrees):
        q[d] += p
    average = sum((p * length for p, length in zip(src.probabilities, lengths)), Fraction(0))
    return TreeStats(tuple(lengths), tuple(degrees), average, tuple(q))


def to_state(t: CodeTree, src: SourceSpec, m: int) -> State:
    """The tree as a Markov state labeled with its canonical form."""
    stats = tree_stats(t, src, m)
    return State(stats.average_length, stats.transitions, t.serialize())


def code_chain(code: Code) -> Chain:
    return Chain(tuple(to_state(t, code.source, code.m) for t in code.trees))


def code_cost(code: Code) -> Fraction:
    """Average codeword length per symbol in the long run."""
    return cost(code_chain(code))


def code_stationary(code: Code) -> Tuple[Fraction, ...]:
    return tuple(stationary_distribution(code_chain(code)))


def entropy(src: SourceSpec) -> float:
    """-sum p log2 p in bits."""
    p = np.array([float(v) for v in src.probabilities], dtype=np.float64)
    return float(-(p * np.log2(p)).sum())


def redundancy(value: Fraction, src: SourceSpec, m: int) -> Tuple[float, bool]:
    """
    Cost minus entropy, and whether it stays within the 1/m worst case known
    for optimal AIFV-m codes. Exceeding it is only logged.
    """
    r = float(value) - entropy(src)
    within = r <= 1.0 / m + 1e-12
    if not within:
        logger.warning(f"Redundancy {r:.6g} exceeds 1/{m}")
    return r, within
