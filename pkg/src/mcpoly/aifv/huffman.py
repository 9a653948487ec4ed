# src/mcpoly/aifv/huffman.py
"""
Huffman codeword lengths, the baseline AIFV codes are compared against.
"""

import heapq
import itertools
from fractions import Fraction
from typing import List, Tuple

from mcpoly.aifv.tree import SourceSpec


def huffman(src: SourceSpec) -> Tuple[Tuple[int, ...], Fraction]:
    """
    Optimal prefix-code lengths by repeatedly merging the two lightest groups.

    A single-symbol source gets the empty codeword.

    Returns:
        (lengths per symbol, exact expected length)
    """
    lengths = [0] * src.n
    if src.n == 1:
        return tuple(lengths), Fraction(0)
    order = itertools.count()
    heap: List[Tuple[Fraction, int, List[int]]] = [(p, next(order), [i]) for i, p in enumerate(src.probabilities)]
    heapq.heapify(heap)
    while len(heap) > 1:
        w1, _, group1 = heapq.heappop(heap)
        w2, _, group2 = heapq.heappop(heap)
        for i in group1 + group2:
            lengths[i] += 1
        heapq.heappush(heap, (w1 + w2, next(order), group1 + group2))
    value = sum((p * length for p, length in zip(src.probabilities, lengths)), Fraction(0))
    return tuple(lengths), value
