# src/mcpoly/aifv/codec.py
"""
Encoding and decoding with an AIFV-m code.

After a symbol is emitted from a master node of degree d, the next symbol is
coded with tree T_d. Decoding walks the current tree as far as the bits
allow and takes the last master node it passed.
"""

import dataclasses
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from mcpoly.aifv.tree import Code, Node
from mcpoly.errors import MalformedStreamError, UnknownSymbolError

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class DecodeStats:
    """Counters filled in by decode.

    Attributes:
        symbols: Symbols emitted.
        max_lookahead: Most bits read past the end of a codeword before it
            was committed.
    """
    symbols: int = 0
    max_lookahead: int = 0


def _codebooks(code: Code) -> List[Dict[int, Tuple[str, int]]]:
    books = []
    for tree in code.trees:
        books.append({node.symbol: (path, node.degree) for path, node in tree.masters()})
    return books


def encode(code: Code, message: Sequence[str]) -> str:
    """
    Concatenates the codewords of a message, switching trees as it goes.

    Args:
        code: The code.
        message: Symbol names; a plain string works when names are single
            characters.

    Returns:
        The bit string as '0'/'1' characters.

    Raises:
        UnknownSymbolError: For a symbol outside the source alphabet.
    """
    books = _codebooks(code)
    current = 0
    out: List[str] = []
    for position, symbol in enumerate(message):
        index = code.source.index(symbol)
        if index < 0:
            raise UnknownSymbolError(f"symbol {symbol!r} is not in the alphabet", field=f"message[{position}]")
        word, degree = books[current][index]
        out.append(word)
        current = degree
    return "".join(out)


def _walk(root: Node, bits: str, pos: int) -> Tuple[Optional[Node], int, int]:
    """Last master on the path read from pos, where its codeword ends, and
    how far the walk got."""
    node = root
    last: Optional[Node] = root if root.is_master else None
    last_end = pos
    i = pos
    while i < len(bits) and not node.is_leaf:
        child = node.child(bits[i])
        i += 1
        if child is None:
            return last, last_end, i
        node = child
        if node.is_master:
            last, last_end = node, i
    return last, last_end, i


def decode(
    code: Code,
    bits: str,
    length: Optional[int] = None,
    stats: Optional[DecodeStats] = None,
) -> List[str]:
    """
    Recovers a message from its encoding.

    Symbols with an empty codeword at the very end of a message leave no
    bits; pass the message length to recover them.

    Args:
        code: The code used for encoding.
        bits: The '0'/'1' string.
        length: Number of symbols to decode, if known.
        stats: Optional counters to fill in.

    Returns:
        The symbol names.

    Raises:
        MalformedStreamError: If no master node can be reached, bits remain
            after length symbols, or decoding stops making progress.
    """
    if any(b not in "01" for b in bits):
        raise MalformedStreamError("bit string may only contain '0' and '1'")
    stats = stats if stats is not None else DecodeStats()
    out: List[str] = []
    current = 0
    pos = 0
    idle = 0
    while pos < len(bits) or (length is not None and len(out) < length):
        if length is not None and len(out) >= length:
            raise MalformedStreamError(f"{len(bits) - pos} bit(s) left after {length} symbols")
        last, last_end, reached = _walk(code.trees[current].root, bits, pos)
        if last is None:
            raise MalformedStreamError(f"no codeword of T{current} starts at bit {pos}")
        stats.max_lookahead = max(stats.max_lookahead, reached - last_end)
        idle = idle + 1 if last_end == pos else 0
        if length is None and idle > code.m:
            raise MalformedStreamError(f"no progress at bit {pos}: only empty codewords match")
        out.append(code.source.symbols[last.symbol])
        pos = last_end
        current = last.degree
    stats.symbols += len(out)
    logger.debug("Decoded %d symbol(s) from %d bit(s), lookahead %d", len(out), len(bits), stats.max_lookahead)
    return out
