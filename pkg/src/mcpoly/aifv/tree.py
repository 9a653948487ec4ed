# src/mcpoly/aifv/tree.py
"""
Binary AIFV-m code trees and dyadic sources.

A tree is built from immutable nodes of four kinds:

- complete nodes, with both children;
- slave-0 nodes, with only a 0-child;
- slave-1 nodes, with only a 1-child;
- master nodes of degree d, carrying a symbol. Degree 0 masters are leaves;
  a master of degree d >= 1 has a 0-child that starts a run of exactly d
  slave-0 nodes.

Trees are written in a canonical preorder form such as
``T1:C,I1,C,M0.1,M0.2,M2.0,I0,I0,M0.3``. Each token fixes its own children
(0-child first), so the token list alone rebuilds the tree.
"""

import dataclasses
import enum
import re
import string
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from mcpoly.errors import ParseError, ValidationError
from mcpoly.numerics import RationalLike, parse_rational

_MASTER_TOKEN = re.compile(r"^M(\d+)(?:\.(\d+))?$")
_TREE_HEADER = re.compile(r"^T(\d+):(.*)$")


class NodeKind(enum.Enum):
    COMPLETE = "C"
    SLAVE0 = "I0"
    SLAVE1 = "I1"
    MASTER = "M"


@dataclasses.dataclass(frozen=True)
class Node:
    kind: NodeKind
    degree: int = 0
    symbol: Optional[int] = None
    zero: Optional["Node"] = None
    one: Optional["Node"] = None

    @property
    def is_master(self) -> bool:
        return self.kind is NodeKind.MASTER

    @property
    def is_leaf(self) -> bool:
        return self.zero is None and self.one is None

    def child(self, bit: str) -> Optional["Node"]:
        return self.zero if bit == "0" else self.one

    def token(self) -> str:
        if self.kind is NodeKind.MASTER:
            return f"M{self.degree}" if self.symbol is None else f"M{self.degree}.{self.symbol}"
        return self.kind.value


def complete(zero: Node, one: Node) -> Node:
    return Node(NodeKind.COMPLETE, zero=zero, one=one)


def slave0(zero: Node) -> Node:
    return Node(NodeKind.SLAVE0, zero=zero)


def slave1(one: Node) -> Node:
    return Node(NodeKind.SLAVE1, one=one)


def master(degree: int, symbol: Optional[int] = None, zero: Optional[Node] = None) -> Node:
    return Node(NodeKind.MASTER, degree=degree, symbol=symbol, zero=zero)


def _tokens(node: Node, out: List[str]) -> None:
    out.append(node.token())
    if node.zero is not None:
        _tokens(node.zero, out)
    if node.one is not None:
        _tokens(node.one, out)


def _parse_node(tokens: Sequence[str], pos: int) -> Tuple[Node, int]:
    if pos >= len(tokens):
        raise ParseError("Tree description ends before every node has its children")
    token = tokens[pos].strip()
    if token == "C":
        zero, pos = _parse_node(tokens, pos + 1)
        one, pos = _parse_node(tokens, pos)
        return complete(zero, one), pos
    if token == "I0":
        zero, pos = _parse_node(tokens, pos + 1)
        return slave0(zero), pos
    if token == "I1":
        one, pos = _parse_node(tokens, pos + 1)
        return slave1(one), pos
    match = _MASTER_TOKEN.match(token)
    if match is None:
        raise ParseError(f"Unknown tree token {token!r}")
    degree = int(match.group(1))
    symbol = int(match.group(2)) if match.group(2) is not None else None
    if degree == 0:
        return master(0, symbol), pos + 1
    zero, pos = _parse_node(tokens, pos + 1)
    return master(degree, symbol, zero), pos


@dataclasses.dataclass(frozen=True)
class CodeTree:
    """A type-k code tree.

    Attributes:
        k: Tree type; the encoder switches to this tree after a degree-k master.
        root: Root node.
    """
    k: int
    root: Node

    def serialize(self) -> str:
        """Canonical text form ``T<k>:<preorder tokens>``."""
        out: List[str] = []
        _tokens(self.root, out)
        return f"T{self.k}:" + ",".join(out)

    @classmethod
    def parse(cls, text: str) -> "CodeTree":
        """
        Rebuilds a tree from its canonical text form.

        Raises:
            ParseError: On unknown tokens, missing children or trailing tokens.
        """
        match = _TREE_HEADER.match(text.strip())
        if match is None:
            raise ParseError(f"Tree description must start with 'T<k>:', got {text[:20]!r}")
        tokens = [t for t in match.group(2).split(",") if t.strip()]
        root, end = _parse_node(tokens, 0)
        if end != len(tokens):
            raise ParseError(f"Tree description has {len(tokens) - end} trailing token(s)")
        return cls(int(match.group(1)), root)

    def nodes(self) -> Iterator[Tuple[str, Node]]:
        """Preorder (path, node) pairs; the path is the node's bit string."""
        stack: List[Tuple[str, Node]] = [("", self.root)]
        while stack:
            path, node = stack.pop()
            yield path, node
            if node.one is not None:
                stack.append((path + "1", node.one))
            if node.zero is not None:
                stack.append((path + "0", node.zero))

    def masters(self) -> List[Tuple[str, Node]]:
        return [(path, node) for path, node in self.nodes() if node.is_master]

    def node_at(self, path: str) -> Optional[Node]:
        node: Optional[Node] = self.root
        for bit in path:
            if node is None:
                return None
            node = node.child(bit)
        return node

    @property
    def height(self) -> int:
        return max(len(path) for path, _ in self.nodes())

    def codewords(self) -> Dict[int, str]:
        """Symbol index to codeword."""
        return {node.symbol: path for path, node in self.masters() if node.symbol is not None}

    def slots(self) -> Tuple[Tuple[int, int], ...]:
        """Sorted (depth, degree) pairs of the master nodes."""
        return tuple(sorted((len(path), node.degree) for path, node in self.masters()))

    def __str__(self) -> str:
        return self.serialize()


def relabel(root: Node, symbols: Sequence[int]) -> Node:
    """Copy of a tree with symbols[i] placed at the i-th master in preorder."""
    it = iter(symbols)

    def walk(node: Node) -> Node:
        if node.is_master:
            symbol = next(it)
            return dataclasses.replace(node, symbol=symbol, zero=walk(node.zero) if node.zero else None)
        return dataclasses.replace(
            node,
            zero=walk(node.zero) if node.zero else None,
            one=walk(node.one) if node.one else None,
        )

    return walk(root)


def default_symbols(n: int) -> Tuple[str, ...]:
    """a, b, c, ... and then s26, s27, ... past the alphabet."""
    letters = string.ascii_lowercase
    return tuple(letters[i] if i < len(letters) else f"s{i}" for i in range(n))


@dataclasses.dataclass(frozen=True)
class SourceSpec:
    """A memoryless source with dyadic probabilities.

    Attributes:
        probabilities: p_1, ..., p_n; positive, summing to 1, each a multiple
            of 2^-b.
        b: Bit parameter; derived from the denominators when not given.
        symbols: Symbol names; default a, b, c, ...
    """
    probabilities: Tuple[Fraction, ...]
    b: Optional[int] = None
    symbols: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        probs = tuple(parse_rational(p) for p in self.probabilities)
        object.__setattr__(self, "probabilities", probs)
        if not probs:
            raise ValidationError("a source needs at least one symbol", field="probabilities")
        for i, p in enumerate(probs):
            if p <= 0:
                raise ValidationError(f"probability {p} is not positive", field=f"probabilities[{i}]")
            if p.denominator & (p.denominator - 1):
                raise ValidationError(
                    f"probability {p} is not a multiple of a power of 1/2", field=f"probabilities[{i}]"
                )
        total = sum(probs, Fraction(0))
        if total != 1:
            raise ValidationError(f"probabilities sum to {total}, not 1", field="probabilities")
        needed = max(p.denominator.bit_length() - 1 for p in probs)
        if self.b is None:
            object.__setattr__(self, "b", needed)
        elif self.b < needed:
            raise ValidationError(f"b = {self.b} but the probabilities need {needed} bits", field="b")
        names = tuple(self.symbols) if self.symbols is not None else default_symbols(len(probs))
        if len(names) != len(probs):
            raise ValidationError(f"{len(names)} symbol names for {len(probs)} probabilities", field="symbols")
        if len(set(names)) != len(names):
            raise ValidationError("symbol names must be distinct", field="symbols")
        object.__setattr__(self, "symbols", names)

    @classmethod
    def of(cls, probabilities: Sequence[RationalLike], **kwargs) -> "SourceSpec":
        return cls(tuple(parse_rational(p) for p in probabilities), **kwargs)

    @property
    def n(self) -> int:
        return len(self.probabilities)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            return -1


@dataclasses.dataclass(frozen=True)
class Code:
    """An AIFV-m code: trees[k] is the type-k tree, all over one source."""
    trees: Tuple[CodeTree, ...]
    source: SourceSpec

    def __post_init__(self) -> None:
        object.__setattr__(self, "trees", tuple(self.trees))
        for k, tree in enumerate(self.trees):
            if tree.k != k:
                raise ValidationError(f"tree at position {k} has type {tree.k}", field=f"trees[{k}]")

    @property
    def m(self) -> int:
        return len(self.trees)

    def serialize(self) -> List[str]:
        return [tree.serialize() for tree in self.trees]
