# src/mcpoly/aifv/validate.py
"""
Structural and normal-form checks for code trees.

Structural rules make a tree a legal type-k tree. The normal-form rules
describe trees that some minimum-cost code always uses; enumeration generates
only those, so they are reported as warnings unless strict mode is on.
"""

import dataclasses
import logging
from collections import Counter
from typing import List, Optional, Sequence

from mcpoly.aifv.tree import Code, CodeTree, Node, NodeKind
from mcpoly.errors import ValidationError

logger = logging.getLogger(__name__)

ERROR = "error"
WARNING = "warning"


@dataclasses.dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    path: str = ""
    severity: str = ERROR

    def __str__(self) -> str:
        where = f" at '{self.path}'" if self.path else ""
        return f"[{self.severity}] {self.rule}{where}: {self.message}"


def height_bound(n: int, m: int, k: int = 0) -> int:
    """
    Height bound for normalized minimum-cost trees: (n - 1)(m + 1) + 1, but
    never below k + 1, the depth of the child of the slave-1 node 0^k.
    """
    return max((n - 1) * (m + 1) + 1, k + 1)


def _check_master(path: str, node: Node, m: int, out: List[Violation]) -> None:
    if not 0 <= node.degree < m:
        out.append(Violation("degree", f"master degree {node.degree} outside 0..{m - 1}", path))
        return
    if node.one is not None:
        out.append(Violation("structure", "a master node has no 1-child", path))
    if node.degree == 0:
        if node.zero is not None:
            out.append(Violation("structure", "a degree-0 master must be a leaf", path))
        return
    current: Optional[Node] = node.zero
    for step in range(node.degree):
        if current is None or current.kind is not NodeKind.SLAVE0:
            out.append(
                Violation("chain", f"degree-{node.degree} master is followed by only {step} slave-0 node(s)", path)
            )
            return
        current = current.zero
    if current is None or current.kind is NodeKind.SLAVE0:
        out.append(Violation("chain", f"more than {node.degree} slave-0 nodes follow a degree-{node.degree} master", path))


def validate(
    t: CodeTree,
    m: int,
    n: int,
    labeled: bool = True,
    strict: bool = False,
    as_type: Optional[int] = None,
) -> List[Violation]:
    """
    Checks a tree against the code definition and the normal form.

    Args:
        t: The tree.
        m: Number of trees in the code.
        n: Number of source symbols.
        labeled: If False, masters carry no symbols and only their count is
            checked.
        strict: Report normal-form violations as errors.
        as_type: Check the tree as if its type were this value.

    Returns:
        Violations found; an empty list means the tree is valid and normalized.
    """
    k = t.k if as_type is None else as_type
    out: List[Violation] = []
    soft = ERROR if strict else WARNING
    if not 0 <= k < m:
        out.append(Violation("type", f"tree type {k} outside 0..{m - 1}"))

    parents = {"": None}
    symbols: List[Optional[int]] = []
    for path, node in t.nodes():
        if node.zero is not None:
            parents[path + "0"] = node
        if node.one is not None:
            parents[path + "1"] = node
        parent = parents[path]
        if node.kind is NodeKind.COMPLETE and (node.zero is None or node.one is None):
            out.append(Violation("structure", "a complete node needs both children", path))
        elif node.kind is NodeKind.SLAVE0 and (node.zero is None or node.one is not None):
            out.append(Violation("structure", "a slave-0 node has exactly a 0-child", path))
        elif node.kind is NodeKind.SLAVE1 and (node.one is None or node.zero is not None):
            out.append(Violation("structure", "a slave-1 node has exactly a 1-child", path))
        elif node.is_master:
            _check_master(path, node, m, out)
            symbols.append(node.symbol)

        if node.kind is NodeKind.SLAVE1:
            if path == "":
                out.append(Violation("normal-a", "the root is a slave-1 node", path, soft))
            if parent is not None and parent.kind is NodeKind.SLAVE1:
                out.append(Violation("normal-c", "a slave-1 node has a slave-1 parent", path, soft))
            if k == 0 or path != "0" * k:
                out.append(Violation("normal-e", f"slave-1 node away from 0^{k}", path, soft))
        if node.kind is NodeKind.SLAVE0:
            if path == "" and k == 0:
                out.append(Violation("normal-b", "the root of a type-0 tree is a slave-0 node", path, soft))
            if parent is not None and not (parent.is_master or parent.kind is NodeKind.SLAVE0):
                out.append(Violation("normal-d", "a slave-0 node hangs below a complete or slave-1 node", path, soft))

    if k >= 1:
        node = t.node_at("0" * k)
        if node is None or node.kind is not NodeKind.SLAVE1:
            out.append(Violation("slave1", f"node 0^{k} must be a slave-1 node", "0" * k))

    if labeled:
        counts = Counter(symbols)
        if None in counts:
            out.append(Violation("symbols", f"{counts[None]} master node(s) carry no symbol"))
        missing = [i for i in range(n) if counts[i] == 0]
        repeated = [i for i, c in counts.items() if i is not None and c > 1]
        foreign = [i for i in counts if i is not None and not 0 <= i < n]
        if missing or repeated or foreign:
            out.append(
                Violation("symbols", f"missing {missing}, repeated {sorted(repeated)}, unknown {sorted(foreign)}")
            )
    elif len(symbols) != n:
        out.append(Violation("symbols", f"{len(symbols)} master nodes for {n} symbols"))

    bound = height_bound(n, m, k)
    if t.height > bound:
        out.append(Violation("height", f"height {t.height} exceeds {bound}", severity=soft))
    return out


def errors(violations: Sequence[Violation]) -> List[Violation]:
    return [v for v in violations if v.severity == ERROR]


def check_code(code: Code, strict: bool = False) -> List[Violation]:
    """
    Validates every tree of a code.

    Raises:
        ValidationError: If any tree has an error-level violation; the first
            one is named.
    """
    found: List[Violation] = []
    for tree in code.trees:
        violations = validate(tree, code.m, code.source.n, strict=strict)
        for v in violations:
            if v.severity == ERROR:
                raise ValidationError(str(v), field=f"trees[{tree.k}]")
            logger.warning(f"T{tree.k}: {v}")
        found.extend(violations)
    return found
