# src/mcpoly/aifv/enumerate.py
"""
Exhaustive search over normalized AIFV-m code trees.

Shapes (trees whose masters carry no symbols) are generated top-down by a
memoized recursion over the position context of each node:

- depth, bounded by the height cap;
- the number of slave-0 nodes a master above still requires;
- whether the node closes such a run and so may not be a slave-0 node;
- its index t when it lies on the left path 0^t of a type-k tree, k >= 1;
- whether it continues a run of slave-0 nodes hanging from the root.

Only normalized trees are produced: slave-0 nodes appear in master runs or in
a run from the root of T_k (k >= 1), and the only slave-1 node is 0^k.

Which symbol sits on which master only matters through the multiset of
(depth, degree) slots, so most callers work with one representative shape
per slot multiset.
"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from mcpoly.aifv.stats import to_state
from mcpoly.aifv.tree import Code, CodeTree, Node, SourceSpec, complete, master, relabel, slave0, slave1
from mcpoly.chain import Chain, State, StateFamilies
from mcpoly.config import default_height_cap
from mcpoly.errors import BudgetExceededError, EmptyRestrictedFamilyError, ValidationError
from mcpoly.polytope import Restriction

logger = logging.getLogger(__name__)

DEFAULT_MAX_TREES = 2_000_000

# (depth, pending slave-0 count, closes a run, left-path index, root run)
_Context = Tuple[int, int, bool, Optional[int], bool]
_Child = Tuple[_Context, int]
_Slots = Tuple[Tuple[int, int], ...]


class _Grammar:
    """Node choices for one (k, m, n, height cap, allowed degrees) setting."""

    def __init__(self, k: int, m: int, cap: int, degrees: Sequence[int], max_trees: Optional[int] = None) -> None:
        self.k = k
        self.m = m
        self.cap = cap
        self.max_trees = max_trees
        self.degrees = tuple(sorted(d for d in degrees if 0 <= d < m))
        self._shapes: Dict[Tuple[_Context, int], Tuple[Node, ...]] = {}
        self._profiles: Dict[Tuple[_Context, int], Dict[_Slots, Node]] = {}

    def root(self) -> _Context:
        on_left = 0 if self.k >= 1 else None
        return (0, 0, False, on_left, self.k >= 1)

    def _next_left(self, left: Optional[int]) -> Optional[int]:
        return None if left is None else left + 1

    def expansions(self, ctx: _Context, masters: int) -> Iterator[Tuple[str, int, List[_Child]]]:
        depth, pending, closes, left, root_run = ctx
        if depth > self.cap or masters < 1 or masters > 2 ** (self.cap - depth + 1) - 1:
            return
        below = depth + 1
        if pending > 0:
            if left is not None and left == self.k:
                return
            child = (below, pending - 1, pending == 1, self._next_left(left), False)
            yield "I0", 0, [(child, masters)]
            return
        if left is not None and left == self.k:
            yield "I1", 0, [((below, 0, False, None, False), masters)]
            return
        inner_leaf = left is not None and left < self.k
        for a in range(1, masters):
            yield "C", 0, [
                ((below, 0, False, self._next_left(left), False), a),
                ((below, 0, False, None, False), masters - a),
            ]
        if root_run and not closes:
            yield "I0", 0, [((below, 0, False, self._next_left(left), True), masters)]
        for d in self.degrees:
            if d == 0:
                if masters == 1 and not inner_leaf:
                    yield "M", 0, []
            elif masters >= 2:
                yield "M", d, [((below, d, False, self._next_left(left), False), masters - 1)]

    @staticmethod
    def _build(kind: str, degree: int, children: Sequence[Node]) -> Node:
        if kind == "C":
            return complete(children[0], children[1])
        if kind == "I0":
            return slave0(children[0])
        if kind == "I1":
            return slave1(children[0])
        return master(degree, None, children[0] if children else None)

    def shapes(self, ctx: _Context, masters: int) -> Tuple[Node, ...]:
        key = (ctx, masters)
        if key not in self._shapes:
            out: List[Node] = []
            for kind, degree, children in self.expansions(ctx, masters):
                options = [self.shapes(c, n) for c, n in children]
                for combo in itertools.product(*options):
                    out.append(self._build(kind, degree, combo))
                    if self.max_trees is not None and len(out) > self.max_trees:
                        raise BudgetExceededError(f"more than {self.max_trees} type-{self.k} tree shapes")
            self._shapes[key] = tuple(out)
        return self._shapes[key]

    def profiles(self, ctx: _Context, masters: int) -> Dict[_Slots, Node]:
        key = (ctx, masters)
        if key not in self._profiles:
            out: Dict[_Slots, Node] = {}
            depth = ctx[0]
            for kind, degree, children in self.expansions(ctx, masters):
                own: _Slots = ((depth, degree),) if kind == "M" else ()
                options = [list(self.profiles(c, n).items()) for c, n in children]
                for combo in itertools.product(*options):
                    slots = tuple(sorted(own + tuple(s for sig, _ in combo for s in sig)))
                    if slots not in out:
                        out[slots] = self._build(kind, degree, [node for _, node in combo])
            self._profiles[key] = out
        return self._profiles[key]


def _degrees(m: int, p: Optional[Restriction]) -> Tuple[int, ...]:
    if p is None:
        return tuple(range(m))
    return tuple(d for d in range(m) if d in p.allowed)


def _resolve_cap(n: int, m: int, height_cap: Optional[int]) -> int:
    if height_cap is None:
        return default_height_cap(n, m)
    if height_cap < 0:
        raise ValidationError(f"height cap must be non-negative, got {height_cap}", field="height_cap")
    return height_cap


def _check_type(k: int, m: int) -> None:
    if m < 2:
        raise ValidationError(f"m must be at least 2, got {m}", field="m")
    if not 0 <= k < m:
        raise ValidationError(f"tree type {k} outside 0..{m - 1}", field="k")


def enumerate_shapes(
    k: int,
    m: int,
    n: int,
    height_cap: Optional[int] = None,
    p: Optional[Restriction] = None,
    max_trees: int = DEFAULT_MAX_TREES,
) -> Iterator[CodeTree]:
    """
    Yields every normalized type-k tree shape with n masters, once each.

    Raises:
        BudgetExceededError: As soon as the shapes of the tree, or of any
            subtree context, number more than max_trees.
    """
    _check_type(k, m)
    grammar = _Grammar(k, m, _resolve_cap(n, m, height_cap), _degrees(m, p), max_trees)
    for root in grammar.shapes(grammar.root(), n):
        yield CodeTree(k, root)


def slot_profiles(
    k: int,
    m: int,
    n: int,
    height_cap: Optional[int] = None,
    p: Optional[Restriction] = None,
) -> List[CodeTree]:
    """One representative shape per distinct multiset of (depth, degree) master slots."""
    _check_type(k, m)
    grammar = _Grammar(k, m, _resolve_cap(n, m, height_cap), _degrees(m, p))
    return [CodeTree(k, root) for root in grammar.profiles(grammar.root(), n).values()]


def _plane_key(depth: int, degree: int, x: Sequence[Fraction]) -> Fraction:
    return Fraction(depth) + (x[degree - 1] if degree > 0 else 0)


def _preorder_slots(shape: CodeTree) -> List[Tuple[int, int]]:
    return [(len(path), node.degree) for path, node in shape.masters()]


def _symbols_by_weight(src: SourceSpec, symbols: Sequence[int]) -> List[int]:
    return sorted(symbols, key=lambda i: (-src.probabilities[i], i))


def optimal_assignment(shape: CodeTree, src: SourceSpec, x: Sequence[Fraction]) -> CodeTree:
    """
    Places the most probable symbols on the slots with the smallest
    depth + x_degree, which minimizes the shape's plane value at x.
    """
    slots = _preorder_slots(shape)
    order = sorted(range(len(slots)), key=lambda i: (_plane_key(slots[i][0], slots[i][1], x), i))
    symbols = [0] * len(slots)
    for position, symbol in zip(order, _symbols_by_weight(src, range(src.n))):
        symbols[position] = symbol
    return CodeTree(shape.k, relabel(shape.root, symbols))


def monotone_assignments(shape: CodeTree, src: SourceSpec) -> Iterator[CodeTree]:
    """
    Yields every labeling in which, among masters of equal degree, more
    probable symbols sit no deeper. These include the optimal labeling for
    every point x.
    """
    slots = _preorder_slots(shape)
    classes: Dict[int, List[int]] = {}
    for i, (depth, degree) in enumerate(slots):
        classes.setdefault(degree, []).append(i)
    ordered = [(d, sorted(positions, key=lambda i: (slots[i][0], i))) for d, positions in sorted(classes.items())]

    def assign(index: int, remaining: Tuple[int, ...], symbols: List[int]) -> Iterator[List[int]]:
        if index == len(ordered):
            yield symbols
            return
        _, positions = ordered[index]
        for chosen in itertools.combinations(remaining, len(positions)):
            placed = list(symbols)
            for position, symbol in zip(positions, _symbols_by_weight(src, chosen)):
                placed[position] = symbol
            rest = tuple(s for s in remaining if s not in chosen)
            yield from assign(index + 1, rest, placed)

    for symbols in assign(0, tuple(range(src.n)), [0] * len(slots)):
        yield CodeTree(shape.k, relabel(shape.root, symbols))


def enumerate_trees(
    k: int,
    m: int,
    src: SourceSpec,
    height_cap: Optional[int] = None,
    x: Optional[Sequence[Fraction]] = None,
    p: Optional[Restriction] = None,
    max_trees: int = DEFAULT_MAX_TREES,
) -> Iterator[CodeTree]:
    """
    Yields every normalized type-k tree shape once, labeled optimally for x.

    Args:
        k: Tree type.
        m: Number of trees.
        src: Source.
        height_cap: Maximal node depth; defaults to n + m.
        x: Point for the symbol placement; defaults to the origin, where the
            placement is by depth alone.
        p: Restricts master degrees to the allowed types.
        max_trees: Enumeration budget.

    Raises:
        BudgetExceededError: After max_trees trees.
    """
    x = tuple(x) if x is not None else tuple(Fraction(0) for _ in range(m - 1))
    for shape in enumerate_shapes(k, m, src.n, height_cap, p, max_trees):
        yield optimal_assignment(shape, src, x)


def plane_value(t: CodeTree, src: SourceSpec, x: Sequence[Fraction]) -> Fraction:
    """f_k(x, T) = sum_i p_i (depth_i + x_{degree_i}) - x_k."""
    value = Fraction(0)
    for path, node in t.masters():
        value += src.probabilities[node.symbol] * _plane_key(len(path), node.degree, x)
    if t.k > 0:
        value -= x[t.k - 1]
    return value


def best_tree(
    k: int,
    m: int,
    src: SourceSpec,
    x: Sequence[Fraction],
    p: Optional[Restriction] = None,
    height_cap: Optional[int] = None,
) -> Tuple[CodeTree, Fraction]:
    """
    A type-k tree minimizing its plane value at x among trees whose master
    degrees lie in p.

    Returns:
        The first minimizing tree in enumeration order and its value.

    Raises:
        EmptyRestrictedFamilyError: If no tree fits the restriction and cap.
    """
    if len(x) != m - 1:
        raise ValidationError(f"point needs {m - 1} coordinates, got {len(x)}", field="x")
    best: Optional[Tuple[CodeTree, Fraction]] = None
    for shape in slot_profiles(k, m, src.n, height_cap, p):
        tree = optimal_assignment(shape, src, x)
        value = plane_value(tree, src, x)
        if best is None or value < best[1]:
            best = (tree, value)
    if best is None:
        raise EmptyRestrictedFamilyError(f"no type-{k} tree fits the restriction and height cap", field=f"families[{k}]")
    return best


def families_from_source(
    src: SourceSpec,
    m: int,
    height_cap: Optional[int] = None,
    max_trees: int = DEFAULT_MAX_TREES,
    p: Optional[Restriction] = None,
) -> StateFamilies:
    """
    The AIFV-m problem as state families: family k holds the states of the
    type-k trees.

    A tree whose transition vector is already present with a smaller or
    equal cost is dropped; it can never be the unique better choice.
    Labels are canonical tree strings.

    Raises:
        BudgetExceededError: If more than max_trees labeled trees are built.
        EmptyRestrictedFamilyError: If some family is empty.
    """
    cap = _resolve_cap(src.n, m, height_cap)
    families: List[Tuple[State, ...]] = []
    built = 0
    for k in range(m):
        by_transitions: Dict[Tuple[Fraction, ...], State] = {}
        for shape in slot_profiles(k, m, src.n, cap, p):
            for tree in monotone_assignments(shape, src):
                built += 1
                if built > max_trees:
                    raise BudgetExceededError(f"more than {max_trees} labeled trees for n = {src.n}, m = {m}")
                state = to_state(tree, src, m)
                kept = by_transitions.get(state.transitions)
                if kept is None or state.cost < kept.cost:
                    by_transitions[state.transitions] = state
        if not by_transitions:
            raise EmptyRestrictedFamilyError(f"no type-{k} tree within height {cap}", field=f"families[{k}]")
        families.append(tuple(by_transitions.values()))
    fams = StateFamilies(m, tuple(families))
    logger.info(f"AIFV-{m} families for n = {src.n} (height cap {cap}): sizes {fams.sizes()} from {built} trees")
    return fams


def code_from_chain(chain: Chain, src: SourceSpec) -> Code:
    """Rebuilds the code whose trees are the chain's state labels."""
    return Code(tuple(CodeTree.parse(s.label) for s in chain.states), src)
