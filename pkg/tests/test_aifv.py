# tests/test_aifv.py
"""
Unit tests for mcpoly.aifv: tree strings, validation, statistics, the tree
search and the AIFV-m solve.
"""

import random
from fractions import Fraction
from typing import List

import pytest

from mcpoly.aifv import (
    Code,
    CodeTree,
    SourceSpec,
    best_tree,
    check_code,
    check_pointool,
    code_cost,
    code_from_chain,
    code_stationary,
    entropy,
    enumerate_shapes,
    enumerate_trees,
    errors,
    families_from_source,
    height_bound,
    huffman,
    monotone_assignments,
    optimal_assignment,
    plane_value,
    redundancy,
    slot_profiles,
    to_state,
    tree_stats,
    validate,
)
from mcpoly.aifv.enumerate import _Grammar
from mcpoly.aifv.tree import Node, complete, master, slave0, slave1
from mcpoly.config import default_height_cap
from mcpoly.errors import BudgetExceededError, ParseError, ValidationError
from mcpoly.polytope import Box, Restriction
from mcpoly.solvers import Method, brute_force, ellipsoid_max_y, iterate, solve
from mcpoly.workflows.generate import random_dyadic_source

M3_TREES = (
    "T0:C,M1.0,I0,M0.2,M2.1,I0,I0,M0.3",
    "T1:C,I1,C,M0.1,M0.2,M2.0,I0,I0,M0.3",
    "T2:M1.0,I0,I1,C,M0.1,C,M0.2,M0.3",
)


@pytest.fixture(scope="module")
def src4() -> SourceSpec:
    return SourceSpec.of(["1/2", "1/4", "1/8", "1/8"])


@pytest.fixture(scope="module")
def m3_code(src4) -> Code:
    return Code(tuple(CodeTree.parse(t) for t in M3_TREES), src4)


# --- Sources ---

def test_source_defaults():
    src = SourceSpec.of(["1/2", "1/4", "1/4"])
    assert src.n == 3
    assert src.b == 2
    assert src.symbols == ("a", "b", "c")
    assert src.index("c") == 2
    assert src.index("q") == -1


@pytest.mark.parametrize(
    "probs, kwargs, field",
    [
        ([], {}, "probabilities"),
        (["1/2", "1/2", "0"], {}, "probabilities[2]"),
        (["1/3", "2/3"], {}, "probabilities[0]"),
        (["1/2", "1/4"], {}, "probabilities"),
        (["1/2", "1/4", "1/4"], {"b": 1}, "b"),
        (["1/2", "1/2"], {"symbols": ("a",)}, "symbols"),
        (["1/2", "1/2"], {"symbols": ("a", "a")}, "symbols"),
    ],
)
def test_source_rejects(probs, kwargs, field):
    with pytest.raises(ValidationError) as excinfo:
        SourceSpec.of(probs, **kwargs)
    assert excinfo.value.field == field


# --- Tree strings ---

def test_parse_serialize_m3_code():
    for text in M3_TREES:
        assert CodeTree.parse(text).serialize() == text


def test_parse_builds_nodes():
    t = CodeTree.parse("T2:M1.0,I0,I1,C,M0.1,C,M0.2,M0.3")
    assert t.k == 2
    assert t.root == master(
        1, 0, slave0(slave1(complete(master(0, 1), complete(master(0, 2), master(0, 3)))))
    )
    assert t.codewords() == {0: "", 1: "0010", 2: "00110", 3: "00111"}
    assert t.height == 5
    assert t.node_at("001").kind.value == "C"
    assert t.node_at("1") is None


@pytest.mark.parametrize(
    "text",
    ["X0:M0.0", "T0:C,M0.0", "T0:M0.0,M0.1", "T0:Q", "T0:"],
)
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        CodeTree.parse(text)


def test_code_checks_tree_types(src4):
    with pytest.raises(ValidationError):
        Code((CodeTree.parse(M3_TREES[1]),), src4)


# --- Validation ---

def test_m3_code_trees_are_valid(src4):
    for text in M3_TREES:
        assert validate(CodeTree.parse(text), 3, src4.n, strict=True) == []


def test_validate_requires_slave1_on_left_path():
    violations = validate(CodeTree.parse("T1:C,M0.0,M0.1"), 2, 2)
    assert [v.rule for v in errors(violations)] == ["slave1"]


def test_validate_normal_form_is_soft():
    t = CodeTree.parse("T0:I0,C,M0.0,M0.1")
    violations = validate(t, 2, 2)
    assert [v.rule for v in violations] == ["normal-b"]
    assert errors(violations) == []
    assert errors(validate(t, 2, 2, strict=True))[0].rule == "normal-b"


def test_validate_master_runs():
    short = validate(CodeTree.parse("T0:C,M2.0,I0,M0.1,M0.2"), 3, 3)
    assert "chain" in [v.rule for v in errors(short)]
    long = validate(CodeTree.parse("T0:C,M1.0,I0,I0,M0.1,M0.2"), 2, 3)
    assert "chain" in [v.rule for v in errors(long)]
    degree = validate(CodeTree.parse("T0:C,M2.0,I0,I0,M0.1,M0.2"), 2, 3)
    assert "degree" in [v.rule for v in errors(degree)]


def test_validate_symbols():
    violations = validate(CodeTree.parse("T0:C,M0.0,M0.0"), 2, 2)
    assert [v.rule for v in errors(violations)] == ["symbols"]
    unlabeled = CodeTree.parse("T0:C,M0,M0")
    assert validate(unlabeled, 2, 2, labeled=False) == []
    assert [v.rule for v in validate(unlabeled, 2, 3, labeled=False)] == ["symbols"]


def test_validate_as_type():
    t = CodeTree.parse("T0:C,M0.0,M0.1")
    assert [v.rule for v in errors(validate(t, 2, 2, as_type=1))] == ["slave1"]


def test_height_bound():
    assert height_bound(4, 3) == 13
    assert height_bound(1, 2) == 1
    assert height_bound(1, 3, 2) == 3


def test_check_code(m3_code):
    assert check_code(m3_code) == []
    trees = list(m3_code.trees)
    trees[1] = CodeTree.parse("T1:C,M0.0,C,M0.1,C,M0.2,M0.3")
    bad = Code(tuple(trees), m3_code.source)
    with pytest.raises(ValidationError) as excinfo:
        check_code(bad)
    assert excinfo.value.field == "trees[1]"


# --- Statistics ---

@pytest.mark.parametrize(
    "k, cost, transitions, lengths",
    [
        (0, Fraction(13, 8), ("1/4", "1/2", "1/4"), (1, 1, 3, 4)),
        (1, Fraction(17, 8), ("1/2", "0", "1/2"), (1, 3, 3, 4)),
        (2, Fraction(9, 4), ("1/2", "1/2", "0"), (0, 4, 5, 5)),
    ],
)
def test_tree_stats_m3_code(m3_code, k, cost, transitions, lengths):
    stats = tree_stats(m3_code.trees[k], m3_code.source, 3)
    assert stats.average_length == cost
    assert stats.transitions == tuple(Fraction(q) for q in transitions)
    assert stats.lengths == lengths
    state = to_state(m3_code.trees[k], m3_code.source, 3)
    assert state.cost == cost
    assert state.label == M3_TREES[k]


def test_code_cost_m3_code(m3_code):
    pi = code_stationary(m3_code)
    assert sum(pi) == 1
    expected = sum(p * t for p, t in zip(pi, (Fraction(13, 8), Fraction(17, 8), Fraction(9, 4))))
    assert code_cost(m3_code) == expected


def test_entropy_and_redundancy(src4):
    assert entropy(src4) == pytest.approx(1.75)
    r, within = redundancy(Fraction(7, 4), src4, 2)
    assert r == pytest.approx(0.0, abs=1e-12)
    assert within
    r, within = redundancy(Fraction(3), src4, 2)
    assert not within


# --- Enumeration ---

@pytest.mark.parametrize("m", [2, 3])
def test_single_symbol_trees(m):
    src = SourceSpec.of([1])
    for k in range(m):
        trees = list(enumerate_trees(k, m, src))
        assert len(trees) == 1
        assert validate(trees[0], m, 1, strict=True) == []
        if k == 0:
            assert trees[0].serialize() == "T0:M0.0"
        else:
            assert trees[0].height == k + 1
            assert plane_value(trees[0], src, (0,) * (m - 1)) == k + 1


def _naive_shapes(depth: int, cap: int, m: int, masters: int) -> List[Node]:
    """Every tree of depth <= cap - depth with at most `masters` master nodes."""
    if masters < 1:
        return []
    out = [master(0)]
    if depth == cap:
        return out
    below = _naive_shapes(depth + 1, cap, m, masters)
    for child in below:
        out.append(slave0(child))
        out.append(slave1(child))
    for d in range(1, m):
        out.extend(master(d, None, child) for child in _naive_shapes(depth + 1, cap, m, masters - 1))
    for a in below:
        rest = masters - _count_masters(a)
        out.extend(complete(a, b) for b in _naive_shapes(depth + 1, cap, m, rest))
    return out


def _count_masters(node: Node) -> int:
    own = 1 if node.is_master else 0
    return own + sum(_count_masters(c) for c in (node.zero, node.one) if c is not None)


@pytest.mark.parametrize("k", [0, 1])
def test_enumeration_matches_generate_and_filter(k):
    """Grammar output equals brute-force generation filtered by strict validation."""
    m, n, cap = 2, 2, 3
    expected = set()
    for root in _naive_shapes(0, cap, m, n):
        t = CodeTree(k, root)
        if _count_masters(root) == n and not errors(validate(t, m, n, labeled=False, strict=True)):
            expected.add(t.serialize())
    produced = [t.serialize() for t in enumerate_shapes(k, m, n, height_cap=cap)]
    assert len(produced) == len(set(produced))
    assert set(produced) == expected


def test_enumerated_trees_validate(src4):
    for k in range(3):
        for t in enumerate_trees(k, 3, src4, height_cap=5):
            assert validate(t, 3, src4.n, strict=True) == [], t.serialize()


def test_enumeration_contains_m3_code(src4):
    for k, text in enumerate(M3_TREES):
        assert text in {t.serialize() for t in enumerate_trees(k, 3, src4, height_cap=5)}


def test_enumeration_budget(src4):
    with pytest.raises(BudgetExceededError):
        list(enumerate_shapes(0, 3, src4.n, max_trees=3))


def test_enumeration_budget_stops_generation():
    grammar = _Grammar(0, 2, 6, (0, 1), max_trees=10)
    with pytest.raises(BudgetExceededError):
        grammar.shapes(grammar.root(), 6)
    assert all(len(table) <= 10 for table in grammar._shapes.values())


def test_enumeration_restriction(src4):
    only_zero = Restriction(frozenset({0}))
    for t in enumerate_shapes(1, 3, src4.n, height_cap=5, p=only_zero):
        assert all(node.degree == 0 for _, node in t.masters())


def test_enumeration_rejects_bad_type(src4):
    with pytest.raises(ValidationError):
        list(enumerate_shapes(3, 3, src4.n))


def test_slot_profiles_are_distinct(src4):
    profiles = slot_profiles(0, 3, src4.n, height_cap=5)
    slots = [t.slots() for t in profiles]
    assert len(slots) == len(set(slots))
    all_slots = {t.slots() for t in enumerate_shapes(0, 3, src4.n, height_cap=5)}
    assert set(slots) == all_slots


def test_optimal_assignment_minimizes_plane_value(src4):
    x = (Fraction(1, 2), Fraction(3, 4))
    shape = next(iter(slot_profiles(0, 3, src4.n, height_cap=4)))
    best = optimal_assignment(shape, src4, x)
    values = [plane_value(t, src4, x) for t in monotone_assignments(shape, src4)]
    assert plane_value(best, src4, x) == min(values)


def test_best_tree_matches_enumeration(src4):
    x = (Fraction(1, 2), Fraction(1, 4))
    for k in range(3):
        tree, value = best_tree(k, 3, src4, x, height_cap=5)
        assert plane_value(tree, src4, x) == value
        assert value == min(plane_value(t, src4, x) for t in enumerate_trees(k, 3, src4, height_cap=5, x=x))


def test_best_tree_point_dimension(src4):
    with pytest.raises(ValidationError):
        best_tree(0, 3, src4, (0,))


# --- Families and the AIFV-m solve ---

def test_families_single_symbol():
    fams = families_from_source(SourceSpec.of([1]), 2)
    assert fams.sizes() == (1, 1)
    assert fams.families[0][0].cost == 0
    assert fams.families[1][0].cost == 2
    assert solve(fams).cost == 0


def test_families_contain_m3_code_states(src4):
    fams = families_from_source(src4, 3, height_cap=5)
    for k, text in enumerate(M3_TREES):
        known_state = to_state(CodeTree.parse(text), src4, 3)
        match = [s for s in fams.families[k] if s.transitions == known_state.transitions]
        assert match and match[0].cost <= known_state.cost


def test_families_have_distinct_transitions(src4):
    fams = families_from_source(src4, 2)
    for family in fams.families:
        keys = [s.transitions for s in family]
        assert len(keys) == len(set(keys))


def test_aifv2_solve_reaches_entropy(src4):
    fams = families_from_source(src4, 2)
    report = solve(fams, Method.ITERATE)
    assert report.cost == Fraction(7, 4)
    code = code_from_chain(report.chain, src4)
    assert errors(check_code(code)) == []
    assert code_cost(code) == report.cost


@pytest.mark.parametrize("method, count", [(Method.ITERATE, 50), (Method.ELLIPSOID, 10)])
def test_aifv2_never_worse_than_huffman(method, count):
    rng = random.Random(61)
    for _ in range(count):
        src = random_dyadic_source(rng, rng.choice([3, 4]), rng.randint(2, 6))
        report = solve(families_from_source(src, 2), method)
        _, huffman_cost = huffman(src)
        assert report.cost <= huffman_cost
        r, _ = redundancy(report.cost, src, 2)
        assert r >= -1e-12


@pytest.mark.parametrize(
    "probs",
    [
        ["1/2", "1/4", "1/4"],
        ["1/2", "1/4", "1/8", "1/8"],
        ["1/4", "1/4", "1/4", "1/8", "1/8"],
        ["1/2", "1/4", "1/8", "1/16", "1/16"],
    ],
)
def test_aifv2_matches_huffman_for_powers_of_two(probs):
    """With every p_i = 2^-l_i, Huffman already reaches the entropy, which no AIFV code beats."""
    src = SourceSpec.of(probs)
    _, huffman_cost = huffman(src)
    for method in (Method.ITERATE, Method.ELLIPSOID):
        report = solve(families_from_source(src, 2), method)
        assert report.cost == huffman_cost
        assert float(report.cost) == pytest.approx(entropy(src))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_aifv2_fixed_point_in_unit_interval(n):
    rng = random.Random(40 + n)
    for _ in range(3):
        src = random_dyadic_source(rng, n, 4)
        fams = families_from_source(src, 2)
        report = iterate(fams)
        x_star = report.trace[-1].x
        assert all(0 <= v <= 1 for v in x_star), x_star
        facets = check_pointool(src, 2, samples=25, seed=n, fams=fams)
        assert facets.points == 50
        assert facets.ok, facets.violations


def test_default_height_cap_matches_full_bound():
    rng = random.Random(62)
    full = default_height_cap(3, 2, full_height=True)
    assert full > default_height_cap(3, 2)
    for _ in range(15):
        src = random_dyadic_source(rng, 3, rng.randint(2, 5))
        default_cost = solve(families_from_source(src, 2)).cost
        assert solve(families_from_source(src, 2, height_cap=full)).cost == default_cost


@pytest.mark.slow
def test_m3_families_iterate_matches_brute_force(src4):
    fams = families_from_source(src4, 3)
    assert iterate(fams).cost == brute_force(fams).cost


def test_facet_check_warns_for_small_sources(caplog):
    check_pointool(SourceSpec.of(["1/2", "1/2"]), 2, samples=2)
    assert "need not hold" in caplog.text


@pytest.mark.parametrize(
    "probs",
    [["1/2", "1/4", "1/4"], ["1/2", "1/4", "1/8", "1/8"], ["1/4", "1/4", "1/4", "1/8", "1/8"]],
)
def test_aifv2_highest_point_in_unit_interval(probs):
    src = SourceSpec.of(probs)
    fams = families_from_source(src, 2)
    outcome = ellipsoid_max_y(fams, Box.unit(2))
    assert outcome.y == pytest.approx(float(solve(fams).cost), abs=1e-6)
