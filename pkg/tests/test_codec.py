# tests/test_codec.py
"""
Tests for AIFV-m encoding and decoding.
"""

import random

import pytest

from mcpoly.aifv import Code, CodeTree, DecodeStats, SourceSpec, code_from_chain, decode, encode, families_from_source
from mcpoly.errors import MalformedStreamError, UnknownSymbolError
from mcpoly.solvers import solve

M3_TREES = (
    "T0:C,M1.0,I0,M0.2,M2.1,I0,I0,M0.3",
    "T1:C,I1,C,M0.1,M0.2,M2.0,I0,I0,M0.3",
    "T2:M1.0,I0,I1,C,M0.1,C,M0.2,M0.3",
)


@pytest.fixture(scope="module")
def m3_code() -> Code:
    src = SourceSpec.of(["1/2", "1/4", "1/8", "1/8"])
    return Code(tuple(CodeTree.parse(t) for t in M3_TREES), src)


@pytest.fixture(scope="module")
def optimal_m2() -> Code:
    src = SourceSpec.of(["1/4", "1/4", "1/4", "1/8", "1/8"], symbols=("u", "v", "w", "x", "y"))
    report = solve(families_from_source(src, 2))
    return code_from_chain(report.chain, src)


def test_encode_switches_trees(m3_code):
    assert encode(m3_code, "cbab") == "0001010"
    assert encode(m3_code, ["c", "b", "a", "b"]) == "0001010"


def test_decode_example(m3_code):
    stats = DecodeStats()
    assert decode(m3_code, "0001010", stats=stats) == ["c", "b", "a", "b"]
    assert stats.symbols == 4
    assert stats.max_lookahead == 2


def test_empty_message(m3_code):
    assert encode(m3_code, "") == ""
    assert decode(m3_code, "") == []


def test_non_binary_stream(m3_code):
    with pytest.raises(MalformedStreamError):
        decode(m3_code, "0102")


def test_unknown_symbol(m3_code):
    with pytest.raises(UnknownSymbolError) as excinfo:
        encode(m3_code, "abz")
    assert excinfo.value.field == "message[2]"


def test_trailing_empty_codeword_needs_length(m3_code):
    # "a" coded with T2 has the empty codeword
    bits = encode(m3_code, "cba")
    assert bits == "0001"
    assert decode(m3_code, bits) == ["c", "b"]
    assert decode(m3_code, bits, length=3) == ["c", "b", "a"]


def test_length_too_short(m3_code):
    with pytest.raises(MalformedStreamError):
        decode(m3_code, "0001010", length=2)


@pytest.mark.parametrize("code_name", ["m3_code", "optimal_m2"])
def test_round_trip_random_messages(code_name, request):
    code = request.getfixturevalue(code_name)
    rng = random.Random(71)
    for _ in range(1000):
        message = [rng.choice(code.source.symbols) for _ in range(rng.randint(0, 30))]
        bits = encode(code, message)
        stats = DecodeStats()
        assert decode(code, bits, length=len(message), stats=stats) == message
        assert stats.max_lookahead <= code.m


def test_encoded_length_matches_codewords(m3_code):
    rng = random.Random(72)
    books = [tree.codewords() for tree in m3_code.trees]
    degrees = [{node.symbol: node.degree for _, node in tree.masters()} for tree in m3_code.trees]
    for _ in range(50):
        message = [rng.choice(m3_code.source.symbols) for _ in range(20)]
        current, expected = 0, 0
        for symbol in message:
            index = m3_code.source.index(symbol)
            expected += len(books[current][index])
            current = degrees[current][index]
        assert len(encode(m3_code, message)) == expected


@pytest.mark.parametrize(
    "bits, length",
    [("00", None), ("000", 2), ("0001", 4), ("000101", 4), ("1001", 2)],
)
def test_truncated_stream_raises(m3_code, bits, length):
    # cut from encode("cb"), encode("cbaa"), encode("cbab") and encode("bb")
    with pytest.raises(MalformedStreamError):
        decode(m3_code, bits, length=length)


def test_truncation_to_a_shorter_message(m3_code):
    # "a" has the empty codeword in T2, so a cut can end on a valid message
    assert encode(m3_code, "bb") == "10010"
    assert decode(m3_code, "1", length=2) == ["b", "a"]


@pytest.mark.parametrize("code_name", ["m3_code", "optimal_m2"])
def test_truncated_streams_never_decode_to_message(code_name, request):
    code = request.getfixturevalue(code_name)
    rng = random.Random(73)
    truncations = 0
    while truncations < 100:
        message = [rng.choice(code.source.symbols) for _ in range(rng.randint(1, 15))]
        bits = encode(code, message)
        if not bits:
            continue
        truncations += 1
        cut = bits[: rng.randrange(len(bits))]
        try:
            decoded = decode(code, cut, length=len(message))
        except MalformedStreamError:
            continue
        assert decoded != message
