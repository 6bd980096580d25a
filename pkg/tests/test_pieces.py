import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import graph
from grsc.graph import parse_graph
from grsc.pieces import enumerate_pieces, is_piece, max_piece_length
from grsc.words import inverse, is_freely_reduced
import oracles


def w(name, text):
    return graph(name).alphabet.parse_word(text)


def test_single_edge_has_no_pieces():
    g = parse_graph("alphabet a\nvertices 2\nedge 0 1 a")
    assert not is_piece(g, (1,))


@pytest.mark.parametrize("name, text, expected", [
    ("FIX4", "a b a b", True),
    ("FIX1", "a", False),
    ("FIX5", "a b", True),
    ("FIX4", "c", False),
])
def test_is_piece_examples(name, text, expected):
    assert is_piece(graph(name), w(name, text)) is expected
    assert oracles.is_piece(graph(name), w(name, text)) is expected


def test_is_piece_rejects_unreduced_words():
    with pytest.raises(ValueError):
        is_piece(graph("FIX4"), (1, -1))
    with pytest.raises(ValueError):
        is_piece(graph("FIX4"), ())


@pytest.mark.parametrize("name, length", [("FIX1", 0), ("FIX2", 1), ("FIX5", 2), ("FIX4", 4)])
def test_max_piece_length(name, length):
    b = max_piece_length(graph(name))
    assert b.length == length and len(b.witness) == length
    assert oracles.max_piece(graph(name), length + 1) == length
    if length:
        assert is_piece(graph(name), b.witness)


def test_fix5_witness_is_a_two_letter_piece():
    # several pieces of length 2 exist; the reported one is the shortlex least
    b = max_piece_length(graph("FIX5"))
    assert str(b) == "Finite(2)"
    assert is_piece(graph("FIX5"), w("FIX5", "a b"))


def test_fix6_unbounded():
    g = graph("FIX6")
    b = max_piece_length(g)
    assert not b.finite and str(b) == "Unbounded"
    # the witness is pumpable: every power is a piece
    for k in (1, 3, 8):
        assert is_piece(g, b.witness * k)
    assert set(map(abs, b.witness)) == {1, 2}


def test_enumerate_examples():
    assert enumerate_pieces(graph("FIX1"), 3) == []
    found = enumerate_pieces(graph("FIX5"), 2)
    for text in ("a", "b", "a b", "-b -a"):
        assert w("FIX5", text) in found
    one = enumerate_pieces(graph("FIX4"), 1)
    assert w("FIX4", "a") in one and w("FIX4", "b") in one and w("FIX4", "c") not in one


def test_enumerate_is_sorted_and_unique():
    found = enumerate_pieces(graph("FIX5"), 3)
    assert len(found) == len(set(found))
    assert [len(x) for x in found] == sorted(len(x) for x in found)


@pytest.mark.parametrize("name", ["FIX2", "FIX4", "FIX5", "FIX6"])
def test_piece_set_properties(name):
    g = graph(name)
    found = set(enumerate_pieces(g, 4))
    for p in found:
        assert is_freely_reduced(p) and is_piece(g, p)
        assert inverse(p) in found
        for i in range(len(p)):
            for j in range(i + 1, len(p) + 1):
                assert p[i:j] in found
    # nothing missed
    for k in range(1, 5):
        for q in oracles.reduced_words(len(g.alphabet), k):
            assert (q in found) == is_piece(g, q)


@pytest.mark.parametrize("name", ["FIX1", "FIX2", "FIX4", "FIX5"])
def test_consistency_with_enumeration(name):
    g = graph(name)
    m = max_piece_length(g).length
    found = enumerate_pieces(g, m + 1)
    assert max((len(p) for p in found), default=0) == m


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_agrees_with_naive_oracle(seed):
    g = oracles.random_reduced_graph(random.Random(seed))
    autos = oracles.automorphisms(g)
    for k in range(1, 4):
        for q in oracles.reduced_words(2, k):
            assert is_piece(g, q) == oracles.is_piece(g, q, autos)
