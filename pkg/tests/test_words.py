import pytest
from hypothesis import given, strategies as st

from grsc.words import (Alphabet, WordSyntaxError, cyclic_canonical, cyclic_reduce, free_reduce,
                        inverse, is_cyclically_reduced, is_freely_reduced, reduced_words,
                        shortlex_key)

AB = Alphabet(("a", "b", "c"))
words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12).map(tuple)


def test_parse_and_format_round_trip():
    w = AB.parse_word("a b -a -c")
    assert w == (1, 2, -1, -3)
    assert AB.format_word(w) == "a b -a -c"
    assert AB.parse_word("") == ()


@pytest.mark.parametrize("bad", ["d", "--a", "-"])
def test_unknown_letters_rejected(bad):
    with pytest.raises(WordSyntaxError):
        AB.parse_word(bad)


@pytest.mark.parametrize("names", [("a", "a"), ("-a",), ("a b",), ("",)])
def test_bad_alphabets(names):
    with pytest.raises(WordSyntaxError):
        Alphabet(names)


def test_letter_order():
    assert AB.letters() == [1, -1, 2, -2, 3, -3]


@pytest.mark.parametrize("text, expected", [("a -a", ""), ("a b -b -a", ""), ("a b -a", "a b -a")])
def test_free_reduce_examples(text, expected):
    assert free_reduce(AB.parse_word(text)) == AB.parse_word(expected)


@given(words)
def test_inverse_is_an_involution(w):
    assert inverse(inverse(w)) == w


@given(words)
def test_free_reduction(w):
    z = free_reduce(w)
    assert is_freely_reduced(z)
    assert free_reduce(z) == z
    assert free_reduce(w + inverse(w)) == ()


@given(words)
def test_cyclic_reduction(w):
    z = cyclic_reduce(w)
    assert is_cyclically_reduced(z)
    assert len(z) % 2 == len(w) % 2


@given(words)
def test_cyclic_canonical_is_a_class_invariant(w):
    w = cyclic_reduce(w)
    c = cyclic_canonical(w)
    if w:
        rot = w[3 % len(w):] + w[:3 % len(w)]
        assert cyclic_canonical(rot) == c
        assert cyclic_canonical(inverse(w)) == c
    assert shortlex_key(c) <= shortlex_key(w)


def test_reduced_words_counts():
    letters = AB.letters()
    for k in range(5):
        ws = list(reduced_words(letters, k))
        assert len(ws) == (1 if k == 0 else 6 * 5 ** (k - 1))
        assert len(set(ws)) == len(ws)
        assert all(is_freely_reduced(w) for w in ws)
