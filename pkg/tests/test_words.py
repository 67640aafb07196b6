import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from whlab.errors import InvalidInputError
from whlab.words import (
    Word,
    cyclic_normal_form,
    cyclic_reduce,
    free_reduce,
    invert,
    letter_from_key,
    letter_key,
    word_from_text,
    word_to_text,
)

from conftest import raw_letter_lists


def test_free_reduce_single_cancellation():
    assert free_reduce([1, -1, 2], 2).letters == (2,)


def test_free_reduce_full_cancellation():
    assert free_reduce([1, 2, -2, -1], 2).letters == ()


def test_free_reduce_identity_on_reduced():
    assert free_reduce([1, 2, 3], 3).letters == (1, 2, 3)


def test_free_reduce_rejects_bad_letters():
    with pytest.raises(InvalidInputError):
        free_reduce([1, 0], 2)
    with pytest.raises(InvalidInputError):
        free_reduce([3], 2)


def test_cyclic_reduce_examples():
    assert cyclic_reduce(free_reduce([1, 2, -1], 2)).letters == (2,)
    assert cyclic_reduce(free_reduce([-2, 1, 2], 2)).letters == (1,)
    assert cyclic_reduce(free_reduce([1, 2, 1], 2)).letters == (1, 2, 1)


def test_invert_examples():
    assert invert(free_reduce([1, 2], 2)).letters == (-2, -1)
    assert invert(free_reduce([], 2)).letters == ()
    assert invert(free_reduce([3, -1], 3)).letters == (1, -3)


def test_letter_key_roundtrip():
    for key in range(12):
        assert letter_key(letter_from_key(key)) == key


@settings(max_examples=200, deadline=None)
@given(raw_letter_lists(3))
def test_free_reduce_idempotent(raw):
    once = free_reduce(raw, 3)
    again = free_reduce(once.letters, 3)
    assert once.letters == again.letters


@settings(max_examples=200, deadline=None)
@given(raw_letter_lists(3))
def test_word_times_inverse_cancels(raw):
    w = free_reduce(raw, 3)
    assert free_reduce(w.letters + invert(w).letters, 3).letters == ()


@settings(max_examples=200, deadline=None)
@given(raw_letter_lists(3))
def test_length_parity_preserved(raw):
    assert len(free_reduce(raw, 3)) % 2 == len(raw) % 2


@settings(max_examples=200, deadline=None)
@given(raw_letter_lists(4))
def test_cyclic_reduce_ends_do_not_cancel(raw):
    w = cyclic_reduce(free_reduce(raw, 4))
    if len(w) >= 2:
        assert w.letters[0] != -w.letters[-1]


@settings(max_examples=100, deadline=None)
@given(raw_letter_lists(3), st.integers(min_value=0, max_value=30))
def test_normal_form_rotation_invariant(raw, shift):
    w = cyclic_reduce(free_reduce(raw, 3))
    if len(w) == 0:
        return
    r = shift % len(w)
    rotated = Word(w.letters[r:] + w.letters[:r], 3, validate=False)
    assert cyclic_normal_form(rotated) == cyclic_normal_form(w)


def test_word_constructor_rejects_unreduced():
    with pytest.raises(InvalidInputError):
        Word((1, -1), 2)


def test_empty_word_is_legal():
    w = Word((), 2)
    assert len(w) == 0 and w.is_cyclically_reduced


def test_codec_compact_roundtrip():
    for text in ("", "a", "abA", "aBc", "zZ"[:1]):
        w = word_from_text(text, 26)
        assert word_from_text(word_to_text(w), 26) == w
    w = word_from_text("abA", 3)
    assert w.letters == (1, 2, -1)
    assert word_to_text(w) == "abA"


def test_codec_integer_roundtrip():
    w = word_from_text("1 30 -1", 30)
    assert w.letters == (1, 30, -1)
    assert word_to_text(w) == "1 30 -1"
    assert word_from_text(word_to_text(w), 30) == w


def test_codec_rejects_garbage():
    with pytest.raises(InvalidInputError):
        word_from_text("a1b", 2)
