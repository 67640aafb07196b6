"""Shared helpers: random word construction and hypothesis strategies."""

import numpy as np
import pytest
from hypothesis import strategies as st

from whlab.words import Word, cyclic_reduce


def make_random_cyclic_word(rank: int, length: int, rng) -> Word:
    """Non-backtracking walk of the requested raw length, cyclically reduced."""
    alphabet = [x for g in range(1, rank + 1) for x in (g, -g)]
    if length == 0:
        return Word((), rank, validate=False)
    letters = [alphabet[int(rng.integers(0, 2 * rank))]]
    while len(letters) < length:
        c = alphabet[int(rng.integers(0, 2 * rank))]
        if c != -letters[-1]:
            letters.append(c)
    return cyclic_reduce(Word(tuple(letters), rank, validate=False))


def random_cyclic_words(rank: int, count: int, max_len: int, seed: int = 0,
                        min_len: int = 1) -> list:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        w = make_random_cyclic_word(rank, int(rng.integers(min_len, max_len + 1)), rng)
        if len(w) >= min_len:
            out.append(w)
    return out


def raw_letter_lists(rank: int, max_size: int = 40):
    letters = st.integers(min_value=-rank, max_value=rank).filter(lambda x: x != 0)
    return st.lists(letters, max_size=max_size)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
