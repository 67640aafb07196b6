"""Words in a finitely generated free group.

A letter is a nonzero integer: ``k`` is the k-th generator, ``-k`` its
inverse. A word is a flat sequence of letters. The pipeline keeps all
words cyclically reduced, and "length" always means the length of the
cyclic word.

Letters are ordered ``1 < -1 < 2 < -2 < ...`` everywhere (the same order
used for graph vertices and canonical automorphism listings).
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import EmptyWordError, InvalidInputError

__all__ = [
    "Word",
    "free_reduce",
    "cyclic_reduce",
    "invert",
    "cyclic_normal_form",
    "letter_key",
    "letter_from_key",
    "word_from_text",
    "word_to_text",
]


def letter_key(letter: int) -> int:
    """Position of a letter in the fixed order 1, -1, 2, -2, ...

    >>> [letter_key(x) for x in (1, -1, 2, -2)]
    [0, 1, 2, 3]
    """
    return 2 * (abs(letter) - 1) + (1 if letter < 0 else 0)


def letter_from_key(key: int) -> int:
    """Inverse of :func:`letter_key`."""
    gen = key // 2 + 1
    return -gen if key % 2 else gen


class Word:
    """A freely reduced word together with its ambient rank.

    Instances are immutable by convention and hashable. Use
    :func:`free_reduce` / :func:`cyclic_reduce` to build them from raw
    letter sequences; the constructor checks free reducedness but not
    cyclic reducedness.
    """

    __slots__ = ("letters", "rank")

    def __init__(self, letters: Iterable[int], rank: int, validate: bool = True):
        letters = tuple(letters)
        if validate:
            if rank < 1:
                raise InvalidInputError(f"rank must be >= 1, got {rank}")
            for x in letters:
                if x == 0 or abs(x) > rank:
                    raise InvalidInputError(f"letter {x} outside alphabet of rank {rank}")
            for a, b in zip(letters, letters[1:]):
                if a == -b:
                    raise InvalidInputError("word is not freely reduced")
        self.letters = letters
        self.rank = rank

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.letters == other.letters
            and self.rank == other.rank
        )

    def __hash__(self) -> int:
        return hash((self.letters, self.rank))

    def __repr__(self) -> str:
        return f"Word({word_to_text(self)!r}, rank={self.rank})"

    @property
    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != -self.letters[-1]

    @classmethod
    def _unchecked(cls, letters: tuple, rank: int) -> "Word":
        w = cls.__new__(cls)
        w.letters = letters
        w.rank = rank
        return w


def free_reduce(letters: Iterable[int], rank: int) -> Word:
    """Cancel all adjacent inverse pairs, returning the reduced word.

    The result is the unique freely reduced form; repeated application is
    a no-op and the length parity of the input is preserved.

    >>> free_reduce([1, -1, 2], 2).letters
    (2,)
    >>> free_reduce([1, 2, -2, -1], 2).letters
    ()
    """
    if rank < 1:
        raise InvalidInputError(f"rank must be >= 1, got {rank}")
    out: list[int] = []
    for x in letters:
        if x == 0 or abs(x) > rank:
            raise InvalidInputError(f"letter {x} outside alphabet of rank {rank}")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return Word._unchecked(tuple(out), rank)


def cyclic_reduce(w: Word) -> Word:
    """Strip mutually inverse first/last letters until none remain.

    >>> cyclic_reduce(free_reduce([1, 2, -1], 2)).letters
    (2,)
    """
    letters = w.letters
    lo, hi = 0, len(letters)
    while hi - lo >= 2 and letters[lo] == -letters[hi - 1]:
        lo += 1
        hi -= 1
    if lo == 0:
        return w
    return Word._unchecked(letters[lo:hi], w.rank)


def invert(w: Word) -> Word:
    """The group inverse: reversed sequence of negated letters."""
    return Word._unchecked(tuple(-x for x in reversed(w.letters)), w.rank)


def cyclic_normal_form(w: Word) -> Word:
    """Canonical rotation of a cyclically reduced word.

    All rotations of a cyclic word map to the same normal form, so this
    is usable as a dictionary key for conjugacy classes of cyclic words.
    """
    letters = w.letters
    n = len(letters)
    if n <= 1:
        return w
    best = min(letters[r:] + letters[:r] for r in range(n))
    return Word._unchecked(best, w.rank)


def require_cyclic(w: Word, op: str) -> None:
    """Raise unless ``w`` is cyclically reduced (cheap O(1) check)."""
    if not w.is_cyclically_reduced:
        raise InvalidInputError(f"{op} needs a cyclically reduced word")


def require_nonempty(w: Word, op: str) -> None:
    if len(w) == 0:
        raise EmptyWordError(f"{op} is undefined on the empty word")


def word_to_text(w: Word) -> str:
    """Render a word in the compact letter codec when the rank allows.

    Ranks up to 26 use ``a..z`` for generators and ``A..Z`` for inverses;
    larger ranks fall back to space-separated signed integers. Round
    trips through :func:`word_from_text` are exact.

    >>> word_to_text(free_reduce([1, 2, -1], 3))
    'abA'
    """
    if w.rank <= 26:
        return "".join(
            chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1) for x in w.letters
        )
    return " ".join(str(x) for x in w.letters)


def word_from_text(text: str, rank: int, cyclic: bool = False) -> Word:
    """Parse either codec (letters for rank <= 26, else integers).

    With ``cyclic=True`` the parsed word is also cyclically reduced.
    """
    text = text.strip()
    if text == "":
        letters: list[int] = []
    elif text.replace(" ", "").replace(",", "").replace("-", "").isdigit():
        parts = text.replace(",", " ").split()
        try:
            letters = [int(p) for p in parts]
        except ValueError as exc:
            raise InvalidInputError(f"cannot parse word {text!r}") from exc
    elif text.isalpha():
        if rank > 26:
            raise InvalidInputError("letter codec only covers ranks up to 26")
        letters = [
            ord(c) - ord("a") + 1 if c.islower() else -(ord(c) - ord("A") + 1)
            for c in text
        ]
    else:
        raise InvalidInputError(f"cannot parse word {text!r}")
    w = free_reduce(letters, rank)
    return cyclic_reduce(w) if cyclic else w
