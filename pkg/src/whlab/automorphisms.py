"""Nielsen moves and type-II Whitehead moves, with canonical listings.

A Nielsen move multiplies one generator by another letter on one side
(``x -> x*y`` or ``x -> y*x``) and fixes the rest. A type-II Whitehead
move picks a multiplier letter ``a`` and sends every other generator to
one of ``x``, ``x*a``, ``a^-1*x`` or ``a^-1*x*a`` while fixing ``a``
itself. Identity tables are excluded, so a rank-n group has exactly
``4n(n-1)`` Nielsen moves and ``2n*4^(n-1) - 2n`` Whitehead moves.

Canonical orders (frozen; model files and traces depend on them):

* letters compare as ``1 < -1 < 2 < -2 < ...``;
* Nielsen moves sort by (target, side L before R, multiplier);
* Whitehead moves sort by multiplier, then by the action table read as a
  base-4 number (fix=0, right=1, left=2, conj=3) over the remaining
  generators in index order, most significant first;
* the combined index space puts all Nielsen moves first (as Nielsen
  moves), then every non-Nielsen Whitehead move.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidInputError
from .words import Word, free_reduce, letter_from_key, letter_key

__all__ = [
    "FIX",
    "RIGHT",
    "LEFT",
    "CONJ",
    "NielsenAuto",
    "WhiteheadAuto",
    "enumerate_nielsen",
    "enumerate_whitehead",
    "nielsen_to_whitehead",
    "whitehead_to_nielsen",
    "inverse_auto",
    "apply",
    "apply_sequence",
    "auto_to_json",
    "auto_from_json",
    "AutomorphismUniverse",
    "get_universe",
]

FIX, RIGHT, LEFT, CONJ = 0, 1, 2, 3
ACTION_NAMES = ("fix", "right", "left", "conj")
_NAME_TO_ACTION = {name: code for code, name in enumerate(ACTION_NAMES)}


@dataclass(frozen=True)
class NielsenAuto:
    """``target -> target*mult`` (side R) or ``target -> mult*target`` (side L)."""

    target: int
    side: str
    mult: int

    def __post_init__(self):
        if self.target < 1:
            raise InvalidInputError("target must be a generator index >= 1")
        if self.side not in ("L", "R"):
            raise InvalidInputError(f"side must be 'L' or 'R', got {self.side!r}")
        if self.mult == 0 or abs(self.mult) == self.target:
            raise InvalidInputError("multiplier must be a letter of another generator")

    def min_rank(self) -> int:
        return max(self.target, abs(self.mult))


@dataclass(frozen=True)
class WhiteheadAuto:
    """Type-II move: multiplier letter plus one action code per generator.

    ``actions`` has one slot per generator; the slot of the multiplier's
    own generator is forced to ``FIX`` (that generator is untouched).
    """

    mult: int
    actions: tuple

    def __post_init__(self):
        rank = len(self.actions)
        if self.mult == 0 or abs(self.mult) > rank:
            raise InvalidInputError("multiplier outside alphabet")
        if self.actions[abs(self.mult) - 1] != FIX:
            raise InvalidInputError("multiplier's own slot must be fix")
        if any(a not in (FIX, RIGHT, LEFT, CONJ) for a in self.actions):
            raise InvalidInputError("unknown action code")
        if all(a == FIX for a in self.actions):
            raise InvalidInputError("identity table is not a valid move")

    @property
    def rank(self) -> int:
        return len(self.actions)


def _letters_in_order(rank: int) -> list[int]:
    return [letter_from_key(k) for k in range(2 * rank)]


def enumerate_nielsen(rank: int) -> list[NielsenAuto]:
    """All 4n(n-1) Nielsen moves of the given rank, canonically ordered."""
    if rank < 1:
        raise InvalidInputError("rank must be >= 1")
    out = []
    for target in range(1, rank + 1):
        for side in ("L", "R"):
            for mult in _letters_in_order(rank):
                if abs(mult) != target:
                    out.append(NielsenAuto(target, side, mult))
    return out


def enumerate_whitehead(rank: int) -> list[WhiteheadAuto]:
    """All 2n*4^(n-1) - 2n non-trivial type-II moves, canonically ordered."""
    if rank < 1:
        raise InvalidInputError("rank must be >= 1")
    out = []
    others_count = rank - 1
    for mult in _letters_in_order(rank):
        others = [g for g in range(1, rank + 1) if g != abs(mult)]
        for code in range(1, 4**others_count):
            actions = [FIX] * rank
            for pos, g in enumerate(others):
                shift = 4 ** (others_count - 1 - pos)
                actions[g - 1] = (code // shift) % 4
            out.append(WhiteheadAuto(mult, tuple(actions)))
    return out


def nielsen_to_whitehead(t: NielsenAuto, rank: int) -> WhiteheadAuto:
    """The same map written as a type-II move."""
    if t.min_rank() > rank:
        raise InvalidInputError(f"{t} does not fit in rank {rank}")
    actions = [FIX] * rank
    if t.side == "R":
        mult = t.mult
        actions[t.target - 1] = RIGHT
    else:
        # x -> y*x is left multiplication by the inverse of the Whitehead
        # multiplier, so the multiplier is y^-1.
        mult = -t.mult
        actions[t.target - 1] = LEFT
    return WhiteheadAuto(mult, tuple(actions))


def whitehead_to_nielsen(wa: WhiteheadAuto):
    """Inverse of :func:`nielsen_to_whitehead`; None if the move is not Nielsen."""
    nonfix = [(g, act) for g, act in enumerate(wa.actions, start=1) if act != FIX]
    if len(nonfix) != 1:
        return None
    g, act = nonfix[0]
    if act == RIGHT:
        return NielsenAuto(g, "R", wa.mult)
    if act == LEFT:
        return NielsenAuto(g, "L", -wa.mult)
    return None


def inverse_auto(auto):
    """The exact inverse move (negate the multiplier, keep the table)."""
    if isinstance(auto, NielsenAuto):
        return NielsenAuto(auto.target, auto.side, -auto.mult)
    return WhiteheadAuto(-auto.mult, auto.actions)


def images_table(auto, rank: int) -> tuple:
    """Per-generator images, as letter tuples indexed by generator - 1."""
    if isinstance(auto, NielsenAuto):
        if auto.min_rank() > rank:
            raise InvalidInputError(f"{auto} does not fit in rank {rank}")
        table = [(g,) for g in range(1, rank + 1)]
        g = auto.target
        table[g - 1] = (g, auto.mult) if auto.side == "R" else (auto.mult, g)
        return tuple(table)
    if auto.rank != rank:
        raise InvalidInputError(f"move of rank {auto.rank} applied at rank {rank}")
    a = auto.mult
    table = []
    for g, act in enumerate(auto.actions, start=1):
        if g == abs(a) or act == FIX:
            table.append((g,))
        elif act == RIGHT:
            table.append((g, a))
        elif act == LEFT:
            table.append((-a, g))
        else:
            table.append((-a, g, a))
    return tuple(table)


def _substitute(table: tuple, letters: tuple) -> list:
    out: list[int] = []
    for x in letters:
        if x > 0:
            imgs = table[x - 1]
        else:
            imgs = tuple(-y for y in reversed(table[-x - 1]))
        for y in imgs:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return out


def _apply_table(table: tuple, letters: tuple) -> tuple:
    """Substitute, free-reduce and cyclically reduce; returns raw letters."""
    out = _substitute(table, letters)
    lo, hi = 0, len(out)
    while hi - lo >= 2 and out[lo] == -out[hi - 1]:
        lo += 1
        hi -= 1
    return tuple(out[lo:hi])


def apply(auto, w: Word) -> Word:
    """Apply one move to a word; the result is cyclically reduced.

    >>> apply(NielsenAuto(1, "R", 2), free_reduce([1, -2], 2)).letters
    (1,)
    """
    table = images_table(auto, w.rank)
    return Word._unchecked(_apply_table(table, w.letters), w.rank)


def apply_sequence(autos, w: Word) -> Word:
    """Left-to-right composition; the empty sequence is the identity."""
    for auto in autos:
        w = apply(auto, w)
    return w


def auto_to_json(auto) -> dict:
    if isinstance(auto, NielsenAuto):
        return {
            "kind": "nielsen",
            "target": auto.target,
            "side": auto.side,
            "mult": auto.mult,
        }
    actions = {
        str(g): ACTION_NAMES[act]
        for g, act in enumerate(auto.actions, start=1)
        if g != abs(auto.mult)
    }
    return {"kind": "whitehead", "a": auto.mult, "actions": actions}


def auto_from_json(data: dict):
    try:
        kind = data["kind"]
        if kind == "nielsen":
            return NielsenAuto(int(data["target"]), data["side"], int(data["mult"]))
        if kind == "whitehead":
            mult = int(data["a"])
            keys = [int(k) for k in data["actions"]]
            rank = max([abs(mult)] + keys)
            actions = [FIX] * rank
            for key, name in data["actions"].items():
                actions[int(key) - 1] = _NAME_TO_ACTION[name]
            return WhiteheadAuto(mult, tuple(actions))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"bad automorphism descriptor: {data!r}") from exc
    raise InvalidInputError(f"unknown automorphism kind {data.get('kind')!r}")


def _membership_row(wa: WhiteheadAuto, rank: int) -> np.ndarray:
    """Letters multiplied on the right by the multiplier, as a 0/1 row.

    Row semantics: letter u is marked iff the move appends the multiplier
    after u (equivalently, prepends its inverse before u^-1). The
    multiplier itself is always marked, its inverse never.
    """
    row = np.zeros(2 * rank, dtype=np.int8)
    row[letter_key(wa.mult)] = 1
    for g, act in enumerate(wa.actions, start=1):
        if act in (RIGHT, CONJ):
            row[letter_key(g)] = 1
        if act in (LEFT, CONJ):
            row[letter_key(-g)] = 1
    return row


class AutomorphismUniverse:
    """Every move of one rank, indexed once, with arrays for fast sweeps.

    ``refs[i]`` is the move at canonical index ``i`` (Nielsen moves come
    first). ``membership`` and ``mult_vertex`` encode each move for the
    vectorised length-change computation in :mod:`whlab.engine`.
    """

    def __init__(self, rank: int):
        self.rank = rank
        self.nielsen = enumerate_nielsen(rank)
        whitehead_all = enumerate_whitehead(rank)
        self.rest = [wa for wa in whitehead_all if whitehead_to_nielsen(wa) is None]
        self.refs = list(self.nielsen) + self.rest
        self.n_nielsen = len(self.nielsen)
        self.size = len(self.refs)
        assert self.size == len(whitehead_all)

        self.index_of = {ref: i for i, ref in enumerate(self.refs)}
        self.images = [images_table(ref, rank) for ref in self.refs]
        # per-letter image lookup, indexed by letter + rank (index rank unused)
        self.letter_maps = []
        for table in self.images:
            lm = [()] * (2 * rank + 1)
            for g in range(1, rank + 1):
                lm[g + rank] = table[g - 1]
                lm[-g + rank] = tuple(-y for y in reversed(table[g - 1]))
            self.letter_maps.append(lm)

        rows = []
        mult_vertex = []
        for ref in self.refs:
            wa = ref if isinstance(ref, WhiteheadAuto) else nielsen_to_whitehead(ref, rank)
            rows.append(_membership_row(wa, rank))
            mult_vertex.append(letter_key(wa.mult))
        if rows:
            self.membership = np.asarray(rows, dtype=np.float64)
        else:
            self.membership = np.zeros((0, 2 * rank), dtype=np.float64)
        self.mult_vertex = np.asarray(mult_vertex, dtype=np.intp)
        self.identity_order = np.arange(self.size, dtype=np.intp)

    def nielsen_index(self, t: NielsenAuto) -> int:
        return self.index_of[t]


@lru_cache(maxsize=None)
def get_universe(rank: int) -> AutomorphismUniverse:
    return AutomorphismUniverse(rank)
