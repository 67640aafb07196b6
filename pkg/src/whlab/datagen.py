"""Seeded corpus generation: random cyclic words, primitive elements, and
one-step-reducible non-minimal words.

Every sample draws its own generator stream from (config seed, sample
index), so corpora are byte-identical for a fixed config regardless of
generation order or parallelism.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .automorphisms import apply, get_universe
from .engine import length_changes
from .errors import DataFormatError, InvalidInputError
from .words import Word, cyclic_reduce, letter_from_key

__all__ = [
    "GenConfig",
    "random_reduced_word",
    "random_primitive",
    "random_nonminimal_c1",
    "generate_corpus",
    "write_corpus",
    "read_corpus",
]

CORPUS_KINDS = ("random", "primitive", "c1")


@dataclass(frozen=True)
class GenConfig:
    rank: int
    length_min: int
    length_max: int
    seed: int = 0
    chain_min: int = 0
    chain_max: int = 0
    attempts: int = 200

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidInputError("rank must be >= 1")
        if not 1 <= self.length_min <= self.length_max:
            raise InvalidInputError("need 1 <= length_min <= length_max")
        if not 0 <= self.chain_min <= self.chain_max:
            raise InvalidInputError("need 0 <= chain_min <= chain_max")
        if self.attempts < 1:
            raise InvalidInputError("attempts must be >= 1")


def _rng_for(cfg: GenConfig, sample: int):
    return np.random.default_rng([cfg.seed, sample])


def _walk(rng, rank: int, length: int) -> Word:
    """Non-backtracking random walk: freely reduced by construction."""
    if length == 0:
        return Word((), rank, validate=False)
    letters = [letter_from_key(int(rng.integers(0, 2 * rank)))]
    for _ in range(length - 1):
        prev = letters[-1]
        choices = [letter_from_key(k) for k in range(2 * rank)]
        choices.remove(-prev)
        letters.append(choices[int(rng.integers(0, 2 * rank - 1))])
    return Word(tuple(letters), rank, validate=False)


def _cyclic_word_in_range(rng, rank: int, lo: int, hi: int, attempts: int) -> Word:
    for _ in range(attempts):
        target = int(rng.integers(lo, hi + 1))
        w = cyclic_reduce(_walk(rng, rank, target))
        if lo <= len(w) <= hi:
            return w
    raise InvalidInputError(
        f"could not hit cyclic length range [{lo}, {hi}] in {attempts} attempts"
    )


def random_reduced_word(cfg: GenConfig, sample: int = 0) -> Word:
    """Uniform non-backtracking walk, cyclically reduced, length in range."""
    rng = _rng_for(cfg, sample)
    return _cyclic_word_in_range(rng, cfg.rank, cfg.length_min, cfg.length_max,
                                 cfg.attempts)


def random_primitive(cfg: GenConfig, sample: int = 0):
    """Image of a random generator under a random chain of Whitehead moves.

    Returns (word, meta). The output lies in a generator's orbit, so its
    minimal cyclic length is 1.
    """
    rng = _rng_for(cfg, sample)
    uni = get_universe(cfg.rank)
    chain = int(rng.integers(cfg.chain_min, cfg.chain_max + 1))
    w = Word((int(rng.integers(1, cfg.rank + 1)),), cfg.rank, validate=False)
    for _ in range(chain):
        w = apply(uni.refs[int(rng.integers(0, uni.size))], w)
    return w, {"kind": "primitive", "source_len": 1, "chain_len": chain}


def random_nonminimal_c1(cfg: GenConfig, sample: int = 0):
    """A minimal word pushed one length-increasing move away from minimal.

    The configured length range applies to the output; the minimal
    pre-image is drawn from the lower third of the range so that a single
    move (which can at most triple the length) stays inside it. Each
    sample is checked on the spot: the pre-image survives a full sweep
    with no shortening move, and the output drops back to exactly the
    pre-image length under its best single move.

    Returns (word, meta) with the pre-image length in the meta.
    """
    rng = _rng_for(cfg, sample)
    uni = get_universe(cfg.rank)
    pre_lo = cfg.length_min
    pre_hi = max(pre_lo, cfg.length_max // 3)
    for _ in range(cfg.attempts):
        w = _cyclic_word_in_range(rng, cfg.rank, pre_lo, pre_hi, cfg.attempts)
        delta = length_changes(w)
        if (delta < 0).any():
            continue  # not minimal, draw again
        increasing = np.flatnonzero(delta > 0)
        if increasing.size == 0:
            continue
        t = int(increasing[int(rng.integers(0, increasing.size))])
        v = apply(uni.refs[t], w)
        if not cfg.length_min <= len(v) <= cfg.length_max:
            continue
        assert len(v) + int(length_changes(v).min()) == len(w), (
            "output is not one move away from minimal"
        )
        return v, {"kind": "c1", "source_len": len(w)}
    raise InvalidInputError(f"gave up after {cfg.attempts} attempts")


def _generate_one(args):
    cfg, kind, sample = args
    if kind == "random":
        w = random_reduced_word(cfg, sample)
        meta = {"kind": "random", "source_len": len(w)}
    elif kind == "primitive":
        w, meta = random_primitive(cfg, sample)
    elif kind == "c1":
        w, meta = random_nonminimal_c1(cfg, sample)
    else:
        raise InvalidInputError(f"unknown corpus kind {kind!r}")
    return {"id": sample, "rank": cfg.rank, "word": list(w.letters), "meta": meta}


def generate_corpus(cfg: GenConfig, kind: str, count: int, threads: int = 1) -> list:
    """Record dicts for ``count`` samples; deterministic in (cfg, kind)."""
    if kind not in CORPUS_KINDS:
        raise InvalidInputError(f"unknown corpus kind {kind!r}")
    tasks = [(cfg, kind, i) for i in range(count)]
    if threads <= 1 or count < 8:
        return [_generate_one(t) for t in tasks]
    from .util import pmap

    return pmap(_generate_one, tasks, threads)


def write_corpus(path, records, cfg: GenConfig, kind: str, manifest: dict = None):
    header = {
        "kind": "corpus-header",
        "corpus_kind": kind,
        "config": asdict(cfg),
    }
    if manifest is not None:
        header["manifest"] = manifest
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_corpus(path):
    """Returns (words, records, header). Ranks must be uniform."""
    words = []
    records = []
    header = None
    try:
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh):
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                if obj.get("kind") == "corpus-header":
                    header = obj
                    continue
                w = Word(tuple(int(x) for x in obj["word"]), int(obj["rank"]))
                if not w.is_cyclically_reduced:
                    raise DataFormatError(f"line {line_no}: word not cyclically reduced")
                words.append(w)
                records.append(obj)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"bad corpus file {path}: {exc}") from exc
    if words and len({w.rank for w in words}) != 1:
        raise DataFormatError("corpus mixes ranks")
    return words, records, header
