"""Greedy length reduction over Whitehead moves with pluggable search orders.

The length-reducer search evaluates, for each move, the cyclic length
change it would cause. For a cyclically reduced word this change equals

    (weight of graph edges crossing the marked/unmarked letter split)
    - (weighted degree of the multiplier vertex),

where the marked set is the membership row stored on the move (see
:mod:`whlab.automorphisms`). This lets a full sweep over every move run
as a handful of matrix products instead of thousands of word rewrites;
the identity is cross-checked against direct application in the tests.

Search semantics: a strategy yields, per input word, an ordering of all
moves; the search walks that order and stops at the first strict
decrease in cyclic length. Step counts include the successful
application; a failed sweep costs the full universe size.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .automorphisms import apply, get_universe
from .errors import InvalidInputError, OrbitSearchError
from .graph import adjacency_matrix, feature_vector, whitehead_graph, edge_indexer
from .words import Word, cyclic_normal_form, require_cyclic, require_nonempty

__all__ = [
    "length_changes",
    "nielsen_reducers",
    "Strategy",
    "RandomStrategy",
    "NielsenFirstStrategy",
    "CentroidStrategy",
    "MaxWeightStrategy",
    "make_strategy",
    "LrpResult",
    "RunMetrics",
    "find_length_reducer",
    "whitehead_reduce",
    "is_minimal",
    "orbit_min_length_bruteforce",
]


def length_changes(w: Word, nielsen_only: bool = False) -> np.ndarray:
    """Cyclic length change of ``w`` under every move, in canonical index order."""
    require_nonempty(w, "length_changes")
    require_cyclic(w, "length_changes")
    uni = get_universe(w.rank)
    m = adjacency_matrix(w).astype(np.float64)
    deg = m.sum(axis=1)
    b = uni.membership
    mult = uni.mult_vertex
    if nielsen_only:
        b = b[: uni.n_nielsen]
        mult = mult[: uni.n_nielsen]
    # crossing weight = sum of marked degrees - weight internal to the marked set
    cross = b @ deg - ((b @ m) * b).sum(axis=1)
    delta = cross - deg[mult]
    return np.rint(delta).astype(np.int64)


def nielsen_reducers(w: Word) -> np.ndarray:
    """Boolean mask over the canonical Nielsen listing: does the move shorten w?"""
    return length_changes(w, nielsen_only=True) < 0


class Strategy:
    """Produces, per word, a permutation of the canonical move indices."""

    name = "abstract"
    uses_rng = False

    def ordering(self, w: Word, rng=None) -> np.ndarray:
        raise NotImplementedError


class RandomStrategy(Strategy):
    """Fresh uniform shuffle of all moves at every search."""

    name = "r"
    uses_rng = True

    def __init__(self, seed: int = 0):
        self.seed = seed

    def ordering(self, w: Word, rng=None) -> np.ndarray:
        if rng is None:
            rng = np.random.default_rng(self.seed)
        return rng.permutation(get_universe(w.rank).size)


class NielsenFirstStrategy(Strategy):
    """Canonical order: all Nielsen moves, then the remaining moves."""

    name = "nf"

    def ordering(self, w: Word, rng=None) -> np.ndarray:
        return get_universe(w.rank).identity_order


class CentroidStrategy(Strategy):
    """Nielsen moves sorted by feature-space distance to trained centers.

    Moves whose center is missing (no training support) go last, in
    canonical order; non-Nielsen moves follow in canonical order.
    """

    name = "c"

    def __init__(self, model):
        self.model = model

    def ordering(self, w: Word, rng=None) -> np.ndarray:
        uni = get_universe(w.rank)
        if self.model.rank != w.rank:
            raise InvalidInputError(
                f"model rank {self.model.rank} does not match word rank {w.rank}"
            )
        f = feature_vector(w)
        d = np.linalg.norm(self.model.centers - f, axis=1)
        d = np.where(self.model.support > 0, d, np.inf)
        nn = uni.n_nielsen
        head = np.lexsort((np.arange(nn), d))
        return np.concatenate([head, np.arange(nn, uni.size)])


class MaxWeightStrategy(Strategy):
    """Nielsen moves expanded from edges in decreasing weight order."""

    name = "max"

    def ordering(self, w: Word, rng=None) -> np.ndarray:
        uni = get_universe(w.rank)
        indexer = edge_indexer(w.rank)
        wv = whitehead_graph(w)
        eweights = wv.weights[indexer.eprime]
        edge_order = np.lexsort((np.arange(len(eweights)), -eweights))
        head = _psi_pairs(w.rank)[edge_order].reshape(-1)
        return np.concatenate([head, np.arange(uni.n_nielsen, uni.size)])


_PSI_CACHE: dict = {}


def _psi_pairs(rank: int) -> np.ndarray:
    """Canonical Nielsen indices of each non-square edge's move pair."""
    cached = _PSI_CACHE.get(rank)
    if cached is None:
        from .graph import edge_autos

        uni = get_universe(rank)
        indexer = edge_indexer(rank)
        rows = []
        for e in indexer.eprime:
            a, b = edge_autos(rank, int(e))
            rows.append((uni.nielsen_index(a), uni.nielsen_index(b)))
        cached = np.asarray(rows, dtype=np.intp)
        _PSI_CACHE[rank] = cached
    return cached


def make_strategy(code: str, seed: int = 0, model=None) -> Strategy:
    """Build a strategy from its CLI code (r, nf, c, max)."""
    code = code.strip().lower()
    if code == "r":
        return RandomStrategy(seed)
    if code == "nf":
        return NielsenFirstStrategy()
    if code == "c":
        if model is None:
            raise InvalidInputError("centroid strategy needs a trained model")
        return CentroidStrategy(model)
    if code == "max":
        return MaxWeightStrategy()
    raise InvalidInputError(f"unknown strategy code {code!r}")


@dataclass
class LrpResult:
    """Outcome of one reducer search."""

    reducer: object
    steps: int
    reduced_word: object


@dataclass
class RunMetrics:
    """Step accounting for one full reduction run."""

    total_steps: int = 0
    reducing_steps: int = 0
    lrp_step_counts: list = field(default_factory=list)
    trace: list = field(default_factory=list)

    def lrp_mean(self):
        """Mean steps per successful reducer search; None if none happened."""
        k = len(self.trace)
        if k == 0:
            return None
        return float(sum(self.lrp_step_counts[:k])) / k


def find_length_reducer(w: Word, strategy: Strategy, rng=None) -> LrpResult:
    """Walk the strategy's order until a move strictly shortens ``w``.

    Returns the reducer, the number of moves tried (including the
    successful one), and the shortened word; or no reducer after the
    whole universe has been tried.
    """
    uni = get_universe(w.rank)
    delta = length_changes(w)
    order = strategy.ordering(w, rng)
    hits = np.flatnonzero(delta[order] < 0)
    if hits.size == 0:
        return LrpResult(reducer=None, steps=uni.size, reduced_word=None)
    k = int(hits[0])
    ref = uni.refs[int(order[k])]
    new_word = apply(ref, w)
    assert len(new_word) == len(w) + int(delta[order[k]]), "length-change mismatch"
    return LrpResult(reducer=ref, steps=k + 1, reduced_word=new_word)


def whitehead_reduce(w: Word, strategy: Strategy, run_seed=None):
    """Iterate reducer searches until the word is certified minimal.

    Words of cyclic length <= 1 are minimal by definition and are
    accepted without a certification sweep; the same shortcut fires when
    a run reaches length 1. Runs that stall at length > 1 end with one
    full (failed) sweep, which is counted in ``total_steps``.
    """
    require_cyclic(w, "whitehead_reduce")
    rng = None
    if strategy.uses_rng:
        rng = np.random.default_rng(strategy.seed if run_seed is None else run_seed)
    metrics = RunMetrics()
    current = w
    while len(current) > 1:
        res = find_length_reducer(current, strategy, rng)
        metrics.total_steps += res.steps
        metrics.lrp_step_counts.append(res.steps)
        if res.reducer is None:
            break
        metrics.trace.append(res.reducer)
        metrics.reducing_steps += 1
        current = res.reduced_word
    return current, metrics


def is_minimal(w: Word) -> bool:
    """True iff no move strictly shortens the cyclic word."""
    require_cyclic(w, "is_minimal")
    if len(w) <= 1:
        return True
    return not bool((length_changes(w) < 0).any())


def orbit_min_length_bruteforce(
    w: Word, length_cap: int, max_nodes: int = 500_000
) -> int:
    """Shortest cyclic length reachable by repeated moves, by plain BFS.

    Explores the automorphic images of ``w`` without ever expanding a
    word longer than ``length_cap``, deduplicating cyclic words by their
    canonical rotation. Independent of the sweep-based engine above: it
    rewrites actual words. Intended for small instances only.
    """
    require_cyclic(w, "orbit_min_length_bruteforce")
    if len(w) > length_cap:
        raise OrbitSearchError(
            f"length cap {length_cap} below the input length {len(w)}"
        )
    if len(w) <= 1:
        return len(w)
    uni = get_universe(w.rank)
    rank = w.rank
    letter_maps = uni.letter_maps

    def canon_key(letters: tuple) -> bytes:
        b = bytes(x + 16 for x in letters)
        if len(b) <= 1:
            return b
        bb = b + b
        return min(bb[r : r + len(b)] for r in range(len(b)))

    start = w.letters
    seen = {canon_key(start)}
    heap = [(len(start), start)]
    best = len(start)
    while heap:
        _, u = heapq.heappop(heap)
        for lm in letter_maps:
            out: list = []
            for x in u:
                for y in lm[x + rank]:
                    if out and out[-1] == -y:
                        out.pop()
                    else:
                        out.append(y)
            lo, hi = 0, len(out)
            while hi - lo >= 2 and out[lo] == -out[hi - 1]:
                lo += 1
                hi -= 1
            n = hi - lo
            if n < best:
                best = n
                if best <= 1:
                    # nonempty words have nonempty images, so 1 is a floor
                    return best
            if n > length_cap:
                continue
            v = tuple(out[lo:hi])
            key = canon_key(v)
            if key not in seen:
                seen.add(key)
                heapq.heappush(heap, (n, v))
                if len(seen) > max_nodes:
                    raise OrbitSearchError(
                        f"orbit search exceeded {max_nodes} states without closure"
                    )
    return best
