"""Weighted adjacency graph of a cyclic word and derived feature vectors.

Vertices are the 2n letters in the fixed order ``1, -1, 2, -2, ...``.
Reading the word cyclically, each adjacent pair (u, v) increments the
weight of the undirected edge {u, v^-1}; free reduction rules out loops.
The weights of a cyclically reduced word always sum to its length.

Edge order "canonical-v1" (part of the model-file format, frozen):
unordered vertex pairs {i, j}, i < j, enumerated row-major over the
upper triangle. The pairs {v, v^-1} are the "square" edges (they come
from subwords x^2); the remaining 2n(n-1) edges each correspond to a
unique pair of Nielsen moves that shorten the matching two-letter
subwords.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .automorphisms import NielsenAuto
from .errors import InvalidInputError
from .words import Word, letter_from_key, require_cyclic, require_nonempty

__all__ = [
    "EdgeIndexer",
    "edge_indexer",
    "WeightVector",
    "adjacency_matrix",
    "whitehead_graph",
    "feature_vector",
    "edge_autos",
    "max_weight_ordering",
]


class EdgeIndexer:
    """Canonical bijection between vertex pairs and edge indices."""

    def __init__(self, rank: int):
        if rank < 1:
            raise InvalidInputError("rank must be >= 1")
        self.rank = rank
        self.n_vertices = 2 * rank
        self.pairs: list[tuple] = []
        self.pair_index = np.full((self.n_vertices, self.n_vertices), -1, dtype=np.intp)
        for u in range(self.n_vertices):
            for v in range(u + 1, self.n_vertices):
                idx = len(self.pairs)
                self.pairs.append((u, v))
                self.pair_index[u, v] = idx
                self.pair_index[v, u] = idx
        self.n_edges = len(self.pairs)
        assert self.n_edges == rank * (2 * rank - 1)
        # Edges {v, v^-1} pair a letter with its own inverse.
        self.is_square = np.array([u // 2 == v // 2 for u, v in self.pairs], dtype=bool)
        self.eprime = np.flatnonzero(~self.is_square)


@lru_cache(maxsize=None)
def edge_indexer(rank: int) -> EdgeIndexer:
    return EdgeIndexer(rank)


@dataclass
class WeightVector:
    """Edge weights of one cyclic word in canonical-v1 order."""

    weights: np.ndarray
    word_length: int


def _vertex_keys(letters: np.ndarray) -> np.ndarray:
    return 2 * (np.abs(letters) - 1) + (letters < 0)


def adjacency_matrix(w: Word) -> np.ndarray:
    """Symmetric 2n x 2n matrix of edge weights (zero diagonal)."""
    require_cyclic(w, "adjacency_matrix")
    nv = 2 * w.rank
    m = np.zeros((nv, nv), dtype=np.int64)
    if len(w) == 0:
        return m
    letters = np.fromiter(w.letters, dtype=np.int64, count=len(w))
    u = _vertex_keys(letters)
    v = _vertex_keys(-np.roll(letters, -1))
    np.add.at(m, (u, v), 1)
    return m + m.T


def whitehead_graph(w: Word) -> WeightVector:
    """Edge weights of the cyclic word; errors on the empty word."""
    require_nonempty(w, "whitehead_graph")
    m = adjacency_matrix(w)
    iu = np.triu_indices(2 * w.rank, k=1)
    return WeightVector(weights=m[iu], word_length=len(w))


def feature_vector(w: Word) -> np.ndarray:
    """Edge weights normalised by cyclic length; entries sum to one."""
    wv = whitehead_graph(w)
    return wv.weights.astype(np.float64) / wv.word_length


def _assignment_to_nielsen(letter: int, mult: int) -> NielsenAuto:
    """Nielsen move realising ``letter -> letter * mult``."""
    if letter > 0:
        return NielsenAuto(letter, "R", mult)
    return NielsenAuto(-letter, "L", -mult)


def edge_autos(rank: int, edge_index: int) -> tuple:
    """The two Nielsen moves shortening the subwords behind one edge.

    For the edge {u, v} (u the smaller vertex) these are ``u -> u*v`` and
    ``v -> v*u``; they are the only Nielsen moves that shorten the
    two-letter subwords the edge counts. Square edges {v, v^-1} have no
    such moves and raise.
    """
    indexer = edge_indexer(rank)
    if not 0 <= edge_index < indexer.n_edges:
        raise InvalidInputError(f"edge index {edge_index} out of range")
    if indexer.is_square[edge_index]:
        raise InvalidInputError("square edges have no length-reducing Nielsen moves")
    u, v = indexer.pairs[edge_index]
    x, y = letter_from_key(u), letter_from_key(v)
    return (_assignment_to_nielsen(x, y), _assignment_to_nielsen(y, x))


def max_weight_ordering(w: Word) -> list:
    """Nielsen moves listed by decreasing weight of their edge.

    Edges outside the squares are sorted by weight descending (ties by
    canonical edge index ascending) and each contributes its pair of
    moves, the smaller-vertex one first. The result is a permutation of
    the full Nielsen listing.
    """
    indexer = edge_indexer(w.rank)
    wv = whitehead_graph(w)
    eweights = wv.weights[indexer.eprime]
    order = np.lexsort((np.arange(len(eweights)), -eweights))
    out = []
    for pos in order:
        out.extend(edge_autos(w.rank, int(indexer.eprime[pos])))
    return out
