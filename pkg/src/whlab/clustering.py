"""K-means over word feature vectors, trained reducer centers, and
cluster quality measures.

Two kinds of center models share one file format: plain K-means centers,
and per-Nielsen-move centers estimated as the mean feature vector of
training words reducible by exactly that move and no other.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .automorphisms import auto_from_json, auto_to_json, get_universe
from .errors import InvalidInputError
from .graph import edge_indexer, feature_vector, whitehead_graph
from .engine import nielsen_reducers, _psi_pairs

__all__ = [
    "KMeansModel",
    "kmeans",
    "CentroidModel",
    "estimate_lambda_centers",
    "assign_ordering",
    "nielsen_reducibility_matrix",
    "goodness_r",
    "r_max",
    "avg_r_max",
    "goodness_g_max",
    "assign_to_centers",
    "ClusterEvalRow",
    "ClusterEvalReport",
    "evaluate_clusters",
    "model_to_json",
    "model_from_json",
    "save_model",
    "load_model",
]

EDGE_ORDER_TAG = "canonical-v1"


@dataclass
class KMeansModel:
    centers: np.ndarray
    k: int
    rank: int
    seed: int
    iterations: int
    j_linear: float
    j_squared: float
    j_linear_history: list = field(default_factory=list)
    j_squared_history: list = field(default_factory=list)
    cluster_sizes: np.ndarray = None
    support: np.ndarray = None  # alias of cluster_sizes, for shared assignment code

    def __post_init__(self):
        if self.support is None:
            self.support = self.cluster_sizes


def _pairwise_sq(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d = (
        (points * points).sum(axis=1)[:, None]
        - 2.0 * points @ centers.T
        + (centers * centers).sum(axis=1)[None, :]
    )
    return np.maximum(d, 0.0)


def kmeans(points, k: int, seed: int = 0, max_iter: int = 300, tol: float = 1e-9,
           rank: int = 0) -> KMeansModel:
    """Plain nearest-center / mean-update K-means.

    Stops at an assignment fixed point, when the squared criterion
    improves by less than ``tol``, or after ``max_iter`` rounds. The
    squared criterion is non-increasing across iterations by
    construction; the unsquared sum of distances is tracked alongside it
    for reporting, without any monotonicity guarantee.

    Empty clusters are re-seeded at the point farthest from the empty
    center (at most k re-seeds per iteration).
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise InvalidInputError("points must be a nonempty 2-D array")
    n = pts.shape[0]
    if not 1 <= k <= n:
        raise InvalidInputError(f"k must be between 1 and the number of points ({n})")
    rng = np.random.default_rng(seed)
    centers = pts[rng.choice(n, size=k, replace=False)].copy()

    j_sq_hist: list[float] = []
    j_lin_hist: list[float] = []
    prev_labels = None
    labels = np.zeros(n, dtype=np.intp)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        dsq = _pairwise_sq(pts, centers)
        labels = dsq.argmin(axis=1)
        dmin = dsq[np.arange(n), labels]
        j_sq = float(dmin.sum())
        j_lin = float(np.sqrt(dmin).sum())
        if j_sq_hist:
            assert j_sq <= j_sq_hist[-1] + 1e-9, "squared criterion increased"
        j_sq_hist.append(j_sq)
        j_lin_hist.append(j_lin)
        if prev_labels is not None and np.array_equal(labels, prev_labels):
            break
        if len(j_sq_hist) >= 2 and j_sq_hist[-2] - j_sq_hist[-1] < tol:
            break
        prev_labels = labels
        new_centers = centers.copy()
        taken: set[int] = set()
        for c in range(k):
            members = labels == c
            if members.any():
                new_centers[c] = pts[members].mean(axis=0)
            else:
                far = np.argsort(-_pairwise_sq(pts, centers[c : c + 1])[:, 0])
                pick = next((int(i) for i in far if int(i) not in taken), int(far[0]))
                taken.add(pick)
                new_centers[c] = pts[pick]
        centers = new_centers

    sizes = np.bincount(labels, minlength=k)
    return KMeansModel(
        centers=centers,
        k=k,
        rank=rank,
        seed=seed,
        iterations=iterations,
        j_linear=j_lin_hist[-1],
        j_squared=j_sq_hist[-1],
        j_linear_history=j_lin_hist,
        j_squared_history=j_sq_hist,
        cluster_sizes=sizes,
    )


@dataclass
class CentroidModel:
    """One center per Nielsen move (canonical order); support 0 marks
    moves that had no training words of their own."""

    rank: int
    centers: np.ndarray
    support: np.ndarray
    seed: int = 0

    @property
    def n_centers(self) -> int:
        return self.centers.shape[0]


def estimate_lambda_centers(words, rank: int = 0, seed: int = 0) -> CentroidModel:
    """Mean feature vector of the words each Nielsen move uniquely reduces.

    A word contributes to the center of move t only when t is its single
    length-reducing Nielsen move; words with zero or several reducers are
    skipped. Order of the sample does not matter.
    """
    words = list(words)
    if rank == 0:
        if not words:
            raise InvalidInputError("cannot infer rank from an empty sample")
        rank = words[0].rank
    uni = get_universe(rank)
    dim = edge_indexer(rank).n_edges
    acc = np.zeros((uni.n_nielsen, dim), dtype=np.float64)
    counts = np.zeros(uni.n_nielsen, dtype=np.int64)
    for w in words:
        if w.rank != rank:
            raise InvalidInputError("sample mixes ranks")
        red = np.flatnonzero(nielsen_reducers(w))
        if red.size == 1:
            t = int(red[0])
            acc[t] += feature_vector(w)
            counts[t] += 1
    centers = np.zeros_like(acc)
    nonzero = counts > 0
    centers[nonzero] = acc[nonzero] / counts[nonzero, None]
    return CentroidModel(rank=rank, centers=centers, support=counts, seed=seed)


def assign_ordering(v: np.ndarray, model: CentroidModel) -> list:
    """Nielsen moves sorted by distance from ``v`` to their centers.

    Moves without a center go last, in canonical order; equal distances
    break by canonical index.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (model.centers.shape[1],):
        raise InvalidInputError("feature dimension does not match the model")
    d = np.linalg.norm(model.centers - v, axis=1)
    d = np.where(model.support > 0, d, np.inf)
    order = np.lexsort((np.arange(d.size), d))
    nielsen = get_universe(model.rank).nielsen
    return [nielsen[int(i)] for i in order]


def nielsen_reducibility_matrix(words) -> np.ndarray:
    """Row per word, column per canonical Nielsen move: does it shorten?"""
    return np.array([nielsen_reducers(w) for w in words], dtype=bool)


def goodness_r(cluster, t) -> float:
    """Fraction of the cluster shortened by the Nielsen move ``t``."""
    cluster = list(cluster)
    if not cluster:
        raise InvalidInputError("goodness is undefined on an empty cluster")
    uni = get_universe(cluster[0].rank)
    col = uni.nielsen_index(t)
    red = nielsen_reducibility_matrix(cluster)
    return float(red[:, col].mean())


def r_max(cluster):
    """Best single-move fraction and the move achieving it."""
    cluster = list(cluster)
    if not cluster:
        raise InvalidInputError("goodness is undefined on an empty cluster")
    uni = get_universe(cluster[0].rank)
    fractions = nielsen_reducibility_matrix(cluster).mean(axis=0)
    best = int(fractions.argmax())
    return float(fractions[best]), uni.nielsen[best]


def avg_r_max(clusters):
    """Mean of per-cluster best fractions; returns (value, empty clusters skipped)."""
    values = []
    skipped = 0
    for cluster in clusters:
        cluster = list(cluster)
        if not cluster:
            skipped += 1
            continue
        values.append(r_max(cluster)[0])
    if not values:
        raise InvalidInputError("all clusters are empty")
    return float(np.mean(values)), skipped


def goodness_g_max(words) -> float:
    """Fraction of words shortened by a move of their heaviest non-square edge."""
    words = list(words)
    if not words:
        raise InvalidInputError("goodness is undefined on an empty dataset")
    rank = words[0].rank
    indexer = edge_indexer(rank)
    pairs = _psi_pairs(rank)
    hits = 0
    for w in words:
        eweights = whitehead_graph(w).weights[indexer.eprime]
        pos = int(eweights.argmax())  # first maximum = lowest canonical edge index
        i, j = pairs[pos]
        red = nielsen_reducers(w)
        if red[i] or red[j]:
            hits += 1
    return hits / len(words)


def assign_to_centers(words, model) -> np.ndarray:
    """Index of the nearest available center for each word (ties: lowest)."""
    feats = np.array([feature_vector(w) for w in words], dtype=np.float64)
    d = np.linalg.norm(feats[:, None, :] - model.centers[None, :, :], axis=2)
    if model.support is not None:
        d[:, model.support == 0] = np.inf
    return d.argmin(axis=1)


@dataclass
class ClusterEvalRow:
    center_index: int
    center_auto: object
    size: int
    r_max: float
    best_auto: object


@dataclass
class ClusterEvalReport:
    rows: list
    avg_r_max: float
    empty_clusters: int
    g_max: float


def evaluate_clusters(model, words) -> ClusterEvalReport:
    """Assign words to the model's centers and score every cluster."""
    words = list(words)
    if not words:
        raise InvalidInputError("empty evaluation corpus")
    rank = words[0].rank
    uni = get_universe(rank)
    labels = assign_to_centers(words, model)
    is_lambda = isinstance(model, CentroidModel)
    rows = []
    values = []
    empty = 0
    for c in range(model.centers.shape[0]):
        if model.support is not None and model.support[c] == 0 and is_lambda:
            continue  # no trained center to evaluate
        members = [w for w, l in zip(words, labels) if l == c]
        auto = uni.nielsen[c] if is_lambda else None
        if not members:
            empty += 1
            continue
        value, best = r_max(members)
        values.append(value)
        rows.append(ClusterEvalRow(c, auto, len(members), value, best))
    if not values:
        raise InvalidInputError("all clusters are empty")
    return ClusterEvalReport(
        rows=rows,
        avg_r_max=float(np.mean(values)),
        empty_clusters=empty,
        g_max=goodness_g_max(words),
    )


def model_to_json(model) -> dict:
    if isinstance(model, CentroidModel):
        uni = get_universe(model.rank)
        centers = []
        for i in range(model.n_centers):
            has = int(model.support[i]) > 0
            centers.append(
                {
                    "auto": auto_to_json(uni.nielsen[i]),
                    "vector": model.centers[i].tolist() if has else None,
                    "support": int(model.support[i]),
                }
            )
        kind = "lambda"
        rank = model.rank
        seed = model.seed
    elif isinstance(model, KMeansModel):
        centers = [
            {
                "auto": None,
                "vector": model.centers[i].tolist(),
                "support": int(model.cluster_sizes[i]) if model.cluster_sizes is not None else 0,
            }
            for i in range(model.k)
        ]
        kind = "kmeans"
        rank = model.rank
        seed = model.seed
    else:
        raise InvalidInputError(f"not a model: {model!r}")
    dim = edge_indexer(rank).n_edges if rank else len(centers[0]["vector"] or [])
    return {
        "rank": rank,
        "dim": dim,
        "edge_order": EDGE_ORDER_TAG,
        "kind": kind,
        "centers": centers,
        "seed": seed,
    }


def model_from_json(data: dict):
    from .errors import DataFormatError

    try:
        kind = data["kind"]
        rank = int(data["rank"])
        if data.get("edge_order") != EDGE_ORDER_TAG:
            raise DataFormatError(
                f"unsupported edge order {data.get('edge_order')!r}"
            )
        dim = int(data["dim"])
        entries = data["centers"]
        if kind == "lambda":
            uni = get_universe(rank)
            centers = np.zeros((uni.n_nielsen, dim), dtype=np.float64)
            support = np.zeros(uni.n_nielsen, dtype=np.int64)
            for entry in entries:
                auto = auto_from_json(entry["auto"])
                i = uni.nielsen_index(auto)
                support[i] = int(entry["support"])
                if entry["vector"] is not None:
                    centers[i] = np.asarray(entry["vector"], dtype=np.float64)
            return CentroidModel(rank=rank, centers=centers, support=support,
                                 seed=int(data.get("seed", 0)))
        if kind == "kmeans":
            centers = np.array([e["vector"] for e in entries], dtype=np.float64)
            sizes = np.array([int(e.get("support", 0)) for e in entries], dtype=np.int64)
            return KMeansModel(
                centers=centers,
                k=centers.shape[0],
                rank=rank,
                seed=int(data.get("seed", 0)),
                iterations=0,
                j_linear=0.0,
                j_squared=0.0,
                cluster_sizes=sizes,
            )
    except DataFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"bad model file: {exc}") from exc
    raise DataFormatError(f"unknown model kind {data.get('kind')!r}")


def save_model(path, model, manifest: dict = None) -> None:
    payload = model_to_json(model)
    if manifest is not None:
        payload["manifest"] = manifest
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return model_from_json(json.load(fh))
