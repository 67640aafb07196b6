"""Strategy-comparison experiments and the statistics behind the reports.

Step counting follows the engine: total steps counts every move tried
(including the full failed sweep that certifies a stall at length > 1),
reducing steps counts the moves actually taken, and the per-word search
cost is the mean number of steps over the searches that found a reducer.
That per-word mean is what the reports aggregate as ``n_lrp``; the
choice is recorded in every report header.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .engine import Strategy, nielsen_reducers, whitehead_reduce
from .errors import InvalidInputError
from .words import Word

__all__ = [
    "WordRunRecord",
    "StrategyResult",
    "BenchReport",
    "run_strategy_benchmark",
    "nielsen_reducible_fraction",
    "pearson_correlation",
    "length_lrp_correlation",
    "report_to_csv",
    "report_to_markdown",
    "report_to_json",
]

LRP_AGGREGATION = "per-word mean over searches that found a reducer"


@dataclass
class WordRunRecord:
    word_id: int
    length: int
    final_length: int
    total_steps: int
    reducing_steps: int
    lrp_mean: float  # None when no search found a reducer


@dataclass
class StrategyResult:
    strategy: str
    n_total: float
    n_red: float
    n_lrp: float
    records: list = field(default_factory=list)


@dataclass
class BenchReport:
    corpus: dict
    seed: int
    results: list = field(default_factory=list)
    lrp_aggregation: str = LRP_AGGREGATION


def _run_one(args):
    letters, rank, strategy, run_seed = args
    w = Word(letters, rank, validate=False)
    final, metrics = whitehead_reduce(w, strategy, run_seed=run_seed)
    return (
        len(w),
        len(final),
        metrics.total_steps,
        metrics.reducing_steps,
        metrics.lrp_mean(),
    )


def run_strategy_benchmark(words, strategies, seed: int = 0, threads: int = 1,
                           corpus_info: dict = None) -> BenchReport:
    """Reduce every word under every strategy and aggregate step counts.

    Each (strategy, word) run gets its own derived seed, so reports are
    reproducible and independent of scheduling.
    """
    words = list(words)
    if not words:
        raise InvalidInputError("empty corpus")
    ranks = {w.rank for w in words}
    if len(ranks) != 1:
        raise InvalidInputError("corpus mixes ranks")
    for s in strategies:
        if not isinstance(s, Strategy):
            raise InvalidInputError(f"not a strategy: {s!r}")

    report = BenchReport(corpus=corpus_info or {"size": len(words)}, seed=seed)
    from .util import pmap

    for s_idx, strategy in enumerate(strategies):
        tasks = [
            (w.letters, w.rank, strategy, np.random.SeedSequence([seed, s_idx, i]))
            for i, w in enumerate(words)
        ]
        rows = pmap(_run_one, tasks, threads)
        records = [
            WordRunRecord(i, length, final, total, red, lrp)
            for i, (length, final, total, red, lrp) in enumerate(rows)
        ]
        lrp_values = [r.lrp_mean for r in records if r.lrp_mean is not None]
        report.results.append(
            StrategyResult(
                strategy=strategy.name,
                n_total=float(np.mean([r.total_steps for r in records])),
                n_red=float(np.mean([r.reducing_steps for r in records])),
                n_lrp=float(np.mean(lrp_values)) if lrp_values else float("nan"),
                records=records,
            )
        )
    return report


def nielsen_reducible_fraction(words, wilson: bool = False):
    """Fraction of words with at least one shortening Nielsen move,
    with a 95% confidence interval.

    The default interval is the normal approximation
    ``p +- 1.96 * sqrt(p(1-p)/N)``; pass ``wilson=True`` for the Wilson
    score interval.
    """
    words = list(words)
    n = len(words)
    if n == 0:
        raise InvalidInputError("empty corpus")
    hits = sum(1 for w in words if nielsen_reducers(w).any())
    p = hits / n
    z = 1.96
    if wilson:
        denom = 1.0 + z * z / n
        center = (p + z * z / (2 * n)) / denom
        half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
        return p, center - half, center + half
    half = z * math.sqrt(p * (1 - p) / n)
    return p, p - half, p + half


def _pearson(xs, ys):
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1 or xs.size < 2:
        raise InvalidInputError("need two equal-length series of at least 2 points")
    xd = xs - xs.mean()
    yd = ys - ys.mean()
    sx = float(np.sqrt((xd * xd).sum()))
    sy = float(np.sqrt((yd * yd).sum()))
    if sx == 0.0 or sy == 0.0:
        return 0.0, True
    return float((xd * yd).sum() / (sx * sy)), False


def pearson_correlation(xs, ys) -> float:
    """Sample Pearson r; a zero-variance series yields 0 with a warning."""
    r, degenerate = _pearson(xs, ys)
    if degenerate:
        warnings.warn("zero variance in a series; correlation defined as 0",
                      RuntimeWarning, stacklevel=2)
    return r


def length_lrp_correlation(result: StrategyResult) -> float:
    """Pearson r between word length and the per-word search cost."""
    pairs = [(r.length, r.lrp_mean) for r in result.records if r.lrp_mean is not None]
    if len(pairs) < 2:
        raise InvalidInputError("not enough words with reducer searches")
    xs, ys = zip(*pairs)
    return pearson_correlation(xs, ys)


def _fmt(x: float) -> str:
    return f"{x:.4g}" if x == x else "nan"  # nan != nan


def report_to_csv(report: BenchReport) -> str:
    lines = [f"# lrp_aggregation: {report.lrp_aggregation}"]
    lines.append("strategy,n_total,n_red,n_lrp")
    for res in report.results:
        lines.append(f"{res.strategy},{res.n_total:.6g},{res.n_red:.6g},{res.n_lrp:.6g}")
    return "\n".join(lines) + "\n"


def report_to_markdown(report: BenchReport) -> str:
    header = ["strategy", "n_total", "n_red", "n_lrp"]
    rows = [
        [res.strategy, _fmt(res.n_total), _fmt(res.n_red), _fmt(res.n_lrp)]
        for res in report.results
    ]
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    fmt_row = lambda cells: "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"
    out = [fmt_row(header), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    out.extend(fmt_row(r) for r in rows)
    out.append("")
    out.append(f"lrp aggregation: {report.lrp_aggregation}")
    return "\n".join(out) + "\n"


def report_to_json(report: BenchReport, emit_records: bool = False,
                   correlations: dict = None) -> dict:
    payload = {
        "corpus": report.corpus,
        "seed": report.seed,
        "lrp_aggregation": report.lrp_aggregation,
        "results": [
            {
                "strategy": res.strategy,
                "n_total": res.n_total,
                "n_red": res.n_red,
                "n_lrp": res.n_lrp,
            }
            for res in report.results
        ],
    }
    if correlations:
        payload["length_lrp_correlation"] = correlations
    if emit_records:
        for entry, res in zip(payload["results"], report.results):
            entry["records"] = [
                {
                    "word_id": r.word_id,
                    "length": r.length,
                    "final_length": r.final_length,
                    "total_steps": r.total_steps,
                    "reducing_steps": r.reducing_steps,
                    "lrp_mean": r.lrp_mean,
                }
                for r in res.records
            ]
    return payload
