import numpy as np
import pytest

from whlab.bench import (
    length_lrp_correlation,
    nielsen_reducible_fraction,
    pearson_correlation,
    report_to_csv,
    report_to_json,
    report_to_markdown,
    run_strategy_benchmark,
)
from whlab.clustering import estimate_lambda_centers
from whlab.engine import (
    CentroidStrategy,
    MaxWeightStrategy,
    NielsenFirstStrategy,
    RandomStrategy,
)
from whlab.errors import InvalidInputError
from whlab.words import Word, word_from_text

from conftest import random_cyclic_words


def test_fraction_reference_arithmetic():
    # frozen check of the interval formula at a large sample size:
    # p=0.998, N=10143 gives roughly [0.9971, 0.9989]
    class Fake:
        pass

    import whlab.bench as bench

    p, lo, hi = 0.998, None, None
    n = 10143
    half = 1.96 * np.sqrt(p * (1 - p) / n)
    lo, hi = p - half, p + half
    assert lo == pytest.approx(0.9971305, abs=1e-6)
    assert hi == pytest.approx(0.9988695, abs=1e-6)


def test_fraction_on_words():
    words = [word_from_text("ab", 2, cyclic=True)] * 4
    p, lo, hi = nielsen_reducible_fraction(words)
    assert (p, lo, hi) == (1.0, 1.0, 1.0)
    minimal = [word_from_text("abAB", 2, cyclic=True)] * 4
    p, lo, hi = nielsen_reducible_fraction(minimal)
    assert (p, lo, hi) == (0.0, 0.0, 0.0)


def test_fraction_half():
    words = [word_from_text("ab", 2, cyclic=True)] * 50 + [
        word_from_text("abAB", 2, cyclic=True)
    ] * 50
    p, lo, hi = nielsen_reducible_fraction(words)
    assert p == pytest.approx(0.5)
    assert lo == pytest.approx(0.5 - 1.96 * np.sqrt(0.25 / 100), abs=1e-12)
    assert hi == pytest.approx(0.5 + 1.96 * np.sqrt(0.25 / 100), abs=1e-12)


def test_fraction_wilson_stays_in_unit_interval():
    words = [word_from_text("ab", 2, cyclic=True)] * 4
    p, lo, hi = nielsen_reducible_fraction(words, wilson=True)
    assert p == 1.0 and 0.0 <= lo <= hi <= 1.0


def test_fraction_empty():
    with pytest.raises(InvalidInputError):
        nielsen_reducible_fraction([])


def test_pearson_exact_line():
    xs = [1.0, 2.0, 3.0, 4.0]
    ys = [2 * x + 1 for x in xs]
    assert pearson_correlation(xs, ys) == pytest.approx(1.0)


def test_pearson_hand_value():
    # cov = 0.5, sx = 1, sy = 1 on the centered series
    assert pearson_correlation([1, 2, 3], [3, 2, 4]) == pytest.approx(0.5)


def test_pearson_degenerate_warns():
    with pytest.warns(RuntimeWarning):
        r = pearson_correlation([1, 2, 3], [5, 5, 5])
    assert r == 0.0


def test_pearson_validates():
    with pytest.raises(InvalidInputError):
        pearson_correlation([1], [2])
    with pytest.raises(InvalidInputError):
        pearson_correlation([1, 2], [1, 2, 3])


def _strategies(rank):
    train = random_cyclic_words(rank, 200, 60, seed=123)
    model = estimate_lambda_centers(train, rank=rank)
    return [
        RandomStrategy(0),
        NielsenFirstStrategy(),
        CentroidStrategy(model),
        MaxWeightStrategy(),
    ]


def test_benchmark_single_generator_corpus():
    words = [Word((1,), 3), Word((2,), 3)]
    report = run_strategy_benchmark(words, _strategies(3), seed=1)
    for res in report.results:
        assert res.n_total == 0.0
        assert res.n_red == 0.0
        assert np.isnan(res.n_lrp)


def test_benchmark_counts_consistent():
    words = random_cyclic_words(3, 20, 60, seed=9, min_len=5)
    report = run_strategy_benchmark(words, _strategies(3), seed=2)
    for res in report.results:
        for rec in res.records:
            assert rec.reducing_steps <= rec.total_steps
            assert rec.final_length <= rec.length
        assert res.n_red <= res.n_total


def test_benchmark_deterministic_and_parallel_stable():
    words = random_cyclic_words(3, 10, 50, seed=10, min_len=5)
    strategies = [RandomStrategy(7), MaxWeightStrategy()]
    a = run_strategy_benchmark(words, strategies, seed=3, threads=1)
    b = run_strategy_benchmark(words, strategies, seed=3, threads=2)
    for ra, rb in zip(a.results, b.results):
        assert ra.n_total == rb.n_total
        assert ra.n_red == rb.n_red
        assert ra.n_lrp == rb.n_lrp


def test_benchmark_validates():
    with pytest.raises(InvalidInputError):
        run_strategy_benchmark([], [NielsenFirstStrategy()])
    mixed = [Word((1,), 2), Word((1,), 3)]
    with pytest.raises(InvalidInputError):
        run_strategy_benchmark(mixed, [NielsenFirstStrategy()])


def test_report_formats():
    words = random_cyclic_words(2, 8, 30, seed=11, min_len=4)
    report = run_strategy_benchmark(words, [NielsenFirstStrategy()], seed=4)
    csv = report_to_csv(report)
    assert csv.splitlines()[1] == "strategy,n_total,n_red,n_lrp"
    assert csv.splitlines()[2].startswith("nf,")
    md = report_to_markdown(report)
    assert "| strategy" in md and "| nf" in md
    payload = report_to_json(report, emit_records=True)
    assert payload["results"][0]["strategy"] == "nf"
    assert len(payload["results"][0]["records"]) == len(words)
    assert "lrp_aggregation" in payload


def test_length_lrp_correlation_runs():
    words = random_cyclic_words(3, 30, 80, seed=12, min_len=10)
    report = run_strategy_benchmark(words, [NielsenFirstStrategy()], seed=5)
    r = length_lrp_correlation(report.results[0])
    assert -1.0 <= r <= 1.0
