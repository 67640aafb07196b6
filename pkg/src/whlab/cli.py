"""Command-line front end: generate corpora, train models, reduce words,
check minimality, score clusters, and benchmark strategies.

Data goes to stdout or files; progress and diagnostics go to stderr.
Every flag can also be set through an environment variable named
``WHLAB_<FLAG>`` (dashes become underscores); explicit flags win.

Exit codes: 0 success, 1 usage error, 2 data or format error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .automorphisms import auto_from_json, auto_to_json
from .bench import (
    length_lrp_correlation,
    nielsen_reducible_fraction,
    report_to_csv,
    report_to_json,
    report_to_markdown,
    run_strategy_benchmark,
)
from .clustering import (
    estimate_lambda_centers,
    evaluate_clusters,
    kmeans,
    load_model,
    save_model,
)
from .datagen import GenConfig, generate_corpus, read_corpus, write_corpus
from .engine import (
    find_length_reducer,
    is_minimal,
    make_strategy,
    whitehead_reduce,
)
from .errors import DataFormatError, InvalidInputError, WhlabError
from .graph import feature_vector
from .util import available_parallelism, sha256_file
from .words import Word, word_from_text, word_to_text


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _env(name: str, default=None, cast=str):
    raw = os.environ.get(f"WHLAB_{name.upper().replace('-', '_')}")
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        print(f"warning: ignoring bad WHLAB_{name.upper()}={raw!r}", file=sys.stderr)
        return default


def _add_common(p: _Parser):
    p.add_argument("--threads", type=int, default=_env("threads", 0, int),
                   help="worker processes; 0 = all cores")
    p.add_argument("--out", default=_env("out"), help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "md", "json"),
                   default=_env("format", "md"), help="report format")


def build_parser() -> _Parser:
    parser = _Parser(prog="whlab", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"whlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a corpus of words as JSON lines")
    g.add_argument("--kind", choices=("random", "primitive", "c1"), required=True)
    g.add_argument("--rank", type=int, default=_env("rank", None, int), required=_env("rank") is None)
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--seed", type=int, default=_env("seed", 0, int))
    g.add_argument("--length-min", type=int, default=_env("length-min", 1, int))
    g.add_argument("--length-max", type=int, default=_env("length-max", 100, int))
    g.add_argument("--chain-min", type=int, default=_env("chain-min", 0, int))
    g.add_argument("--chain-max", type=int, default=_env("chain-max", 0, int))
    g.add_argument("--attempts", type=int, default=_env("attempts", 200, int))
    _add_common(g)

    t = sub.add_parser("train", help="fit a center model from a corpus")
    t.add_argument("--kind", choices=("lambda", "kmeans"), default="lambda")
    t.add_argument("--corpus", required=True)
    t.add_argument("--seed", type=int, default=_env("seed", 0, int))
    t.add_argument("--k", type=int, default=0, help="kmeans cluster count; 0 = Nielsen count")
    t.add_argument("--max-iter", type=int, default=300)
    t.add_argument("--tol", type=float, default=1e-9)
    _add_common(t)

    r = sub.add_parser("reduce", help="minimise a word or a whole corpus")
    r.add_argument("--word", default=None)
    r.add_argument("--rank", type=int, default=_env("rank", None, int))
    r.add_argument("--corpus", default=_env("corpus"))
    r.add_argument("--strategy", default=_env("strategy", "nf"))
    r.add_argument("--model", default=_env("model"))
    r.add_argument("--seed", type=int, default=_env("seed", 0, int))
    _add_common(r)

    c = sub.add_parser("check-minimal", help="test a single word for minimality")
    c.add_argument("--word", required=True)
    c.add_argument("--rank", type=int, default=_env("rank", None, int), required=_env("rank") is None)
    _add_common(c)

    e = sub.add_parser("eval-clusters", help="score a model's clusters on a corpus")
    e.add_argument("--model", required=True)
    e.add_argument("--corpus", required=True)
    e.add_argument("--wilson", action="store_true",
                   help="Wilson confidence interval instead of the normal one")
    _add_common(e)

    b = sub.add_parser("bench", help="compare strategies on a corpus")
    b.add_argument("--corpus", required=True)
    b.add_argument("--strategies", default=_env("strategies", "r,nf,c,max"))
    b.add_argument("--model", default=_env("model"))
    b.add_argument("--seed", type=int, default=_env("seed", 0, int))
    b.add_argument("--emit-records", action="store_true")
    _add_common(b)

    return parser


def _threads(args) -> int:
    return args.threads if args.threads > 0 else available_parallelism()


def _manifest(args, inputs=()) -> dict:
    config = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("command",) and v is not None
    }
    manifest = {
        "tool": "whlab",
        "version": __version__,
        "subcommand": args.command,
        "config": config,
    }
    hashes = {}
    for path in inputs:
        if path and os.path.exists(path):
            hashes[os.path.basename(path)] = sha256_file(path)
    if hashes:
        manifest["input_sha256"] = hashes
    return manifest


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_cli_word(args) -> Word:
    if args.rank is None:
        raise InvalidInputError("--rank is required with --word")
    return word_from_text(args.word, args.rank, cyclic=True)


def _load_strategy(code: str, seed: int, model_path):
    model = load_model(model_path) if model_path else None
    return make_strategy(code, seed=seed, model=model)


def cmd_generate(args) -> int:
    cfg = GenConfig(
        rank=args.rank,
        length_min=args.length_min,
        length_max=args.length_max,
        seed=args.seed,
        chain_min=args.chain_min,
        chain_max=args.chain_max,
        attempts=args.attempts,
    )
    records = generate_corpus(cfg, args.kind, args.count, threads=_threads(args))
    if not args.out:
        raise InvalidInputError("generate needs --out")
    write_corpus(args.out, records, cfg, args.kind, manifest=_manifest(args))
    lengths = [len(r["word"]) for r in records]
    print(
        f"wrote {len(records)} {args.kind} words to {args.out} "
        f"(min {min(lengths)}, avg {sum(lengths) / len(lengths):.1f}, max {max(lengths)})",
        file=sys.stderr,
    )
    return 0


def cmd_train(args) -> int:
    words, _, _ = read_corpus(args.corpus)
    if not words:
        raise DataFormatError("empty corpus")
    if not args.out:
        raise InvalidInputError("train needs --out")
    manifest = _manifest(args, inputs=[args.corpus])
    if args.kind == "lambda":
        model = estimate_lambda_centers(words, seed=args.seed)
    else:
        import numpy as np

        feats = np.array([feature_vector(w) for w in words])
        from .automorphisms import get_universe

        k = args.k or get_universe(words[0].rank).n_nielsen
        model = kmeans(feats, k, seed=args.seed, max_iter=args.max_iter,
                       tol=args.tol, rank=words[0].rank)
        print(
            f"kmeans: {model.iterations} iterations, J={model.j_linear:.6g} "
            f"(squared {model.j_squared:.6g})",
            file=sys.stderr,
        )
    save_model(args.out, model, manifest=manifest)
    print(f"wrote {args.kind} model to {args.out}", file=sys.stderr)
    return 0


def _trace_payload(word: Word, strategy_code: str, final: Word, metrics) -> dict:
    steps = []
    length = len(word)
    for auto, steps_taken in zip(metrics.trace, metrics.lrp_step_counts):
        entry = auto_to_json(auto)
        steps.append({"auto": entry, "lrp_steps": steps_taken})
    # lengths after each taken move
    current = word
    from .automorphisms import apply

    for entry, auto in zip(steps, metrics.trace):
        current = apply(auto, current)
        entry["length_after"] = len(current)
    return {
        "input": list(word.letters),
        "strategy": strategy_code,
        "steps": steps,
        "final": list(final.letters),
        "final_length": len(final),
        "total_steps": metrics.total_steps,
    }


def cmd_reduce(args) -> int:
    strategy = _load_strategy(args.strategy, args.seed, args.model)
    if (args.word is None) == (args.corpus is None):
        raise InvalidInputError("reduce needs exactly one of --word or --corpus")
    if args.word is not None:
        w = _parse_cli_word(args)
        final, metrics = whitehead_reduce(w, strategy)
        payload = _trace_payload(w, args.strategy, final, metrics)
        payload["word_text"] = word_to_text(final)
        _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
        print(
            f"reduced length {len(w)} -> {len(final)} in {metrics.reducing_steps} moves",
            file=sys.stderr,
        )
        return 0
    words, records, _ = read_corpus(args.corpus)
    manifest = _manifest(args, inputs=[args.corpus])
    lines = [json.dumps({"kind": "trace-header", "manifest": manifest}, sort_keys=True)]
    for rec, w in zip(records, words):
        final, metrics = whitehead_reduce(w, strategy, run_seed=[args.seed, rec["id"]])
        payload = _trace_payload(w, args.strategy, final, metrics)
        payload["id"] = rec["id"]
        lines.append(json.dumps(payload, sort_keys=True))
    _emit("\n".join(lines) + "\n", args.out)
    print(f"reduced {len(words)} words", file=sys.stderr)
    return 0


def cmd_check_minimal(args) -> int:
    w = _parse_cli_word(args)
    payload = {"word": list(w.letters), "length": len(w), "minimal": is_minimal(w)}
    if not payload["minimal"]:
        res = find_length_reducer(w, make_strategy("nf"))
        payload["witness"] = auto_to_json(res.reducer)
        payload["reduced_length"] = len(res.reduced_word)
    _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
    return 0


def cmd_eval_clusters(args) -> int:
    model = load_model(args.model)
    words, _, _ = read_corpus(args.corpus)
    report = evaluate_clusters(model, words)
    frac, lo, hi = nielsen_reducible_fraction(words, wilson=args.wilson)
    if args.format == "json":
        payload = {
            "avg_r_max": report.avg_r_max,
            "g_max": report.g_max,
            "empty_clusters": report.empty_clusters,
            "nielsen_reducible": {"fraction": frac, "ci_low": lo, "ci_high": hi},
            "clusters": [
                {
                    "center": row.center_index,
                    "auto": auto_to_json(row.center_auto) if row.center_auto else None,
                    "size": row.size,
                    "r_max": row.r_max,
                    "best_auto": auto_to_json(row.best_auto),
                }
                for row in report.rows
            ],
            "manifest": _manifest(args, inputs=[args.model, args.corpus]),
        }
        _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
        return 0
    lines = []
    if args.format == "csv":
        lines.append("center,size,r_max")
        for row in report.rows:
            lines.append(f"{row.center_index},{row.size},{row.r_max:.6g}")
        lines.append(f"# avg_r_max,{report.avg_r_max:.6g}")
        lines.append(f"# g_max,{report.g_max:.6g}")
        lines.append(f"# nielsen_reducible,{frac:.6g},[{lo:.6g},{hi:.6g}]")
    else:
        lines.append("| center | size | r_max |")
        lines.append("|--------|------|-------|")
        for row in report.rows:
            lines.append(f"| {row.center_index} | {row.size} | {row.r_max:.4f} |")
        lines.append("")
        lines.append(f"avg_r_max: {report.avg_r_max:.4f} "
                     f"(empty clusters skipped: {report.empty_clusters})")
        lines.append(f"g_max: {report.g_max:.4f}")
        lines.append(f"nielsen reducible fraction: {frac:.4f} "
                     f"95% CI [{lo:.4f}, {hi:.4f}]")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_bench(args) -> int:
    words, _, header = read_corpus(args.corpus)
    codes = [c.strip() for c in args.strategies.split(",") if c.strip()]
    model = load_model(args.model) if args.model else None
    strategies = [make_strategy(code, seed=args.seed, model=model) for code in codes]
    corpus_info = {"path": args.corpus, "size": len(words)}
    if header and "corpus_kind" in header:
        corpus_info["kind"] = header["corpus_kind"]
    report = run_strategy_benchmark(
        words, strategies, seed=args.seed, threads=_threads(args),
        corpus_info=corpus_info,
    )
    correlations = {res.strategy: length_lrp_correlation(res) for res in report.results}
    if args.format == "csv":
        text = report_to_csv(report)
    elif args.format == "md":
        text = report_to_markdown(report)
    else:
        payload = report_to_json(report, emit_records=args.emit_records,
                                 correlations=correlations)
        payload["manifest"] = _manifest(args, inputs=[args.corpus] +
                                        ([args.model] if args.model else []))
        text = json.dumps(payload, sort_keys=True) + "\n"
    _emit(text, args.out)
    return 0


_COMMANDS = {
    "generate": cmd_generate,
    "train": cmd_train,
    "reduce": cmd_reduce,
    "check-minimal": cmd_check_minimal,
    "eval-clusters": cmd_eval_clusters,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (DataFormatError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (WhlabError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
