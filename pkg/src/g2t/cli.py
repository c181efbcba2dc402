"""Command line interface: ``g2t fit`` and ``g2t eval``.

Exit codes: 0 success, 2 malformed or mismatched input, 3 degenerate
pipeline state (nothing left to model after pruning), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .community import Cover
from .corpus import PreprocessConfig, load_corpus, load_stopwords, preprocess
from .embedding import load_embeddings
from .errors import ConfigError, DegenerateGraphError, G2TError, InputError
from .graph import write_edge_list
from .metrics import METRIC_NAMES, MetricsConfig, MetricsReport, evaluate
from .model import GraphToTopic
from .topics import TopicModel

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_USAGE = 64

_CLI_ALGORITHMS = ("greedy-modularity", "louvain", "lpa", "slpa")


def write_topics_file(model: TopicModel, path: str | Path) -> None:
    """Topics file: one JSON object with per-topic words and the trivial ids."""
    payload = {
        "topics": [
            {
                "id": topic.topic_index,
                "size": len(community.member_ids),
                "words": [{"word": w, "weight": wt} for w, wt in topic.words],
            }
            for topic, community in zip(model.topics, model.communities)
        ],
        "trivial_ids": list(model.trivial_ids),
    }
    Path(path).write_text(json.dumps(payload, ensure_ascii=False) + "\n", encoding="utf-8")


def read_topics_file(path: str | Path) -> tuple[list[list[str]], list[int], list[str]]:
    """Read a topics file back as (word lists, community sizes, trivial ids)."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"topics file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(payload, dict) or "topics" not in payload:
        raise InputError(f"{path}: topics file must carry a 'topics' list")
    word_lists: list[list[str]] = []
    sizes: list[int] = []
    for entry in payload["topics"]:
        try:
            words = [item["word"] for item in entry["words"]]
            sizes.append(int(entry.get("size", 0)))
        except (TypeError, KeyError) as exc:
            raise InputError(f"{path}: malformed topic entry ({exc})") from None
        if not words or not all(isinstance(w, str) for w in words):
            raise InputError(f"{path}: topic {entry.get('id')} carries no valid words")
        word_lists.append(words)
    if not word_lists:
        raise InputError(f"{path}: topics file contains no topics")
    trivial = payload.get("trivial_ids", [])
    return word_lists, sizes, list(trivial)


def write_alpha_file(model: TopicModel, path: str | Path) -> None:
    """Alpha file: one JSON line per document with its (topic, weight) row."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc_id, row in model.alpha.rows.items():
            record = {
                "id": doc_id,
                "alpha": [{"topic": k, "weight": w} for k, w in row],
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def write_communities_file(cover: Cover, path: str | Path) -> None:
    """Debug dump: ``doc_id<TAB>comma-separated community indices`` per line."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc_id in cover.memberships:
            indices = ",".join(str(k) for k in sorted(cover.memberships[doc_id]))
            fh.write(f"{doc_id}\t{indices}\n")


def write_manifest(path: str | Path, manifest: dict) -> None:
    Path(path).write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def write_report(report: MetricsReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(report.to_dict(), ensure_ascii=False) + "\n", encoding="utf-8"
    )


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; this artifact reserves 2 for input
    # errors, so usage problems exit 64 instead.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _percentage(value: str) -> float:
    try:
        parsed = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    if not 0.0 < parsed <= 100.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 100], got {value}")
    return parsed


def _positive_int(value: str) -> int:
    try:
        parsed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if parsed < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return parsed


def _add_corpus_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus", required=True, help="corpus file (jsonl or tsv)")
    parser.add_argument("--corpus-format", choices=("jsonl", "tsv"), default="jsonl")
    parser.add_argument("--stopwords", help="stopword file, one token per line")
    parser.add_argument("--min-tokens", type=_positive_int, default=5,
                        help="drop documents with fewer tokens (default 5)")
    parser.add_argument("--no-lowercase", action="store_true",
                        help="keep the original casing")
    parser.add_argument("--keep-punctuation", action="store_true",
                        help="do not strip punctuation")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="g2t", description="Topic modelling on document similarity graphs")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fit = sub.add_parser("fit", help="fit a topic model", description="Fit a topic model.")
    _add_corpus_options(fit)
    fit.add_argument("--embeddings", required=True, help="document embeddings (EMB-JSONL)")
    fit.add_argument("--reduce", choices=("none", "pca"), default="none",
                     help="in-core dimensionality reduction (default none; "
                          "use none for embeddings already reduced upstream)")
    fit.add_argument("--dim", type=_positive_int, default=5, help="target dimension for --reduce pca")
    fit.add_argument("--top-p", type=_percentage, default=95.0,
                     help="percentage of edges kept by pruning (default 95)")
    fit.add_argument("--prune-mode", choices=("keep-fraction", "percentile"),
                     default="keep-fraction")
    fit.add_argument("--algorithm", choices=_CLI_ALGORITHMS, default="greedy-modularity")
    fit.add_argument("--n-words", type=_positive_int, default=10, help="words per topic (default 10)")
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--slpa-iterations", type=_positive_int, default=20)
    fit.add_argument("--slpa-threshold", type=float, default=0.3)
    fit.add_argument("--out-topics", required=True)
    fit.add_argument("--out-alpha", required=True)
    fit.add_argument("--out-manifest", required=True)
    fit.add_argument("--dump-graph", help="also write the weighted edge list here")
    fit.add_argument("--dump-communities", help="also write community memberships here")
    fit.set_defaults(handler=cmd_fit)

    ev = sub.add_parser("eval", help="evaluate a topics file", description="Evaluate topic quality.")
    ev.add_argument("--topics", required=True, help="topics file produced by fit")
    _add_corpus_options(ev)
    ev.add_argument("--word-vectors", help="word vectors (EMB-JSONL) for the distance metric")
    ev.add_argument("--metrics", default=None,
                    help="comma list among td,npmi,cv,qw2v (default: td,npmi,cv, "
                         "plus qw2v when --word-vectors is given)")
    ev.add_argument("--window", type=_positive_int, default=10, help="co-occurrence window size")
    ev.add_argument("--epsilon", type=float, default=1e-12)
    ev.add_argument("--raw-sums", action="store_true",
                    help="sum over word pairs instead of averaging")
    ev.add_argument("--max-topics", type=_positive_int, default=50,
                    help="evaluate at most this many topics, largest communities first")
    ev.add_argument("--out", required=True)
    ev.set_defaults(handler=cmd_eval)
    return parser


def _preprocess_config(args: argparse.Namespace) -> PreprocessConfig:
    stopwords = load_stopwords(args.stopwords) if args.stopwords else frozenset()
    return PreprocessConfig(
        lowercase=not args.no_lowercase,
        strip_punctuation=not args.keep_punctuation,
        stopwords=stopwords,
        min_tokens=args.min_tokens,
    )


def cmd_fit(args: argparse.Namespace) -> None:
    corpus = load_corpus(args.corpus, args.corpus_format)
    corpus = preprocess(corpus, _preprocess_config(args))
    embeddings = load_embeddings(args.embeddings)
    estimator = GraphToTopic(
        top_p=args.top_p,
        prune_mode=args.prune_mode,
        algorithm=args.algorithm.replace("-", "_"),
        n_words=args.n_words,
        reduce_method=args.reduce,
        reduce_dim=args.dim,
        seed=args.seed,
        slpa_iterations=args.slpa_iterations,
        slpa_threshold=args.slpa_threshold,
    )
    estimator.fit(corpus, embeddings)
    model = estimator.model_
    write_topics_file(model, args.out_topics)
    write_alpha_file(model, args.out_alpha)
    if args.dump_graph:
        write_edge_list(estimator.graph_, args.dump_graph)
    if args.dump_communities:
        write_communities_file(estimator.cover_, args.dump_communities)
    dropped_component_docs = sum(len(c) for c in estimator.prune_result_.dropped_components)
    manifest = {
        "config": {
            "corpus": str(args.corpus),
            "corpus_format": args.corpus_format,
            "embeddings": str(args.embeddings),
            "stopwords": str(args.stopwords) if args.stopwords else None,
            "min_tokens": args.min_tokens,
            "lowercase": not args.no_lowercase,
            "strip_punctuation": not args.keep_punctuation,
            **estimator.get_params(),
        },
        "k": model.n_topics,
        "counts": {
            "documents_modelled": len(model.alpha.rows),
            "documents_retained": len(corpus.documents),
            "dropped_preprocess": len(corpus.dropped),
            "isolated": len(estimator.prune_result_.isolated),
            "dropped_component_docs": dropped_component_docs,
            "trivial": len(model.trivial_ids),
        },
        "warnings": model.warnings,
        "timings_seconds": {k: round(v, 6) for k, v in estimator.timings_.items()},
    }
    write_manifest(args.out_manifest, manifest)
    print(
        f"fit: {model.n_topics} topics over {len(model.alpha.rows)} documents "
        f"({len(model.trivial_ids)} trivial) -> {args.out_topics}",
        file=sys.stderr,
    )


def _parse_metrics(args: argparse.Namespace) -> list[str]:
    if args.metrics is None:
        metrics = ["td", "npmi", "cv"]
        if args.word_vectors:
            metrics.append("qw2v")
        return metrics
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    unknown = [m for m in metrics if m not in METRIC_NAMES]
    if unknown:
        raise ConfigError(f"unknown metrics {unknown}; expected a subset of {METRIC_NAMES}")
    if not metrics:
        raise ConfigError("no metrics requested")
    if "qw2v" in metrics and not args.word_vectors:
        raise ConfigError("--word-vectors is required to compute qw2v")
    return metrics


def cmd_eval(args: argparse.Namespace) -> None:
    metrics = _parse_metrics(args)
    word_lists, sizes, _ = read_topics_file(args.topics)
    n_topics = len(word_lists)
    # Largest communities first, topic index breaking ties.
    order = sorted(range(n_topics), key=lambda k: (-sizes[k], k))
    selected = [word_lists[k] for k in order[: min(n_topics, args.max_topics)]]
    corpus = load_corpus(args.corpus, args.corpus_format)
    corpus = preprocess(corpus, _preprocess_config(args))
    config = MetricsConfig(
        epsilon=args.epsilon,
        window_size=args.window,
        pair_normalize=not args.raw_sums,
    )
    word_vectors = load_embeddings(args.word_vectors) if args.word_vectors else None
    report = evaluate(selected, corpus, config, word_vectors, metrics)
    write_report(report, args.out)
    summary = ", ".join(
        f"{name}={getattr(report, name):.4f}"
        for name in METRIC_NAMES
        if getattr(report, name) is not None
    )
    print(f"eval: {summary} -> {args.out}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.handler(args)
    except ConfigError as exc:
        print(f"g2t: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateGraphError as exc:
        print(f"g2t: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (InputError, OSError) as exc:
        print(f"g2t: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except G2TError as exc:
        print(f"g2t: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
