"""``g2t-embed``: encode a corpus or vocabulary into EMB-JSONL.

With ``--target documents`` the input is a corpus file (jsonl or tsv);
with ``--target words`` it is a vocabulary file, one word per line.
Warnings (truncated inputs, omitted items) go to stderr.
"""

from __future__ import annotations

import argparse
import sys

from .emb_jsonl import EmbJsonlError
from .encoders import DEFAULT_MODEL, EncoderError
from .exporter import ExportConfig, export_document_embeddings, export_word_embeddings
from .umap import UmapError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="g2t-embed", description="Export embeddings as EMB-JSONL")
    parser.add_argument("--corpus", required=True,
                        help="corpus file (documents) or vocabulary file (words)")
    parser.add_argument("--corpus-format", choices=("jsonl", "tsv"), default="jsonl")
    parser.add_argument("--target", choices=("documents", "words"), default="documents")
    parser.add_argument("--model", default=DEFAULT_MODEL,
                        help=f"encoder: hash:<dim> or a sentence-transformers name "
                             f"(default {DEFAULT_MODEL})")
    parser.add_argument("--reduce", choices=("none", "umap"), default="none")
    parser.add_argument("--dim", type=int, default=5, help="output dimension for --reduce umap")
    parser.add_argument("--umap-neighbors", type=int, default=15)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = ExportConfig(
            model=args.model,
            target=args.target,
            reduce=args.reduce,
            umap_dim=args.dim,
            umap_neighbors=args.umap_neighbors,
            seed=args.seed,
        )
        if args.target == "documents":
            warnings = export_document_embeddings(
                args.corpus, args.out, config, corpus_format=args.corpus_format
            )
        else:
            warnings = export_word_embeddings(args.corpus, args.out, config)
    except (EncoderError, EmbJsonlError, UmapError, OSError) as exc:
        print(f"g2t-embed: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for warning in warnings:
        print(f"g2t-embed: warning: {warning}", file=sys.stderr)
    print(f"g2t-embed: wrote {args.out}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
