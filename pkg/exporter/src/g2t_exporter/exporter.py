"""Export operations: encode documents or words, optionally reduce, emit EMB-JSONL."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .emb_jsonl import read_emb_jsonl, write_emb_jsonl
from .encoders import DEFAULT_MODEL, EncoderError, get_encoder
from .umap import umap_embed


@dataclass(frozen=True)
class ExportConfig:
    model: str = DEFAULT_MODEL
    target: str = "documents"
    reduce: str = "none"
    umap_dim: int = 5
    umap_neighbors: int = 15
    seed: int = 0

    def __post_init__(self) -> None:
        if self.target not in ("documents", "words"):
            raise EncoderError(f"unknown target {self.target!r}")
        if self.reduce not in ("none", "umap"):
            raise EncoderError(f"unknown reduce mode {self.reduce!r}")
        if self.umap_dim < 1:
            raise EncoderError(f"umap_dim must be >= 1, got {self.umap_dim}")


def read_corpus_texts(path: str | Path, format: str = "jsonl") -> tuple[list[str], list[str]]:
    """Read (ids, texts) from the corpus formats the modelling package uses."""
    path = Path(path)
    if not path.exists():
        raise EncoderError(f"corpus file not found: {path}")
    ids: list[str] = []
    texts: list[str] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            if format == "jsonl":
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise EncoderError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
                doc_id, text = record.get("id"), record.get("text")
            elif format == "tsv":
                parts = line.rstrip("\n").split("\t", 1)
                if len(parts) != 2:
                    raise EncoderError(f"{path}:{lineno}: expected id<TAB>text")
                doc_id, text = parts
            else:
                raise EncoderError(f"unknown corpus format {format!r}")
            if not doc_id or not isinstance(doc_id, str) or not isinstance(text, str):
                raise EncoderError(f"{path}:{lineno}: record needs a string id and text")
            if doc_id in seen:
                raise EncoderError(f"{path}:{lineno}: duplicate document id {doc_id!r}")
            seen.add(doc_id)
            ids.append(doc_id)
            texts.append(text)
    if not ids:
        raise EncoderError(f"{path}: no documents found")
    return ids, texts


def read_vocabulary(path: str | Path) -> list[str]:
    """One word per line; duplicates collapse to their first occurrence."""
    path = Path(path)
    if not path.exists():
        raise EncoderError(f"vocabulary file not found: {path}")
    words: list[str] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and word not in seen:
                seen.add(word)
                words.append(word)
    if not words:
        raise EncoderError(f"{path}: vocabulary file is empty")
    return words


def _encode_and_write(
    ids: list[str], texts: list[str], config: ExportConfig, out_path: str | Path
) -> list[str]:
    encoder = get_encoder(config.model)
    vectors, warnings = encoder.encode(texts)
    # drop entries the encoder could not represent (all-zero vectors)
    keep = vectors.any(axis=1)
    warnings.extend(
        f"no vector produced for {item_id!r}; omitted"
        for item_id, kept in zip(ids, keep)
        if not kept
    )
    ids = [item_id for item_id, kept in zip(ids, keep) if kept]
    vectors = vectors[keep]
    if not ids:
        raise EncoderError("encoder produced no usable vectors")
    if config.reduce == "umap":
        vectors = umap_embed(
            vectors,
            n_components=config.umap_dim,
            n_neighbors=min(config.umap_neighbors, max(2, len(ids) - 1)),
            seed=config.seed,
        )
    write_emb_jsonl(ids, vectors, out_path)
    return warnings


def export_document_embeddings(
    corpus_path: str | Path,
    out_path: str | Path,
    config: ExportConfig = ExportConfig(),
    corpus_format: str = "jsonl",
) -> list[str]:
    """Encode every document; returns warnings (truncations, omissions)."""
    ids, texts = read_corpus_texts(corpus_path, corpus_format)
    return _encode_and_write(ids, texts, config, out_path)


def export_word_embeddings(
    vocab_path: str | Path,
    out_path: str | Path,
    config: ExportConfig = ExportConfig(),
) -> list[str]:
    """Encode every vocabulary word on its own; id = the word."""
    words = read_vocabulary(vocab_path)
    return _encode_and_write(words, list(words), config, out_path)


def reduce_umap(
    embeddings_path: str | Path,
    out_path: str | Path,
    umap_dim: int = 5,
    seed: int = 0,
    n_neighbors: int = 15,
) -> None:
    """Reduce an existing EMB-JSONL file; ids and order are preserved."""
    ids, vectors = read_emb_jsonl(embeddings_path)
    reduced = umap_embed(
        vectors,
        n_components=umap_dim,
        n_neighbors=min(n_neighbors, max(2, len(ids) - 1)),
        seed=seed,
    )
    write_emb_jsonl(ids, reduced, out_path)
