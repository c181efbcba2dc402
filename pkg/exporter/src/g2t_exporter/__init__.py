"""Embedding exporter: encode corpora and emit EMB-JSONL files."""

from .emb_jsonl import read_emb_jsonl, write_emb_jsonl
from .encoders import EncoderError, HashedTokenEncoder, get_encoder
from .exporter import (
    ExportConfig,
    export_document_embeddings,
    export_word_embeddings,
    reduce_umap,
)
from .umap import UmapError, umap_embed

__version__ = "0.1.0"

__all__ = [
    "EncoderError",
    "ExportConfig",
    "HashedTokenEncoder",
    "UmapError",
    "export_document_embeddings",
    "export_word_embeddings",
    "get_encoder",
    "read_emb_jsonl",
    "reduce_umap",
    "umap_embed",
    "write_emb_jsonl",
]
