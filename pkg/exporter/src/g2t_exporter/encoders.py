"""Text encoders behind one interface.

The model string picks the backend:

- ``hash:<dim>`` — a deterministic hashed bag-of-tokens encoder. No
  downloads, identical output on every platform; meant for tests, smoke
  runs and offline environments.
- anything else — a sentence-transformers model name (for example a
  contrastively trained sentence encoder), loaded lazily.

Encoders return unit-length float vectors and a list of warning strings
(currently: inputs longer than the 512-token limit, which get truncated).
"""

from __future__ import annotations

import hashlib

import numpy as np

TOKEN_LIMIT = 512

DEFAULT_MODEL = "princeton-nlp/unsup-simcse-bert-base-uncased"


class EncoderError(ValueError):
    pass


class HashedTokenEncoder:
    """Hash each whitespace token into a bucket and l2-normalise the counts."""

    def __init__(self, dim: int = 64):
        if dim < 2:
            raise EncoderError(f"hash encoder dimension must be >= 2, got {dim}")
        self.dim = dim

    @property
    def name(self) -> str:
        return f"hash:{self.dim}"

    def _bucket(self, token: str) -> int:
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big") % self.dim

    def encode(self, texts: list[str]) -> tuple[np.ndarray, list[str]]:
        vectors = np.zeros((len(texts), self.dim), dtype=np.float64)
        warnings: list[str] = []
        for row, text in enumerate(texts):
            tokens = text.split()
            if len(tokens) > TOKEN_LIMIT:
                warnings.append(
                    f"input {row} has {len(tokens)} tokens; truncated to {TOKEN_LIMIT}"
                )
                tokens = tokens[:TOKEN_LIMIT]
            for token in tokens:
                vectors[row, self._bucket(token)] += 1.0
        norms = np.linalg.norm(vectors, axis=1)
        nonzero = norms > 0
        vectors[nonzero] /= norms[nonzero, None]
        return vectors, warnings


class SentenceTransformerEncoder:
    """Thin wrapper around sentence-transformers, imported on first use."""

    def __init__(self, model_name: str):
        self.model_name = model_name
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise EncoderError(
                "sentence-transformers is not installed; install it or use a hash:<dim> model"
            ) from exc
        self._model = SentenceTransformer(model_name)

    @property
    def name(self) -> str:
        return self.model_name

    def encode(self, texts: list[str]) -> tuple[np.ndarray, list[str]]:
        warnings = [
            f"input {row} has {len(text.split())} tokens; the encoder truncates to {TOKEN_LIMIT}"
            for row, text in enumerate(texts)
            if len(text.split()) > TOKEN_LIMIT
        ]
        vectors = self._model.encode(
            texts, convert_to_numpy=True, show_progress_bar=False
        ).astype(np.float64)
        norms = np.linalg.norm(vectors, axis=1)
        nonzero = norms > 0
        vectors[nonzero] /= norms[nonzero, None]
        return vectors, warnings


def get_encoder(model: str):
    if model.startswith("hash:"):
        try:
            dim = int(model.split(":", 1)[1])
        except ValueError:
            raise EncoderError(f"bad hash encoder spec {model!r}; expected hash:<dim>") from None
        return HashedTokenEncoder(dim)
    return SentenceTransformerEncoder(model)
