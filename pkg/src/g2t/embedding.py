"""Embedding matrices, cosine similarity, and principal-component reduction.

The interchange format is EMB-JSONL: one ``{"id": ..., "embedding": [...]}``
object per line, all vectors the same length. The same format carries
document vectors (id = document id) and word vectors (id = word).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import ConfigError, InputError

REDUCE_METHODS = ("none", "pca")


@dataclass
class EmbeddingMatrix:
    """Row-major matrix of float64 vectors, one row per unique id."""

    ids: list[str]
    vectors: np.ndarray
    _row_of: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.vectors = np.ascontiguousarray(np.asarray(self.vectors, dtype=np.float64))
        if self.vectors.ndim != 2:
            raise InputError("embedding vectors must form a 2-d array")
        if len(self.ids) != self.vectors.shape[0]:
            raise InputError(
                f"{len(self.ids)} ids for {self.vectors.shape[0]} vector rows"
            )
        if not np.all(np.isfinite(self.vectors)):
            raise InputError("embedding vectors contain NaN or Inf")
        self._row_of = {}
        for i, item_id in enumerate(self.ids):
            if item_id in self._row_of:
                raise InputError(f"duplicate embedding id {item_id!r}")
            self._row_of[item_id] = i

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, item_id: str) -> bool:
        return item_id in self._row_of

    def row_index(self, item_id: str) -> int:
        try:
            return self._row_of[item_id]
        except KeyError:
            raise InputError(f"unknown embedding id {item_id!r}") from None

    def row(self, item_id: str) -> np.ndarray:
        return self.vectors[self.row_index(item_id)]

    def subset(self, ids: list[str]) -> "EmbeddingMatrix":
        """New matrix holding exactly ``ids``, in the given order."""
        idx = [self.row_index(i) for i in ids]
        return EmbeddingMatrix(list(ids), self.vectors[idx].copy())


@dataclass(frozen=True)
class ReduceConfig:
    method: str = "none"
    target_dim: int = 5


def load_embeddings(path: str | Path) -> EmbeddingMatrix:
    """Parse an EMB-JSONL file, validating shape, finiteness and non-zero rows."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"embedding file not found: {path}")
    ids: list[str] = []
    rows: list[list[float]] = []
    dim: int | None = None
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(record, dict) or "id" not in record or "embedding" not in record:
                raise InputError(f"{path}:{lineno}: record must carry 'id' and 'embedding'")
            item_id, vec = record["id"], record["embedding"]
            if not isinstance(item_id, str) or not item_id:
                raise InputError(f"{path}:{lineno}: id must be a non-empty string")
            if not isinstance(vec, list) or not all(isinstance(x, (int, float)) for x in vec):
                raise InputError(f"{path}:{lineno}: embedding for id {item_id!r} must be a list of numbers")
            if dim is None:
                dim = len(vec)
                if dim == 0:
                    raise InputError(f"{path}:{lineno}: empty embedding for id {item_id!r}")
            elif len(vec) != dim:
                raise InputError(
                    f"{path}:{lineno}: ragged row for id {item_id!r} (expected {dim} values, got {len(vec)})"
                )
            arr = [float(x) for x in vec]
            if not all(np.isfinite(arr)):
                raise InputError(f"{path}:{lineno}: NaN or Inf in embedding for id {item_id!r}")
            if not any(arr):
                raise InputError(f"{path}:{lineno}: all-zero vector for id {item_id!r}")
            ids.append(item_id)
            rows.append(arr)
    if not rows:
        raise InputError(f"{path}: embedding file contains no vectors")
    return EmbeddingMatrix(ids, np.array(rows, dtype=np.float64))


def save_embeddings(matrix: EmbeddingMatrix, path: str | Path) -> None:
    """Write EMB-JSONL with 17 significant digits, so load(save(m)) is bit-exact."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for item_id, row in zip(matrix.ids, matrix.vectors):
            values = ", ".join(format(v, ".17g") for v in row)
            fh.write(f'{{"id": {json.dumps(item_id, ensure_ascii=False)}, "embedding": [{values}]}}\n')


def cosine_similarity(e_i: np.ndarray, e_j: np.ndarray) -> float:
    """Cosine of the angle between two equal-length non-zero vectors, in [-1, 1]."""
    a = np.asarray(e_i, dtype=np.float64)
    b = np.asarray(e_j, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise InputError(f"vectors must share one dimension, got shapes {a.shape} and {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise InputError("cosine similarity is undefined for zero vectors")
    return float(np.clip(np.dot(a, b) / (norm_a * norm_b), -1.0, 1.0))


class PrincipalComponents(TransformerMixin, BaseEstimator):
    """PCA via eigendecomposition of the sample covariance matrix.

    Components are ordered by descending eigenvalue and sign-fixed so each
    component's largest-magnitude coordinate is positive, which makes the
    projection deterministic.
    """

    def __init__(self, n_components: int = 5):
        self.n_components = n_components

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=np.float64)
        n, d = X.shape
        if n < 2:
            raise InputError("principal components need at least 2 rows")
        if not 1 <= self.n_components <= d:
            raise ConfigError(
                f"n_components must be in [1, {d}] for {d}-dimensional input, got {self.n_components}"
            )
        self.mean_ = X.mean(axis=0)
        centered = X - self.mean_
        cov = centered.T @ centered / (n - 1)
        eigenvalues, eigenvectors = np.linalg.eigh(cov)
        order = np.argsort(eigenvalues)[::-1][: self.n_components]
        components = eigenvectors[:, order].T
        for row in components:
            if row[np.argmax(np.abs(row))] < 0:
                row *= -1.0
        self.components_ = components
        self.explained_variance_ = eigenvalues[order]
        return self

    def transform(self, X):
        X = np.asarray(X, dtype=np.float64)
        return (X - self.mean_) @ self.components_.T

    def inverse_transform(self, Z):
        Z = np.asarray(Z, dtype=np.float64)
        return Z @ self.components_ + self.mean_


def reduce_dimensions(matrix: EmbeddingMatrix, config: ReduceConfig) -> EmbeddingMatrix:
    """Apply the configured reduction; ``method="none"`` returns the input as is."""
    if config.method not in REDUCE_METHODS:
        raise ConfigError(f"unknown reduce method {config.method!r}; expected one of {REDUCE_METHODS}")
    if config.method == "none":
        return matrix
    reducer = PrincipalComponents(n_components=config.target_dim)
    projected = reducer.fit(matrix.vectors).transform(matrix.vectors)
    return EmbeddingMatrix(list(matrix.ids), projected)
