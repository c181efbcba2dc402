"""Reading and writing the EMB-JSONL interchange format.

One JSON object per line: ``{"id": "...", "embedding": [...]}``. All
vectors in a file share one length; NaN/Inf and all-zero vectors are
invalid. Floats are written with 17 significant digits so values
round-trip bit-exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


class EmbJsonlError(ValueError):
    pass


def write_emb_jsonl(ids: list[str], vectors: np.ndarray, path: str | Path) -> None:
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[0] != len(ids):
        raise EmbJsonlError("need one id per vector row")
    if not np.all(np.isfinite(vectors)):
        raise EmbJsonlError("refusing to write NaN/Inf vectors")
    if np.any(np.all(vectors == 0.0, axis=1)):
        raise EmbJsonlError("refusing to write all-zero vectors")
    if len(set(ids)) != len(ids):
        raise EmbJsonlError("ids must be unique")
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for item_id, row in zip(ids, vectors):
            values = ", ".join(format(v, ".17g") for v in row)
            fh.write(f'{{"id": {json.dumps(item_id, ensure_ascii=False)}, "embedding": [{values}]}}\n')


def read_emb_jsonl(path: str | Path) -> tuple[list[str], np.ndarray]:
    path = Path(path)
    if not path.exists():
        raise EmbJsonlError(f"embedding file not found: {path}")
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
                raise EmbJsonlError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(record, dict) or "id" not in record or "embedding" not in record:
                raise EmbJsonlError(f"{path}:{lineno}: record must carry 'id' and 'embedding'")
            vector = record["embedding"]
            if dim is None:
                dim = len(vector)
            elif len(vector) != dim:
                raise EmbJsonlError(
                    f"{path}:{lineno}: ragged row for id {record['id']!r}"
                )
            ids.append(record["id"])
            rows.append([float(x) for x in vector])
    if not rows:
        raise EmbJsonlError(f"{path}: no vectors found")
    matrix = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(matrix)):
        raise EmbJsonlError(f"{path}: NaN or Inf in vectors")
    if len(set(ids)) != len(ids):
        raise EmbJsonlError(f"{path}: duplicate ids")
    return ids, matrix
