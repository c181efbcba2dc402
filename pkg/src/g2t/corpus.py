"""Corpus loading, preprocessing and vocabulary construction.

Documents arrive as raw text in jsonl (``{"id": ..., "text": ...}`` per
line) or tsv (``id<TAB>text`` per line). Preprocessing lowercases,
replaces punctuation with spaces, splits on whitespace, removes
stopwords, and drops documents that end up with too few tokens.
Lemmatization and word segmentation are expected to have happened
upstream; this module is deliberately language-agnostic.
"""

from __future__ import annotations

import json
import unicodedata
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError, InputError

CORPUS_FORMATS = ("jsonl", "tsv")


@dataclass(frozen=True)
class Document:
    """One document: opaque id, original text, and tokens once preprocessed."""

    id: str
    raw_text: str
    tokens: tuple[str, ...] = ()


@dataclass
class Corpus:
    """Ordered documents plus the ids removed by preprocessing."""

    documents: list[Document]
    dropped: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.documents)

    def ids(self) -> list[str]:
        return [d.id for d in self.documents]

    def total_tokens(self) -> int:
        return sum(len(d.tokens) for d in self.documents)


@dataclass(frozen=True)
class PreprocessConfig:
    lowercase: bool = True
    strip_punctuation: bool = True
    stopwords: frozenset[str] = frozenset()
    min_tokens: int = 5


@dataclass
class Vocabulary:
    """Distinct words in first-occurrence order with corpus-wide counts.

    Indices are dense and 1-based: ``index(words[0]) == 1``.
    """

    words: list[str]
    counts: dict[str, int]
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._index = {w: i + 1 for i, w in enumerate(self.words)}

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def index(self, word: str) -> int:
        return self._index[word]


def load_corpus(path: str | Path, format: str = "jsonl") -> Corpus:
    """Read a corpus file. Tokens are left empty; run :func:`preprocess` next."""
    if format not in CORPUS_FORMATS:
        raise ConfigError(f"unknown corpus format {format!r}; expected one of {CORPUS_FORMATS}")
    path = Path(path)
    if not path.exists():
        raise InputError(f"corpus file not found: {path}")
    documents: list[Document] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            if format == "jsonl":
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise InputError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
                if not isinstance(record, dict) or "id" not in record or "text" not in record:
                    raise InputError(f"{path}:{lineno}: record must carry 'id' and 'text' fields")
                doc_id, text = record["id"], record["text"]
            else:
                parts = line.rstrip("\n").split("\t", 1)
                if len(parts) != 2:
                    raise InputError(f"{path}:{lineno}: expected id<TAB>text")
                doc_id, text = parts
            if not isinstance(doc_id, str) or not doc_id:
                raise InputError(f"{path}:{lineno}: document id must be a non-empty string")
            if not isinstance(text, str) or not text:
                raise InputError(f"{path}:{lineno}: document text must be a non-empty string")
            if doc_id in seen:
                raise InputError(f"{path}:{lineno}: duplicate document id {doc_id!r}")
            seen.add(doc_id)
            documents.append(Document(id=doc_id, raw_text=text))
    if not documents:
        raise InputError(f"{path}: corpus file contains no documents")
    return Corpus(documents)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: UTF-8, one token per line, blank lines ignored."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"stopword file not found: {path}")
    with path.open("r", encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())


def _strip_punctuation(text: str) -> str:
    # Punctuation here means Unicode categories P* and S*, replaced by a
    # space so that "foo,bar" splits into two tokens.
    return "".join(" " if unicodedata.category(ch)[0] in "PS" else ch for ch in text)


def tokenize(text: str, config: PreprocessConfig) -> tuple[str, ...]:
    """Tokenize one text: lowercase, drop punctuation, split, filter stopwords."""
    if config.lowercase:
        text = text.lower()
    if config.strip_punctuation:
        text = _strip_punctuation(text)
    return tuple(tok for tok in text.split() if tok not in config.stopwords)


def preprocess(corpus: Corpus, config: PreprocessConfig = PreprocessConfig()) -> Corpus:
    """Tokenize every document; move documents below ``min_tokens`` to ``dropped``.

    Always derives tokens from ``raw_text``, so applying it twice with the
    same config is a no-op.
    """
    if config.min_tokens < 1:
        raise ConfigError(f"min_tokens must be >= 1, got {config.min_tokens}")
    kept: list[Document] = []
    dropped = list(corpus.dropped)
    for doc in corpus.documents:
        tokens = tokenize(doc.raw_text, config)
        if len(tokens) < config.min_tokens:
            dropped.append(doc.id)
        else:
            kept.append(replace(doc, tokens=tokens))
    if not kept:
        raise InputError("no documents survive preprocessing")
    return Corpus(kept, dropped)


def build_vocabulary(corpus: Corpus) -> Vocabulary:
    """Collect distinct tokens (first-occurrence order) and their total counts."""
    if not corpus.documents:
        raise InputError("cannot build a vocabulary from an empty corpus")
    counts: Counter[str] = Counter()
    words: list[str] = []
    for doc in corpus.documents:
        for tok in doc.tokens:
            if tok not in counts:
                words.append(tok)
            counts[tok] += 1
    if not words:
        raise InputError("corpus has no tokens; preprocess it first")
    return Vocabulary(words=words, counts=dict(counts))
