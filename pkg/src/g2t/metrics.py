"""Topic quality metrics: diversity, NPMI, C_v and embedding-distance.

Word probabilities are boolean window frequencies: a sliding window of W
consecutive tokens moves through each document with stride 1 (documents
shorter than W contribute a single whole-document window), and a word
counts at most once per window.

Pair scores average over word pairs by default; the ``pair_normalize``
flag switches to raw sums for compatibility with conventions that do not
divide by the number of pairs.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus
from .embedding import EmbeddingMatrix
from .errors import ConfigError, InputError
from .topics import Topic

METRIC_NAMES = ("td", "npmi", "cv", "qw2v")


@dataclass(frozen=True)
class MetricsConfig:
    epsilon: float = 1e-12
    window_size: int = 10
    pair_normalize: bool = True

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ConfigError(f"epsilon must be > 0, got {self.epsilon}")
        if self.window_size < 2:
            raise ConfigError(f"window_size must be >= 2, got {self.window_size}")


@dataclass
class CooccurrenceCounts:
    window_size: int
    total_windows: int
    word_windows: dict[str, int]
    pair_windows: dict[tuple[str, str], int]

    def probability(self, word: str) -> float:
        return self.word_windows.get(word, 0) / self.total_windows

    def pair_probability(self, w1: str, w2: str) -> float:
        key = (w1, w2) if w1 <= w2 else (w2, w1)
        return self.pair_windows.get(key, 0) / self.total_windows


@dataclass
class MetricsReport:
    td: float | None = None
    npmi: float | None = None
    cv: float | None = None
    qw2v: float | None = None
    per_topic: dict[str, list[float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out: dict = {}
        for name in METRIC_NAMES:
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        out["per_topic"] = dict(self.per_topic)
        return out


def _word_lists(topics: Sequence[Topic] | Sequence[Sequence[str]]) -> list[list[str]]:
    lists: list[list[str]] = []
    for topic in topics:
        if isinstance(topic, Topic):
            lists.append([word for word, _ in topic.words])
        else:
            lists.append(list(topic))
    if not lists:
        raise InputError("no topics to evaluate")
    return lists


def window_counts(corpus: Corpus, window_size: int) -> CooccurrenceCounts:
    """Count, per sliding window, which words and distinct word pairs appear."""
    if window_size < 2:
        raise ConfigError(f"window_size must be >= 2, got {window_size}")
    word_windows: Counter[str] = Counter()
    pair_windows: Counter[tuple[str, str]] = Counter()
    total = 0
    for doc in corpus.documents:
        tokens = doc.tokens
        if not tokens:
            continue
        if len(tokens) <= window_size:
            windows: Iterable[tuple[str, ...]] = (tuple(tokens),)
        else:
            windows = (
                tuple(tokens[i : i + window_size])
                for i in range(len(tokens) - window_size + 1)
            )
        for window in windows:
            total += 1
            present = sorted(set(window))
            word_windows.update(present)
            for i, w1 in enumerate(present):
                for w2 in present[i + 1 :]:
                    pair_windows[(w1, w2)] += 1
    if total == 0:
        raise InputError("corpus yields no windows; preprocess it first")
    return CooccurrenceCounts(
        window_size=window_size,
        total_windows=total,
        word_windows=dict(word_windows),
        pair_windows=dict(pair_windows),
    )


def topic_diversity(topics: Sequence[Topic] | Sequence[Sequence[str]]) -> tuple[float, list[float]]:
    """Mean inverse frequency of each topic's words across all topic word lists.

    1.0 means no word is shared between topics; two identical topics score 0.5.
    """
    lists = _word_lists(topics)
    frequency: Counter[str] = Counter()
    for words in lists:
        if not words:
            raise InputError("cannot compute diversity of an empty topic")
        frequency.update(words)
    per_topic = [sum(1.0 / frequency[w] for w in words) / len(words) for words in lists]
    return float(np.mean(per_topic)), per_topic


def pair_npmi(w1: str, w2: str, counts: CooccurrenceCounts, epsilon: float = 1e-12) -> float:
    """Normalised pointwise mutual information of one word pair.

    Degenerate cases take limit values: a pair covering every window scores
    1.0; a word that never occurs has no co-occurrence evidence, so its
    pairs score -1.0.
    """
    p1 = counts.probability(w1)
    p2 = counts.probability(w2)
    if p1 == 0.0 or p2 == 0.0:
        return -1.0
    joint = counts.pair_probability(w1, w2) + epsilon
    denominator = -math.log(joint)
    if denominator <= 0.0:
        return 1.0
    return math.log(joint / (p1 * p2)) / denominator


def topic_npmi(
    topics: Sequence[Topic] | Sequence[Sequence[str]],
    counts: CooccurrenceCounts,
    config: MetricsConfig = MetricsConfig(),
) -> tuple[float, list[float]]:
    """NPMI over all word pairs of each topic, then averaged over topics."""
    lists = _word_lists(topics)
    per_topic: list[float] = []
    for words in lists:
        if len(words) < 2:
            raise InputError(f"NPMI needs at least 2 words per topic, got {len(words)}")
        pair_scores = [
            pair_npmi(w1, w2, counts, config.epsilon) for w1, w2 in combinations(words, 2)
        ]
        value = float(np.mean(pair_scores)) if config.pair_normalize else float(np.sum(pair_scores))
        per_topic.append(value)
    return float(np.mean(per_topic)), per_topic


def topic_cv(
    topics: Sequence[Topic] | Sequence[Sequence[str]],
    counts: CooccurrenceCounts,
    config: MetricsConfig = MetricsConfig(),
) -> tuple[float, list[float]]:
    """Coherence from cosine similarity between the words' NPMI profiles.

    Word i's profile vector holds its pair NPMI with every word of the
    topic, the self-entry fixed at 1. Per topic, profiles are compared
    pairwise by cosine.
    """
    lists = _word_lists(topics)
    per_topic: list[float] = []
    for words in lists:
        n = len(words)
        if n < 2:
            raise InputError(f"C_v needs at least 2 words per topic, got {n}")
        profiles = np.ones((n, n))
        for i in range(n):
            for j in range(n):
                if i != j:
                    profiles[i, j] = pair_npmi(words[i], words[j], counts, config.epsilon)
        norms = np.linalg.norm(profiles, axis=1)
        if np.any(norms == 0.0):
            raise InputError("zero NPMI profile vector; cannot take its cosine")
        unit = profiles / norms[:, None]
        cosines = [float(unit[i] @ unit[j]) for i, j in combinations(range(n), 2)]
        value = float(np.mean(cosines)) if config.pair_normalize else float(np.sum(cosines))
        per_topic.append(value)
    return float(np.mean(per_topic)), per_topic


def q_w2v(
    topics: Sequence[Topic] | Sequence[Sequence[str]],
    word_vectors: EmbeddingMatrix,
) -> tuple[float, list[float]]:
    """Mean squared euclidean distance between topic words; lower is tighter."""
    lists = _word_lists(topics)
    missing = sorted({w for words in lists for w in words if w not in word_vectors})
    if missing:
        raise InputError(f"missing word vectors for: {', '.join(missing[:10])}")
    per_topic: list[float] = []
    for words in lists:
        n = len(words)
        if n < 2:
            raise InputError(f"distance quality needs at least 2 words per topic, got {n}")
        vectors = np.array([word_vectors.row(w) for w in words])
        total = 0.0
        for i, j in combinations(range(n), 2):
            diff = vectors[i] - vectors[j]
            total += 2.0 * float(diff @ diff)  # ordered pairs: (i,j) and (j,i)
        per_topic.append(total / (n * (n - 1)))
    return float(np.mean(per_topic)), per_topic


def evaluate(
    topics: Sequence[Topic] | Sequence[Sequence[str]],
    corpus: Corpus | None = None,
    config: MetricsConfig = MetricsConfig(),
    word_vectors: EmbeddingMatrix | None = None,
    metrics: Sequence[str] = ("td", "npmi", "cv"),
) -> MetricsReport:
    """Compute the requested metrics in one pass, sharing window counts."""
    unknown = [m for m in metrics if m not in METRIC_NAMES]
    if unknown:
        raise ConfigError(f"unknown metrics {unknown}; expected a subset of {METRIC_NAMES}")
    report = MetricsReport()
    if "td" in metrics:
        report.td, report.per_topic["td"] = topic_diversity(topics)
    if "npmi" in metrics or "cv" in metrics:
        if corpus is None:
            raise InputError("NPMI and C_v need the corpus to count co-occurrences")
        counts = window_counts(corpus, config.window_size)
        if "npmi" in metrics:
            report.npmi, report.per_topic["npmi"] = topic_npmi(topics, counts, config)
        if "cv" in metrics:
            report.cv, report.per_topic["cv"] = topic_cv(topics, counts, config)
    if "qw2v" in metrics:
        if word_vectors is None:
            raise InputError("the distance metric needs word vectors")
        report.qw2v, report.per_topic["qw2v"] = q_w2v(topics, word_vectors)
    return report
