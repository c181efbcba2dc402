"""From communities to topics.

A detected community is a set of documents; its topic is the distribution
over that set's most characteristic words. Word scores combine how much
of the corpus a word accounts for within the cluster with a penalty for
words spread across many clusters; the displayed weights are the softmax
of the scores for the selected words. Document-topic rows are a softmax
over community similarities for overlapping covers and one-hot otherwise.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .community import Cover
from .corpus import Corpus
from .embedding import EmbeddingMatrix
from .errors import ConfigError, InputError

# A document's similarity to a community averages its cosine similarity to
# at most this many nearest members.
TOP_SIMILAR_MEMBERS = 10


@dataclass
class TopicCommunity:
    """Documents backing one topic."""

    topic_index: int
    member_ids: list[str]


@dataclass
class Topic:
    """Topic words with weights, sorted by descending weight, summing to 1."""

    topic_index: int
    words: list[tuple[str, float]]


@dataclass
class DocTopicDistribution:
    """Per-document (topic, weight) rows; each row sums to 1."""

    rows: dict[str, list[tuple[int, float]]]

    def __len__(self) -> int:
        return len(self.rows)


@dataclass
class TopicModel:
    topics: list[Topic]
    alpha: DocTopicDistribution
    trivial_ids: list[str]
    communities: list[TopicCommunity]
    config: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def n_topics(self) -> int:
        return len(self.topics)


def _softmax(values: np.ndarray) -> np.ndarray:
    shifted = values - np.max(values)
    exp = np.exp(shifted)
    return exp / exp.sum()


def community_similarity(
    doc_id: str, community: TopicCommunity, matrix: EmbeddingMatrix
) -> float:
    """Mean cosine similarity of a document to its closest community members.

    The document itself is excluded; at most TOP_SIMILAR_MEMBERS closest
    members are averaged, all of them when fewer exist. A community that
    contains nothing but the document itself scores 1.0.
    """
    own = matrix.row(doc_id)
    member_rows = [matrix.row_index(m) for m in community.member_ids if m != doc_id]
    if not member_rows:
        return 1.0
    own_norm = float(np.linalg.norm(own))
    others = matrix.vectors[member_rows]
    norms = np.linalg.norm(others, axis=1)
    if own_norm == 0.0 or np.any(norms == 0.0):
        raise InputError("cosine similarity is undefined for zero vectors")
    sims = np.clip(others @ own / (norms * own_norm), -1.0, 1.0)
    top = np.sort(sims)[::-1][: min(TOP_SIMILAR_MEMBERS, sims.size)]
    return float(top.mean())


def doc_topic_distribution(
    doc_id: str,
    communities: list[TopicCommunity],
    matrix: EmbeddingMatrix,
    overlapping: bool,
) -> list[tuple[int, float]]:
    """One row of the document-topic distribution.

    Overlapping: softmax over the document's similarity to every community.
    Non-overlapping: a single (topic, 1.0) entry for the home community.
    """
    if not communities:
        raise InputError("no communities to compute a document-topic row against")
    if overlapping:
        similarities = np.array(
            [community_similarity(doc_id, c, matrix) for c in communities]
        )
        weights = _softmax(similarities)
        return [(c.topic_index, float(w)) for c, w in zip(communities, weights)]
    for community in communities:
        if doc_id in community.member_ids:
            return [(community.topic_index, 1.0)]
    raise InputError(f"document {doc_id!r} is not assigned to any community")


def topic_word_scores(
    communities: list[TopicCommunity], corpus: Corpus
) -> dict[tuple[int, str], float]:
    """Score every (topic, word) pair occurring in that topic's documents.

    score = (word count within the cluster / total corpus token count)
          * (number of clusters / number of clusters containing the word)
    """
    if not communities:
        raise InputError("no communities given")
    total_tokens = corpus.total_tokens()
    if total_tokens == 0:
        raise InputError("corpus has no tokens; preprocess it first")
    tokens_by_id = {doc.id: doc.tokens for doc in corpus.documents}
    cluster_counts: list[Counter[str]] = []
    for community in communities:
        counts: Counter[str] = Counter()
        for doc_id in community.member_ids:
            if doc_id not in tokens_by_id:
                raise InputError(
                    f"community {community.topic_index} references unknown document {doc_id!r}"
                )
            counts.update(tokens_by_id[doc_id])
        if not counts:
            raise InputError(f"community {community.topic_index} is empty")
        cluster_counts.append(counts)
    cluster_frequency: Counter[str] = Counter()
    for counts in cluster_counts:
        cluster_frequency.update(counts.keys())
    n_clusters = len(communities)
    scores: dict[tuple[int, str], float] = {}
    for community, counts in zip(communities, cluster_counts):
        for word, count in counts.items():
            scores[(community.topic_index, word)] = (count / total_tokens) * (
                n_clusters / cluster_frequency[word]
            )
    return scores


def communities_from_cover(cover: Cover, matrix: EmbeddingMatrix) -> list[TopicCommunity]:
    """Materialise cover communities with members in embedding-row order."""
    return [
        TopicCommunity(topic_index=k, member_ids=sorted(c, key=matrix.row_index))
        for k, c in enumerate(cover.communities)
    ]


def build_topics(
    cover: Cover,
    corpus: Corpus,
    matrix: EmbeddingMatrix,
    n_words: int = 10,
    trivial_ids: list[str] | None = None,
    config: dict | None = None,
) -> TopicModel:
    """Assemble the topic model: topic words, document-topic rows, trivia.

    Per topic the ``n_words`` highest-scoring words are kept (score ties
    break lexicographically) and their weights are the softmax of their
    scores. A community with fewer distinct words yields a shorter topic
    and a recorded warning.
    """
    if n_words < 1:
        raise ConfigError(f"n_words must be >= 1, got {n_words}")
    trivial = sorted(trivial_ids) if trivial_ids else []
    communities = communities_from_cover(cover, matrix)
    scores = topic_word_scores(communities, corpus)
    by_topic: dict[int, list[tuple[str, float]]] = {c.topic_index: [] for c in communities}
    for (topic_index, word), score in scores.items():
        by_topic[topic_index].append((word, score))

    topics: list[Topic] = []
    warnings: list[str] = []
    for community in communities:
        ranked = sorted(by_topic[community.topic_index], key=lambda ws: (-ws[1], ws[0]))
        selected = ranked[:n_words]
        if len(selected) < n_words:
            warnings.append(
                f"topic {community.topic_index}: only {len(selected)} distinct words "
                f"available, requested {n_words}"
            )
        weights = _softmax(np.array([s for _, s in selected]))
        topics.append(
            Topic(
                topic_index=community.topic_index,
                words=[(w, float(wt)) for (w, _), wt in zip(selected, weights)],
            )
        )

    rows: dict[str, list[tuple[int, float]]] = {}
    covered = sorted(cover.memberships, key=matrix.row_index)
    if cover.overlapping:
        for doc_id in covered:
            rows[doc_id] = doc_topic_distribution(doc_id, communities, matrix, overlapping=True)
    else:
        for doc_id in covered:
            memberships = cover.memberships[doc_id]
            if not memberships:
                raise InputError(f"document {doc_id!r} is not assigned to any community")
            rows[doc_id] = [(min(memberships), 1.0)]

    overlap_with_trivial = set(trivial) & set(rows)
    if overlap_with_trivial:
        raise InputError(
            f"documents marked trivial also carry topic rows: {sorted(overlap_with_trivial)[:5]}"
        )
    return TopicModel(
        topics=topics,
        alpha=DocTopicDistribution(rows),
        trivial_ids=trivial,
        communities=communities,
        config=dict(config or {}),
        warnings=warnings,
    )
