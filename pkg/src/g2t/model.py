"""High-level estimator running the whole pipeline.

The flow is: (optionally) reduce embeddings, build the complete cosine
similarity graph, keep the strongest edges, take the largest connected
component, detect communities on it, then derive topic words and
document-topic rows. Documents cut off by pruning become trivial ids.
"""

from __future__ import annotations

import time

import numpy as np
from sklearn.base import BaseEstimator

from .community import ALGORITHMS, DetectorConfig, detect
from .corpus import Corpus
from .embedding import EmbeddingMatrix, ReduceConfig, reduce_dimensions
from .errors import ConfigError, DegenerateGraphError, InputError
from .graph import PRUNE_MODES, build_semantic_graph, max_connected_subgraph, prune_top_p
from .topics import TopicModel, build_topics


def check_ids_match(corpus: Corpus, embeddings: EmbeddingMatrix, max_report: int = 10) -> list[str]:
    """Validate that embedding ids equal the retained corpus ids exactly.

    Embeddings for documents dropped during preprocessing are tolerated and
    skipped; anything else mismatched raises, naming the first offenders.
    Returns the retained ids in corpus order.
    """
    retained = corpus.ids()
    allowed = set(retained) | set(corpus.dropped)
    available = set(embeddings.ids)
    missing = [i for i in retained if i not in available]
    unexpected = sorted(available - allowed)
    offenders = missing + unexpected
    if offenders:
        shown = ", ".join(repr(i) for i in offenders[:max_report])
        raise InputError(
            f"document ids and embedding ids do not match "
            f"({len(missing)} missing, {len(unexpected)} unexpected); first offenders: {shown}"
        )
    return retained


class GraphToTopic(BaseEstimator):
    """Topic model over precomputed document embeddings.

    Parameters
    ----------
    top_p : float, default=95.0
        Percentage of similarity-graph edges to keep while pruning.
    prune_mode : {"keep-fraction", "percentile"}, default="keep-fraction"
        "keep-fraction" keeps the heaviest top_p% of edges; "percentile"
        keeps edges strictly above the top_p-th weight percentile.
    algorithm : {"greedy_modularity", "louvain", "lpa", "slpa"}, default="greedy_modularity"
        Community detector; "slpa" yields overlapping topics.
    n_words : int, default=10
        Words shown per topic.
    reduce_method : {"none", "pca"}, default="none"
        In-core reduction applied before building the graph. Embeddings
        already reduced upstream should use "none".
    reduce_dim : int, default=5
        Target dimensionality for reduce_method="pca".
    seed : int, default=0
        Seed for the seeded detectors (louvain, lpa, slpa).
    slpa_iterations : int, default=20
    slpa_threshold : float, default=0.3

    Attributes
    ----------
    model_ : TopicModel
    topics_, alpha_, trivial_ids_, communities_ : shortcuts into ``model_``
    n_topics_ : int
    prune_result_ : PruneResult
    graph_ : the full weighted similarity graph
    timings_ : dict of wall-clock seconds per stage
    """

    def __init__(
        self,
        *,
        top_p: float = 95.0,
        prune_mode: str = "keep-fraction",
        algorithm: str = "greedy_modularity",
        n_words: int = 10,
        reduce_method: str = "none",
        reduce_dim: int = 5,
        seed: int = 0,
        slpa_iterations: int = 20,
        slpa_threshold: float = 0.3,
    ):
        self.top_p = top_p
        self.prune_mode = prune_mode
        self.algorithm = algorithm
        self.n_words = n_words
        self.reduce_method = reduce_method
        self.reduce_dim = reduce_dim
        self.seed = seed
        self.slpa_iterations = slpa_iterations
        self.slpa_threshold = slpa_threshold

    def fit(self, corpus: Corpus, embeddings: EmbeddingMatrix) -> "GraphToTopic":
        """Fit on a preprocessed corpus and its matching embedding matrix."""
        if self.prune_mode not in PRUNE_MODES:
            raise ConfigError(f"unknown prune_mode {self.prune_mode!r}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if not corpus.documents or any(not d.tokens for d in corpus.documents):
            raise InputError("corpus must be preprocessed (every document needs tokens)")
        timings: dict[str, float] = {}

        start = time.perf_counter()
        retained = check_ids_match(corpus, embeddings)
        matrix = embeddings.subset(retained)
        matrix = reduce_dimensions(
            matrix, ReduceConfig(method=self.reduce_method, target_dim=self.reduce_dim)
        )
        timings["reduce"] = time.perf_counter() - start

        start = time.perf_counter()
        graph = build_semantic_graph(matrix)
        timings["graph"] = time.perf_counter() - start

        start = time.perf_counter()
        pruned = prune_top_p(graph, self.top_p, mode=self.prune_mode)
        prune_result = max_connected_subgraph(pruned)
        timings["prune"] = time.perf_counter() - start
        if prune_result.subgraph.n_nodes < 2:
            raise DegenerateGraphError(
                "pruning left no usable component (fewer than 2 connected documents); "
                "raise top_p or check the embeddings"
            )

        start = time.perf_counter()
        cover = detect(
            prune_result.subgraph,
            DetectorConfig(
                algorithm=self.algorithm,
                seed=self.seed,
                slpa_iterations=self.slpa_iterations,
                slpa_threshold=self.slpa_threshold,
            ),
        )
        timings["detect"] = time.perf_counter() - start

        start = time.perf_counter()
        trivial = list(prune_result.isolated)
        for component in prune_result.dropped_components:
            trivial.extend(component)
        model = build_topics(
            cover,
            corpus,
            matrix,
            n_words=self.n_words,
            trivial_ids=trivial,
            config=self.get_params(),
        )
        timings["topics"] = time.perf_counter() - start

        self.model_ = model
        self.topics_ = model.topics
        self.alpha_ = model.alpha
        self.trivial_ids_ = model.trivial_ids
        self.communities_ = model.communities
        self.n_topics_ = model.n_topics
        self.cover_ = cover
        self.graph_ = graph
        self.prune_result_ = prune_result
        self.timings_ = timings
        return self

    def fit_transform(self, corpus: Corpus, embeddings: EmbeddingMatrix) -> np.ndarray:
        """Fit, then return the dense document-topic matrix.

        Rows follow ``doc_ids_`` (documents that survived pruning, in
        corpus order); columns are topics.
        """
        self.fit(corpus, embeddings)
        rows = self.alpha_.rows
        dense = np.zeros((len(rows), self.n_topics_))
        for r, doc_id in enumerate(rows):
            for topic_index, weight in rows[doc_id]:
                dense[r, topic_index] = weight
        return dense

    @property
    def doc_ids_(self) -> list[str]:
        return list(self.alpha_.rows)
