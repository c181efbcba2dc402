"""Topic modelling by community detection on document similarity graphs."""

from .community import (
    ALGORITHMS,
    Cover,
    DetectorConfig,
    Partition,
    detect,
    detect_greedy_modularity,
    detect_louvain,
    detect_lpa,
    detect_slpa,
    modularity,
)
from .corpus import (
    Corpus,
    Document,
    PreprocessConfig,
    Vocabulary,
    build_vocabulary,
    load_corpus,
    load_stopwords,
    preprocess,
    tokenize,
)
from .embedding import (
    EmbeddingMatrix,
    PrincipalComponents,
    ReduceConfig,
    cosine_similarity,
    load_embeddings,
    reduce_dimensions,
    save_embeddings,
)
from .errors import ConfigError, DegenerateGraphError, G2TError, InputError
from .graph import (
    PruneResult,
    SemanticGraph,
    build_semantic_graph,
    connected_components,
    max_connected_subgraph,
    prune_top_p,
    write_edge_list,
)
from .metrics import (
    CooccurrenceCounts,
    MetricsConfig,
    MetricsReport,
    evaluate,
    pair_npmi,
    q_w2v,
    topic_cv,
    topic_diversity,
    topic_npmi,
    window_counts,
)
from .model import GraphToTopic, check_ids_match
from .topics import (
    DocTopicDistribution,
    Topic,
    TopicCommunity,
    TopicModel,
    build_topics,
    communities_from_cover,
    community_similarity,
    doc_topic_distribution,
    topic_word_scores,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "ConfigError",
    "CooccurrenceCounts",
    "Corpus",
    "Cover",
    "DegenerateGraphError",
    "DetectorConfig",
    "DocTopicDistribution",
    "Document",
    "EmbeddingMatrix",
    "G2TError",
    "GraphToTopic",
    "InputError",
    "MetricsConfig",
    "MetricsReport",
    "Partition",
    "PreprocessConfig",
    "PrincipalComponents",
    "PruneResult",
    "ReduceConfig",
    "SemanticGraph",
    "Topic",
    "TopicCommunity",
    "TopicModel",
    "Vocabulary",
    "build_semantic_graph",
    "build_topics",
    "build_vocabulary",
    "check_ids_match",
    "communities_from_cover",
    "community_similarity",
    "connected_components",
    "cosine_similarity",
    "detect",
    "detect_greedy_modularity",
    "detect_louvain",
    "detect_lpa",
    "detect_slpa",
    "doc_topic_distribution",
    "evaluate",
    "load_corpus",
    "load_embeddings",
    "load_stopwords",
    "max_connected_subgraph",
    "modularity",
    "pair_npmi",
    "preprocess",
    "prune_top_p",
    "q_w2v",
    "reduce_dimensions",
    "save_embeddings",
    "tokenize",
    "topic_cv",
    "topic_diversity",
    "topic_npmi",
    "topic_word_scores",
    "window_counts",
    "write_edge_list",
]
