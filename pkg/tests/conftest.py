"""Shared fixtures: small graphs and the planted three-group corpus."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest

from g2t.corpus import Corpus, Document
from g2t.embedding import EmbeddingMatrix
from g2t.graph import SemanticGraph

N_GROUPS = 3
DOCS_PER_GROUP = 30
WORDS_PER_GROUP = 20
PLANTED_SEED = 7


def graph_from_edges(n: int, edges, weights=None, ids=None) -> SemanticGraph:
    node_ids = ids if ids is not None else [f"n{i}" for i in range(n)]
    return SemanticGraph(node_ids, np.array(edges, dtype=np.int64).reshape(-1, 2),
                         None if weights is None else np.array(weights, dtype=np.float64))


def clique_pair_graph(size_a: int, size_b: int) -> SemanticGraph:
    """Two cliques joined by a single bridge between their first nodes."""
    edges = []
    for i in range(size_a):
        for j in range(i + 1, size_a):
            edges.append((i, j))
    offset = size_a
    for i in range(size_b):
        for j in range(i + 1, size_b):
            edges.append((offset + i, offset + j))
    edges.append((0, offset))
    return graph_from_edges(size_a + size_b, sorted(edges))


def random_connected_graph(rng: random.Random, n: int) -> SemanticGraph:
    """Random spanning tree plus random extra edges: always connected."""
    nodes = list(range(n))
    rng.shuffle(nodes)
    edges = set()
    for i in range(1, n):
        other = nodes[rng.randrange(i)]
        u, v = min(nodes[i], other), max(nodes[i], other)
        edges.add((u, v))
    possible = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for u, v in possible:
        if (u, v) not in edges and rng.random() < 0.3:
            edges.add((u, v))
    return graph_from_edges(n, sorted(edges))


# ---------------------------------------------------------------------------
# planted fixture: 90 documents, 3 groups, disjoint 20-word vocabularies,
# embeddings from 3 well-separated directions.
#
# The embedding geometry is engineered so that pruning at the default
# settings removes exactly the designed inter-group edges:
#   * one "anchor" document per group leans away from the other two group
#     directions, which makes all of its inter-group similarities the
#     lowest in the graph and leaves it intra-group connected only;
#   * seven cross-group triples share a private tag plane with members at
#     120 degrees, giving all three pair similarities a negative dip (any
#     two-sided split of the graph keeps at least one such pair inside a
#     side, which caps the modularity of coarser competitor partitions);
#   * two extra cross pairs use a private axis with opposite signs.
# That totals 3*60-3 + 7*3 + 2 = 200 designed edges: exactly the number
# pruned from the complete graph of 90 nodes at the default edge budget.


def planted_group_of(doc_index: int) -> int:
    return doc_index // DOCS_PER_GROUP


def planted_vocabulary(group: int) -> list[str]:
    return [f"g{group}w{i:02d}" for i in range(WORDS_PER_GROUP)]


def make_planted_corpus(seed: int = PLANTED_SEED, tokens_per_doc: int = 12) -> Corpus:
    rng = random.Random(seed)
    documents = []
    for g in range(N_GROUPS):
        vocab = planted_vocabulary(g)
        for i in range(DOCS_PER_GROUP):
            tokens = [rng.choice(vocab) for _ in range(tokens_per_doc)]
            documents.append(
                Document(id=f"g{g}d{i:02d}", raw_text=" ".join(tokens), tokens=tuple(tokens))
            )
    corpus = Corpus(documents)
    for g in range(N_GROUPS):
        used = {
            t
            for idx, d in enumerate(documents)
            if planted_group_of(idx) == g
            for t in d.tokens
        }
        assert set(planted_vocabulary(g)) <= used, "planted vocabulary not fully used"
    return corpus


def make_planted_embeddings(
    corpus: Corpus,
    seed: int = PLANTED_SEED,
    sigma: float = 0.0015,
    anchor_lean: float = 0.27,
    tag_strength: float = 0.20,
    n_triples: int = 7,
) -> EmbeddingMatrix:
    dim = 3 + 2 * n_triples + 2 + 5
    rng = np.random.default_rng(seed)
    directions = np.eye(3, dim)
    n_docs = N_GROUPS * DOCS_PER_GROUP
    vectors = np.zeros((n_docs, dim))
    for g in range(N_GROUPS):
        others = [h for h in range(N_GROUPS) if h != g]
        for i in range(DOCS_PER_GROUP):
            node = g * DOCS_PER_GROUP + i
            v = directions[g] + sigma * rng.standard_normal(dim)
            if i == 0:  # anchor document
                v = v - anchor_lean * (directions[others[0]] + directions[others[1]])
            vectors[node] = v
    for t in range(n_triples):
        members = [g * DOCS_PER_GROUP + 1 + t for g in range(N_GROUPS)]
        axis = 3 + 2 * t
        for j, node in enumerate(members):
            angle = 2.0 * math.pi * j / 3.0
            vectors[node, axis] += tag_strength * math.cos(angle)
            vectors[node, axis + 1] += tag_strength * math.sin(angle)
    extra_pairs = [
        (0 * DOCS_PER_GROUP + 1 + n_triples, 1 * DOCS_PER_GROUP + 1 + n_triples),
        (1 * DOCS_PER_GROUP + 2 + n_triples, 2 * DOCS_PER_GROUP + 1 + n_triples),
    ]
    for p, (x, y) in enumerate(extra_pairs):
        axis = 3 + 2 * n_triples + p
        strength = tag_strength / math.sqrt(2.0)
        vectors[x, axis] += strength
        vectors[y, axis] -= strength
    vectors = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
    return EmbeddingMatrix(corpus.ids(), vectors)


def planted_similarity_bounds(matrix: EmbeddingMatrix) -> tuple[float, float]:
    """(minimum intra-group cosine, maximum inter-group cosine)."""
    unit = matrix.vectors / np.linalg.norm(matrix.vectors, axis=1, keepdims=True)
    sims = unit @ unit.T
    n = len(matrix)
    intra_min, inter_max = 1.0, -1.0
    for i in range(n):
        for j in range(i + 1, n):
            if planted_group_of(i) == planted_group_of(j):
                intra_min = min(intra_min, sims[i, j])
            else:
                inter_max = max(inter_max, sims[i, j])
    return float(intra_min), float(inter_max)


@pytest.fixture(scope="session")
def planted_corpus() -> Corpus:
    return make_planted_corpus()


@pytest.fixture(scope="session")
def planted_embeddings(planted_corpus) -> EmbeddingMatrix:
    return make_planted_embeddings(planted_corpus)


@pytest.fixture(scope="session")
def planted_files(tmp_path_factory, planted_corpus, planted_embeddings):
    """The planted fixture written out as (corpus.jsonl, embeddings.jsonl)."""
    import json

    from g2t.embedding import save_embeddings

    root = tmp_path_factory.mktemp("planted")
    corpus_path = root / "corpus.jsonl"
    with corpus_path.open("w", encoding="utf-8") as fh:
        for doc in planted_corpus.documents:
            fh.write(json.dumps({"id": doc.id, "text": doc.raw_text}) + "\n")
    embeddings_path = root / "embeddings.jsonl"
    save_embeddings(planted_embeddings, embeddings_path)
    return corpus_path, embeddings_path
