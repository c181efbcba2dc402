import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2t.community import Cover
from g2t.corpus import Corpus, Document
from g2t.embedding import EmbeddingMatrix
from g2t.errors import ConfigError, InputError
from g2t.topics import (
    TopicCommunity,
    _softmax,
    build_topics,
    community_similarity,
    doc_topic_distribution,
    topic_word_scores,
)

from oracles import naive_word_scores


def corpus_from_tokens(tokens_by_id):
    return Corpus([
        Document(doc_id, " ".join(tokens), tokens=tuple(tokens))
        for doc_id, tokens in tokens_by_id.items()
    ])


def unit_vectors_at_cosines(cosines):
    """2-d unit vectors whose cosine with (1, 0) equals each value."""
    return [[c, math.sqrt(1.0 - c * c)] for c in cosines]


class TestCommunitySimilarity:
    def test_mean_of_two_members(self):
        matrix = EmbeddingMatrix(
            ["q", "a", "b"], np.array([[1.0, 0.0]] + unit_vectors_at_cosines([0.8, 0.6]))
        )
        community = TopicCommunity(0, ["a", "b"])
        assert community_similarity("q", community, matrix) == pytest.approx(0.7, abs=1e-12)

    def test_own_singleton_community_scores_one(self):
        matrix = EmbeddingMatrix(["q"], np.array([[1.0, 0.0]]))
        assert community_similarity("q", TopicCommunity(0, ["q"]), matrix) == 1.0

    def test_only_top_ten_counted(self):
        cosines = [0.9] * 10 + [0.1] * 2
        matrix = EmbeddingMatrix(
            ["q"] + [f"m{i}" for i in range(12)],
            np.array([[1.0, 0.0]] + unit_vectors_at_cosines(cosines)),
        )
        community = TopicCommunity(0, [f"m{i}" for i in range(12)])
        assert community_similarity("q", community, matrix) == pytest.approx(0.9, abs=1e-12)

    def test_self_excluded_from_members(self):
        matrix = EmbeddingMatrix(
            ["q", "a"], np.array([[1.0, 0.0]] + unit_vectors_at_cosines([0.5]))
        )
        community = TopicCommunity(0, ["q", "a"])
        assert community_similarity("q", community, matrix) == pytest.approx(0.5, abs=1e-12)

    def test_unknown_id_rejected(self):
        matrix = EmbeddingMatrix(["a"], np.ones((1, 2)))
        with pytest.raises(InputError):
            community_similarity("ghost", TopicCommunity(0, ["a"]), matrix)


class TestDocTopicDistribution:
    def test_equal_similarities_split_evenly(self):
        matrix = EmbeddingMatrix(
            ["q", "a", "b"],
            np.array([[1.0, 0.0]] + unit_vectors_at_cosines([0.7, 0.7])),
        )
        communities = [TopicCommunity(0, ["a"]), TopicCommunity(1, ["b"])]
        row = doc_topic_distribution("q", communities, matrix, overlapping=True)
        assert row[0][1] == pytest.approx(0.5, abs=1e-12)
        assert row[1][1] == pytest.approx(0.5, abs=1e-12)

    def test_analytic_softmax(self):
        matrix = EmbeddingMatrix(
            ["q", "same", "orth"],
            np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
        )
        communities = [TopicCommunity(0, ["same"]), TopicCommunity(1, ["orth"])]
        row = doc_topic_distribution("q", communities, matrix, overlapping=True)
        e = math.e
        assert row[0][1] == pytest.approx(e / (e + 1.0), abs=1e-9)
        assert row[1][1] == pytest.approx(1.0 / (e + 1.0), abs=1e-9)

    def test_one_hot_for_non_overlapping(self):
        matrix = EmbeddingMatrix(["q", "x", "y"], np.eye(3))
        communities = [
            TopicCommunity(0, ["x"]),
            TopicCommunity(1, ["q"]),
            TopicCommunity(2, ["y"]),
        ]
        row = doc_topic_distribution("q", communities, matrix, overlapping=False)
        assert row == [(1, 1.0)]

    def test_unassigned_document_rejected(self):
        matrix = EmbeddingMatrix(["q", "x"], np.eye(2))
        with pytest.raises(InputError):
            doc_topic_distribution("q", [TopicCommunity(0, ["x"])], matrix, overlapping=False)

    def test_no_communities_rejected(self):
        matrix = EmbeddingMatrix(["q"], np.ones((1, 2)))
        with pytest.raises(InputError):
            doc_topic_distribution("q", [], matrix, overlapping=True)

    def test_row_sums_to_one_and_monotone(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            k = rng.integers(2, 6)
            cosines = rng.uniform(-0.9, 0.9, size=int(k))
            matrix = EmbeddingMatrix(
                ["q"] + [f"c{i}" for i in range(int(k))],
                np.array([[1.0, 0.0]] + unit_vectors_at_cosines(list(cosines))),
            )
            communities = [TopicCommunity(i, [f"c{i}"]) for i in range(int(k))]
            row = doc_topic_distribution("q", communities, matrix, overlapping=True)
            weights = [w for _, w in row]
            assert sum(weights) == pytest.approx(1.0, abs=1e-9)
            order_by_cos = np.argsort(-cosines)
            order_by_weight = np.argsort(-np.array(weights))
            assert list(order_by_cos) == list(order_by_weight)


class TestSoftmaxProperties:
    @settings(max_examples=60)
    @given(
        st.lists(st.floats(-10, 10), min_size=2, max_size=8),
        st.floats(-50, 50),
    )
    def test_shift_invariance(self, values, shift):
        x = np.array(values)
        np.testing.assert_allclose(_softmax(x), _softmax(x + shift), atol=1e-9)

    def test_sums_to_one(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            x = rng.uniform(-5, 5, size=rng.integers(1, 9))
            assert _softmax(x).sum() == pytest.approx(1.0, abs=1e-12)


class TestTopicWordScores:
    def test_word_in_single_cluster(self):
        # 20 tokens total; "ale" appears 4 times, only in cluster 0
        corpus = corpus_from_tokens({
            "d1": ["ale"] * 4 + ["foo"] * 6,
            "d2": ["bar"] * 10,
        })
        communities = [TopicCommunity(0, ["d1"]), TopicCommunity(1, ["d2"])]
        scores = topic_word_scores(communities, corpus)
        assert scores[(0, "ale")] == pytest.approx(0.4, abs=1e-12)

    def test_word_in_both_clusters(self):
        # "w" occurs twice in cluster 0 and also appears in cluster 1
        corpus = corpus_from_tokens({
            "d1": ["w", "w"] + ["foo"] * 8,
            "d2": ["w"] + ["bar"] * 9,
        })
        communities = [TopicCommunity(0, ["d1"]), TopicCommunity(1, ["d2"])]
        scores = topic_word_scores(communities, corpus)
        assert scores[(0, "w")] == pytest.approx(0.1, abs=1e-12)

    def test_absent_word_has_no_entry(self):
        corpus = corpus_from_tokens({"d1": ["a", "b"], "d2": ["c", "d"]})
        communities = [TopicCommunity(0, ["d1"]), TopicCommunity(1, ["d2"])]
        scores = topic_word_scores(communities, corpus)
        assert (0, "c") not in scores

    def test_empty_cluster_rejected(self):
        corpus = corpus_from_tokens({"d1": ["a"]})
        with pytest.raises(InputError):
            topic_word_scores([TopicCommunity(0, [])], corpus)

    def test_unknown_member_rejected(self):
        corpus = corpus_from_tokens({"d1": ["a"]})
        with pytest.raises(InputError):
            topic_word_scores([TopicCommunity(0, ["ghost"])], corpus)

    def test_matches_naive_oracle(self):
        rng = random.Random(17)
        vocabulary = [f"w{i}" for i in range(12)]
        for _ in range(40):
            n_docs = rng.randint(2, 8)
            tokens_by_id = {
                f"d{i}": [rng.choice(vocabulary) for _ in range(rng.randint(1, 15))]
                for i in range(n_docs)
            }
            corpus = corpus_from_tokens(tokens_by_id)
            ids = list(tokens_by_id)
            rng.shuffle(ids)
            n_clusters = rng.randint(1, min(3, n_docs))
            clusters = [ids[k::n_clusters] for k in range(n_clusters)]
            clusters = [c for c in clusters if c]
            communities = [TopicCommunity(k, c) for k, c in enumerate(clusters)]
            scores = topic_word_scores(communities, corpus)
            oracle = naive_word_scores(
                [[t for d in c for t in tokens_by_id[d]] for c in clusters],
                list(tokens_by_id.values()),
            )
            assert set(scores) == set(oracle)
            for key, value in oracle.items():
                assert scores[key] == pytest.approx(value, abs=1e-12)

    def test_cluster_idf_property(self):
        # same in-cluster count, present in fewer clusters -> never lower
        corpus = corpus_from_tokens({
            "d1": ["rare", "common", "x"],
            "d2": ["common", "y", "z"],
        })
        communities = [TopicCommunity(0, ["d1"]), TopicCommunity(1, ["d2"])]
        scores = topic_word_scores(communities, corpus)
        assert scores[(0, "rare")] >= scores[(0, "common")]


def one_hot_cover(assignments):
    """Cover from {doc_id: community_index}."""
    n_communities = max(assignments.values()) + 1
    communities = [set() for _ in range(n_communities)]
    for doc_id, k in assignments.items():
        communities[k].add(doc_id)
    memberships = {doc_id: {k} for doc_id, k in assignments.items()}
    return Cover(communities=communities, memberships=memberships, overlapping=False)


class TestBuildTopics:
    def test_equal_scores_split_evenly(self):
        corpus = corpus_from_tokens({
            "d1": ["apple", "pear"],
            "d2": ["stone", "iron"],
        })
        cover = one_hot_cover({"d1": 0, "d2": 1})
        matrix = EmbeddingMatrix(["d1", "d2"], np.eye(2))
        model = build_topics(cover, corpus, matrix, n_words=2)
        for topic in model.topics:
            assert [w for _, w in topic.words] == pytest.approx([0.5, 0.5], abs=1e-12)

    def test_requested_word_count(self):
        rng = random.Random(3)
        vocabulary = [f"w{i}" for i in range(30)]
        corpus = corpus_from_tokens({
            f"d{i}": [rng.choice(vocabulary) for _ in range(40)] for i in range(6)
        })
        cover = one_hot_cover({f"d{i}": i % 2 for i in range(6)})
        matrix = EmbeddingMatrix([f"d{i}" for i in range(6)], np.eye(6))
        model = build_topics(cover, corpus, matrix, n_words=10)
        assert all(len(t.words) == 10 for t in model.topics)

    def test_short_topic_and_warning(self):
        corpus = corpus_from_tokens({"d1": ["only", "two"], "d2": ["a", "b", "c"]})
        cover = one_hot_cover({"d1": 0, "d2": 1})
        matrix = EmbeddingMatrix(["d1", "d2"], np.eye(2))
        model = build_topics(cover, corpus, matrix, n_words=10)
        assert len(model.topics[0].words) == 2
        assert any("topic 0" in w for w in model.warnings)

    def test_disjoint_vocabularies_stay_disjoint(self):
        rng = random.Random(9)
        groups = {g: [f"g{g}w{i}" for i in range(8)] for g in range(3)}
        tokens_by_id = {}
        assignments = {}
        for g in range(3):
            for i in range(4):
                doc_id = f"g{g}d{i}"
                tokens_by_id[doc_id] = [rng.choice(groups[g]) for _ in range(12)]
                assignments[doc_id] = g
        corpus = corpus_from_tokens(tokens_by_id)
        matrix = EmbeddingMatrix(list(tokens_by_id), np.eye(12))
        model = build_topics(one_hot_cover(assignments), corpus, matrix, n_words=5)
        for g, topic in enumerate(model.topics):
            assert {w for w, _ in topic.words} <= set(groups[g])

    def test_beta_invariants(self):
        rng = random.Random(21)
        vocabulary = [f"w{i}" for i in range(20)]
        tokens_by_id = {
            f"d{i}": [rng.choice(vocabulary) for _ in range(25)] for i in range(8)
        }
        corpus = corpus_from_tokens(tokens_by_id)
        cover = one_hot_cover({f"d{i}": i % 3 for i in range(8)})
        matrix = EmbeddingMatrix(list(tokens_by_id), np.eye(8))
        model = build_topics(cover, corpus, matrix, n_words=6)
        for topic in model.topics:
            weights = [w for _, w in topic.words]
            assert sum(weights) == pytest.approx(1.0, abs=1e-9)
            assert all(w > 0 for w in weights)
            assert weights == sorted(weights, reverse=True)
            words = [w for w, _ in topic.words]
            assert len(set(words)) == len(words)

    def test_alpha_one_hot_rows(self):
        corpus = corpus_from_tokens({"d1": ["a", "b"], "d2": ["c", "d"]})
        cover = one_hot_cover({"d1": 0, "d2": 1})
        matrix = EmbeddingMatrix(["d1", "d2"], np.eye(2))
        model = build_topics(cover, corpus, matrix, n_words=2)
        assert model.alpha.rows["d1"] == [(0, 1.0)]
        assert model.alpha.rows["d2"] == [(1, 1.0)]

    def test_overlapping_alpha_covers_all_topics(self):
        corpus = corpus_from_tokens({
            "d1": ["a", "b"], "d2": ["c", "d"], "d3": ["e", "f"],
        })
        cover = Cover(
            communities=[{"d1", "d2"}, {"d2", "d3"}],
            memberships={"d1": {0}, "d2": {0, 1}, "d3": {1}},
            overlapping=True,
        )
        matrix = EmbeddingMatrix(
            ["d1", "d2", "d3"],
            np.array([[1.0, 0.0], [0.8, 0.6], [0.0, 1.0]]),
        )
        model = build_topics(cover, corpus, matrix, n_words=2)
        for row in model.alpha.rows.values():
            assert len(row) == 2
            assert sum(w for _, w in row) == pytest.approx(1.0, abs=1e-9)

    def test_trivial_ids_recorded_and_disjoint(self):
        corpus = corpus_from_tokens({
            "d1": ["a", "b"], "d2": ["c", "d"], "far": ["e", "f"],
        })
        cover = one_hot_cover({"d1": 0, "d2": 0})
        matrix = EmbeddingMatrix(["d1", "d2", "far"], np.eye(3))
        model = build_topics(cover, corpus, matrix, n_words=2, trivial_ids=["far"])
        assert model.trivial_ids == ["far"]
        assert "far" not in model.alpha.rows

    def test_trivial_overlap_rejected(self):
        corpus = corpus_from_tokens({"d1": ["a", "b"], "d2": ["c", "d"]})
        cover = one_hot_cover({"d1": 0, "d2": 0})
        matrix = EmbeddingMatrix(["d1", "d2"], np.eye(2))
        with pytest.raises(InputError):
            build_topics(cover, corpus, matrix, n_words=2, trivial_ids=["d1"])

    def test_n_words_validation(self):
        corpus = corpus_from_tokens({"d1": ["a", "b"]})
        cover = one_hot_cover({"d1": 0})
        matrix = EmbeddingMatrix(["d1"], np.eye(1))
        with pytest.raises(ConfigError):
            build_topics(cover, corpus, matrix, n_words=0)

    def test_score_tie_breaks_lexicographically(self):
        corpus = corpus_from_tokens({"d1": ["zeta", "beta", "alfa", "zeta", "beta", "alfa"]})
        cover = one_hot_cover({"d1": 0})
        matrix = EmbeddingMatrix(["d1"], np.eye(1))
        model = build_topics(cover, corpus, matrix, n_words=2)
        assert [w for w, _ in model.topics[0].words] == ["alfa", "beta"]
