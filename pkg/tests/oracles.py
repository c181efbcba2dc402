"""Independent reference implementations used to cross-check the package.

Everything here is written from first principles (adjacency matrices,
explicit loops over the formula terms) and shares no code with the
package; tests compare package output against these.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np


# ---------------------------------------------------------------------------
# modularity


def adjacency_matrix(n: int, edges) -> np.ndarray:
    A = np.zeros((n, n))
    for u, v in edges:
        A[u, v] += 1.0
        A[v, u] += 1.0
    return A


def modularity_matrix_form(n: int, edges, communities) -> float:
    """Q = (1/2m) * sum_ij (A_ij - d_i d_j / 2m) [c_i == c_j]."""
    A = adjacency_matrix(n, edges)
    two_m = A.sum()
    degree = A.sum(axis=1)
    label = {}
    for k, community in enumerate(communities):
        for i in community:
            label[i] = k
    q = 0.0
    for i in range(n):
        for j in range(n):
            if label[i] == label[j]:
                q += A[i, j] - degree[i] * degree[j] / two_m
    return q / two_m


def set_partitions(items: list):
    """Every partition of ``items`` into non-empty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partial in set_partitions(rest):
        for i in range(len(partial)):
            yield partial[:i] + [[first] + partial[i]] + partial[i + 1 :]
        yield [[first]] + partial


def max_modularity_partition(n: int, edges):
    """Exhaustive maximum-modularity partition (small n only)."""
    best_q = -math.inf
    best_partition = None
    for partition in set_partitions(list(range(n))):
        q = modularity_matrix_form(n, edges, partition)
        if q > best_q:
            best_q = q
            best_partition = [sorted(block) for block in partition]
    return best_q, best_partition


# ---------------------------------------------------------------------------
# sliding windows and metric equations


def naive_window_stats(token_lists, window_size):
    """(total windows, word->window count, pair->window count) by enumeration."""
    window_sets = []
    for tokens in token_lists:
        tokens = list(tokens)
        if not tokens:
            continue
        if len(tokens) <= window_size:
            spans = [tokens]
        else:
            spans = [tokens[i : i + window_size] for i in range(len(tokens) - window_size + 1)]
        window_sets.extend(set(span) for span in spans)
    total = len(window_sets)
    word_count: dict[str, int] = {}
    pair_count: dict[tuple[str, str], int] = {}
    for present in window_sets:
        for w in present:
            word_count[w] = word_count.get(w, 0) + 1
        for a, b in combinations(sorted(present), 2):
            pair_count[(a, b)] = pair_count.get((a, b), 0) + 1
    return total, word_count, pair_count


def naive_pair_npmi(w1, w2, total, word_count, pair_count, epsilon):
    p1 = word_count.get(w1, 0) / total
    p2 = word_count.get(w2, 0) / total
    if p1 == 0.0 or p2 == 0.0:
        return -1.0
    key = (w1, w2) if w1 <= w2 else (w2, w1)
    joint = pair_count.get(key, 0) / total + epsilon
    if -math.log(joint) <= 0.0:
        return 1.0
    return math.log(joint / (p1 * p2)) / (-math.log(joint))


def naive_topic_npmi(word_lists, total, word_count, pair_count, epsilon, normalize):
    per_topic = []
    for words in word_lists:
        values = [
            naive_pair_npmi(words[i], words[j], total, word_count, pair_count, epsilon)
            for i in range(len(words))
            for j in range(i + 1, len(words))
        ]
        per_topic.append(sum(values) / len(values) if normalize else sum(values))
    return sum(per_topic) / len(per_topic), per_topic


def naive_topic_cv(word_lists, total, word_count, pair_count, epsilon, normalize):
    per_topic = []
    for words in word_lists:
        n = len(words)
        vectors = []
        for i in range(n):
            row = []
            for j in range(n):
                if i == j:
                    row.append(1.0)
                else:
                    row.append(
                        naive_pair_npmi(words[i], words[j], total, word_count, pair_count, epsilon)
                    )
            vectors.append(row)
        cosines = []
        for i in range(n):
            for j in range(i + 1, n):
                dot = sum(a * b for a, b in zip(vectors[i], vectors[j]))
                ni = math.sqrt(sum(a * a for a in vectors[i]))
                nj = math.sqrt(sum(b * b for b in vectors[j]))
                cosines.append(dot / (ni * nj))
        per_topic.append(sum(cosines) / len(cosines) if normalize else sum(cosines))
    return sum(per_topic) / len(per_topic), per_topic


def naive_topic_diversity(word_lists):
    all_words = [w for words in word_lists for w in words]
    per_topic = []
    for words in word_lists:
        per_topic.append(sum(1.0 / all_words.count(w) for w in words) / len(words))
    return sum(per_topic) / len(per_topic), per_topic


def naive_qw2v(word_lists, vector_of):
    per_topic = []
    for words in word_lists:
        n = len(words)
        total = 0.0
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                vi, vj = vector_of[words[i]], vector_of[words[j]]
                total += sum((a - b) ** 2 for a, b in zip(vi, vj))
        per_topic.append(total / (n * (n - 1)))
    return sum(per_topic) / len(per_topic), per_topic


def naive_word_scores(cluster_token_lists, corpus_token_lists):
    """score(k, w) = (count of w in cluster k / total corpus tokens) * (K / df_w)."""
    total = sum(len(tokens) for tokens in corpus_token_lists)
    n_clusters = len(cluster_token_lists)
    cluster_words = []
    for tokens in cluster_token_lists:
        counts: dict[str, int] = {}
        for w in tokens:
            counts[w] = counts.get(w, 0) + 1
        cluster_words.append(counts)
    df: dict[str, int] = {}
    for counts in cluster_words:
        for w in counts:
            df[w] = df.get(w, 0) + 1
    scores = {}
    for k, counts in enumerate(cluster_words):
        for w, c in counts.items():
            scores[(k, w)] = (c / total) * (n_clusters / df[w])
    return scores
