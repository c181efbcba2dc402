"""Community detection on the pruned document graph.

Non-overlapping detectors (greedy modularity merging, Louvain, label
propagation) return a :class:`Partition`; the overlapping speaker-listener
detector returns a :class:`Cover`. The number of communities always
emerges from the graph, it is never supplied.

Every detector is deterministic: randomness comes only from the explicit
seed, and ties break towards the smallest label or community pair.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InputError
from .graph import SemanticGraph, connected_components

ALGORITHMS = ("greedy_modularity", "louvain", "lpa", "slpa")

_MAX_LPA_SWEEPS = 100
_GAIN_EPS = 1e-12  # floating-point guard for "strictly improves"


@dataclass(frozen=True)
class DetectorConfig:
    algorithm: str = "greedy_modularity"
    seed: int = 0
    slpa_iterations: int = 20
    slpa_threshold: float = 0.3

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if not 0.0 < self.slpa_threshold <= 1.0:
            raise ConfigError(f"slpa_threshold must lie in (0, 1], got {self.slpa_threshold}")
        if self.slpa_iterations < 1:
            raise ConfigError(f"slpa_iterations must be >= 1, got {self.slpa_iterations}")


@dataclass
class Partition:
    """Disjoint communities covering every node of the input graph."""

    communities: list[set[str]]
    assignment: dict[str, int]

    def as_cover(self) -> "Cover":
        memberships = {node: {k} for node, k in self.assignment.items()}
        return Cover(
            communities=[set(c) for c in self.communities],
            memberships=memberships,
            overlapping=False,
        )


@dataclass
class Cover:
    """Communities that may share nodes; every node belongs to at least one."""

    communities: list[set[str]]
    memberships: dict[str, set[int]]
    overlapping: bool = False


def _require_connected(graph: SemanticGraph) -> None:
    if graph.n_nodes == 0:
        raise InputError("cannot detect communities on an empty graph")
    if len(connected_components(graph)) > 1:
        raise InputError(
            "graph is not connected; run community detection on the maximum connected subgraph"
        )


def _communities_to_partition(graph: SemanticGraph, groups: list[set[int]]) -> Partition:
    groups = sorted(groups, key=min)
    communities = [{graph.node_ids[i] for i in g} for g in groups]
    assignment: dict[str, int] = {}
    for k, group in enumerate(groups):
        for i in group:
            assignment[graph.node_ids[i]] = k
    return Partition(communities=communities, assignment=assignment)


def modularity(graph: SemanticGraph, partition: Partition) -> float:
    """Newman modularity of a partition, with every edge counted as weight 1.

    Q sums, over communities, the fraction of edges inside the community
    minus the squared fraction of edge endpoints touching it.
    """
    m = graph.n_edges
    if m == 0:
        raise InputError("modularity is undefined on a graph with no edges")
    index_of = {node_id: i for i, node_id in enumerate(graph.node_ids)}
    community_of = np.full(graph.n_nodes, -1, dtype=np.int64)
    for k, community in enumerate(partition.communities):
        for node_id in community:
            if node_id not in index_of:
                raise InputError(f"partition node {node_id!r} is absent from the graph")
            community_of[index_of[node_id]] = k
    if np.any(community_of < 0):
        missing = [graph.node_ids[i] for i in np.flatnonzero(community_of < 0)[:5]]
        raise InputError(f"partition does not cover graph nodes {missing}")
    n_comms = len(partition.communities)
    cu = community_of[graph.edges[:, 0]]
    cv = community_of[graph.edges[:, 1]]
    intra = np.zeros(n_comms)
    degree_sum = np.zeros(n_comms)
    np.add.at(intra, cu[cu == cv], 1.0)
    np.add.at(degree_sum, cu, 1.0)
    np.add.at(degree_sum, cv, 1.0)
    return float(np.sum(intra / m - (degree_sum / (2.0 * m)) ** 2))


def detect_greedy_modularity(graph: SemanticGraph) -> Partition:
    """Agglomerative modularity maximisation.

    Starts from singletons and repeatedly merges the community pair with the
    largest modularity gain (ties: lexicographically smallest pair of
    community labels, where a community is labelled by its smallest node),
    stopping as soon as no merge increases Q.
    """
    if graph.n_nodes < 2:
        raise InputError("greedy modularity needs at least 2 nodes")
    _require_connected(graph)
    m = float(graph.n_edges)
    two_m = 2.0 * m
    degrees = graph.degrees()

    members: dict[int, set[int]] = {i: {i} for i in range(graph.n_nodes)}
    degree_sum: dict[int, float] = {i: float(degrees[i]) for i in range(graph.n_nodes)}
    links: dict[int, dict[int, float]] = {i: {} for i in range(graph.n_nodes)}
    for u, v in graph.edges:
        u, v = int(u), int(v)
        links[u][v] = links[u].get(v, 0.0) + 1.0
        links[v][u] = links[v].get(u, 0.0) + 1.0

    while len(members) > 1:
        # Pairs are scanned in ascending (a, b) order, so with a strict ">"
        # the first pair reaching the maximum gain wins ties.
        best_gain = 0.0
        best_pair: tuple[int, int] | None = None
        for a in sorted(links):
            da = degree_sum[a]
            for b in sorted(links[a]):
                if b <= a:
                    continue
                gain = links[a][b] / m - 2.0 * (da / two_m) * (degree_sum[b] / two_m)
                if gain > best_gain:
                    best_gain = gain
                    best_pair = (a, b)
        if best_pair is None:
            break
        a, b = best_pair
        members[a] |= members.pop(b)
        degree_sum[a] += degree_sum.pop(b)
        moved = links.pop(b)
        links[a].pop(b, None)
        for c, w in moved.items():
            if c == a:
                continue
            links[a][c] = links[a].get(c, 0.0) + w
            links[c][a] = links[c].get(a, 0.0) + w
            links[c].pop(b, None)
    return _communities_to_partition(graph, list(members.values()))


def _louvain_local_pass(
    adjacency: dict[int, dict[int, float]],
    degree: dict[int, float],
    two_m: float,
    rng: random.Random,
) -> tuple[dict[int, int], bool]:
    """One level of local moving; returns node->community and whether anything moved."""
    nodes = sorted(adjacency)
    community = {i: i for i in nodes}
    community_total = {i: degree[i] for i in nodes}
    moved_any = False
    while True:
        moved = 0
        order = nodes[:]
        rng.shuffle(order)
        for node in order:
            home = community[node]
            k_node = degree[node]
            neighbour_weight: dict[int, float] = {}
            for nbr, w in adjacency[node].items():
                if nbr == node:
                    continue
                c = community[nbr]
                neighbour_weight[c] = neighbour_weight.get(c, 0.0) + w
            community_total[home] -= k_node
            best_c = home
            best_gain = neighbour_weight.get(home, 0.0) - community_total[home] * k_node / two_m
            for c in sorted(neighbour_weight):
                if c == home:
                    continue
                gain = neighbour_weight[c] - community_total[c] * k_node / two_m
                if gain > best_gain + _GAIN_EPS:
                    best_gain = gain
                    best_c = c
            community_total[best_c] += k_node
            if best_c != home:
                community[node] = best_c
                moved += 1
        if moved == 0:
            break
        moved_any = True
    return community, moved_any


def _dense_relabel(adjacency: dict[int, dict[int, float]], community: dict[int, int]) -> dict[int, int]:
    """Map community labels to dense 0..K-1 ids, ordered by smallest member."""
    labels = sorted(
        {community[i] for i in adjacency},
        key=lambda c: min(i for i in adjacency if community[i] == c),
    )
    return {c: k for k, c in enumerate(labels)}


def _aggregate(
    adjacency: dict[int, dict[int, float]],
    community: dict[int, int],
    relabel: dict[int, int],
) -> dict[int, dict[int, float]]:
    """Collapse communities to supernodes; self-loops keep twice the internal weight."""
    new_adj: dict[int, dict[int, float]] = {k: {} for k in relabel.values()}
    for i, nbrs in adjacency.items():
        ci = relabel[community[i]]
        for j, w in nbrs.items():
            cj = relabel[community[j]]
            new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
    return new_adj


def detect_louvain(graph: SemanticGraph, seed: int = 0) -> Partition:
    """Two-phase Louvain: local moves, then aggregation, until Q stops improving.

    Node visit order is shuffled by the seed, so results are reproducible
    for a fixed (graph, seed).
    """
    _require_connected(graph)
    rng = random.Random(seed)
    adjacency: dict[int, dict[int, float]] = {i: {} for i in range(graph.n_nodes)}
    for u, v in graph.edges:
        u, v = int(u), int(v)
        adjacency[u][v] = adjacency[u].get(v, 0.0) + 1.0
        adjacency[v][u] = adjacency[v].get(u, 0.0) + 1.0
    two_m = 2.0 * graph.n_edges
    node_community = list(range(graph.n_nodes))
    while True:
        degree = {i: sum(nbrs.values()) for i, nbrs in adjacency.items()}
        community, improved = _louvain_local_pass(adjacency, degree, two_m, rng)
        if not improved:
            break
        relabel = _dense_relabel(adjacency, community)
        node_community = [relabel[community[node_community[i]]] for i in range(graph.n_nodes)]
        adjacency = _aggregate(adjacency, community, relabel)
        if len(adjacency) == 1:
            break
    groups: dict[int, set[int]] = {}
    for i, c in enumerate(node_community):
        groups.setdefault(c, set()).add(i)
    return _communities_to_partition(graph, list(groups.values()))


def detect_lpa(graph: SemanticGraph, seed: int = 0) -> Partition:
    """Asynchronous label propagation.

    Labels start as node indices; each sweep visits nodes in a seeded random
    order. A node keeps its label while it is already among the most
    frequent labels of its neighbours, otherwise it adopts one (ties:
    smallest label). Stops once every node holds a majority label of its
    neighbours, or after 100 sweeps.
    """
    _require_connected(graph)
    rng = random.Random(seed)
    adjacency = graph.adjacency()
    labels = list(range(graph.n_nodes))

    def majority_labels(node: int) -> set[int]:
        counts = Counter(labels[nbr] for nbr in adjacency[node])
        top = max(counts.values())
        return {label for label, c in counts.items() if c == top}

    for _ in range(_MAX_LPA_SWEEPS):
        order = list(range(graph.n_nodes))
        rng.shuffle(order)
        for node in order:
            if not adjacency[node]:
                continue
            majority = majority_labels(node)
            if labels[node] not in majority:
                labels[node] = min(majority)
        if all(not adjacency[i] or labels[i] in majority_labels(i) for i in range(graph.n_nodes)):
            break
    groups: dict[int, set[int]] = {}
    for i, label in enumerate(labels):
        groups.setdefault(label, set()).add(i)
    return _communities_to_partition(graph, list(groups.values()))


def detect_slpa(graph: SemanticGraph, config: DetectorConfig) -> Cover:
    """Speaker-listener label propagation for overlapping communities.

    Each node keeps a label memory seeded with its own index. Per round,
    every listener (seeded random order) receives one label from each
    neighbour, drawn proportionally to the speaker's memory counts, and
    memorises the most popular one (ties: smallest label). Post-processing
    keeps labels whose memory frequency reaches the threshold, always
    retaining each node's top label.
    """
    _require_connected(graph)
    rng = random.Random(config.seed)
    adjacency = graph.adjacency()
    n = graph.n_nodes
    memories: list[Counter[int]] = [Counter({i: 1}) for i in range(n)]

    for _ in range(config.slpa_iterations):
        order = list(range(n))
        rng.shuffle(order)
        for listener in order:
            received: Counter[int] = Counter()
            for speaker in adjacency[listener]:
                memory = memories[speaker]
                pick = rng.randrange(sum(memory.values()))
                cumulative = 0
                for label in sorted(memory):
                    cumulative += memory[label]
                    if pick < cumulative:
                        received[label] += 1
                        break
            if received:
                top = max(received.values())
                memories[listener][min(l for l, c in received.items() if c == top)] += 1

    memory_size = config.slpa_iterations + 1
    node_labels: list[set[int]] = []
    for memory in memories:
        kept = {label for label, count in memory.items() if count / memory_size >= config.slpa_threshold}
        top_count = max(memory.values())
        kept.add(min(label for label, count in memory.items() if count == top_count))
        node_labels.append(kept)

    by_label: dict[int, set[int]] = {}
    for node, kept in enumerate(node_labels):
        for label in kept:
            by_label.setdefault(label, set()).add(node)
    unique: list[set[int]] = []
    seen: set[frozenset[int]] = set()
    for label in sorted(by_label):
        key = frozenset(by_label[label])
        if key not in seen:
            seen.add(key)
            unique.append(by_label[label])
    unique.sort(key=lambda c: (min(c), sorted(c)))
    communities = [{graph.node_ids[i] for i in c} for c in unique]
    memberships = {
        graph.node_ids[i]: {k for k, c in enumerate(unique) if i in c} for i in range(n)
    }
    return Cover(communities=communities, memberships=memberships, overlapping=True)


def detect(graph: SemanticGraph, config: DetectorConfig) -> Cover:
    """Dispatch to the configured detector; partitions come back as covers."""
    if config.algorithm == "greedy_modularity":
        return detect_greedy_modularity(graph).as_cover()
    if config.algorithm == "louvain":
        return detect_louvain(graph, seed=config.seed).as_cover()
    if config.algorithm == "lpa":
        return detect_lpa(graph, seed=config.seed).as_cover()
    return detect_slpa(graph, config)
