"""Document similarity graphs.

The pipeline builds a complete weighted graph (cosine similarity between
every document pair), keeps only the strongest edges, and extracts the
largest connected component. Documents isolated by pruning are reported
as trivial; smaller multi-node components are reported separately for
observability rather than silently discarded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .embedding import EmbeddingMatrix
from .errors import ConfigError, InputError

PRUNE_MODES = ("keep-fraction", "percentile")


@dataclass
class SemanticGraph:
    """Undirected graph over document ids.

    ``edges`` is an (E, 2) int array with u < v, stored sorted by (u, v);
    ``weights`` is a parallel (E,) float array, or None once pruned.
    """

    node_ids: list[str]
    edges: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if self.weights is not None:
            self.weights = np.asarray(self.weights, dtype=np.float64)
            if self.weights.shape[0] != self.edges.shape[0]:
                raise InputError("one weight per edge required")
            if self.weights.size and (self.weights.min() < -1.0 or self.weights.max() > 1.0):
                raise InputError("edge weights must lie in [-1, 1]")
        if self.edges.size:
            if self.edges.min() < 0 or self.edges.max() >= len(self.node_ids):
                raise InputError("edge endpoint out of range")
            if np.any(self.edges[:, 0] == self.edges[:, 1]):
                raise InputError("self-loops are not allowed")
            if np.any(self.edges[:, 0] > self.edges[:, 1]):
                raise InputError("edges must be stored as (u, v) with u < v")
            order = np.lexsort((self.edges[:, 1], self.edges[:, 0]))
            self.edges = self.edges[order]
            if self.weights is not None:
                self.weights = self.weights[order]
            if np.any(np.all(np.diff(self.edges, axis=0) == 0, axis=1)):
                raise InputError("duplicate edges are not allowed")

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_nodes, dtype=np.int64)
        if self.edges.size:
            np.add.at(deg, self.edges[:, 0], 1)
            np.add.at(deg, self.edges[:, 1], 1)
        return deg

    def adjacency(self) -> list[list[int]]:
        """Neighbour lists in ascending node order."""
        adj: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for u, v in self.edges:
            adj[u].append(int(v))
            adj[v].append(int(u))
        for nbrs in adj:
            nbrs.sort()
        return adj


@dataclass
class PruneResult:
    """Largest connected component plus everything pruning cut away."""

    subgraph: SemanticGraph
    isolated: list[str]
    dropped_components: list[list[str]]


def build_semantic_graph(matrix: EmbeddingMatrix) -> SemanticGraph:
    """Complete graph on all ids, weighted by pairwise cosine similarity."""
    n = len(matrix)
    if n < 2:
        raise InputError(f"need at least 2 documents to build a graph, got {n}")
    norms = np.linalg.norm(matrix.vectors, axis=1)
    zero_rows = np.flatnonzero(norms == 0.0)
    if zero_rows.size:
        raise InputError(
            f"zero vector for id {matrix.ids[zero_rows[0]]!r}; cosine similarity is undefined"
        )
    unit = matrix.vectors / norms[:, None]
    sims = np.clip(unit @ unit.T, -1.0, 1.0)
    iu, iv = np.triu_indices(n, k=1)
    edges = np.column_stack([iu, iv])
    return SemanticGraph(list(matrix.ids), edges, sims[iu, iv])


def prune_top_p(graph: SemanticGraph, top_p: float, mode: str = "keep-fraction") -> SemanticGraph:
    """Keep only the strongest edges; the result is unweighted.

    ``keep-fraction`` retains exactly ceil(top_p/100 * E) edges with the
    largest weights, breaking weight ties by (u, v) order. ``percentile``
    instead keeps edges strictly above the top_p-th weight percentile.
    """
    if not graph.weighted:
        raise ConfigError("pruning expects the weighted similarity graph")
    if not 0.0 < top_p <= 100.0:
        raise ConfigError(f"top_p must lie in (0, 100], got {top_p}")
    if mode not in PRUNE_MODES:
        raise ConfigError(f"unknown prune mode {mode!r}; expected one of {PRUNE_MODES}")
    if mode == "keep-fraction":
        keep = math.ceil(top_p / 100.0 * graph.n_edges)
        order = np.lexsort((graph.edges[:, 1], graph.edges[:, 0], -graph.weights))
        chosen = np.sort(order[:keep])
    else:
        threshold = np.percentile(graph.weights, top_p)
        chosen = np.flatnonzero(graph.weights > threshold)
    return SemanticGraph(list(graph.node_ids), graph.edges[chosen], None)


def connected_components(graph: SemanticGraph) -> list[list[int]]:
    """Connected components as sorted index lists, largest first (ties: smallest index)."""
    n = graph.n_nodes
    adj = graph.adjacency()
    seen = [False] * n
    components: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        members = []
        while stack:
            node = stack.pop()
            members.append(node)
            for nbr in adj[node]:
                if not seen[nbr]:
                    seen[nbr] = True
                    stack.append(nbr)
        components.append(sorted(members))
    components.sort(key=lambda c: (-len(c), c[0]))
    return components


def max_connected_subgraph(graph: SemanticGraph) -> PruneResult:
    """Split a pruned graph into its main component, isolated nodes and the rest."""
    if graph.weighted:
        raise ConfigError("component extraction expects the pruned unweighted graph")
    if graph.n_nodes == 0:
        raise InputError("cannot take the maximum connected subgraph of an empty graph")
    components = connected_components(graph)
    main = components[0]
    main_set = set(main)
    index_of = {old: new for new, old in enumerate(main)}
    mask = np.fromiter(
        ((u in main_set) and (v in main_set) for u, v in graph.edges),
        dtype=bool,
        count=graph.n_edges,
    )
    sub_edges = graph.edges[mask]
    if sub_edges.size:
        sub_edges = np.array([[index_of[u], index_of[v]] for u, v in sub_edges], dtype=np.int64)
    subgraph = SemanticGraph([graph.node_ids[i] for i in main], sub_edges.reshape(-1, 2), None)
    isolated = [graph.node_ids[c[0]] for c in components[1:] if len(c) == 1]
    dropped = [[graph.node_ids[i] for i in c] for c in components[1:] if len(c) >= 2]
    return PruneResult(subgraph=subgraph, isolated=isolated, dropped_components=dropped)


def write_edge_list(graph: SemanticGraph, path: str | Path) -> None:
    """Debug dump: one ``u_id<TAB>v_id<TAB>weight`` line per edge."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for i, (u, v) in enumerate(graph.edges):
            weight = graph.weights[i] if graph.weighted else 1.0
            fh.write(f"{graph.node_ids[u]}\t{graph.node_ids[v]}\t{format(weight, '.17g')}\n")
