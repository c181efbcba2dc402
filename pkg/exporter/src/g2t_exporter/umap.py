"""A compact UMAP implementation for modest row counts.

Follows the reference algorithm: exact k-nearest-neighbour graph, fuzzy
simplicial set via per-point bandwidth calibration, probabilistic-union
symmetrisation, spectral initialisation, then stochastic gradient descent
on the cross-entropy with negative sampling. Neighbour search is exact
(dense distances), which is fine for the corpus sizes this exporter
targets. Fully deterministic for a fixed seed: single-threaded, seeded
RNG, sign-fixed spectral vectors.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import curve_fit

_SMOOTH_TOLERANCE = 1e-5
_BANDWIDTH_ITERATIONS = 64
_MIN_DIST_SCALE = 1e-3
_GRAD_CLIP = 4.0


class UmapError(ValueError):
    pass


def _fit_output_curve(min_dist: float, spread: float) -> tuple[float, float]:
    """Least-squares (a, b) so 1/(1 + a d^{2b}) matches the target falloff."""

    def curve(d, a, b):
        return 1.0 / (1.0 + a * d ** (2.0 * b))

    grid = np.linspace(0.0, 3.0 * spread, 300)
    target = np.where(grid <= min_dist, 1.0, np.exp(-(grid - min_dist) / spread))
    (a, b), _ = curve_fit(curve, grid, target, p0=(1.0, 1.0), maxfev=10_000)
    return float(a), float(b)


def _smooth_knn_calibration(knn_dists: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per point: (rho, sigma) with sum_j exp(-(d_ij - rho)/sigma) = log2(k)."""
    n, k = knn_dists.shape
    target = np.log2(k)
    rho = np.zeros(n)
    sigma = np.ones(n)
    for i in range(n):
        positive = knn_dists[i][knn_dists[i] > 0.0]
        rho[i] = positive.min() if positive.size else 0.0
        lo, hi, mid = 0.0, np.inf, 1.0
        for _ in range(_BANDWIDTH_ITERATIONS):
            value = np.exp(-np.maximum(knn_dists[i] - rho[i], 0.0) / mid).sum()
            if abs(value - target) < _SMOOTH_TOLERANCE:
                break
            if value > target:
                hi = mid
                mid = (lo + hi) / 2.0
            else:
                lo = mid
                mid = mid * 2.0 if hi == np.inf else (lo + hi) / 2.0
        sigma[i] = mid if mid > 0 else 1.0
    return rho, sigma


def _fuzzy_graph(X: np.ndarray, n_neighbors: int) -> np.ndarray:
    """Symmetric fuzzy membership matrix (dense, zero diagonal)."""
    n = X.shape[0]
    squared = np.sum(X**2, axis=1)
    distances = np.sqrt(
        np.maximum(squared[:, None] + squared[None, :] - 2.0 * (X @ X.T), 0.0)
    )
    np.fill_diagonal(distances, np.inf)
    knn_idx = np.argsort(distances, axis=1)[:, :n_neighbors]
    knn_dists = np.take_along_axis(distances, knn_idx, axis=1)
    rho, sigma = _smooth_knn_calibration(knn_dists)
    memberships = np.zeros((n, n))
    for i in range(n):
        weights = np.exp(-np.maximum(knn_dists[i] - rho[i], 0.0) / sigma[i])
        memberships[i, knn_idx[i]] = weights
    # probabilistic union: w + w^T - w o w^T
    return memberships + memberships.T - memberships * memberships.T


def _spectral_init(graph: np.ndarray, n_components: int, rng: np.random.Generator) -> np.ndarray:
    """Eigenvectors of the symmetric normalised Laplacian, sign-fixed, scaled."""
    n = graph.shape[0]
    degree = graph.sum(axis=1)
    degree[degree == 0.0] = 1.0
    inv_sqrt = 1.0 / np.sqrt(degree)
    laplacian = np.eye(n) - inv_sqrt[:, None] * graph * inv_sqrt[None, :]
    _, eigenvectors = np.linalg.eigh(laplacian)
    init = eigenvectors[:, 1 : n_components + 1]
    if init.shape[1] < n_components:  # tiny inputs: pad with noise
        pad = rng.standard_normal((n, n_components - init.shape[1]))
        init = np.hstack([init, pad])
    for column in range(init.shape[1]):
        col = init[:, column]
        if col[np.argmax(np.abs(col))] < 0:
            init[:, column] = -col
    peak = np.abs(init).max()
    if peak == 0.0:
        init = rng.standard_normal(init.shape)
        peak = np.abs(init).max()
    init = 10.0 * init / peak
    return init + 1e-4 * rng.standard_normal(init.shape)


def umap_embed(
    X: np.ndarray,
    n_components: int = 5,
    n_neighbors: int = 15,
    min_dist: float = 0.1,
    spread: float = 1.0,
    n_epochs: int = 300,
    negative_sample_rate: int = 5,
    seed: int = 0,
) -> np.ndarray:
    """Embed rows of X into ``n_components`` dimensions."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise UmapError("input must be a 2-d array")
    n, dim = X.shape
    if n_components < 1:
        raise UmapError(f"n_components must be >= 1, got {n_components}")
    if n_components > dim:
        raise UmapError(f"cannot embed {dim}-dimensional input into {n_components} dimensions")
    if n_neighbors < 2:
        raise UmapError(f"n_neighbors must be >= 2, got {n_neighbors}")
    if n < n_neighbors + 1:
        raise UmapError(
            f"need at least n_neighbors+1 = {n_neighbors + 1} rows, got {n}; "
            "reduce --umap-neighbors or supply more documents"
        )

    rng = np.random.default_rng(seed)
    graph = _fuzzy_graph(X, n_neighbors)
    a, b = _fit_output_curve(min_dist, spread)
    embedding = _spectral_init(graph, n_components, rng)

    heads, tails = np.nonzero(np.triu(graph, k=1))
    weights = graph[heads, tails]
    if heads.size == 0:
        return embedding
    epochs_per_sample = weights.max() / weights
    next_sample = epochs_per_sample.copy()

    for epoch in range(1, n_epochs + 1):
        alpha = 1.0 * (1.0 - epoch / n_epochs)
        due = next_sample <= epoch
        if not np.any(due):
            continue
        next_sample[due] += epochs_per_sample[due]
        i_idx = heads[due]
        j_idx = tails[due]

        diff = embedding[i_idx] - embedding[j_idx]
        d2 = np.sum(diff**2, axis=1)
        # attraction along each due edge, both endpoints move
        coeff = np.where(
            d2 > 0.0,
            (-2.0 * a * b * d2 ** (b - 1.0)) / (1.0 + a * d2**b),
            0.0,
        )
        grad = np.clip(coeff[:, None] * diff, -_GRAD_CLIP, _GRAD_CLIP)
        np.add.at(embedding, i_idx, alpha * grad)
        np.add.at(embedding, j_idx, -alpha * grad)

        # negative sampling repulses the head from random nodes
        for _ in range(negative_sample_rate):
            others = rng.integers(0, n, size=i_idx.size)
            keep = others != i_idx
            if not np.any(keep):
                continue
            diff_neg = embedding[i_idx[keep]] - embedding[others[keep]]
            d2_neg = np.sum(diff_neg**2, axis=1)
            coeff_neg = (2.0 * b) / (
                (_MIN_DIST_SCALE + d2_neg) * (1.0 + a * d2_neg**b)
            )
            grad_neg = np.clip(coeff_neg[:, None] * diff_neg, -_GRAD_CLIP, _GRAD_CLIP)
            np.add.at(embedding, i_idx[keep], alpha * grad_neg)

    # the downstream format forbids all-zero rows; nudge any that landed
    # exactly at the origin (practically unreachable, but cheap to guard)
    zero_rows = np.all(embedding == 0.0, axis=1)
    if np.any(zero_rows):
        embedding[zero_rows, 0] = 1e-8
    return embedding
