"""Seeded Lloyd's k-means with k-means++ initialization.

Used both as the coarse quantizer for inverted-file indices and as the
per-subspace quantizer for product quantization.  Fully deterministic for
a fixed seed; empty clusters are repaired by splitting the largest one.
"""
from __future__ import annotations

import numpy as np

from ..errors import IndexTrainingError

_CHUNK = 65536


def assign_to_centroids(
    vectors: np.ndarray, centroids: np.ndarray, chunk: int = _CHUNK
) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-centroid (squared Euclidean) label and distance per vector."""
    n = vectors.shape[0]
    k = centroids.shape[0]
    # cap the (chunk, k) distance buffer at ~16M elements
    chunk = max(1024, min(chunk, (16 << 20) // max(1, k)))
    labels = np.empty(n, dtype=np.int64)
    dists = np.empty(n, dtype=np.float64)
    c_sq = np.einsum("ij,ij->i", centroids, centroids)
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        block = vectors[lo:hi]
        # |x - c|^2 = |x|^2 - 2 x.c + |c|^2
        d2 = c_sq[None, :] - 2.0 * (block @ centroids.T)
        lab = np.argmin(d2, axis=1)
        labels[lo:hi] = lab
        x_sq = np.einsum("ij,ij->i", block, block)
        dists[lo:hi] = np.maximum(d2[np.arange(hi - lo), lab] + x_sq, 0.0)
    return labels, dists


def _kmeanspp_init(vectors: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = vectors.shape[0]
    chosen = np.zeros(n, dtype=bool)
    centroids = np.empty((k, vectors.shape[1]), dtype=np.float64)

    x_sq = np.einsum("ij,ij->i", vectors, vectors)

    def d2_to(c: np.ndarray) -> np.ndarray:
        # |x - c|^2 via the expansion; cheaper than forming x - c
        return np.maximum(x_sq - 2.0 * (vectors @ c) + c @ c, 0.0)

    first = int(rng.integers(n))
    centroids[0] = vectors[first]
    chosen[first] = True
    min_d2 = d2_to(centroids[0])

    for j in range(1, k):
        total = float(min_d2.sum())
        if total <= 0.0:
            # all remaining mass is on already-chosen points; take the first
            # unchosen index so initialization stays deterministic
            idx = int(np.flatnonzero(~chosen)[0])
        else:
            idx = int(rng.choice(n, p=min_d2 / total))
        centroids[j] = vectors[idx]
        chosen[idx] = True
        np.minimum(min_d2, d2_to(centroids[j]), out=min_d2)
    return centroids


def train_kmeans(
    vectors: np.ndarray,
    k: int,
    max_iters: int = 25,
    seed: int = 0,
) -> np.ndarray:
    """Train ``k`` centroids; the quantization objective never increases
    between iterations and training stops at an assignment fixpoint."""
    vectors = np.asarray(vectors, dtype=np.float64)
    n = vectors.shape[0]
    if n < k:
        raise IndexTrainingError(f"need at least k={k} training vectors, got {n}")
    if k <= 0:
        raise IndexTrainingError("k must be positive")

    rng = np.random.default_rng(seed)
    centroids = _kmeanspp_init(vectors, k, rng)

    prev_labels: np.ndarray | None = None
    for _ in range(max_iters):
        labels, _ = assign_to_centroids(vectors, centroids)
        if prev_labels is not None and np.array_equal(labels, prev_labels):
            break
        prev_labels = labels

        counts = np.bincount(labels, minlength=k)
        sums = np.empty_like(centroids)
        for col in range(vectors.shape[1]):
            sums[:, col] = np.bincount(labels, weights=vectors[:, col], minlength=k)
        nonempty = counts > 0
        centroids[nonempty] = sums[nonempty] / counts[nonempty, None]

        for cell in np.flatnonzero(counts == 0):
            largest = int(np.argmax(counts))
            members = np.flatnonzero(labels == largest)
            offsets = vectors[members] - centroids[largest]
            far = members[int(np.argmax(np.einsum("ij,ij->i", offsets, offsets)))]
            centroids[cell] = vectors[far]
            labels[far] = cell
            counts[largest] -= 1
            counts[cell] += 1
    return centroids


def quantization_objective(vectors: np.ndarray, centroids: np.ndarray) -> float:
    """Sum of squared distances to nearest centroid."""
    _, d2 = assign_to_centroids(np.asarray(vectors, dtype=np.float64), centroids)
    return float(d2.sum())
