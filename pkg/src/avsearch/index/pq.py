"""Product quantization: per-subspace codebooks, encoding, and decoding.

Codes quantize the raw vector slices (not residuals to a coarse centroid),
which keeps the asymmetric-scoring identity `ADC(q, c) == dot(q, decode(c))`
exact up to float accumulation.
"""
from __future__ import annotations

import numpy as np

from ..errors import IndexTrainingError
from .kmeans import train_kmeans

_SUBSPACE_SEED_STRIDE = 9176


def train_pq(
    vectors: np.ndarray,
    m: int,
    ks: int = 256,
    seed: int = 0,
    max_iters: int = 25,
) -> np.ndarray:
    """Train ``m`` codebooks of up to ``ks`` codewords each.

    Returns an array of shape (m, ks_eff, dim // m); ks_eff is clamped to
    the training-set size so tiny sets simply get memorized.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    n, dim = vectors.shape
    if m <= 0 or dim % m != 0:
        raise IndexTrainingError(f"m={m} must divide dim={dim}")
    if n == 0:
        raise IndexTrainingError("empty training set")
    ks_eff = min(ks, n)
    dsub = dim // m
    codebooks = np.empty((m, ks_eff, dsub), dtype=np.float32)
    for j in range(m):
        sub = vectors[:, j * dsub : (j + 1) * dsub]
        codebooks[j] = train_kmeans(
            sub, ks_eff, max_iters=max_iters, seed=seed + _SUBSPACE_SEED_STRIDE * j
        )
    return codebooks


def pq_encode(codebooks: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Index of the nearest codeword per subspace; shape (n, m)."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float32))
    m, ks, dsub = codebooks.shape
    n = vectors.shape[0]
    dtype = np.uint8 if ks <= 256 else np.uint16
    codes = np.empty((n, m), dtype=dtype)
    for j in range(m):
        sub = vectors[:, j * dsub : (j + 1) * dsub]
        cb = codebooks[j]
        d2 = (
            np.einsum("ij,ij->i", cb, cb)[None, :]
            - 2.0 * (sub @ cb.T)
        )
        codes[:, j] = np.argmin(d2, axis=1)
    return codes


def pq_decode(codebooks: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Concatenate the selected codewords back into full vectors."""
    codes = np.atleast_2d(np.asarray(codes))
    m, _, dsub = codebooks.shape
    n = codes.shape[0]
    out = np.empty((n, m * dsub), dtype=np.float32)
    for j in range(m):
        out[:, j * dsub : (j + 1) * dsub] = codebooks[j][codes[:, j]]
    return out


def adc_tables(codebooks: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Per-subspace inner products of the query with every codeword, (m, ks)."""
    m, ks, dsub = codebooks.shape
    query = np.asarray(query, dtype=np.float32)
    tables = np.empty((m, ks), dtype=np.float32)
    for j in range(m):
        tables[j] = codebooks[j] @ query[j * dsub : (j + 1) * dsub]
    return tables


def adc_scores(tables: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Score each code as the sum of its selected table entries."""
    codes = np.atleast_2d(codes)
    m = tables.shape[0]
    scores = np.zeros(codes.shape[0], dtype=np.float32)
    for j in range(m):
        scores += tables[j][codes[:, j]]
    return scores
