"""Exact inner-product index; the oracle for every approximate index."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SearchResult:
    id: int
    score: float


def top_results(ids: np.ndarray, scores: np.ndarray, topk: int) -> list[SearchResult]:
    """Top-k by descending score, ties broken by ascending id."""
    n = len(ids)
    if topk <= 0 or n == 0:
        return []
    if topk < n:
        kth = np.partition(scores, n - topk)[n - topk]
        keep = scores >= kth
        ids, scores = ids[keep], scores[keep]
    order = np.lexsort((ids, -scores.astype(np.float64)))[:topk]
    return [SearchResult(int(ids[i]), float(scores[i])) for i in order]


class FlatIndex:
    kind = "flat"

    def __init__(self, dim: int):
        self.dim = dim
        self._id_chunks: list[np.ndarray] = []
        self._vec_chunks: list[np.ndarray] = []
        self.ids = np.empty(0, dtype=np.int64)
        self.vectors = np.empty((0, dim), dtype=np.float32)

    def add(self, ids, vectors) -> None:
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float32))
        ids = np.atleast_1d(np.asarray(ids, dtype=np.int64))
        if vectors.shape != (len(ids), self.dim):
            raise ValueError("ids/vectors shape mismatch")
        self._id_chunks.append(ids)
        self._vec_chunks.append(vectors)

    def _finalize(self) -> None:
        if self._id_chunks:
            self.ids = np.concatenate([self.ids] + self._id_chunks)
            self.vectors = np.concatenate([self.vectors] + self._vec_chunks)
            self._id_chunks, self._vec_chunks = [], []

    @property
    def ntotal(self) -> int:
        self._finalize()
        return len(self.ids)

    def search(self, query: np.ndarray, topk: int) -> list[SearchResult]:
        self._finalize()
        if self.ntotal == 0 or topk <= 0:
            return []
        scores = self.vectors @ np.asarray(query, dtype=np.float32)
        return top_results(self.ids, scores, topk)

    def to_arrays(self) -> dict[str, np.ndarray]:
        self._finalize()
        return {"ids": self.ids, "vectors": self.vectors}

    @classmethod
    def from_arrays(cls, dim: int, arrays: dict[str, np.ndarray]) -> "FlatIndex":
        idx = cls(dim)
        idx.ids = arrays["ids"].astype(np.int64)
        idx.vectors = arrays["vectors"].astype(np.float32)
        return idx
