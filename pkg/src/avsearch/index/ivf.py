"""Inverted-file indices: IVF-Flat (exact within probed cells) and IVF-PQ
(asymmetric scoring of product-quantized codes within probed cells).

Vectors live in the cell of their nearest coarse centroid; at query time
only the ``nprobe`` cells whose centroids score highest against the query
are scanned.
"""
from __future__ import annotations

import numpy as np

from ..errors import IndexTrainingError
from .flat import SearchResult, top_results
from .kmeans import assign_to_centroids, train_kmeans
from .pq import adc_scores, adc_tables, pq_encode, train_pq


def default_nlist(n: int) -> int:
    return max(1, int(np.sqrt(n)))


def default_nprobe(nlist: int) -> int:
    return max(1, nlist // 16)


def _subsample(vectors: np.ndarray, limit: int, seed: int) -> np.ndarray:
    if vectors.shape[0] <= limit:
        return vectors
    rng = np.random.default_rng(seed)
    pick = rng.choice(vectors.shape[0], size=limit, replace=False)
    return vectors[np.sort(pick)]


def _probe_order(centroids: np.ndarray, query: np.ndarray, nprobe: int) -> np.ndarray:
    cell_scores = centroids @ np.asarray(query, dtype=centroids.dtype)
    order = np.lexsort((np.arange(len(centroids)), -cell_scores))
    return order[: max(0, nprobe)]


class _CellLists:
    """Per-cell accumulators flattened into contiguous arrays on demand."""

    def __init__(self, nlist: int):
        self.nlist = nlist
        self._pending: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
        self.offsets = np.zeros(nlist + 1, dtype=np.int64)
        self.ids = np.empty(0, dtype=np.int64)
        self.payload: np.ndarray | None = None

    def add(self, cells: np.ndarray, ids: np.ndarray, payload: np.ndarray) -> None:
        self._pending.append((cells, ids, payload))

    def finalize(self) -> None:
        if not self._pending:
            return
        cells = [np.repeat(np.arange(self.nlist), np.diff(self.offsets))]
        ids = [self.ids]
        payloads = [] if self.payload is None else [self.payload]
        for c, i, p in self._pending:
            cells.append(c)
            ids.append(i)
            payloads.append(p)
        self._pending = []
        cells_all = np.concatenate(cells)
        ids_all = np.concatenate(ids)
        payload_all = np.concatenate(payloads)
        order = np.argsort(cells_all, kind="stable")
        self.ids = ids_all[order]
        self.payload = payload_all[order]
        counts = np.bincount(cells_all, minlength=self.nlist)
        self.offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)

    def cell_slices(self, cells: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        self.finalize()
        parts_i, parts_p = [], []
        for c in cells:
            lo, hi = self.offsets[c], self.offsets[c + 1]
            if hi > lo:
                parts_i.append(self.ids[lo:hi])
                parts_p.append(self.payload[lo:hi])
        if not parts_i:
            return np.empty(0, dtype=np.int64), None
        return np.concatenate(parts_i), np.concatenate(parts_p)

    @property
    def ntotal(self) -> int:
        self.finalize()
        return len(self.ids)


class IVFFlatIndex:
    kind = "ivf_flat"

    def __init__(self, dim: int, centroids: np.ndarray):
        self.dim = dim
        self.centroids = np.asarray(centroids, dtype=np.float32)
        self.nlist = len(self.centroids)
        self._lists = _CellLists(self.nlist)

    @classmethod
    def train(
        cls,
        vectors: np.ndarray,
        nlist: int,
        max_iters: int = 25,
        seed: int = 0,
        train_limit: int = 131072,
    ) -> "IVFFlatIndex":
        vectors = np.asarray(vectors, dtype=np.float32)
        if vectors.shape[0] < nlist:
            raise IndexTrainingError(
                f"need at least nlist={nlist} vectors to train, got {vectors.shape[0]}"
            )
        train_set = _subsample(vectors, max(nlist, train_limit), seed)
        centroids = train_kmeans(train_set, nlist, max_iters=max_iters, seed=seed)
        return cls(vectors.shape[1], centroids)

    def add(self, ids, vectors) -> None:
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float32))
        ids = np.atleast_1d(np.asarray(ids, dtype=np.int64))
        cells, _ = assign_to_centroids(vectors, self.centroids)
        self._lists.add(cells, ids, vectors)

    @property
    def ntotal(self) -> int:
        return self._lists.ntotal

    def list_sizes(self) -> np.ndarray:
        self._lists.finalize()
        return np.diff(self._lists.offsets)

    def search(self, query: np.ndarray, topk: int, nprobe: int) -> list[SearchResult]:
        if topk <= 0 or self.ntotal == 0:
            return []
        cells = _probe_order(self.centroids, query, nprobe)
        ids, vecs = self._lists.cell_slices(cells)
        if len(ids) == 0:
            return []
        scores = vecs @ np.asarray(query, dtype=np.float32)
        return top_results(ids, scores, topk)

    def to_arrays(self) -> dict[str, np.ndarray]:
        self._lists.finalize()
        return {
            "centroids": self.centroids,
            "offsets": self._lists.offsets,
            "ids": self._lists.ids,
            "vectors": self._lists.payload
            if self._lists.payload is not None
            else np.empty((0, self.dim), dtype=np.float32),
        }

    @classmethod
    def from_arrays(cls, dim: int, arrays: dict[str, np.ndarray]) -> "IVFFlatIndex":
        idx = cls(dim, arrays["centroids"])
        idx._lists.offsets = arrays["offsets"].astype(np.int64)
        idx._lists.ids = arrays["ids"].astype(np.int64)
        idx._lists.payload = arrays["vectors"].astype(np.float32)
        return idx


class IVFPQIndex:
    kind = "ivf_pq"

    def __init__(self, dim: int, centroids: np.ndarray, codebooks: np.ndarray):
        self.dim = dim
        self.centroids = np.asarray(centroids, dtype=np.float32)
        self.codebooks = np.asarray(codebooks, dtype=np.float32)
        self.nlist = len(self.centroids)
        self.m = self.codebooks.shape[0]
        self.ks = self.codebooks.shape[1]
        self._lists = _CellLists(self.nlist)

    @classmethod
    def train(
        cls,
        vectors: np.ndarray,
        nlist: int,
        m: int = 8,
        ks: int = 256,
        max_iters: int = 25,
        seed: int = 0,
        train_limit: int = 131072,
    ) -> "IVFPQIndex":
        vectors = np.asarray(vectors, dtype=np.float32)
        if vectors.shape[0] < nlist:
            raise IndexTrainingError(
                f"need at least nlist={nlist} vectors to train, got {vectors.shape[0]}"
            )
        train_set = _subsample(vectors, max(nlist, train_limit), seed)
        centroids = train_kmeans(train_set, nlist, max_iters=max_iters, seed=seed)
        codebooks = train_pq(train_set, m, ks, seed=seed, max_iters=max_iters)
        return cls(vectors.shape[1], centroids, codebooks)

    def add(self, ids, vectors) -> None:
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float32))
        ids = np.atleast_1d(np.asarray(ids, dtype=np.int64))
        cells, _ = assign_to_centroids(vectors, self.centroids)
        codes = pq_encode(self.codebooks, vectors)
        self._lists.add(cells, ids, codes)

    @property
    def ntotal(self) -> int:
        return self._lists.ntotal

    def search(self, query: np.ndarray, topk: int, nprobe: int) -> list[SearchResult]:
        if topk <= 0 or self.ntotal == 0:
            return []
        cells = _probe_order(self.centroids, query, nprobe)
        ids, codes = self._lists.cell_slices(cells)
        if len(ids) == 0:
            return []
        tables = adc_tables(self.codebooks, query)
        scores = adc_scores(tables, codes)
        return top_results(ids, scores, topk)

    def to_arrays(self) -> dict[str, np.ndarray]:
        self._lists.finalize()
        code_dtype = np.uint8 if self.ks <= 256 else np.uint16
        return {
            "centroids": self.centroids,
            "codebooks": self.codebooks,
            "offsets": self._lists.offsets,
            "ids": self._lists.ids,
            "codes": self._lists.payload
            if self._lists.payload is not None
            else np.empty((0, self.m), dtype=code_dtype),
        }

    @classmethod
    def from_arrays(cls, dim: int, arrays: dict[str, np.ndarray]) -> "IVFPQIndex":
        idx = cls(dim, arrays["centroids"], arrays["codebooks"])
        idx._lists.offsets = arrays["offsets"].astype(np.int64)
        idx._lists.ids = arrays["ids"].astype(np.int64)
        idx._lists.payload = arrays["codes"]
        return idx
