"""Embedding model backends.

A model is anything with an identity (name, version, dim) and an
``embed(payload_kind, payload)`` method returning a unit-norm float32
vector.  The shipped backend is an independent implementation of the
token-hash scheme used by the search engine's built-in extractor, so a
node configured with a remote endpoint gets bit-identical vectors.
"""
from __future__ import annotations

import hashlib
import re
from typing import Protocol

import numpy as np

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class EmbeddingModel(Protocol):
    name: str
    version: str
    dim: int

    def embed(self, payload_kind: str, payload: str) -> np.ndarray: ...


class TokenHashModel:
    """Counted one-hot over blake2b-hashed lowercase tokens, L2-normalized.

    Synthetic media descriptions carry their content as text for every
    payload kind, so all kinds share one embedding path.
    """

    name = "reference-hash"
    version = "1"

    def __init__(self, dim: int = 256, seed: int = 0):
        self.dim = dim
        self.seed = seed

    def _token_index(self, token: str) -> int:
        digest = hashlib.blake2b(
            f"{self.seed}:{token}".encode(), digest_size=8
        ).digest()
        return int.from_bytes(digest, "big") % self.dim

    def embed(self, payload_kind: str, payload: str) -> np.ndarray:
        tokens = _TOKEN_RE.findall(str(payload).lower())
        if not tokens:
            raise ValueError("payload contains no tokens")
        vec = np.zeros(self.dim, dtype=np.float64)
        for tok in tokens:
            vec[self._token_index(tok)] += 1.0
        return (vec / np.linalg.norm(vec)).astype(np.float32)
