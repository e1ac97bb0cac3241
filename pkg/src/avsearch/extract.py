"""Feature extraction: shared embedding spaces for text, frames, regions,
faces, and audio windows.

The deterministic reference extractor hashes lowercase alphanumeric tokens
into a fixed-dimension space and L2-normalizes the counted one-hot sum.
Text queries and synthetic media descriptions therefore share the space by
construction.  Hash collisions are accepted; the hash seed is fixed so
vectors are bit-stable across runs and machines.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

import numpy as np

from .descfile import MediaDescriptor
from .errors import EmptyQueryError, ExtractorMismatchError

UNIT_NORM_TOL = 1e-6

Modality = str  # "scene" | "region" | "face" | "audio"


@dataclass(frozen=True)
class ExtractorDescriptor:
    name: str
    modality: Modality
    dim: int
    version: str

    @property
    def identity(self) -> tuple[str, str]:
        return (self.name, self.version)


@dataclass
class RegionDetection:
    bbox: tuple[float, float, float, float]
    score: float
    embedding: np.ndarray


@dataclass(frozen=True)
class TranscriptSegment:
    start_sec: float
    end_sec: float
    text: str


def check_compatible(index_side: ExtractorDescriptor, query_side: ExtractorDescriptor) -> None:
    if index_side.identity != query_side.identity:
        raise ExtractorMismatchError(
            f"index built with {index_side.identity}, query embedded by {query_side.identity}"
        )


def normalize(vec: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vec))
    if norm == 0 or not np.isfinite(norm):
        raise ValueError("cannot normalize zero or non-finite vector")
    return (vec / norm).astype(np.float32)


_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize_text(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class ReferenceExtractor:
    """Deterministic test-grade extractor over token-hash embeddings."""

    NAME = "reference-hash"
    VERSION = "1"

    def __init__(self, dim: int = 256, seed: int = 0):
        self.dim = dim
        self.seed = seed
        self._index_cache: dict[str, int] = {}

    def descriptor(self, modality: Modality) -> ExtractorDescriptor:
        return ExtractorDescriptor(self.NAME, modality, self.dim, self.VERSION)

    def _token_index(self, token: str) -> int:
        idx = self._index_cache.get(token)
        if idx is None:
            digest = hashlib.blake2b(
                f"{self.seed}:{token}".encode(), digest_size=8
            ).digest()
            idx = int.from_bytes(digest, "big") % self.dim
            self._index_cache[token] = idx
        return idx

    def embed_text(self, text: str) -> np.ndarray:
        tokens = tokenize_text(text)
        if not tokens:
            raise EmptyQueryError("text contains no tokens")
        vec = np.zeros(self.dim, dtype=np.float64)
        for tok in tokens:
            vec[self._token_index(tok)] += 1.0
        return normalize(vec)

    # Synthetic media carry their content as text, so every modality below
    # funnels through embed_text.

    def embed_frame(self, frame_text: str) -> np.ndarray:
        return self.embed_text(frame_text)

    def embed_audio_window(self, window_text: str) -> np.ndarray:
        return self.embed_text(window_text)

    def embed_face_identity(self, identity: str) -> np.ndarray:
        return self.embed_text(identity)

    def detect_regions(self, desc: MediaDescriptor, t: float) -> list[RegionDetection]:
        return [
            RegionDetection(o.bbox, o.score, self.embed_text(o.text))
            for o in desc.objects_at(t)
        ]

    def detect_faces(self, desc: MediaDescriptor, t: float) -> list[RegionDetection]:
        return [
            RegionDetection(f.bbox, 1.0, self.embed_face_identity(f.identity))
            for f in desc.faces_at(t)
        ]

    def transcribe(self, desc: MediaDescriptor) -> list[TranscriptSegment]:
        segs = [
            TranscriptSegment(s.start, s.end, s.text) for s in desc.transcript
        ]
        return sorted(segs, key=lambda s: s.start_sec)
