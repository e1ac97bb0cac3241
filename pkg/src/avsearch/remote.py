"""Client side of the batched extraction wire protocol.

POST /extract with
    {"extractor": {"name", "version", "modality"},
     "items": [{"id", "payload_kind": "text"|"image"|"audio", "payload"}]}
returns
    {"results": [{"id", "ok", "embedding" | "regions" | "error"}]}

Results are order-aligned with the request items; per-item failures leave
the rest of the batch intact.  Binary payloads travel base64-encoded.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import httpx
import numpy as np

from .errors import ExtractorMismatchError, RemoteExtractionError
from .extract import ExtractorDescriptor


@dataclass
class ExtractItem:
    id: int
    payload_kind: str
    payload: str


@dataclass
class ExtractResult:
    id: int
    ok: bool
    embedding: np.ndarray | None = None
    regions: list[dict] | None = None
    error: str | None = None


class RemoteExtractionClient:
    def __init__(
        self,
        endpoint: str,
        retries: int = 3,
        backoff_sec: float = 0.2,
        timeout: float = 30.0,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.retries = retries
        self.backoff_sec = backoff_sec
        self._client = httpx.Client(timeout=timeout)

    def info(self) -> dict:
        resp = self._client.get(f"{self.endpoint}/info")
        resp.raise_for_status()
        return resp.json()

    def extract_batch(
        self, descriptor: ExtractorDescriptor, items: list[ExtractItem]
    ) -> list[ExtractResult]:
        body = {
            "extractor": {
                "name": descriptor.name,
                "version": descriptor.version,
                "modality": descriptor.modality,
            },
            "items": [
                {"id": it.id, "payload_kind": it.payload_kind, "payload": it.payload}
                for it in items
            ],
        }
        resp = self._post_with_retries(body)
        if resp.status_code == 409:
            raise ExtractorMismatchError(resp.json().get("detail", "extractor mismatch"))
        if resp.status_code != 200:
            raise RemoteExtractionError(
                f"extraction endpoint returned {resp.status_code}: {resp.text[:200]}"
            )
        raw = resp.json().get("results", [])
        if len(raw) != len(items) or any(
            r.get("id") != it.id for r, it in zip(raw, items)
        ):
            raise RemoteExtractionError("results not order-aligned with request items")
        out = []
        for r in raw:
            if r.get("ok"):
                emb = r.get("embedding")
                out.append(
                    ExtractResult(
                        r["id"],
                        True,
                        embedding=None if emb is None else np.asarray(emb, dtype=np.float32),
                        regions=r.get("regions"),
                    )
                )
            else:
                out.append(ExtractResult(r["id"], False, error=r.get("error", "unknown")))
        return out

    def _post_with_retries(self, body: dict) -> httpx.Response:
        last_exc: Exception | None = None
        for attempt in range(self.retries):
            try:
                return self._client.post(f"{self.endpoint}/extract", json=body)
            except httpx.TransportError as exc:
                last_exc = exc
                if attempt + 1 < self.retries:
                    time.sleep(self.backoff_sec * (2**attempt))
        raise RemoteExtractionError(
            f"extraction endpoint unreachable after {self.retries} attempts: {last_exc}"
        )

    def close(self) -> None:
        self._client.close()


class RemoteExtractor:
    """Extractor façade backed by a remote /extract endpoint.

    Mirrors the reference extractor's surface so the indexing pipeline and
    query engine never care where embeddings come from.  Synthetic media
    descriptions still provide the content; only the embedding function is
    remote.
    """

    def __init__(self, endpoint: str, client: RemoteExtractionClient | None = None):
        self.client = client or RemoteExtractionClient(endpoint)
        info = self.client.info()
        self.name = info["name"]
        self.version = info["version"]
        self.dim = int(info["dim"])

    def descriptor(self, modality: str) -> ExtractorDescriptor:
        return ExtractorDescriptor(self.name, modality, self.dim, self.version)

    def _embed(self, modality: str, text: str):
        results = self.extract_texts(modality, [text])
        res = results[0]
        if not res.ok:
            raise RemoteExtractionError(res.error or "extraction failed")
        return res.embedding

    def extract_texts(self, modality: str, texts: list[str]) -> list[ExtractResult]:
        items = [ExtractItem(i, "text", t) for i, t in enumerate(texts)]
        return self.client.extract_batch(self.descriptor(modality), items)

    def embed_text(self, text: str):
        return self._embed("scene", text)

    def embed_frame(self, frame_text: str):
        return self._embed("scene", frame_text)

    def embed_audio_window(self, window_text: str):
        return self._embed("audio", window_text)

    def embed_face_identity(self, identity: str):
        return self._embed("face", identity)

    def detect_regions(self, desc, t: float):
        from .extract import RegionDetection

        return [
            RegionDetection(o.bbox, o.score, self._embed("region", o.text))
            for o in desc.objects_at(t)
        ]

    def detect_faces(self, desc, t: float):
        from .extract import RegionDetection

        return [
            RegionDetection(f.bbox, 1.0, self._embed("face", f.identity))
            for f in desc.faces_at(t)
        ]

    def transcribe(self, desc):
        from .extract import TranscriptSegment

        return sorted(
            (TranscriptSegment(s.start, s.end, s.text) for s in desc.transcript),
            key=lambda s: s.start_sec,
        )
