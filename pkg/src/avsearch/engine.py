"""Query orchestration across all six search modalities.

Holds the immutable per-collection state (catalog, vector streams, text
indices) and turns queries into ranked hits or temporal segments.  All
searches are read-only, so arbitrarily many can run concurrently.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .catalog import Catalog
from .errors import ConfigError, EmptyQueryError
from .extract import ReferenceExtractor, normalize
from .fts import FtsIndex, tokenize

SCENE = "scene"
OBJECT = "object"
FACE = "face"
AUDIO = "audio"
SPEECH = "speech"
METADATA = "metadata"

MODALITIES = (SCENE, OBJECT, FACE, AUDIO, SPEECH, METADATA)

_FILTER_RE = re.compile(r'(\w+):("[^"]*"|\S+)')


@dataclass
class Query:
    modality: str
    text: str | None = None
    exemplar: dict | None = None  # {"kind": "text"|"image"|"audio", "data": ...}
    filters: list[tuple[str, str]] = field(default_factory=list)
    alpha: float = 0.5
    topk: int = 10


@dataclass
class Hit:
    media_id: int
    score: float
    t_start: float | None = None
    t_end: float | None = None
    bbox: tuple[float, float, float, float] | None = None
    snippet: str | None = None

    def to_dict(self) -> dict:
        d = {"media_id": self.media_id, "score": self.score}
        if self.t_start is not None:
            d["t_start"] = self.t_start
            d["t_end"] = self.t_end
        if self.bbox is not None:
            d["bbox"] = list(self.bbox)
        if self.snippet is not None:
            d["snippet"] = self.snippet
        return d


@dataclass
class SegmentHit:
    media_id: int
    t_start: float
    t_end: float
    score: float
    support: int = 1

    def to_dict(self) -> dict:
        return {
            "media_id": self.media_id,
            "score": self.score,
            "t_start": self.t_start,
            "t_end": self.t_end,
            "support": self.support,
        }


@dataclass
class VectorStream:
    """One searchable embedding collection plus its provenance arrays."""

    index: object
    media_ids: np.ndarray
    t_starts: np.ndarray
    t_ends: np.ndarray
    bboxes: np.ndarray | None = None
    nprobe: int | None = None

    def search(self, qvec: np.ndarray, topk: int):
        if self.nprobe is not None:
            return self.index.search(qvec, topk, self.nprobe)
        return self.index.search(qvec, topk)


@dataclass
class EngineConfig:
    face_threshold: float = 0.5
    region_score_threshold: float = 0.1
    segment_gap_sec: float | None = None  # None -> 2x frame interval
    candidate_pool_min: int = 128
    candidate_pool_factor: int = 8
    min_similarity: float = 0.0  # vector hits must score strictly above this


def parse_filters(text: str) -> tuple[str, list[tuple[str, str]]]:
    """Pull `field:value` filter tokens out of query text."""
    filters = []

    def repl(match: re.Match) -> str:
        value = match.group(2).strip('"')
        filters.append((match.group(1), value))
        return " "

    clean = _FILTER_RE.sub(repl, text)
    return clean.strip(), filters


def compose_query_embedding(
    image_emb: np.ndarray, text_emb: np.ndarray, alpha: float = 0.5
) -> np.ndarray:
    """Normalized convex combination; the endpoints return their input
    bit-for-bit so composed search degenerates exactly to pure search."""
    if alpha <= 0.0:
        return image_emb
    if alpha >= 1.0:
        return text_emb
    return normalize(alpha * text_emb.astype(np.float64) + (1.0 - alpha) * image_emb)


def merge_frames_to_segments(
    hits: list[Hit], gap_sec: float, interval_sec: float
) -> list[SegmentHit]:
    """Join per-media runs of frame hits whose spacing is at most ``gap_sec``.

    Each input hit lands in exactly one segment; the segment spans the
    first timestamp to the last plus one sampling interval and scores as
    the best member.
    """
    by_media: dict[int, list[Hit]] = {}
    for h in hits:
        by_media.setdefault(h.media_id, []).append(h)

    segments: list[SegmentHit] = []
    for media_id in sorted(by_media):
        run = sorted(by_media[media_id], key=lambda h: h.t_start)
        start = run[0].t_start
        last = run[0].t_start
        best = run[0].score
        count = 1
        for h in run[1:]:
            if h.t_start - last <= gap_sec + 1e-9:
                last = h.t_start
                best = max(best, h.score)
                count += 1
            else:
                segments.append(SegmentHit(media_id, start, last + interval_sec, best, count))
                start = last = h.t_start
                best = h.score
                count = 1
        segments.append(SegmentHit(media_id, start, last + interval_sec, best, count))
    return segments


def merge_windows_to_segments(hits: list[Hit]) -> list[SegmentHit]:
    """Join overlapping or adjacent window hits per media."""
    by_media: dict[int, list[Hit]] = {}
    for h in hits:
        by_media.setdefault(h.media_id, []).append(h)

    segments: list[SegmentHit] = []
    for media_id in sorted(by_media):
        run = sorted(by_media[media_id], key=lambda h: (h.t_start, h.t_end))
        start, end = run[0].t_start, run[0].t_end
        best = run[0].score
        count = 1
        for h in run[1:]:
            if h.t_start <= end + 1e-9:
                end = max(end, h.t_end)
                best = max(best, h.score)
                count += 1
            else:
                segments.append(SegmentHit(media_id, start, end, best, count))
                start, end, best, count = h.t_start, h.t_end, h.score, 1
        segments.append(SegmentHit(media_id, start, end, best, count))
    return segments


def _sort_key(hit):
    t = hit.t_start if getattr(hit, "t_start", None) is not None else -1.0
    return (-hit.score, hit.media_id, t)


def rank_and_truncate(hits: list, topk: int) -> list:
    return sorted(hits, key=_sort_key)[: max(0, topk)]


class Engine:
    def __init__(
        self,
        catalog: Catalog,
        extractor: ReferenceExtractor,
        streams: dict[str, VectorStream],
        meta_fts: FtsIndex,
        speech_fts: FtsIndex,
        transcript_table: list[dict],
        config: EngineConfig | None = None,
    ):
        self.catalog = catalog
        self.extractor = extractor
        self.streams = streams
        self.meta_fts = meta_fts
        self.speech_fts = speech_fts
        self.transcript_table = transcript_table
        self.config = config or EngineConfig()

    # -- query embedding ---------------------------------------------------

    def _embed_payload(self, payload: dict) -> np.ndarray:
        # Synthetic exemplars carry their content as text regardless of kind.
        return self.extractor.embed_text(str(payload["data"]))

    def _query_vector(self, q: Query) -> np.ndarray:
        if q.exemplar is not None and q.text:
            return compose_query_embedding(
                self._embed_payload(q.exemplar),
                self.extractor.embed_text(q.text),
                q.alpha,
            )
        if q.exemplar is not None:
            return self._embed_payload(q.exemplar)
        if q.text:
            return self.extractor.embed_text(q.text)
        raise EmptyQueryError("query needs text or an exemplar")

    def _pool(self, topk: int) -> int:
        return max(topk * self.config.candidate_pool_factor, self.config.candidate_pool_min)

    def _gap_sec(self) -> float:
        if self.config.segment_gap_sec is not None:
            return self.config.segment_gap_sec
        return 2.0 * self.catalog.sampling.frame_interval_sec

    # -- modality searches -------------------------------------------------

    def search(self, q: Query) -> list:
        if q.modality not in MODALITIES:
            raise ConfigError(f"unknown modality {q.modality!r}")
        handler = {
            SCENE: self.search_scene,
            OBJECT: self.search_objects,
            FACE: self.search_faces,
            AUDIO: self.search_audio,
            SPEECH: self.search_speech,
            METADATA: self.search_metadata,
        }[q.modality]
        return handler(q)

    def _stream_hits(self, stream_name: str, qvec: np.ndarray, pool: int) -> list[Hit]:
        stream = self.streams.get(stream_name)
        if stream is None:
            return []
        hits = []
        for res in stream.search(qvec, pool):
            if res.score <= self.config.min_similarity:
                continue
            i = res.id
            hits.append(
                Hit(
                    media_id=int(stream.media_ids[i]),
                    score=res.score,
                    t_start=float(stream.t_starts[i]),
                    t_end=float(stream.t_ends[i]),
                    bbox=None
                    if stream.bboxes is None
                    else tuple(float(v) for v in stream.bboxes[i]),
                )
            )
        return hits

    def search_scene(self, q: Query) -> list[SegmentHit]:
        qvec = self._query_vector(q)
        hits = self._stream_hits("scene", qvec, self._pool(q.topk))
        hits = self.apply_metadata_filter(hits, q.filters)
        interval = self.catalog.sampling.frame_interval_sec
        segments = merge_frames_to_segments(hits, self._gap_sec(), interval)
        return rank_and_truncate(segments, q.topk)

    def search_objects(self, q: Query) -> list[Hit]:
        qvec = self._query_vector(q)
        hits = self._stream_hits("region", qvec, self._pool(q.topk))
        hits = self.apply_metadata_filter(hits, q.filters)
        return rank_and_truncate(hits, q.topk)

    def search_faces(self, q: Query) -> list[SegmentHit]:
        if q.exemplar is None:
            raise EmptyQueryError("face search needs a face exemplar")
        if q.text:
            return self.search_face_in_scene(q.exemplar, q.text, q.topk)
        qvec = self._embed_payload(q.exemplar)
        hits = self._stream_hits("face", qvec, self._pool(q.topk))
        hits = [h for h in hits if h.score >= self.config.face_threshold]
        hits = self.apply_metadata_filter(hits, q.filters)
        interval = self.catalog.sampling.frame_interval_sec
        segments = merge_frames_to_segments(hits, self._gap_sec(), interval)
        return rank_and_truncate(segments, q.topk)

    def search_audio(self, q: Query) -> list[SegmentHit]:
        qvec = self._query_vector(q)
        hits = self._stream_hits("audio", qvec, self._pool(q.topk))
        hits = self.apply_metadata_filter(hits, q.filters)
        segments = merge_windows_to_segments(hits)
        return rank_and_truncate(segments, q.topk)

    def search_speech(self, q: Query) -> list[Hit]:
        if not q.text:
            raise EmptyQueryError("speech search needs query text")
        hits = []
        for seg_id, score in self.speech_fts.query(q.text):
            seg = self.transcript_table[seg_id]
            hits.append(
                Hit(
                    media_id=seg["media_id"],
                    score=score,
                    t_start=seg["start"],
                    t_end=seg["end"],
                    snippet=seg["text"],
                )
            )
        hits = self.apply_metadata_filter(hits, q.filters)
        return rank_and_truncate(hits, q.topk)

    def search_metadata(self, q: Query) -> list[Hit]:
        text = q.text or ""
        clean, inline_filters = parse_filters(text)
        filters = list(q.filters) + inline_filters
        if clean.strip():
            scored = self.meta_fts.query(clean)
            hits = [Hit(media_id=d, score=s) for d, s in scored]
        elif filters:
            hits = [
                Hit(media_id=it.id, score=1.0)
                for it in sorted(self.catalog.items, key=lambda it: it.id)
            ]
        else:
            raise EmptyQueryError("metadata search needs query text or filters")
        hits = self.apply_metadata_filter(hits, filters)
        return rank_and_truncate(hits, q.topk)

    # -- composition -------------------------------------------------------

    def search_face_in_scene(
        self, face_exemplar: dict, scene_text: str, topk: int
    ) -> list[SegmentHit]:
        """Face hits restricted to the time they co-occur with a scene match;
        the intersected segment gets the weaker of the two scores."""
        pool = self._pool(topk)
        face_segs = self.search_faces(Query(FACE, exemplar=face_exemplar, topk=pool))
        scene_segs = self.search_scene(Query(SCENE, text=scene_text, topk=pool))
        by_media: dict[int, list[SegmentHit]] = {}
        for s in scene_segs:
            by_media.setdefault(s.media_id, []).append(s)
        out = []
        for f in face_segs:
            for s in by_media.get(f.media_id, []):
                t0 = max(f.t_start, s.t_start)
                t1 = min(f.t_end, s.t_end)
                if t1 > t0:
                    out.append(
                        SegmentHit(
                            f.media_id,
                            t0,
                            t1,
                            min(f.score, s.score),
                            min(f.support, s.support),
                        )
                    )
        return rank_and_truncate(out, topk)

    # -- filtering ---------------------------------------------------------

    def apply_metadata_filter(
        self, hits: list, filters: list[tuple[str, str]]
    ) -> list:
        """Keep hits whose media metadata matches every (field, value) by
        case-insensitive token equality; input order is preserved."""
        if not filters:
            return hits
        out = []
        for h in hits:
            try:
                item = self.catalog.item_by_id(h.media_id)
            except KeyError:
                continue
            ok = all(
                tokenize(item.metadata.get(f, "")) == tokenize(v)
                for f, v in filters
            )
            if ok:
                out.append(h)
        return out

    # -- introspection -----------------------------------------------------

    def counts(self) -> dict[str, int]:
        out = {"media": len(self.catalog.items)}
        for name, stream in self.streams.items():
            out[f"{name}_vectors"] = len(stream.media_ids)
        out["transcript_segments"] = len(self.transcript_table)
        return out
