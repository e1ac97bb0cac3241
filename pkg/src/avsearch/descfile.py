"""Synthetic `.wisedesc` media format.

A `.wisedesc` file is a JSON document describing a piece of media by its
textual content instead of pixels/samples, so the whole engine can be
exercised deterministically without decoders or neural models:

    {
      "kind": "image" | "video" | "audio",
      "duration_sec": 12.0,            // omitted or 0 for images
      "scene_text":  [{"start": 0, "end": 12, "text": "a horse on a beach"}],
      "objects":     [{"text": "hat", "bbox": [x0,y0,x1,y1],
                       "score": 0.9, "start": 0, "end": 12}],
      "faces":       [{"identity": "alice", "bbox": [x0,y0,x1,y1],
                       "start": 0, "end": 6}],
      "audio_text":  [{"start": 0, "end": 12, "text": "gunshot"}],
      "transcript":  [{"start": 1.0, "end": 2.5, "text": "wait what"}],
      "metadata":    {"title": "...", "country": "Germany"}
    }

`start`/`end` are seconds and may be omitted on images (the whole item is
one instant at t=0).  Bounding boxes are normalized to [0, 1].
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IngestError


@dataclass(frozen=True)
class TimedText:
    start: float
    end: float
    text: str


@dataclass(frozen=True)
class DescribedRegion:
    text: str
    bbox: tuple[float, float, float, float]
    score: float
    start: float
    end: float


@dataclass(frozen=True)
class DescribedFace:
    identity: str
    bbox: tuple[float, float, float, float]
    start: float
    end: float


@dataclass
class MediaDescriptor:
    kind: str
    duration_sec: float
    scene_text: list[TimedText] = field(default_factory=list)
    objects: list[DescribedRegion] = field(default_factory=list)
    faces: list[DescribedFace] = field(default_factory=list)
    audio_text: list[TimedText] = field(default_factory=list)
    transcript: list[TimedText] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def scene_text_at(self, t: float) -> str:
        return " ".join(s.text for s in self.scene_text if s.start <= t < s.end or
                        (self.kind == "image" and t == 0.0))

    def objects_at(self, t: float) -> list[DescribedRegion]:
        if self.kind == "image":
            return list(self.objects)
        return [o for o in self.objects if o.start <= t < o.end]

    def faces_at(self, t: float) -> list[DescribedFace]:
        if self.kind == "image":
            return list(self.faces)
        return [f for f in self.faces if f.start <= t < f.end]

    def audio_text_in(self, start: float, end: float) -> str:
        return " ".join(
            s.text for s in self.audio_text if s.start < end and start < s.end
        )


def _span(entry: dict, duration: float) -> tuple[float, float]:
    return float(entry.get("start", 0.0)), float(entry.get("end", max(duration, 0.0)))


def _bbox(raw) -> tuple[float, float, float, float]:
    x0, y0, x1, y1 = (float(v) for v in raw)
    if not (0 <= x0 < x1 <= 1 and 0 <= y0 < y1 <= 1):
        raise ValueError(f"bad normalized bbox {raw}")
    return (x0, y0, x1, y1)


def load_descriptor(path: str | Path) -> MediaDescriptor:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise IngestError(f"cannot parse {path}: {exc}") from exc

    kind = doc.get("kind")
    if kind not in ("image", "video", "audio"):
        raise IngestError(f"{path}: kind must be image/video/audio, got {kind!r}")
    duration = float(doc.get("duration_sec", 0.0))
    if kind == "image":
        duration = 0.0
    elif duration <= 0:
        raise IngestError(f"{path}: {kind} needs positive duration_sec")

    def timed(key: str) -> list[TimedText]:
        out = []
        for e in doc.get(key, []):
            s, t = _span(e, duration)
            out.append(TimedText(s, t, str(e["text"])))
        return out

    objects = []
    for e in doc.get("objects", []):
        s, t = _span(e, duration)
        objects.append(
            DescribedRegion(str(e["text"]), _bbox(e["bbox"]),
                            float(e.get("score", 1.0)), s, t)
        )
    faces = []
    for e in doc.get("faces", []):
        s, t = _span(e, duration)
        faces.append(DescribedFace(str(e["identity"]), _bbox(e["bbox"]), s, t))

    transcript = sorted(timed("transcript"), key=lambda seg: seg.start)
    for seg in transcript:
        if seg.start >= seg.end or not seg.text.strip():
            raise IngestError(f"{path}: bad transcript segment {seg}")

    return MediaDescriptor(
        kind=kind,
        duration_sec=duration,
        scene_text=timed("scene_text"),
        objects=objects,
        faces=faces,
        audio_text=timed("audio_text"),
        transcript=transcript,
        metadata={str(k): str(v) for k, v in doc.get("metadata", {}).items()},
    )
