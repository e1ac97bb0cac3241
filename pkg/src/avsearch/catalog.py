"""Media discovery, temporal sampling, and the persisted catalog.

The catalog is the source of truth linking media files to their sampled
visual frames and audio windows.  It is built once per indexing run and
immutable afterwards.
"""
from __future__ import annotations

import json
import wave
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import IndexFormatError, IngestError, InvalidKindError

CATALOG_FORMAT = "avsearch-catalog"
CATALOG_VERSION = 1

IMAGE_EXTS = {".jpg", ".jpeg", ".png", ".webp"}
VIDEO_EXTS = {".mp4", ".mkv", ".webm", ".mov"}
AUDIO_EXTS = {".mp3", ".wav", ".flac", ".ogg"}
DESC_EXT = ".wisedesc"


class MediaKind(str, Enum):
    IMAGE = "image"
    VIDEO = "video"
    AUDIO = "audio"


@dataclass(frozen=True)
class SamplingConfig:
    """Temporal sampling parameters for both streams.

    Frames are taken at ``frame_rate_fps``; audio is cut into windows of
    ``window_sec`` seconds starting every ``hop_sec`` seconds.
    """

    frame_rate_fps: float = 2.0
    window_sec: float = 4.0
    overlap_sec: float = 2.0

    def __post_init__(self) -> None:
        if self.frame_rate_fps <= 0:
            raise ValueError("frame_rate_fps must be positive")
        if self.window_sec <= 0:
            raise ValueError("window_sec must be positive")
        if not (0 <= self.overlap_sec < self.window_sec):
            raise ValueError("overlap_sec must satisfy 0 <= overlap < window")

    @property
    def hop_sec(self) -> float:
        return self.window_sec - self.overlap_sec

    @property
    def frame_interval_sec(self) -> float:
        return 1.0 / self.frame_rate_fps

    def to_dict(self) -> dict:
        return {
            "frame_rate_fps": self.frame_rate_fps,
            "window_sec": self.window_sec,
            "overlap_sec": self.overlap_sec,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SamplingConfig":
        return cls(**d)


@dataclass
class MediaItem:
    id: int
    kind: MediaKind
    path: str
    duration_sec: float
    metadata: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Frame:
    media_id: int
    timestamp_sec: float


@dataclass(frozen=True)
class AudioWindow:
    media_id: int
    start_sec: float
    end_sec: float


@dataclass
class ScanWarning:
    path: str
    reason: str


@dataclass
class ScanReport:
    items: list[MediaItem]
    warnings: list[ScanWarning]


def _probe_wav_duration(path: Path) -> float:
    with wave.open(str(path), "rb") as wf:
        rate = wf.getframerate()
        if rate <= 0:
            raise ValueError("bad sample rate")
        return wf.getnframes() / rate


def probe_media(path: Path) -> tuple[MediaKind, float]:
    """Infer (kind, duration_sec) for a file, raising on unprobeable input."""
    ext = path.suffix.lower()
    if ext == DESC_EXT:
        from .descfile import load_descriptor

        desc = load_descriptor(path)
        return MediaKind(desc.kind), desc.duration_sec
    if ext in IMAGE_EXTS:
        return MediaKind.IMAGE, 0.0
    if ext == ".wav":
        return MediaKind.AUDIO, _probe_wav_duration(path)
    if ext in AUDIO_EXTS:
        raise ValueError(f"no duration probe for {ext} containers")
    if ext in VIDEO_EXTS:
        raise ValueError(f"no duration probe for {ext} containers")
    raise ValueError(f"unknown extension {ext}")


def scan_media(root: str | Path, start_id: int = 0) -> ScanReport:
    """Discover media under ``root``, lexicographically sorted by path.

    Unknown extensions and files whose duration cannot be probed are
    skipped with a warning; an unreadable root is fatal.
    """
    root = Path(root)
    if not root.is_dir():
        raise IngestError(f"media root is not a readable directory: {root}")

    known = IMAGE_EXTS | VIDEO_EXTS | AUDIO_EXTS | {DESC_EXT}
    paths = sorted(p for p in root.rglob("*") if p.is_file())
    items: list[MediaItem] = []
    warnings: list[ScanWarning] = []
    next_id = start_id
    for p in paths:
        ext = p.suffix.lower()
        if ext not in known:
            warnings.append(ScanWarning(str(p), f"unknown extension {ext!r}"))
            continue
        try:
            kind, duration = probe_media(p)
        except Exception as exc:  # skip, never abort the scan
            warnings.append(ScanWarning(str(p), str(exc)))
            continue
        metadata: dict[str, str] = {}
        if ext == DESC_EXT:
            from .descfile import load_descriptor

            metadata = dict(load_descriptor(p).metadata)
        items.append(MediaItem(next_id, kind, str(p), duration, metadata))
        next_id += 1
    return ScanReport(items, warnings)


def sample_frames(item: MediaItem, config: SamplingConfig) -> list[Frame]:
    """Frame timestamps t_k = k / fps for all t_k strictly below the duration.

    Images yield exactly one frame at t=0.
    """
    if item.kind == MediaKind.AUDIO:
        raise InvalidKindError(f"cannot sample frames from audio item {item.id}")
    if item.kind == MediaKind.IMAGE:
        return [Frame(item.id, 0.0)]
    fps = config.frame_rate_fps
    frames = []
    k = 0
    while True:
        t = k / fps
        if t >= item.duration_sec - 1e-12:
            break
        frames.append(Frame(item.id, t))
        k += 1
    return frames


def sample_audio_windows(item: MediaItem, config: SamplingConfig) -> list[AudioWindow]:
    """Windows [s, min(s+W, D)] at hop H; a tail window is kept only when
    its length is at least H (the first window is always kept)."""
    if item.kind == MediaKind.IMAGE:
        raise InvalidKindError(f"cannot sample audio windows from image item {item.id}")
    d = item.duration_sec
    w, h = config.window_sec, config.hop_sec
    windows = []
    i = 0
    while True:
        s = i * h
        if s >= d - 1e-12:
            break
        e = min(s + w, d)
        if i == 0 or (e - s) >= h - 1e-12:
            windows.append(AudioWindow(item.id, s, e))
        i += 1
    return windows


@dataclass
class Catalog:
    """Immutable record of one indexing run: items plus their temporal units."""

    items: list[MediaItem]
    frames: list[Frame]
    windows: list[AudioWindow]
    sampling: SamplingConfig = field(default_factory=SamplingConfig)

    def item_by_id(self, media_id: int) -> MediaItem:
        return self._index()[media_id]

    def _index(self) -> dict[int, MediaItem]:
        if not hasattr(self, "_by_id"):
            self._by_id = {it.id: it for it in self.items}
        return self._by_id

    def save(self, path: str | Path) -> None:
        doc = {
            "format": CATALOG_FORMAT,
            "version": CATALOG_VERSION,
            "sampling": self.sampling.to_dict(),
            "items": [
                {
                    "id": it.id,
                    "kind": it.kind.value,
                    "path": it.path,
                    "duration_sec": it.duration_sec,
                    "metadata": it.metadata,
                }
                for it in self.items
            ],
            "frames": [[f.media_id, f.timestamp_sec] for f in self.frames],
            "windows": [[w.media_id, w.start_sec, w.end_sec] for w in self.windows],
        }
        Path(path).write_text(json.dumps(doc))

    @classmethod
    def load(cls, path: str | Path) -> "Catalog":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise IndexFormatError(f"cannot read catalog {path}: {exc}") from exc
        if doc.get("format") != CATALOG_FORMAT:
            raise IndexFormatError(f"{path} is not a catalog file")
        if doc.get("version") != CATALOG_VERSION:
            raise IndexFormatError(f"unsupported catalog version {doc.get('version')}")
        items = [
            MediaItem(
                d["id"], MediaKind(d["kind"]), d["path"], d["duration_sec"], d["metadata"]
            )
            for d in doc["items"]
        ]
        frames = [Frame(m, t) for m, t in doc["frames"]]
        windows = [AudioWindow(m, s, e) for m, s, e in doc["windows"]]
        return cls(items, frames, windows, SamplingConfig.from_dict(doc["sampling"]))


def build_catalog(
    items: list[MediaItem], config: SamplingConfig | None = None
) -> Catalog:
    """Sample every item and assemble the catalog."""
    config = config or SamplingConfig()
    frames: list[Frame] = []
    windows: list[AudioWindow] = []
    for it in items:
        if it.kind in (MediaKind.IMAGE, MediaKind.VIDEO):
            frames.extend(sample_frames(it, config))
        if it.kind in (MediaKind.VIDEO, MediaKind.AUDIO):
            windows.extend(sample_audio_windows(it, config))
    return Catalog(items, frames, windows, config)
