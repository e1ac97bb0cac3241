"""Project directory layout and the offline ingest -> extract -> index
pipeline.

A project is a portable folder:

    config.json           pipeline configuration (documented in README)
    catalog.json          media items + sampled frames/windows
    manifest.json         per-file (size, mtime) signatures for idempotence
    features/<sha>.npz    cached per-media extraction output
    indices/<stream>.npz  one vector index per stream
    records/<stream>.npz  vector id -> (media, time, bbox) provenance
    fts_meta.json         metadata full-text index
    fts_speech.json       transcript full-text index
    transcripts.json      transcript segment table
"""
from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .catalog import Catalog, MediaItem, MediaKind, SamplingConfig, build_catalog, scan_media
from .descfile import load_descriptor
from .engine import Engine, EngineConfig, VectorStream
from .errors import ConfigError
from .extract import ReferenceExtractor
from .fts import FtsIndex, MetadataDoc
from .index import FlatIndex, IVFFlatIndex, IVFPQIndex, default_nlist, default_nprobe
from .index.storage import load_index, save_index

CONFIG_FORMAT = "avsearch-config"
CONFIG_VERSION = 1

STREAMS = ("scene", "region", "face", "audio")

DEFAULT_CONFIG = {
    "format": CONFIG_FORMAT,
    "version": CONFIG_VERSION,
    "sampling": {"frame_rate_fps": 2.0, "window_sec": 4.0, "overlap_sec": 2.0},
    "extractor": {"type": "reference", "dim": 256, "seed": 0, "endpoint": None},
    "index": {"kind": "flat", "nlist": None, "nprobe": None, "m": 8, "ks": 256, "seed": 0},
    "thresholds": {"face": 0.5, "region_score": 0.1, "segment_gap_sec": None},
    "workers": 4,
    # first media id assigned during scan; lets shards of a partitioned
    # corpus keep globally unique, partition-stable ids
    "id_base": 0,
}


def init_project(project_dir: str | Path, overrides: dict | None = None) -> Path:
    project_dir = Path(project_dir)
    project_dir.mkdir(parents=True, exist_ok=True)
    config = json.loads(json.dumps(DEFAULT_CONFIG))
    for key, value in (overrides or {}).items():
        if isinstance(value, dict) and isinstance(config.get(key), dict):
            config[key].update(value)
        else:
            config[key] = value
    (project_dir / "config.json").write_text(json.dumps(config, indent=2))
    return project_dir


def load_config(project_dir: str | Path) -> dict:
    path = Path(project_dir) / "config.json"
    try:
        config = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if config.get("format") != CONFIG_FORMAT:
        raise ConfigError(f"{path} is not a project config")
    return config


def make_extractor(config: dict):
    ext = config.get("extractor", {})
    kind = ext.get("type", "reference")
    if kind == "reference":
        return ReferenceExtractor(dim=ext.get("dim", 256), seed=ext.get("seed", 0))
    if kind == "remote":
        from .remote import RemoteExtractor

        endpoint = ext.get("endpoint")
        if not endpoint:
            raise ConfigError("remote extractor requires an endpoint")
        return RemoteExtractor(endpoint)
    raise ConfigError(f"unknown extractor type {kind!r}")


@dataclass
class MediaFeatures:
    """Extraction output for one media item."""

    scene_t: np.ndarray
    scene_vecs: np.ndarray
    region_t: np.ndarray
    region_bbox: np.ndarray
    region_vecs: np.ndarray
    face_t: np.ndarray
    face_bbox: np.ndarray
    face_vecs: np.ndarray
    audio_start: np.ndarray
    audio_end: np.ndarray
    audio_vecs: np.ndarray
    transcript: list[dict]


def _empty_features(dim: int) -> MediaFeatures:
    f32 = lambda *shape: np.empty(shape, dtype=np.float32)  # noqa: E731
    f64 = lambda *shape: np.empty(shape, dtype=np.float64)  # noqa: E731
    return MediaFeatures(
        f64(0), f32(0, dim), f64(0), f64(0, 4), f32(0, dim),
        f64(0), f64(0, 4), f32(0, dim), f64(0), f64(0), f32(0, dim), [],
    )


def extract_media_features(
    item: MediaItem, sampling: SamplingConfig, extractor, region_score_threshold: float
) -> MediaFeatures:
    """Run the reference pipeline over one synthetic media item."""
    from .catalog import sample_audio_windows, sample_frames

    dim = extractor.dim
    feats = _empty_features(dim)
    if not item.path.endswith(".wisedesc"):
        return feats  # real decoders are out of scope; metadata still indexed
    desc = load_descriptor(item.path)

    scene_t, scene_vecs = [], []
    region_t, region_bbox, region_vecs = [], [], []
    face_t, face_bbox, face_vecs = [], [], []
    if item.kind in (MediaKind.IMAGE, MediaKind.VIDEO):
        for frame in sample_frames(item, sampling):
            t = frame.timestamp_sec
            text = desc.scene_text_at(t)
            if text.strip():
                scene_t.append(t)
                scene_vecs.append(extractor.embed_frame(text))
            for det in extractor.detect_regions(desc, t):
                if det.score >= region_score_threshold:
                    region_t.append(t)
                    region_bbox.append(det.bbox)
                    region_vecs.append(det.embedding)
            for det in extractor.detect_faces(desc, t):
                face_t.append(t)
                face_bbox.append(det.bbox)
                face_vecs.append(det.embedding)

    audio_start, audio_end, audio_vecs = [], [], []
    if item.kind in (MediaKind.VIDEO, MediaKind.AUDIO):
        for win in sample_audio_windows(item, sampling):
            text = desc.audio_text_in(win.start_sec, win.end_sec)
            if text.strip():
                audio_start.append(win.start_sec)
                audio_end.append(win.end_sec)
                audio_vecs.append(extractor.embed_audio_window(text))

    def stack(vals, dim2=None, dtype=np.float64):
        if not vals:
            if dim2 is None:
                return np.empty(0, dtype=dtype)
            return np.empty((0, dim2), dtype=dtype)
        return np.asarray(vals, dtype=dtype)

    vec = lambda vals: stack(vals, dim, np.float32)  # noqa: E731
    return MediaFeatures(
        stack(scene_t), vec(scene_vecs),
        stack(region_t), stack(region_bbox, 4), vec(region_vecs),
        stack(face_t), stack(face_bbox, 4), vec(face_vecs),
        stack(audio_start), stack(audio_end), vec(audio_vecs),
        [
            {"start": s.start_sec, "end": s.end_sec, "text": s.text}
            for s in extractor.transcribe(desc)
        ],
    )


def _feature_cache_path(project_dir: Path, media_path: str) -> Path:
    digest = hashlib.sha1(media_path.encode()).hexdigest()
    return project_dir / "features" / f"{digest}.npz"


def _save_features(path: Path, feats: MediaFeatures) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    transcript = json.dumps(feats.transcript).encode()
    np.savez(
        path,
        scene_t=feats.scene_t, scene_vecs=feats.scene_vecs,
        region_t=feats.region_t, region_bbox=feats.region_bbox,
        region_vecs=feats.region_vecs,
        face_t=feats.face_t, face_bbox=feats.face_bbox, face_vecs=feats.face_vecs,
        audio_start=feats.audio_start, audio_end=feats.audio_end,
        audio_vecs=feats.audio_vecs,
        transcript=np.frombuffer(transcript, dtype=np.uint8),
    )


def _load_features(path: Path) -> MediaFeatures:
    with np.load(path, allow_pickle=False) as z:
        transcript = json.loads(bytes(z["transcript"]).decode()) if z["transcript"].size else []
        return MediaFeatures(
            z["scene_t"], z["scene_vecs"],
            z["region_t"], z["region_bbox"], z["region_vecs"],
            z["face_t"], z["face_bbox"], z["face_vecs"],
            z["audio_start"], z["audio_end"], z["audio_vecs"],
            transcript,
        )


def _signature(path: str) -> dict:
    st = Path(path).stat()
    return {"size": st.st_size, "mtime": st.st_mtime}


@dataclass
class BuildReport:
    total_items: int
    new_items: int
    warnings: list[str]


def _build_one_index(vectors: np.ndarray, index_cfg: dict, dim: int):
    n = len(vectors)
    kind = index_cfg.get("kind", "flat")
    seed = index_cfg.get("seed", 0)
    if kind == "flat" or n == 0:
        index = FlatIndex(dim)
    elif kind in ("ivf_flat", "ivf_pq"):
        nlist = index_cfg.get("nlist") or default_nlist(n)
        nlist = max(1, min(nlist, n))
        if kind == "ivf_flat":
            index = IVFFlatIndex.train(vectors, nlist, seed=seed)
        else:
            m = index_cfg.get("m", 8)
            if dim % m != 0:
                raise ConfigError(f"pq m={m} must divide dim={dim}")
            index = IVFPQIndex.train(
                vectors, nlist, m=m, ks=index_cfg.get("ks", 256), seed=seed
            )
    else:
        raise ConfigError(f"unknown index kind {kind!r}")
    if n:
        index.add(np.arange(n, dtype=np.int64), vectors)
    return index


def build_project(project_dir: str | Path, media_root: str | Path) -> BuildReport:
    project_dir = Path(project_dir)
    config = load_config(project_dir)
    sampling = SamplingConfig.from_dict(config["sampling"])
    extractor = make_extractor(config)
    thresholds = config.get("thresholds", {})

    report = scan_media(media_root, start_id=int(config.get("id_base", 0)))
    warnings = [f"{w.path}: {w.reason}" for w in report.warnings]

    manifest_path = project_dir / "manifest.json"
    old_manifest = {}
    if manifest_path.exists():
        old_manifest = json.loads(manifest_path.read_text()).get("files", {})

    def process(item: MediaItem) -> tuple[MediaItem, MediaFeatures, bool]:
        sig = _signature(item.path)
        cache = _feature_cache_path(project_dir, item.path)
        if old_manifest.get(item.path) == sig and cache.exists():
            return item, _load_features(cache), False
        feats = extract_media_features(
            item, sampling, extractor, thresholds.get("region_score", 0.1)
        )
        _save_features(cache, feats)
        return item, feats, True

    workers = max(1, int(config.get("workers", 4)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        processed = list(pool.map(process, report.items))

    new_items = sum(1 for _, _, fresh in processed if fresh)
    catalog = build_catalog(report.items, sampling)
    catalog.save(project_dir / "catalog.json")

    # Assemble per-stream arrays across all media.
    dim = extractor.dim
    per_stream = {name: {"vecs": [], "media": [], "t0": [], "t1": [], "bbox": []}
                  for name in STREAMS}
    transcript_table: list[dict] = []
    interval = sampling.frame_interval_sec
    for item, feats, _ in processed:
        def push(name, vecs, t0, t1, bbox=None):
            s = per_stream[name]
            s["vecs"].append(vecs)
            s["media"].append(np.full(len(vecs), item.id, dtype=np.int64))
            s["t0"].append(t0)
            s["t1"].append(t1)
            if bbox is not None:
                s["bbox"].append(bbox)

        push("scene", feats.scene_vecs, feats.scene_t, feats.scene_t + interval)
        push("region", feats.region_vecs, feats.region_t,
             feats.region_t + interval, feats.region_bbox)
        push("face", feats.face_vecs, feats.face_t,
             feats.face_t + interval, feats.face_bbox)
        push("audio", feats.audio_vecs, feats.audio_start, feats.audio_end)
        for seg in feats.transcript:
            transcript_table.append({"media_id": item.id, **seg})

    index_cfg = config.get("index", {})
    (project_dir / "indices").mkdir(exist_ok=True)
    (project_dir / "records").mkdir(exist_ok=True)
    for name in STREAMS:
        s = per_stream[name]
        vecs = (
            np.concatenate(s["vecs"]) if s["vecs"] else np.empty((0, dim), np.float32)
        )
        index = _build_one_index(vecs, index_cfg, dim)
        modality = {"scene": "scene", "region": "region", "face": "face", "audio": "audio"}[name]
        save_index(index, project_dir / "indices" / f"{name}.npz",
                   extractor.descriptor(modality))
        records = {
            "media_ids": np.concatenate(s["media"]) if s["media"] else np.empty(0, np.int64),
            "t_starts": np.concatenate(s["t0"]) if s["t0"] else np.empty(0, np.float64),
            "t_ends": np.concatenate(s["t1"]) if s["t1"] else np.empty(0, np.float64),
        }
        if s["bbox"]:
            records["bboxes"] = np.concatenate(s["bbox"])
        np.savez(project_dir / "records" / f"{name}.npz", **records)

    meta_docs = [MetadataDoc(it.id, dict(it.metadata)) for it in report.items]
    FtsIndex.build(meta_docs).save(project_dir / "fts_meta.json")
    speech_docs = [
        MetadataDoc(i, {"text": seg["text"]}) for i, seg in enumerate(transcript_table)
    ]
    FtsIndex.build(speech_docs).save(project_dir / "fts_speech.json")
    (project_dir / "transcripts.json").write_text(json.dumps(transcript_table))

    manifest = {
        "files": {it.path: _signature(it.path) for it in report.items},
        "warnings": warnings,
    }
    manifest_path.write_text(json.dumps(manifest, indent=2))
    return BuildReport(len(report.items), new_items, warnings)


def load_engine(project_dir: str | Path) -> Engine:
    project_dir = Path(project_dir)
    config = load_config(project_dir)
    extractor = make_extractor(config)
    catalog = Catalog.load(project_dir / "catalog.json")
    index_cfg = config.get("index", {})

    streams = {}
    for name in STREAMS:
        index = load_index(
            project_dir / "indices" / f"{name}.npz", extractor.descriptor(name)
        )
        with np.load(project_dir / "records" / f"{name}.npz") as z:
            records = {k: z[k] for k in z.files}
        nprobe = None
        if index.kind in ("ivf_flat", "ivf_pq"):
            nprobe = index_cfg.get("nprobe") or default_nprobe(index.nlist)
            nprobe = max(1, min(nprobe, index.nlist))
        streams[name] = VectorStream(
            index=index,
            media_ids=records["media_ids"],
            t_starts=records["t_starts"],
            t_ends=records["t_ends"],
            bboxes=records.get("bboxes"),
            nprobe=nprobe,
        )

    thresholds = config.get("thresholds", {})
    engine_config = EngineConfig(
        face_threshold=thresholds.get("face", 0.5),
        region_score_threshold=thresholds.get("region_score", 0.1),
        segment_gap_sec=thresholds.get("segment_gap_sec"),
    )
    transcript_table = json.loads((project_dir / "transcripts.json").read_text())
    return Engine(
        catalog=catalog,
        extractor=extractor,
        streams=streams,
        meta_fts=FtsIndex.load(project_dir / "fts_meta.json"),
        speech_fts=FtsIndex.load(project_dir / "fts_speech.json"),
        transcript_table=transcript_table,
        config=engine_config,
    )
