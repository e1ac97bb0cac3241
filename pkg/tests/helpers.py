"""Shared fixtures: synthetic corpora and vector datasets."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def write_desc(path: Path, **doc) -> Path:
    path.write_text(json.dumps(doc))
    return path


def make_image_desc(path: Path, scene_text: str, metadata: dict | None = None) -> Path:
    return write_desc(
        path,
        kind="image",
        scene_text=[{"text": scene_text}],
        metadata=metadata or {},
    )


def make_video_desc(
    path: Path,
    duration: float,
    scene_text: list[dict] | None = None,
    audio_text: list[dict] | None = None,
    faces: list[dict] | None = None,
    objects: list[dict] | None = None,
    transcript: list[dict] | None = None,
    metadata: dict | None = None,
) -> Path:
    return write_desc(
        path,
        kind="video",
        duration_sec=duration,
        scene_text=scene_text or [],
        audio_text=audio_text or [],
        faces=faces or [],
        objects=objects or [],
        transcript=transcript or [],
        metadata=metadata or {},
    )


def gaussian_mixture(
    n: int, dim: int, n_clusters: int = 32, seed: int = 0
) -> np.ndarray:
    """Unit vectors drawn from a Gaussian mixture; deterministic."""
    rng = np.random.default_rng(seed)
    centers = rng.normal(size=(n_clusters, dim))
    assignment = rng.integers(n_clusters, size=n)
    data = centers[assignment] + 0.3 * rng.normal(size=(n, dim))
    data /= np.linalg.norm(data, axis=1, keepdims=True)
    return data.astype(np.float32)


def random_unit_vectors(n: int, dim: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    data = rng.normal(size=(n, dim))
    data /= np.linalg.norm(data, axis=1, keepdims=True)
    return data.astype(np.float32)


def brute_force_topk(vectors: np.ndarray, ids: np.ndarray, query: np.ndarray, topk: int):
    """Independent oracle: full scan + full Python sort by (-score, id).

    Scores are computed in float32 like the indices so that id-level
    comparisons are exact; only the selection path differs.
    """
    scores = vectors.astype(np.float32) @ query.astype(np.float32)
    order = sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))[:topk]
    return [(int(ids[i]), float(scores[i])) for i in order]


def free_port() -> int:
    import socket

    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class ServerThread:
    """Run an ASGI app under uvicorn in a daemon thread."""

    def __init__(self, app, port: int | None = None):
        import threading

        import uvicorn

        self.port = port or free_port()
        config = uvicorn.Config(
            app, host="127.0.0.1", port=self.port, log_level="error"
        )
        self.server = uvicorn.Server(config)
        self.thread = threading.Thread(target=self.server.run, daemon=True)

    @property
    def endpoint(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def start(self, timeout: float = 10.0):
        import time

        self.thread.start()
        deadline = time.time() + timeout
        while not self.server.started:
            if time.time() > deadline:
                raise RuntimeError("server did not start in time")
            time.sleep(0.02)
        return self

    def stop(self) -> None:
        self.server.should_exit = True
        self.thread.join(timeout=5)
