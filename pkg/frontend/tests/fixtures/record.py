"""Record real /search responses for the UI tests.

Builds a small project with the search engine package, serves it, and
captures responses verbatim.  Re-run from the repository root after any
response-shape change:

    python3 frontend/tests/fixtures/record.py
"""
from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

HERE = Path(__file__).resolve().parent
ROOT = HERE.parents[2]
sys.path.insert(0, str(ROOT / "tests"))

from fastapi.testclient import TestClient  # noqa: E402

from avsearch.aggregator import Aggregator  # noqa: E402
from avsearch.project import build_project, init_project, load_engine  # noqa: E402
from avsearch.service import create_app  # noqa: E402

from helpers import ServerThread, make_image_desc, make_video_desc  # noqa: E402


def build_corpus(media: Path) -> None:
    make_image_desc(media / "a.wisedesc", "a dog on a beach", {"title": "beach dog"})
    make_image_desc(media / "b.wisedesc", "a dog in the city", {"title": "city dog"})
    make_video_desc(
        media / "c.wisedesc",
        duration=12.0,
        scene_text=[{"start": 0, "end": 12, "text": "a dog in snow"}],
        objects=[{"start": 0, "end": 12, "text": "dog",
                  "bbox": [0.25, 0.25, 0.75, 0.75], "score": 0.9}],
        transcript=[{"start": 2.0, "end": 4.0, "text": "such a good dog"}],
        metadata={"title": "dog video", "country": "Germany"},
    )


def main() -> None:
    tmp = Path(tempfile.mkdtemp())
    media = tmp / "media"
    media.mkdir()
    build_corpus(media)
    project = tmp / "project"
    init_project(project)
    build_project(project, media)
    engine = load_engine(project)
    client = TestClient(create_app(engine, shard_id="fixture-node"))

    def record(name: str, resp) -> None:
        (HERE / name).write_text(json.dumps(resp.json(), indent=2) + "\n")
        print(f"recorded {name}")

    record("search_scene.json",
           client.get("/search", params={"q": "dog", "modality": "scene", "topk": 10}))
    record("search_object.json",
           client.get("/search", params={"q": "dog", "modality": "object", "topk": 10}))
    record("search_speech.json",
           client.get("/search", params={"q": "good dog", "modality": "speech"}))
    record("info.json", client.get("/info"))

    # degraded response: two live shards, one killed before the fan-out
    s1 = ServerThread(create_app(engine, shard_id="shard-000")).start()
    s2 = ServerThread(create_app(engine, shard_id="shard-001")).start()
    agg = Aggregator(timeout_sec=2.0)
    agg.register_shard("shard-000", s1.endpoint)
    agg.register_shard("shard-001", s2.endpoint)
    s2.stop()
    out = agg.fanout_search({"q": "dog", "modality": "scene"}, 10)
    payload = {"results": out.results, "degraded": out.degraded,
               "failed_shards": out.failed_shards, "latency_ms": 0.0}
    (HERE / "search_degraded.json").write_text(json.dumps(payload, indent=2) + "\n")
    print("recorded search_degraded.json")
    s1.stop()


if __name__ == "__main__":
    main()
