"""Build a small collection and query it across every modality.

Walks the full offline-then-online lifecycle in one script: write a few
synthetic media descriptions, index them into a project directory, and
run scene / object / face / audio / speech / metadata queries against
the resulting engine.

    python3 demos/01_build_and_search.py
"""
import json
import tempfile
from pathlib import Path

from avsearch.engine import Query
from avsearch.project import build_project, init_project, load_engine

workdir = Path(tempfile.mkdtemp(prefix="avsearch-demo-"))
media = workdir / "media"
media.mkdir()

# Media files are JSON descriptions of what a neural extractor *would*
# see; the built-in extractor embeds their text deterministically.
(media / "rider.wisedesc").write_text(json.dumps({
    "kind": "image",
    "scene_text": [{"text": "a horse rider on a beach"}],
    "metadata": {"title": "rider", "country": "Spain"},
}))
(media / "newsreel.wisedesc").write_text(json.dumps({
    "kind": "video",
    "duration_sec": 12.0,
    "scene_text": [{"start": 0, "end": 12, "text": "a steam train at a station"}],
    "objects": [{"start": 2, "end": 8, "text": "locomotive",
                 "bbox": [0.1, 0.3, 0.6, 0.9], "score": 0.9}],
    "faces": [{"start": 4, "end": 9, "identity": "conductor",
               "bbox": [0.7, 0.1, 0.9, 0.4]}],
    "audio_text": [{"start": 0, "end": 6, "text": "whistle and steam"}],
    "transcript": [{"start": 5.0, "end": 7.5, "text": "all aboard please"}],
    "metadata": {"title": "newsreel 1938", "country": "Germany"},
}))

project = workdir / "project"
init_project(project)
report = build_project(project, media)
print(f"indexed {report.total_items} items into {project}\n")

engine = load_engine(project)

queries = [
    Query("scene", text="horse on a beach"),
    Query("object", text="locomotive"),
    Query("face", exemplar={"kind": "text", "data": "conductor"}),
    Query("audio", text="whistle"),
    Query("speech", text="all aboard"),
    Query("metadata", text="newsreel"),
    Query("scene", text="train", filters=[("country", "Germany")]),
]
for q in queries:
    label = f"{q.modality}: {q.text or q.exemplar['data']}"
    if q.filters:
        label += f"  [{', '.join(f'{f}={v}' for f, v in q.filters)}]"
    print(label)
    for hit in engine.search(q):
        print(f"   {hit.to_dict()}")
    print()
