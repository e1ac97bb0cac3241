"""Scatter-gather search over multiple shards, with graceful degradation.

Builds two shard projects over disjoint halves of a corpus, serves each
in-process, federates them through the aggregator, then stops one shard
to show the degraded-but-available behaviour.

    python3 demos/03_federation.py
"""
import json
import sys
import tempfile
from pathlib import Path


from avsearch.aggregator import Aggregator
from avsearch.project import build_project, init_project, load_engine
from avsearch.service import create_app

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from helpers import ServerThread  # noqa: E402

workdir = Path(tempfile.mkdtemp(prefix="avsearch-fed-"))
texts = ["a horse in snow", "a dog on a beach", "a steam train",
         "a city at night", "a boat on a river", "a tree in fog"]

servers = []
agg = Aggregator(timeout_sec=2.0)
for shard in range(2):
    media = workdir / f"media_{shard}"
    media.mkdir()
    for i, text in enumerate(texts[shard::2]):
        (media / f"item_{i}.wisedesc").write_text(json.dumps({
            "kind": "image", "scene_text": [{"text": text}], "metadata": {},
        }))
    project = workdir / f"project_{shard}"
    init_project(project)
    build_project(project, media)
    app = create_app(load_engine(project), shard_id=f"shard-{shard}")
    srv = ServerThread(app).start()
    servers.append(srv)
    agg.register_shard(f"shard-{shard}", srv.endpoint)
    print(f"shard-{shard} serving {len(texts[shard::2])} items at {srv.endpoint}")

print("\nfederated search for 'horse OR train themes':")
out = agg.fanout_search({"q": "horse train", "modality": "scene"}, 5)
for r in out.results:
    print(f"   {r['shard_id']}  media {r['media_id']}  score {r['score']:.3f}")

print("\nstopping shard-1 ...")
servers[1].stop()
out = agg.fanout_search({"q": "horse train", "modality": "scene"}, 5)
print(f"degraded={out.degraded}, failed_shards={out.failed_shards}")
for r in out.results:
    print(f"   {r['shard_id']}  media {r['media_id']}  score {r['score']:.3f}")

servers[0].stop()
