"""Scatter-gather federation over shard nodes.

Each shard holds a disjoint subset of the collection and answers the same
/search protocol as a standalone node.  The aggregator fans a query out to
every registered shard concurrently, asks each for the full top-k, merges
by descending score (ties: shard_id, media_id, t_start ascending), and
flags the response degraded when any shard failed to answer in time.
Because every shard returns its own best top-k, no merged result can be
displaced by an unreturned shard item, so the merge is exact for exact
shard search.  Aggregators expose the same /search surface as nodes, so
they can themselves be aggregated.
"""
from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import httpx
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .errors import ConfigError, FederationError


@dataclass
class ShardDescriptor:
    shard_id: str
    endpoint: str
    status: str = "unknown"  # healthy | degraded | unreachable
    last_seen: float | None = None
    extractor: tuple[str, str] | None = None


@dataclass
class FanoutResponse:
    results: list[dict]
    degraded: bool
    failed_shards: list[str] = field(default_factory=list)


class ShardRegistry:
    """Thread-safe registry; queries read a consistent snapshot."""

    def __init__(self) -> None:
        self._shards: dict[str, ShardDescriptor] = {}
        self._lock = threading.Lock()

    def register(self, shard_id: str, endpoint: str, client: httpx.Client) -> ShardDescriptor:
        info = client.get(f"{endpoint.rstrip('/')}/info").json()
        ext = info.get("extractor", {})
        identity = (ext.get("name"), ext.get("version"))
        with self._lock:
            for other in self._shards.values():
                if other.extractor is not None and other.extractor != identity:
                    raise ConfigError(
                        f"shard {shard_id} advertises extractor {identity}, "
                        f"registry already holds {other.extractor}"
                    )
            desc = ShardDescriptor(
                shard_id, endpoint.rstrip("/"), "healthy", time.time(), identity
            )
            self._shards[shard_id] = desc
            return desc

    def snapshot(self) -> list[ShardDescriptor]:
        with self._lock:
            return list(self._shards.values())

    def update_status(self, shard_id: str, status: str) -> None:
        with self._lock:
            if shard_id in self._shards:
                self._shards[shard_id].status = status
                if status == "healthy":
                    self._shards[shard_id].last_seen = time.time()


def merge_shard_results(
    per_shard: list[tuple[str, list[dict]]], topk: int
) -> list[dict]:
    """Deterministic fold of already-sorted shard result lists."""
    merged = []
    for shard_id, results in per_shard:
        for r in results:
            tagged = dict(r)
            tagged["shard_id"] = shard_id
            merged.append(tagged)
    merged.sort(
        key=lambda r: (
            -r["score"],
            r["shard_id"],
            r["media_id"],
            r.get("t_start", -1.0),
        )
    )
    return merged[: max(0, topk)]


class Aggregator:
    def __init__(
        self,
        registry: ShardRegistry | None = None,
        timeout_sec: float = 2.0,
        retries: int = 1,
    ):
        self.registry = registry or ShardRegistry()
        self.timeout_sec = timeout_sec
        self.retries = retries
        self._client = httpx.Client(timeout=timeout_sec)

    def register_shard(self, shard_id: str, endpoint: str) -> ShardDescriptor:
        return self.registry.register(shard_id, endpoint, self._client)

    def health_check(self, shard: ShardDescriptor) -> str:
        try:
            resp = self._client.get(f"{shard.endpoint}/info")
            status = "healthy" if resp.status_code == 200 else "degraded"
        except httpx.TransportError:
            status = "unreachable"
        self.registry.update_status(shard.shard_id, status)
        return status

    def _ask_shard(self, shard: ShardDescriptor, body: dict) -> list[dict] | None:
        url = f"{shard.endpoint}/search"
        for attempt in range(self.retries + 1):
            try:
                resp = self._client.post(url, json=body)
                if resp.status_code == 200:
                    return resp.json().get("results", [])
            except httpx.TransportError:
                pass
            if attempt < self.retries:
                time.sleep(0.05)
        return None

    def fanout_search(self, body: dict, topk: int) -> FanoutResponse:
        shards = self.registry.snapshot()
        if not shards:
            raise FederationError("no shards registered")
        # each shard is asked for the full topk so the merge stays exact
        shard_body = dict(body)
        shard_body["topk"] = topk

        per_shard: list[tuple[str, list[dict]]] = []
        failed: list[str] = []
        with ThreadPoolExecutor(max_workers=max(1, len(shards))) as pool:
            futures = {
                pool.submit(self._ask_shard, shard, shard_body): shard
                for shard in shards
            }
            for fut, shard in futures.items():
                results = fut.result()
                if results is None:
                    failed.append(shard.shard_id)
                    self.registry.update_status(shard.shard_id, "unreachable")
                else:
                    per_shard.append((shard.shard_id, results))
                    self.registry.update_status(shard.shard_id, "healthy")
        if not per_shard:
            raise FederationError(f"no shard responded (failed: {failed})")
        per_shard.sort(key=lambda pair: pair[0])
        return FanoutResponse(
            results=merge_shard_results(per_shard, topk),
            degraded=bool(failed),
            failed_shards=sorted(failed),
        )


def create_aggregator_app(aggregator: Aggregator, shard_id: str = "aggregator") -> FastAPI:
    app = FastAPI(title="avsearch-aggregator")

    def run(body: dict):
        topk = int(body.get("topk", 10))
        started = time.perf_counter()
        try:
            fanned = aggregator.fanout_search(body, topk)
        except FederationError as exc:
            return JSONResponse(
                status_code=503, content={"error": "federation_error", "detail": str(exc)}
            )
        return {
            "results": fanned.results,
            "degraded": fanned.degraded,
            "failed_shards": fanned.failed_shards,
            "latency_ms": (time.perf_counter() - started) * 1000.0,
        }

    @app.post("/search")
    def search_post(body: dict):
        return run(body)

    @app.get("/search")
    def search_get(request: Request, q: str | None = None, modality: str = "scene",
                   topk: int = 10, alpha: float = 0.5):
        filters = []
        for entry in request.query_params.getlist("filters"):
            if ":" in entry:
                f, v = entry.split(":", 1)
                filters.append({"field": f, "value": v})
        return run(
            {"q": q, "modality": modality, "topk": topk, "alpha": alpha,
             "filters": filters}
        )

    @app.get("/info")
    def info():
        shards = aggregator.registry.snapshot()
        first = shards[0].extractor if shards else None
        return {
            "shard_id": shard_id,
            "role": "aggregator",
            "extractor": None
            if first is None
            else {"name": first[0], "version": first[1]},
            "shards": [
                {
                    "shard_id": s.shard_id,
                    "endpoint": s.endpoint,
                    "status": s.status,
                    "last_seen": s.last_seen,
                }
                for s in shards
            ],
        }

    return app
