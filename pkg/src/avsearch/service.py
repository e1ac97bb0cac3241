"""JSON-over-HTTP front door for a search node.

GET/POST /search mirror the engine exactly: the response order and content
are the engine's output serialized field-for-field, plus `degraded` and a
server-side `latency_ms`.  /media serves bytes (with Range support) and
catalog records for playback; /info describes the node to aggregators.
"""
from __future__ import annotations

import os
import time
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .engine import MODALITIES, Engine, Query, parse_filters
from .errors import AVSearchError, ConfigError, EmptyQueryError


def _error(status: int, error: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": error, "detail": detail})


def _parse_filter_params(raw: list[str]) -> list[tuple[str, str]]:
    filters = []
    for entry in raw:
        if ":" not in entry:
            raise ConfigError(f"filter {entry!r} is not field:value")
        f, v = entry.split(":", 1)
        filters.append((f, v))
    return filters


def run_query(engine: Engine, q: Query) -> list[dict]:
    return [hit.to_dict() for hit in engine.search(q)]


def create_app(
    engine: Engine,
    shard_id: str = "node",
    role: str = "standalone",
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="avsearch-node")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=os.environ.get("AVSEARCH_CORS_ORIGINS", "*").split(","),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.engine = engine

    def handle_search(
        q: str | None,
        modality: str,
        topk: int,
        filters: list[tuple[str, str]],
        alpha: float,
        exemplar: dict | None,
    ):
        if modality not in MODALITIES:
            return _error(400, "bad_modality", f"modality must be one of {MODALITIES}")
        if topk < 0:
            return _error(400, "bad_topk", "topk must be >= 0")
        text = q
        if text:
            clean, inline = parse_filters(text)
            if modality != "metadata":
                # metadata search parses its own inline filters
                text = clean or None
                filters = filters + inline
        started = time.perf_counter()
        try:
            query = Query(
                modality=modality,
                text=text,
                exemplar=exemplar,
                filters=filters,
                alpha=alpha,
                topk=topk,
            )
            results = run_query(app.state.engine, query) if topk > 0 else []
        except EmptyQueryError as exc:
            return _error(400, "empty_query", str(exc))
        except AVSearchError as exc:
            return _error(400, "bad_request", str(exc))
        latency_ms = (time.perf_counter() - started) * 1000.0
        return {"results": results, "degraded": False, "latency_ms": latency_ms}

    @app.get("/search")
    def search_get(request: Request, q: str | None = None, modality: str = "scene",
                   topk: int = 10, alpha: float = 0.5):
        try:
            filters = _parse_filter_params(request.query_params.getlist("filters"))
        except ConfigError as exc:
            return _error(400, "bad_filter", str(exc))
        return handle_search(q, modality, topk, filters, alpha, None)

    @app.post("/search")
    def search_post(body: dict):
        filters = [(f["field"], f["value"]) for f in body.get("filters", [])]
        return handle_search(
            body.get("q"),
            body.get("modality", "scene"),
            int(body.get("topk", 10)),
            filters,
            float(body.get("alpha", 0.5)),
            body.get("exemplar"),
        )

    @app.get("/media/{media_id}/info")
    def media_info(media_id: int):
        try:
            item = app.state.engine.catalog.item_by_id(media_id)
        except KeyError:
            return _error(404, "not_found", f"no media with id {media_id}")
        return {
            "id": item.id,
            "kind": item.kind.value,
            "path": item.path,
            "duration_sec": item.duration_sec,
            "metadata": item.metadata,
        }

    @app.get("/media/{media_id}")
    def media_bytes(media_id: int, request: Request):
        try:
            item = app.state.engine.catalog.item_by_id(media_id)
        except KeyError:
            return _error(404, "not_found", f"no media with id {media_id}")
        path = Path(item.path)
        if not path.exists():
            return _error(404, "not_found", f"media file missing: {path}")
        range_header = request.headers.get("range")
        if range_header:
            size = path.stat().st_size
            try:
                unit, spec = range_header.split("=", 1)
                lo_s, hi_s = spec.split("-", 1)
                lo = int(lo_s) if lo_s else 0
                hi = int(hi_s) if hi_s else size - 1
                if unit.strip() != "bytes" or lo > hi:
                    raise ValueError
            except ValueError:
                return _error(416, "bad_range", f"cannot satisfy range {range_header!r}")
            hi = min(hi, size - 1)
            with open(path, "rb") as fh:
                fh.seek(lo)
                chunk = fh.read(hi - lo + 1)
            return Response(
                content=chunk,
                status_code=206,
                media_type="application/octet-stream",
                headers={
                    "Content-Range": f"bytes {lo}-{hi}/{size}",
                    "Accept-Ranges": "bytes",
                },
            )
        return FileResponse(path, headers={"Accept-Ranges": "bytes"})

    @app.get("/info")
    def info():
        eng: Engine = app.state.engine
        desc = eng.extractor.descriptor("scene")
        return {
            "shard_id": shard_id,
            "role": role,
            "extractor": {"name": desc.name, "version": desc.version, "dim": desc.dim},
            "index_kinds": {name: s.index.kind for name, s in eng.streams.items()},
            "counts": eng.counts(),
        }

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
