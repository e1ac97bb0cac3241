"""HTTP surface of the sidecar.

GET  /info     -> {name, version, dim, modalities}
POST /extract  -> {"results": [{id, ok, embedding | error}, ...]}

Requests name the extractor identity they were built against; a mismatch
is refused with 409 so a node can never silently mix embedding spaces.
Failures are per-item: one bad payload does not fail the batch.
"""
from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .models import EmbeddingModel

MODALITIES = ["scene", "region", "face", "audio"]


def create_app(model: EmbeddingModel) -> FastAPI:
    app = FastAPI(title="avsearch-sidecar")

    @app.get("/info")
    def info() -> dict:
        return {
            "name": model.name,
            "version": model.version,
            "dim": model.dim,
            "modalities": MODALITIES,
        }

    @app.post("/extract")
    def extract(body: dict):
        wanted = body.get("extractor", {})
        if (
            wanted.get("name", model.name) != model.name
            or wanted.get("version", model.version) != model.version
        ):
            return JSONResponse(
                status_code=409,
                content={
                    "error": "extractor_mismatch",
                    "detail": f"this endpoint serves {(model.name, model.version)}",
                },
            )
        results = []
        for item in body.get("items", []):
            try:
                emb = model.embed(
                    item.get("payload_kind", "text"), item.get("payload", "")
                )
                results.append(
                    {"id": item.get("id"), "ok": True, "embedding": emb.tolist()}
                )
            except (ValueError, TypeError) as exc:
                results.append(
                    {"id": item.get("id"), "ok": False, "error": str(exc)}
                )
        return {"results": results}

    return app
