"""Server side of the extraction wire protocol, backed by any local
extractor.  Lets a plain node act as an extraction sidecar for others and
doubles as the conformance target for the protocol client tests."""
from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .errors import EmptyQueryError
from .extract import ReferenceExtractor


def create_extract_app(extractor: ReferenceExtractor) -> FastAPI:
    app = FastAPI(title="avsearch-extractor")

    @app.get("/info")
    def info() -> dict:
        return {
            "name": extractor.NAME,
            "version": extractor.VERSION,
            "dim": extractor.dim,
            "modalities": ["scene", "region", "face", "audio"],
        }

    @app.post("/extract")
    def extract(body: dict):
        wanted = body.get("extractor", {})
        if (
            wanted.get("name", extractor.NAME) != extractor.NAME
            or wanted.get("version", extractor.VERSION) != extractor.VERSION
        ):
            return JSONResponse(
                status_code=409,
                content={
                    "error": "extractor_mismatch",
                    "detail": f"this endpoint serves {(extractor.NAME, extractor.VERSION)}",
                },
            )
        results = []
        for item in body.get("items", []):
            try:
                payload = item.get("payload", "")
                emb = extractor.embed_text(str(payload))
                results.append(
                    {"id": item.get("id"), "ok": True, "embedding": emb.tolist()}
                )
            except (EmptyQueryError, ValueError) as exc:
                results.append(
                    {"id": item.get("id"), "ok": False, "error": str(exc)}
                )
        return {"results": results}

    return app
