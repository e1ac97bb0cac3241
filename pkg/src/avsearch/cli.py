"""Operator command line: project lifecycle, serving, and ad-hoc queries.

Exit codes: 0 success, 2 configuration error, 3 IO error, 4 extraction
endpoint unreachable.
"""
from __future__ import annotations

import json
import sys

import click
import uvicorn

from .engine import Query
from .errors import ConfigError, IndexFormatError, IngestError, RemoteExtractionError

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_EXTRACTOR = 4


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
def main() -> None:
    """Multimodal search engine over image/video/audio collections."""


@main.command()
@click.argument("project_dir", type=click.Path())
@click.option("--index-kind", type=click.Choice(["flat", "ivf_flat", "ivf_pq"]),
              default="flat", show_default=True)
@click.option("--extractor-endpoint", default=None,
              help="Use a remote extraction endpoint instead of the built-in extractor.")
@click.option("--dim", default=256, show_default=True, help="Embedding dimension.")
def init(project_dir: str, index_kind: str, extractor_endpoint: str | None, dim: int) -> None:
    """Create PROJECT_DIR with a default config.json."""
    from .project import init_project

    overrides: dict = {"index": {"kind": index_kind}, "extractor": {"dim": dim}}
    if extractor_endpoint:
        overrides["extractor"].update({"type": "remote", "endpoint": extractor_endpoint})
    path = init_project(project_dir, overrides)
    click.echo(f"initialized project at {path}")


@main.command()
@click.argument("project_dir", type=click.Path(exists=True))
@click.argument("media_root", type=click.Path())
def index(project_dir: str, media_root: str) -> None:
    """Ingest MEDIA_ROOT, extract features, and build all indices."""
    from .project import build_project

    try:
        report = build_project(project_dir, media_root)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    except RemoteExtractionError as exc:
        _fail(EXIT_EXTRACTOR, str(exc))
    except (IngestError, IndexFormatError, OSError) as exc:
        _fail(EXIT_IO, str(exc))
    for warning in report.warnings:
        click.echo(f"warning: {warning}", err=True)
    click.echo(
        f"indexed {report.total_items} items ({report.new_items} new items)"
    )


def _load_engine_or_die(project_dir: str):
    from .project import load_engine

    try:
        return load_engine(project_dir)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    except RemoteExtractionError as exc:
        _fail(EXIT_EXTRACTOR, str(exc))
    except (IndexFormatError, IngestError, OSError) as exc:
        _fail(EXIT_IO, str(exc))


@main.command()
@click.argument("project_dir", type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", "-p", default=8000, show_default=True, envvar="AVSEARCH_PORT")
@click.option("--shard-id", default="node", show_default=True)
@click.option("--static-dir", default=None, help="Directory of built UI assets to serve.")
def serve(project_dir: str, host: str, port: int, shard_id: str, static_dir: str | None) -> None:
    """Serve PROJECT_DIR as a standalone search node."""
    from .service import create_app

    engine = _load_engine_or_die(project_dir)
    app = create_app(engine, shard_id=shard_id, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.option("--shards", required=True,
              help="Comma-separated shard endpoints, e.g. http://h1:8001,http://h2:8002")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", "-p", default=8000, show_default=True, envvar="AVSEARCH_PORT")
@click.option("--timeout", default=2.0, show_default=True, help="Per-shard timeout (s).")
def aggregate(shards: str, host: str, port: int, timeout: float) -> None:
    """Serve an aggregator federating the given shard endpoints."""
    from .aggregator import Aggregator, create_aggregator_app

    agg = Aggregator(timeout_sec=timeout)
    for i, endpoint in enumerate(e.strip() for e in shards.split(",") if e.strip()):
        try:
            agg.register_shard(f"shard-{i:03d}", endpoint)
        except ConfigError as exc:
            _fail(EXIT_CONFIG, str(exc))
        except Exception as exc:
            _fail(EXIT_IO, f"cannot register shard {endpoint}: {exc}")
    uvicorn.run(create_aggregator_app(agg), host=host, port=port, log_level="warning")


@main.command()
@click.argument("project_dir", type=click.Path(exists=True))
@click.argument("text")
@click.option("--modality", "-m", default="scene", show_default=True,
              type=click.Choice(["scene", "object", "face", "audio", "speech", "metadata"]))
@click.option("--topk", "-k", default=10, show_default=True)
@click.option("--filter", "filters", multiple=True, help="field:value metadata filter.")
@click.option("--alpha", default=0.5, show_default=True)
def query(project_dir: str, text: str, modality: str, topk: int,
          filters: tuple[str, ...], alpha: float) -> None:
    """Run one query and print ranked results as JSON lines."""
    from .engine import parse_filters
    from .errors import EmptyQueryError

    engine = _load_engine_or_die(project_dir)
    parsed = []
    for entry in filters:
        if ":" not in entry:
            _fail(EXIT_CONFIG, f"filter {entry!r} is not field:value")
        f, v = entry.split(":", 1)
        parsed.append((f, v))
    clean, inline = parse_filters(text)
    if modality != "metadata":
        text = clean
        parsed.extend(inline)
    exemplar = None
    if modality == "face":
        exemplar = {"kind": "text", "data": text}
        text = None
    try:
        hits = engine.search(
            Query(modality=modality, text=text or None, exemplar=exemplar,
                  filters=parsed, alpha=alpha, topk=topk)
        )
    except EmptyQueryError as exc:
        _fail(EXIT_CONFIG, str(exc))
    for hit in hits:
        click.echo(json.dumps(hit.to_dict()))


if __name__ == "__main__":
    main()
