from __future__ import annotations

import click
import uvicorn

from .models import TokenHashModel
from .service import create_app


@click.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", "-p", default=8100, show_default=True,
              envvar="AVSEARCH_SIDECAR_PORT")
@click.option("--dim", default=256, show_default=True,
              help="Embedding dimension of the hosted model.")
@click.option("--seed", default=0, show_default=True,
              help="Hash seed of the hosted model.")
def main(host: str, port: int, dim: int, seed: int) -> None:
    """Serve an embedding-extraction endpoint."""
    app = create_app(TokenHashModel(dim=dim, seed=seed))
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
