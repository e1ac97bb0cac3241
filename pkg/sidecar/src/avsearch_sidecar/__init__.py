"""Extraction sidecar: a standalone HTTP service that turns batched
payloads into embeddings for any search node speaking the wire protocol.

The engine that calls this service never sees model internals — only the
(name, version, dim) identity advertised on /info.  Models are therefore
deployment configuration: the bundled token-hash model reproduces the
search engine's built-in reference extractor bit-for-bit, and a neural
model drops in by implementing the same two-method interface.
"""
from .models import EmbeddingModel, TokenHashModel
from .service import create_app

__all__ = ["EmbeddingModel", "TokenHashModel", "create_app"]
__version__ = "0.1.0"
