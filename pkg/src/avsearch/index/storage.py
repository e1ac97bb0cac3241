"""Versioned on-disk container for every index kind.

An index file is an .npz archive whose `meta` entry is a JSON header
{magic, version, kind, dim, metric, extractor}; the remaining entries are
the index's arrays.  Loading refuses files whose extractor identity does
not match the caller's expectation.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import ExtractorMismatchError, IndexFormatError
from ..extract import ExtractorDescriptor
from .flat import FlatIndex
from .ivf import IVFFlatIndex, IVFPQIndex

MAGIC = "avsearch-index"
FORMAT_VERSION = 1

_KINDS = {
    FlatIndex.kind: FlatIndex,
    IVFFlatIndex.kind: IVFFlatIndex,
    IVFPQIndex.kind: IVFPQIndex,
}


def save_index(index, path: str | Path, extractor: ExtractorDescriptor | None = None) -> None:
    meta = {
        "magic": MAGIC,
        "version": FORMAT_VERSION,
        "kind": index.kind,
        "dim": index.dim,
        "metric": "ip",
        "extractor": None
        if extractor is None
        else {
            "name": extractor.name,
            "version": extractor.version,
            "modality": extractor.modality,
            "dim": extractor.dim,
        },
    }
    arrays = index.to_arrays()
    np.savez(path, meta=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8), **arrays)


def load_index(path: str | Path, expected_extractor: ExtractorDescriptor | None = None):
    try:
        with np.load(path, allow_pickle=False) as archive:
            data = {k: archive[k] for k in archive.files}
    except (OSError, ValueError) as exc:
        raise IndexFormatError(f"cannot read index {path}: {exc}") from exc
    if "meta" not in data:
        raise IndexFormatError(f"{path}: missing header")
    meta = json.loads(bytes(data.pop("meta")).decode())
    if meta.get("magic") != MAGIC:
        raise IndexFormatError(f"{path} is not an index file")
    if meta.get("version") != FORMAT_VERSION:
        raise IndexFormatError(f"unsupported index version {meta.get('version')}")
    kind = meta.get("kind")
    if kind not in _KINDS:
        raise IndexFormatError(f"unknown index kind {kind!r}")
    stored = meta.get("extractor")
    if expected_extractor is not None:
        if stored is None or (stored["name"], stored["version"]) != expected_extractor.identity:
            raise ExtractorMismatchError(
                f"{path}: index extractor {stored} does not match "
                f"{expected_extractor.identity}"
            )
    index = _KINDS[kind].from_arrays(int(meta["dim"]), data)
    index.extractor_meta = stored
    return index
