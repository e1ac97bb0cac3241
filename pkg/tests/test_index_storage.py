import numpy as np
import pytest

from avsearch.errors import ExtractorMismatchError, IndexFormatError
from avsearch.extract import ExtractorDescriptor
from avsearch.index import (
    FlatIndex,
    IVFFlatIndex,
    IVFPQIndex,
    load_index,
    save_index,
)

from helpers import random_unit_vectors

DESC = ExtractorDescriptor("reference-hash", "scene", 16, "1")


def build_all(data, ids):
    flat = FlatIndex(16)
    flat.add(ids, data)
    ivf = IVFFlatIndex.train(data, nlist=8, seed=0)
    ivf.add(ids, data)
    pq = IVFPQIndex.train(data, nlist=8, m=4, ks=32, seed=0)
    pq.add(ids, data)
    return {"flat": flat, "ivf_flat": ivf, "ivf_pq": pq}


@pytest.fixture(scope="module")
def indices():
    data = random_unit_vectors(400, 16, seed=51)
    return build_all(data, np.arange(400))


@pytest.mark.parametrize("kind", ["flat", "ivf_flat", "ivf_pq"])
def test_round_trip_preserves_search(tmp_path, indices, kind):
    index = indices[kind]
    path = tmp_path / f"{kind}.npz"
    save_index(index, path, DESC)
    loaded = load_index(path, DESC)
    queries = random_unit_vectors(100, 16, seed=52)
    for q in queries:
        if kind == "flat":
            before, after = index.search(q, 15), loaded.search(q, 15)
        else:
            before = index.search(q, 15, nprobe=3)
            after = loaded.search(q, 15, nprobe=3)
        assert [(r.id, r.score) for r in before] == [(r.id, r.score) for r in after]


def test_extractor_mismatch_refused(tmp_path, indices):
    path = tmp_path / "x.npz"
    save_index(indices["flat"], path, DESC)
    other = ExtractorDescriptor("reference-hash", "scene", 16, "2")
    with pytest.raises(ExtractorMismatchError):
        load_index(path, other)


def test_garbage_file_rejected(tmp_path):
    path = tmp_path / "bogus.npz"
    path.write_bytes(b"not an archive")
    with pytest.raises(IndexFormatError):
        load_index(path)


def test_wrong_magic_rejected(tmp_path):
    path = tmp_path / "other.npz"
    np.savez(path, meta=np.frombuffer(b'{"magic": "something-else"}', dtype=np.uint8))
    with pytest.raises(IndexFormatError):
        load_index(path)
