import itertools

import numpy as np
import pytest

from avsearch.errors import IndexTrainingError
from avsearch.index import (
    FlatIndex,
    IVFPQIndex,
    adc_scores,
    adc_tables,
    pq_decode,
    pq_encode,
    train_kmeans,
    train_pq,
)

from helpers import random_unit_vectors


def test_small_set_is_memorized():
    # fewer distinct vectors than codewords: codebooks can store them exactly
    data = random_unit_vectors(12, 8, seed=31)
    codebooks = train_pq(data, m=2, ks=256, seed=0)
    decoded = pq_decode(codebooks, pq_encode(codebooks, data))
    np.testing.assert_allclose(decoded, data, atol=1e-6)


def test_m_equal_one_is_plain_vq():
    data = random_unit_vectors(300, 8, seed=32)
    codebooks = train_pq(data, m=1, ks=16, seed=5)
    assert codebooks.shape == (1, 16, 8)
    vq = train_kmeans(data, 16, seed=5)
    np.testing.assert_allclose(codebooks[0], vq.astype(np.float32), atol=1e-6)


def test_quantization_error_is_optimal_over_codeword_choices():
    # brute-force oracle: enumerate every codeword combination on tiny m, ks
    data = random_unit_vectors(40, 4, seed=33)
    codebooks = train_pq(data, m=2, ks=4, seed=0)
    codes = pq_encode(codebooks, data)
    decoded = pq_decode(codebooks, codes)
    for i, v in enumerate(data):
        err = np.linalg.norm(v - decoded[i])
        for combo in itertools.product(range(4), repeat=2):
            candidate = np.concatenate([codebooks[0][combo[0]], codebooks[1][combo[1]]])
            assert err <= np.linalg.norm(v - candidate) + 1e-6


def test_adc_equals_decoded_dot():
    data = random_unit_vectors(500, 16, seed=34)
    codebooks = train_pq(data, m=4, ks=32, seed=1)
    codes = pq_encode(codebooks, data)
    decoded = pq_decode(codebooks, codes)
    for q in random_unit_vectors(10, 16, seed=35):
        tables = adc_tables(codebooks, q)
        scores = adc_scores(tables, codes)
        np.testing.assert_allclose(scores, decoded @ q, atol=1e-5)


def test_m_must_divide_dim():
    with pytest.raises(IndexTrainingError):
        train_pq(random_unit_vectors(10, 10), m=3)


class TestIVFPQ:
    def test_full_probe_with_memorizing_codebooks_equals_flat(self):
        # <= ks distinct vectors per subspace -> zero quantization error
        data = random_unit_vectors(100, 8, seed=36)
        ids = np.arange(100)
        index = IVFPQIndex.train(data, nlist=4, m=2, ks=256, seed=0)
        index.add(ids, data)
        flat = FlatIndex(8)
        flat.add(ids, data)
        for q in random_unit_vectors(10, 8, seed=37):
            got = index.search(q, 10, nprobe=4)
            want = flat.search(q, 10)
            assert [r.id for r in got] == [r.id for r in want]
            np.testing.assert_allclose(
                [r.score for r in got], [r.score for r in want], atol=1e-5
            )

    def test_topk_zero(self):
        data = random_unit_vectors(50, 8, seed=38)
        index = IVFPQIndex.train(data, nlist=2, m=2, ks=16, seed=0)
        index.add(np.arange(50), data)
        assert index.search(data[0], 0, nprobe=2) == []

    def test_lossy_scores_still_close(self):
        data = random_unit_vectors(2000, 32, seed=39)
        index = IVFPQIndex.train(data, nlist=16, m=8, ks=64, seed=0)
        index.add(np.arange(2000), data)
        decoded = pq_decode(index.codebooks, pq_encode(index.codebooks, data))
        q = random_unit_vectors(1, 32, seed=40)[0]
        for r in index.search(q, 20, nprobe=16):
            assert r.score == pytest.approx(float(decoded[r.id] @ q), abs=1e-5)
