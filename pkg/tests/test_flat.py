import numpy as np

from avsearch.index import FlatIndex

from helpers import brute_force_topk, random_unit_vectors


def test_standard_basis_exact_match():
    idx = FlatIndex(3)
    idx.add([1, 2, 3], np.eye(3, dtype=np.float32))
    results = idx.search(np.array([0, 1, 0], dtype=np.float32), 3)
    assert results[0].id == 2
    assert results[0].score == 1.0
    assert [r.score for r in results] == sorted((r.score for r in results), reverse=True)


def test_empty_index():
    idx = FlatIndex(4)
    assert idx.search(np.ones(4, dtype=np.float32), 5) == []


def test_topk_zero():
    idx = FlatIndex(2)
    idx.add([0], [[1.0, 0.0]])
    assert idx.search(np.array([1.0, 0.0]), 0) == []


def test_fewer_results_than_topk():
    idx = FlatIndex(2)
    idx.add([0, 1], [[1.0, 0.0], [0.0, 1.0]])
    assert len(idx.search(np.array([1.0, 0.0]), 10)) == 2


def test_matches_brute_force_oracle():
    data = random_unit_vectors(1000, 16, seed=11)
    ids = np.arange(1000)
    idx = FlatIndex(16)
    idx.add(ids, data)
    queries = random_unit_vectors(20, 16, seed=12)
    for q in queries:
        got = [(r.id, r.score) for r in idx.search(q, 25)]
        want = brute_force_topk(data, ids, q, 25)
        assert [g[0] for g in got] == [w[0] for w in want]
        np.testing.assert_allclose(
            [g[1] for g in got], [w[1] for w in want], rtol=0, atol=1e-6
        )


def test_tie_break_by_ascending_id():
    idx = FlatIndex(2)
    v = np.array([1.0, 0.0], dtype=np.float32)
    idx.add([9, 3, 7], [v, v, v])
    results = idx.search(v, 3)
    assert [r.id for r in results] == [3, 7, 9]
