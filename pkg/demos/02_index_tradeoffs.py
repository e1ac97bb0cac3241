"""Compare the three index kinds on the same vectors.

Flat is exact; IVF-Flat trades recall for speed via cell probing; IVF-PQ
additionally compresses vectors to a few bytes.  This script measures
recall@10 against the flat index and bytes per vector at several nprobe
settings.

    python3 demos/02_index_tradeoffs.py
"""
import time

import numpy as np

from avsearch.index import FlatIndex, IVFFlatIndex, IVFPQIndex

rng = np.random.default_rng(0)
n, dim = 100_000, 64
centers = rng.normal(size=(32, dim))
data = centers[rng.integers(32, size=n)] + 0.3 * rng.normal(size=(n, dim))
data = (data / np.linalg.norm(data, axis=1, keepdims=True)).astype(np.float32)
ids = np.arange(n, dtype=np.int64)
queries = data[rng.choice(n, size=50, replace=False)]

flat = FlatIndex(dim)
flat.add(ids, data)
exact = [{r.id for r in flat.search(q, 10)} for q in queries]

print(f"{n} vectors, dim {dim}, nlist 256\n")
print(f"{'index':12} {'nprobe':>6} {'recall@10':>10} {'ms/query':>9} {'bytes/vec':>10}")

for name, index, bytes_per_vec in [
    ("ivf_flat", IVFFlatIndex.train(data, 256, seed=1), dim * 4),
    # exact-duplicate queries make top-10 a nearest-noise problem, which
    # product codes compress away; more subspaces buy recall back
    ("ivf_pq m=8", IVFPQIndex.train(data, 256, m=8, ks=256, seed=1), 8),
    ("ivf_pq m=32", IVFPQIndex.train(data, 256, m=32, ks=256, seed=1), 32),
]:
    index.add(ids, data)
    for nprobe in (1, 4, 16, 64):
        t0 = time.perf_counter()
        got = [{r.id for r in index.search(q, 10, nprobe=nprobe)} for q in queries]
        ms = (time.perf_counter() - t0) / len(queries) * 1000
        recall = np.mean([len(g & e) / 10 for g, e in zip(got, exact)])
        print(f"{name:12} {nprobe:>6} {recall:>10.3f} {ms:>9.2f} {bytes_per_vec:>10}")
    print()
