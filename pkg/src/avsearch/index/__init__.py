"""Trained nearest-neighbour indices over unit vectors."""
from .flat import FlatIndex, SearchResult, top_results
from .ivf import IVFFlatIndex, IVFPQIndex, default_nlist, default_nprobe
from .kmeans import assign_to_centroids, quantization_objective, train_kmeans
from .pq import adc_scores, adc_tables, pq_decode, pq_encode, train_pq
from .storage import load_index, save_index

__all__ = [
    "FlatIndex",
    "IVFFlatIndex",
    "IVFPQIndex",
    "SearchResult",
    "top_results",
    "default_nlist",
    "default_nprobe",
    "assign_to_centroids",
    "quantization_objective",
    "train_kmeans",
    "train_pq",
    "pq_encode",
    "pq_decode",
    "adc_tables",
    "adc_scores",
    "load_index",
    "save_index",
]
