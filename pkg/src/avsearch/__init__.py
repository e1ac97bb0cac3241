"""Self-contained multimodal search engine for image, video, and audio
collections: temporal sampling, pluggable embedding extraction, flat and
inverted-file vector indices, full-text metadata search, composite
queries, and scatter-gather federation."""

from .catalog import (
    AudioWindow,
    Catalog,
    Frame,
    MediaItem,
    MediaKind,
    SamplingConfig,
    build_catalog,
    sample_audio_windows,
    sample_frames,
    scan_media,
)
from .engine import (
    Engine,
    EngineConfig,
    Hit,
    Query,
    SegmentHit,
    compose_query_embedding,
    merge_frames_to_segments,
    merge_windows_to_segments,
    rank_and_truncate,
)
from .extract import (
    ExtractorDescriptor,
    ReferenceExtractor,
    RegionDetection,
    TranscriptSegment,
    normalize,
)
from .fts import FtsIndex, MetadataDoc, tokenize
from .index import (
    FlatIndex,
    IVFFlatIndex,
    IVFPQIndex,
    SearchResult,
    load_index,
    pq_decode,
    pq_encode,
    save_index,
    train_kmeans,
    train_pq,
)
from .project import build_project, init_project, load_engine

__version__ = "0.1.0"
