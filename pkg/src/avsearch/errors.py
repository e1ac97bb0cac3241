"""Exception hierarchy shared across the engine."""


class AVSearchError(Exception):
    """Base class for all engine errors."""


class ConfigError(AVSearchError):
    """Invalid or inconsistent configuration."""


class IngestError(AVSearchError):
    """Media discovery or sampling failed fatally."""


class InvalidKindError(AVSearchError):
    """Operation applied to a media item of the wrong kind."""


class EmptyQueryError(AVSearchError):
    """Query text tokenized to nothing."""


class ExtractorMismatchError(AVSearchError):
    """Query-side and index-side extractor (name, version) differ."""


class IndexTrainingError(AVSearchError):
    """Not enough data (or bad parameters) to train an index."""


class IndexFormatError(AVSearchError):
    """Persisted index/catalog file is malformed or from an unknown version."""


class RemoteExtractionError(AVSearchError):
    """Remote extraction batch failed after retries."""


class FederationError(AVSearchError):
    """No shard produced a response."""
