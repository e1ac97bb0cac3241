"""Full-text inverted index over metadata fields with tf-idf ranking.

Matching uses AND semantics: a document matches only if every query term
occurs in it (restricted to one field when a field is named).  Scores are
sum over terms of tf * ln(1 + N/df); ties break by ascending document id.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyQueryError, IndexFormatError

FTS_FORMAT = "avsearch-fts"
FTS_VERSION = 1

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercase, split on any non-alphanumeric run, drop empties."""
    return _TOKEN_RE.findall(text.lower())


@dataclass
class MetadataDoc:
    doc_id: int
    fields: dict[str, str] = field(default_factory=dict)


class FtsIndex:
    """Immutable after build; safe for concurrent read-only queries."""

    def __init__(self) -> None:
        # term -> doc_id -> field -> tf
        self._postings: dict[str, dict[int, dict[str, int]]] = {}
        self._doc_ids: set[int] = set()

    @classmethod
    def build(cls, docs: list[MetadataDoc]) -> "FtsIndex":
        idx = cls()
        for doc in docs:
            idx._doc_ids.add(doc.doc_id)
            for fname, text in doc.fields.items():
                for term in tokenize(text):
                    per_doc = idx._postings.setdefault(term, {})
                    per_field = per_doc.setdefault(doc.doc_id, {})
                    per_field[fname] = per_field.get(fname, 0) + 1
        return idx

    @property
    def ndocs(self) -> int:
        return len(self._doc_ids)

    def _idf(self, term: str) -> float:
        df = len(self._postings.get(term, {}))
        if df == 0:
            return 0.0
        return math.log(1.0 + self.ndocs / df)

    def query(self, text: str, field: str | None = None) -> list[tuple[int, float]]:
        terms = tokenize(text)
        if not terms:
            raise EmptyQueryError("query contains no terms")

        matching: set[int] | None = None
        for term in terms:
            per_doc = self._postings.get(term, {})
            if field is None:
                docs = set(per_doc)
            else:
                docs = {d for d, fields in per_doc.items() if field in fields}
            matching = docs if matching is None else (matching & docs)
            if not matching:
                return []

        scored = []
        for doc_id in matching:
            score = 0.0
            for term in terms:
                fields = self._postings[term][doc_id]
                tf = fields.get(field, 0) if field is not None else sum(fields.values())
                score += tf * self._idf(term)
            scored.append((doc_id, score))
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return scored

    def field_match(self, field: str, value: str) -> set[int]:
        """Doc ids whose ``field`` tokenizes exactly to the value's tokens."""
        terms = tokenize(value)
        if not terms:
            return set()
        candidates = {
            d
            for d, fields in self._postings.get(terms[0], {}).items()
            if field in fields
        }
        wanted = sorted(terms)
        out = set()
        for doc_id in candidates:
            if self._doc_field_terms(doc_id, field) == wanted:
                out.add(doc_id)
        return out

    def _doc_field_terms(self, doc_id: int, field: str) -> list[str]:
        # Term order is lost in the postings, so keep a bag comparison:
        # multiset equality of tokens.
        bag: dict[str, int] = {}
        for term, per_doc in self._postings.items():
            tf = per_doc.get(doc_id, {}).get(field)
            if tf:
                bag[term] = tf
        terms = []
        for term in sorted(bag):
            terms.extend([term] * bag[term])
        return terms

    def save(self, path: str | Path) -> None:
        doc = {
            "format": FTS_FORMAT,
            "version": FTS_VERSION,
            "doc_ids": sorted(self._doc_ids),
            "postings": {
                term: {str(d): fields for d, fields in per_doc.items()}
                for term, per_doc in self._postings.items()
            },
        }
        Path(path).write_text(json.dumps(doc))

    @classmethod
    def load(cls, path: str | Path) -> "FtsIndex":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise IndexFormatError(f"cannot read fts index {path}: {exc}") from exc
        if doc.get("format") != FTS_FORMAT:
            raise IndexFormatError(f"{path} is not an fts index")
        if doc.get("version") != FTS_VERSION:
            raise IndexFormatError(f"unsupported fts version {doc.get('version')}")
        idx = cls()
        idx._doc_ids = set(doc["doc_ids"])
        idx._postings = {
            term: {int(d): dict(fields) for d, fields in per_doc.items()}
            for term, per_doc in doc["postings"].items()
        }
        return idx
