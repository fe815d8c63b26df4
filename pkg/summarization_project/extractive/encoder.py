"""Sentence vectors: the built-in tf-idf encoder and the external embedding loader.

A document is encoded as a float64 array of shape ``(n_sentences, dim)``;
row ``i`` is the vector of sentence ``i``.
"""
import json
import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Dict, Mapping, Optional, Sequence

import numpy as np

from .corpus import Document
from .exceptions import (ConfigError, DataIOError, DimensionMismatch, EmptyCorpus,
                         FormatError, MissingDocument)

logger = logging.getLogger(__name__)


class TfIdfScope(str, Enum):
    PER_DOCUMENT = 'per-document'
    PER_CORPUS = 'per-corpus'


class EncoderKind(str, Enum):
    TFIDF = 'tfidf'
    EXTERNAL = 'external'


@dataclass(frozen=True)
class EncoderSpec:
    kind: EncoderKind = EncoderKind.TFIDF
    tfidf_scope: TfIdfScope = TfIdfScope.PER_DOCUMENT
    normalize: bool = True
    embeddings: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, 'kind', EncoderKind(self.kind))
        object.__setattr__(self, 'tfidf_scope', TfIdfScope(self.tfidf_scope))
        if self.kind is EncoderKind.EXTERNAL and not self.embeddings:
            raise ConfigError("the external encoder needs an embeddings file")

    @property
    def label(self):
        return self.kind.value

    def to_dict(self):
        return {
            'kind': self.kind.value,
            'tfidf_scope': self.tfidf_scope.value,
            'normalize': self.normalize,
            'embeddings': self.embeddings,
        }


@dataclass(frozen=True, eq=False)
class TfIdfModel:
    vocabulary: Mapping[str, int]
    idf: np.ndarray
    doc_count: int

    @property
    def dim(self):
        return len(self.vocabulary)


def _units(corpus: Sequence[Document], scope: TfIdfScope):
    if scope is TfIdfScope.PER_DOCUMENT:
        return [sentence.tokens for doc in corpus for sentence in doc.sentences]
    return [[token for sentence in doc.sentences for token in sentence.tokens] for doc in corpus]


def fit_tfidf(corpus: Sequence[Document], scope=TfIdfScope.PER_DOCUMENT) -> TfIdfModel:
    """Fit smoothed idf weights, ``ln((1 + N) / (1 + df)) + 1``.

    Under per-document scope every sentence counts as one idf unit, under
    per-corpus scope every document does.
    """
    units = _units(corpus, TfIdfScope(scope))
    if not units:
        raise EmptyCorpus("cannot fit tf-idf on an empty corpus")

    document_frequency = Counter()
    for unit in units:
        document_frequency.update(set(unit))
    terms = sorted(document_frequency)
    df = np.array([document_frequency[term] for term in terms], dtype=np.float64)
    idf = np.log((1.0 + len(units)) / (1.0 + df)) + 1.0
    idf.setflags(write=False)
    return TfIdfModel(vocabulary={term: column for column, term in enumerate(terms)},
                      idf=idf, doc_count=len(units))


def encode_tfidf(model: TfIdfModel, doc: Document, normalize=True) -> np.ndarray:
    vectors = np.zeros((len(doc), model.dim), dtype=np.float64)
    for row, sentence in enumerate(doc.sentences):
        for term, count in Counter(sentence.tokens).items():
            column = model.vocabulary.get(term)
            if column is not None:
                vectors[row, column] = count * model.idf[column]
    if normalize:
        norms = np.linalg.norm(vectors, axis=1, keepdims=True)
        # zero rows (no in-vocabulary token) stay zero
        np.divide(vectors, norms, out=vectors, where=norms > 0)
    return vectors


@dataclass
class EmbeddingStore:
    """Index of an embedding JSONL file: one ``{"id", "dim", "vectors"}`` object per line."""

    path: Path
    entries: Dict[str, dict] = field(default_factory=dict)

    @classmethod
    def from_jsonl(cls, path):
        path = Path(path)
        entries = {}
        try:
            with open(path, 'r', encoding='utf-8') as handle:
                for line_no, line in enumerate(handle, start=1):
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        record = json.loads(line)
                    except json.JSONDecodeError as exc:
                        raise FormatError(line_no, f"invalid JSON: {exc.msg}") from exc
                    if not isinstance(record, dict) or not isinstance(record.get('id'), str):
                        raise FormatError(line_no, "expected an object with a string 'id'")
                    if record['id'] in entries:
                        raise FormatError(line_no, f"duplicate embedding entry {record['id']!r}")
                    if not isinstance(record.get('vectors'), list):
                        raise FormatError(line_no, "field 'vectors' must be an array of arrays")
                    record['_line'] = line_no
                    entries[record['id']] = record
        except OSError as exc:
            raise DataIOError(f"cannot read embeddings {path}: {exc}") from exc
        logger.info(f"Indexed {len(entries)} embedding entries from {path}")
        return cls(path=path, entries=entries)

    def vectors_for(self, doc: Document) -> np.ndarray:
        record = self.entries.get(doc.id)
        if record is None:
            raise MissingDocument(doc.id)
        rows = record['vectors']
        line_no = record['_line']

        if len(rows) != len(doc):
            raise DimensionMismatch(
                f"document {doc.id!r} has {len(doc)} sentences but {len(rows)} vectors were provided")
        if not all(isinstance(row, list) for row in rows):
            raise FormatError(line_no, "every vector must be an array of numbers")
        dims = {len(row) for row in rows}
        if len(dims) > 1:
            raise DimensionMismatch(f"document {doc.id!r} has ragged vector dims {sorted(dims)}")
        dim = dims.pop()
        if dim == 0:
            raise FormatError(line_no, "vectors must have at least one component")
        declared = record.get('dim')
        if declared is not None and declared != dim:
            raise DimensionMismatch(f"document {doc.id!r} declares dim {declared} but vectors have dim {dim}")

        try:
            vectors = np.array(rows, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise FormatError(line_no, f"non-numeric vector component: {exc}") from exc
        if not np.all(np.isfinite(vectors)):
            raise FormatError(line_no, "vector components must be finite")
        return vectors


@lru_cache(maxsize=8)
def _open_store(path, mtime_ns):
    return EmbeddingStore.from_jsonl(path)


def load_external_embeddings(path, doc: Document) -> np.ndarray:
    """One vector per sentence of ``doc``, exactly as stored (no normalization)."""
    path = Path(path)
    try:
        mtime_ns = os.stat(path).st_mtime_ns
    except OSError as exc:
        raise DataIOError(f"cannot read embeddings {path}: {exc}") from exc
    return _open_store(str(path.resolve()), mtime_ns).vectors_for(doc)


class TfIdfEncoder:
    name = EncoderKind.TFIDF.value

    def __init__(self, scope=TfIdfScope.PER_DOCUMENT, normalize=True, model=None):
        self.scope = TfIdfScope(scope)
        self.normalize = normalize
        self.model = model
        if self.scope is TfIdfScope.PER_CORPUS and model is None:
            raise ConfigError("per-corpus tf-idf needs a model fitted on the corpus")

    def encode(self, doc: Document) -> np.ndarray:
        model = self.model
        if self.scope is TfIdfScope.PER_DOCUMENT:
            model = fit_tfidf([doc], TfIdfScope.PER_DOCUMENT)
        return encode_tfidf(model, doc, normalize=self.normalize)


class ExternalEncoder:
    name = EncoderKind.EXTERNAL.value

    def __init__(self, store: EmbeddingStore):
        self.store = store

    def encode(self, doc: Document) -> np.ndarray:
        return self.store.vectors_for(doc)


def make_encoder(spec: EncoderSpec, corpus: Optional[Sequence[Document]] = None):
    if spec.kind is EncoderKind.EXTERNAL:
        return ExternalEncoder(EmbeddingStore.from_jsonl(spec.embeddings))
    model = None
    if spec.tfidf_scope is TfIdfScope.PER_CORPUS:
        if not corpus:
            raise EmptyCorpus("per-corpus tf-idf needs the documents to fit on")
        model = fit_tfidf(corpus, TfIdfScope.PER_CORPUS)
        logger.info(f"Fitted per-corpus tf-idf: {model.dim} terms over {model.doc_count} documents")
    return TfIdfEncoder(scope=spec.tfidf_scope, normalize=spec.normalize, model=model)
