"""Sentence-similarity graph: inner-product matrix and the min-max threshold filter."""
import hashlib
import logging
from collections import OrderedDict
from dataclasses import dataclass, replace
from functools import wraps
from typing import Iterator, Optional, Tuple

import numpy as np

from .exceptions import DimensionMismatch, FormatError, OutOfRange, TooFewSentences

logger = logging.getLogger(__name__)

METRICS = ('dot', 'cosine')


def array_cache(maxsize=32):
    """
    LRU cache for functions whose first parameter is a numpy array.
    The key is a hash of the array bytes plus its shape and dtype, so equal
    arrays hit the same entry even when they are different objects.
    Remaining arguments must be hashable.
    """
    def decorator(function):
        cache = OrderedDict()
        stats = {'hits': 0, 'misses': 0}

        @wraps(function)
        def wrapper(array, *args, **kwargs):
            array = np.ascontiguousarray(array)
            digest = hashlib.md5(array.tobytes()).hexdigest()
            key = (digest, array.shape, str(array.dtype), args, tuple(sorted(kwargs.items())))
            if key in cache:
                stats['hits'] += 1
                cache.move_to_end(key)
                return cache[key]

            stats['misses'] += 1
            result = function(array, *args, **kwargs)
            cache[key] = result
            if len(cache) > maxsize:
                cache.popitem(last=False)
            return result

        def cache_info():
            return {'maxsize': maxsize, 'currsize': len(cache), **stats}

        def cache_clear():
            cache.clear()
            stats.update(hits=0, misses=0)

        wrapper.cache_info = cache_info
        wrapper.cache_clear = cache_clear
        return wrapper
    return decorator


@dataclass(frozen=True)
class ThresholdSpec:
    a: float
    th: float


@dataclass(frozen=True, eq=False)
class SimilarityGraph:
    """Dense similarity matrix over sentence pairs.

    Only the strict upper triangle of ``sim`` is meaningful; the diagonal and
    the lower triangle are kept at zero. ``s_min``/``s_max`` are the extrema
    of the upper triangle before any thresholding and survive
    ``apply_threshold`` unchanged.
    """

    sim: np.ndarray
    s_min: float
    s_max: float
    threshold: Optional[ThresholdSpec] = None

    @property
    def n(self):
        return self.sim.shape[0]

    @property
    def is_thresholded(self):
        return self.threshold is not None

    def edge(self, i, j) -> float:
        if i == j:
            raise ValueError("self-similarity is not part of the graph")
        if i > j:
            i, j = j, i
        return float(self.sim[i, j])

    def upper(self) -> np.ndarray:
        return self.sim[np.triu_indices(self.n, k=1)]

    def pairs(self) -> Iterator[Tuple[int, int, float]]:
        rows, cols = np.triu_indices(self.n, k=1)
        for i, j in zip(rows.tolist(), cols.tolist()):
            yield i, j, float(self.sim[i, j])

    @classmethod
    def from_matrix(cls, values):
        """Graph from explicit values; only the strict upper triangle of ``values`` is read."""
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1] or values.shape[0] < 1:
            raise DimensionMismatch(f"expected a non-empty square matrix, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise FormatError(None, "similarities must be finite")
        sim = np.triu(values, k=1)
        sim.setflags(write=False)
        upper = sim[np.triu_indices(sim.shape[0], k=1)]
        if upper.size == 0:
            return cls(sim=sim, s_min=0.0, s_max=0.0)
        return cls(sim=sim, s_min=float(upper.min()), s_max=float(upper.max()))


@array_cache(maxsize=256)
def _pairwise(vectors, metric):
    if metric == 'cosine':
        norms = np.linalg.norm(vectors, axis=1, keepdims=True)
        vectors = np.divide(vectors, norms, out=np.zeros_like(vectors), where=norms > 0)
    return SimilarityGraph.from_matrix(vectors @ vectors.T)


def build_similarity_matrix(vectors, metric='dot') -> SimilarityGraph:
    """Inner product between every pair of sentence vectors (upper triangle only)."""
    if metric not in METRICS:
        raise OutOfRange('metric', metric, METRICS)
    try:
        matrix = np.asarray(vectors, dtype=np.float64)
    except ValueError as exc:
        raise DimensionMismatch(f"sentence vectors have unequal dims: {exc}") from exc
    if matrix.ndim != 2:
        raise DimensionMismatch(f"expected an (n, dim) array of vectors, got shape {matrix.shape}")
    if matrix.shape[0] < 2:
        raise TooFewSentences(f"a similarity graph needs at least 2 sentences, got {matrix.shape[0]}")
    if not np.all(np.isfinite(matrix)):
        raise FormatError(None, "sentence vectors must be finite")
    return _pairwise(matrix, metric)


def compute_threshold(graph: SimilarityGraph, a: float) -> ThresholdSpec:
    """``TH = s_min + a * (s_max - s_min)``, evaluated so that a=0 and a=1 hit the extrema exactly."""
    if not 0.0 <= a <= 1.0:
        raise OutOfRange('a', a, '[0, 1]')
    th = (1.0 - a) * graph.s_min + a * graph.s_max
    th = min(max(th, graph.s_min), graph.s_max)
    return ThresholdSpec(a=float(a), th=float(th))


def apply_threshold(graph: SimilarityGraph, spec: ThresholdSpec) -> SimilarityGraph:
    """Zero every similarity strictly below ``spec.th``; values equal to it survive."""
    sim = np.where(graph.sim >= spec.th, graph.sim, 0.0)
    sim = np.triu(sim, k=1)
    sim.setflags(write=False)
    return replace(graph, sim=sim, threshold=spec)


def threshold_graph(graph: SimilarityGraph, a: float) -> SimilarityGraph:
    return apply_threshold(graph, compute_threshold(graph, a))


def dump_matrix_tsv(graph: SimilarityGraph, stream):
    stream.write("i\tj\tvalue\n")
    for i, j, value in graph.pairs():
        stream.write(f"{i}\t{j}\t{value!r}\n")
