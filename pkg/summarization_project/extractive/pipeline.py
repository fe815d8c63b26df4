"""Document-to-summary glue shared by the ``summarize`` command and the harness."""
import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional

from .corpus import Document
from .exceptions import MissingDocument, MissingEmbeddings
from .simgraph import SimilarityGraph, build_similarity_matrix, threshold_graph
from .summarizer import (Method, SummarizerConfig, rank_pacsum, run_multi_round, select_lead,
                         textrank_scores, top_k)

logger = logging.getLogger(__name__)


@dataclass
class Summary:
    doc_id: str
    indices: List[int]
    sentences: List[str]
    trace: List[dict] = field(default_factory=list)
    graph: Optional[SimilarityGraph] = None


def _textrank_trace(result):
    return {
        'round': 1,
        'scores': {str(i): float(rank) for i, rank in enumerate(result.ranks)},
        'argmax': top_k(result.ranks, 1)[0],
        'iterations': result.iterations,
        'converged': result.converged,
    }


def summarize_graph(doc: Document, graph: Optional[SimilarityGraph], config: SummarizerConfig) -> Summary:
    """Select summary sentences of ``doc`` from its raw (unthresholded) similarity graph.

    Single-sentence documents are summarized as that sentence; ``graph`` may
    be None for them and for the lead baseline.
    """
    trace = []
    thresholded = None
    if config.method is Method.LEAD:
        indices = select_lead(doc, config.k)
    elif len(doc) == 1:
        indices = [0]
    else:
        thresholded = threshold_graph(graph, config.a)
        if config.method is Method.TEXTRANK:
            result = textrank_scores(thresholded, config.damping, config.max_iter, config.tol)
            indices = top_k(result.ranks, config.k)
            trace.append(_textrank_trace(result))
        elif config.method is Method.PACSUM:
            ranking, importance = rank_pacsum(thresholded, config)
            indices = sorted(ranking[:config.k])
            trace.append(importance.to_dict())
        else:
            state = run_multi_round(thresholded, config)
            indices = state.summary()
            trace.extend(importance.to_dict() for importance in state.trace)
    return Summary(doc_id=doc.id, indices=indices, sentences=[doc.sentences[i].raw for i in indices],
                   trace=trace, graph=thresholded)


class SummarizationPipeline:
    """Encoder plus selector configuration, applied document by document."""

    def __init__(self, config: SummarizerConfig, encoder=None):
        self.config = config
        self.encoder = encoder
        self.documents_processed = 0
        self.avg_summarize_time = 0.0

    def needs_graph(self, doc: Document):
        return self.config.method is not Method.LEAD and len(doc) >= 2

    def build_graph(self, doc: Document) -> Optional[SimilarityGraph]:
        if not self.needs_graph(doc):
            return None
        try:
            vectors = self.encoder.encode(doc)
        except MissingDocument as exc:
            raise MissingEmbeddings(doc.id) from exc
        return build_similarity_matrix(vectors, self.config.similarity)

    def summarize(self, doc: Document) -> Summary:
        start_time = time.perf_counter()
        summary = summarize_graph(doc, self.build_graph(doc), self.config)
        elapsed = time.perf_counter() - start_time

        self.documents_processed += 1
        self.avg_summarize_time += (elapsed - self.avg_summarize_time) / self.documents_processed
        logger.debug(f"Summarized {doc.id} ({len(doc)} sentences) in {elapsed * 1000:.2f} ms")
        return summary
