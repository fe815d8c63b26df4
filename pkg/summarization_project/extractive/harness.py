"""Dataset-level evaluation, grid search over hyper-parameters and comparison reports."""
import itertools
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import partial
from typing import Dict, List, Optional, Sequence, Tuple

from .corpus import DatasetSplit, Document, segment_sentences
from .encoder import EncoderSpec, make_encoder
from .exceptions import EmptyInput, EmptySplit, GridError, ReportError
from .pipeline import SummarizationPipeline, summarize_graph
from .rouge import RougeScore, RougeVariant, score_tokens, summary_tokens
from .simgraph import SimilarityGraph
from .summarizer import Method, SummarizerConfig

logger = logging.getLogger(__name__)

AXES = ('a', 'beta1', 'beta2', 'alpha1', 'alpha2')
SEARCHED_AXES = {
    Method.LEAD: (),
    Method.TEXTRANK: ('a',),
    Method.PACSUM: ('a', 'beta1', 'beta2'),
    Method.MULTIROUND: AXES,
}
VARIANT_KEYS = (('r1', RougeVariant.ROUGE1), ('r2', RougeVariant.ROUGE2), ('rl', RougeVariant.ROUGEL))
COLUMNS = ('R-1', 'R-2', 'R-L')


class Objective(str, Enum):
    ROUGE1 = 'mean_rouge1_f1'
    ROUGE2 = 'mean_rouge2_f1'
    ROUGEL = 'mean_rougeL_f1'

    @classmethod
    def parse(cls, value):
        aliases = {'r1': cls.ROUGE1, 'r2': cls.ROUGE2, 'rl': cls.ROUGEL}
        if value in aliases:
            return aliases[value]
        try:
            return cls(value)
        except ValueError:
            raise GridError(f"unknown objective {value!r}") from None

    @property
    def aggregate_key(self):
        return {Objective.ROUGE1: 'r1', Objective.ROUGE2: 'r2', Objective.ROUGEL: 'rl'}[self]


@dataclass(frozen=True)
class GridSpec:
    axes: Dict[str, Tuple[float, ...]]
    objective: Objective = Objective.ROUGE1

    def __post_init__(self):
        unknown = sorted(set(self.axes) - set(AXES))
        if unknown:
            raise GridError(f"unknown grid axes: {', '.join(unknown)}")
        axes = {}
        for name in AXES:
            if name not in self.axes:
                continue
            values = self.axes[name]
            if not isinstance(values, (list, tuple)) or not values:
                raise GridError(f"grid axis {name!r} must be a non-empty list")
            if not all(isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)
                       for v in values):
                raise GridError(f"grid axis {name!r} must contain finite numbers")
            axes[name] = tuple(sorted({float(v) for v in values}))
        object.__setattr__(self, 'axes', axes)
        object.__setattr__(self, 'objective', Objective.parse(self.objective))

    @classmethod
    def from_dict(cls, values):
        unknown = sorted(set(values) - {'axes', 'objective'})
        if unknown:
            raise GridError(f"unknown grid keys: {', '.join(unknown)}")
        if not isinstance(values.get('axes'), dict):
            raise GridError("a grid needs an 'axes' mapping")
        return cls(axes=dict(values['axes']), objective=values.get('objective', Objective.ROUGE1))

    def values(self, name, base: SummarizerConfig):
        return self.axes.get(name, (getattr(base, name),))

    def has_reduction_point(self, base: SummarizerConfig):
        return (bool(set(self.values('alpha1', base)) & set(self.values('beta2', base)))
                and bool(set(self.values('alpha2', base)) & set(self.values('beta1', base))))

    def configs(self, method: Method, base: SummarizerConfig):
        """Every grid point for ``method`` in lexicographic order of (a, beta1, beta2, alpha1, alpha2)."""
        searched = SEARCHED_AXES[method]
        ignored = sorted(set(self.axes) - set(searched))
        if ignored:
            logger.info(f"Method {method.value} ignores grid axes: {', '.join(ignored)}")
        base = replace(base, method=method)
        choices = [self.values(name, base) if name in searched else (getattr(base, name),) for name in AXES]
        for point in itertools.product(*choices):
            yield replace(base, **dict(zip(AXES, point)))


@dataclass(frozen=True)
class DocumentScores:
    doc_id: str
    selected: Tuple[int, ...]
    scores: Dict[str, RougeScore]

    def to_dict(self):
        payload = {'doc_id': self.doc_id, 'selected': list(self.selected)}
        payload.update({key: self.scores[key].to_dict() for key, _ in VARIANT_KEYS})
        return payload

    @classmethod
    def from_dict(cls, values):
        scores = {key: RougeScore(precision=values[key]['p'], recall=values[key]['r'],
                                  f1=values[key]['f1'], variant=variant)
                  for key, variant in VARIANT_KEYS}
        return cls(doc_id=values['doc_id'], selected=tuple(values.get('selected', ())), scores=scores)


def aggregate_scores(per_doc: Sequence[DocumentScores]) -> Dict[str, Dict[str, float]]:
    """Arithmetic mean of precision/recall/F1 per variant, exactly rounded (order independent)."""
    aggregate = {}
    for key, _ in VARIANT_KEYS:
        aggregate[key] = {
            part: math.fsum(getattr(doc.scores[key], attr) for doc in per_doc) / len(per_doc)
            for part, attr in (('p', 'precision'), ('r', 'recall'), ('f1', 'f1'))
        }
    return aggregate


@dataclass
class EvalResult:
    method: Method
    config: SummarizerConfig
    encoder: Optional[EncoderSpec]
    per_doc: List[DocumentScores]
    aggregate: Dict[str, Dict[str, float]]
    doc_count: int
    notes: Dict[str, object] = field(default_factory=dict)

    @classmethod
    def from_per_doc(cls, config, encoder, per_doc, notes=None):
        if not per_doc:
            raise EmptySplit("cannot aggregate an evaluation without documents")
        return cls(method=config.method, config=config, encoder=encoder, per_doc=list(per_doc),
                   aggregate=aggregate_scores(per_doc), doc_count=len(per_doc), notes=dict(notes or {}))

    @property
    def label(self):
        if self.method is Method.LEAD or self.encoder is None:
            return self.method.value
        return f"{self.method.value}({self.encoder.label})"

    def objective(self, objective: Objective) -> float:
        return self.aggregate[objective.aggregate_key]['f1']

    def to_dict(self, include_per_doc=True):
        payload = {
            'method': self.method.value,
            'config': self.config.to_dict(),
            'encoder': self.encoder.to_dict() if self.encoder else None,
            'aggregate': self.aggregate,
            'doc_count': self.doc_count,
        }
        if self.notes:
            payload['notes'] = self.notes
        if include_per_doc:
            payload['per_doc'] = [doc.to_dict() for doc in self.per_doc]
        return payload

    @classmethod
    def from_dict(cls, values):
        try:
            config = SummarizerConfig.from_dict(values['config'])
            encoder = EncoderSpec(**values['encoder']) if values.get('encoder') else None
            per_doc = [DocumentScores.from_dict(doc) for doc in values.get('per_doc', [])]
            return cls(method=Method.parse(values['method']), config=config, encoder=encoder,
                       per_doc=per_doc, aggregate=values['aggregate'], doc_count=values['doc_count'],
                       notes=values.get('notes', {}))
        except (KeyError, TypeError) as exc:
            raise ReportError(f"not an evaluation result: missing or invalid {exc}") from exc


@dataclass(frozen=True, eq=False)
class PreparedDocument:
    """A document with its raw similarity graph and tokenized reference, reused across configs."""

    doc: Document
    graph: Optional[SimilarityGraph]
    reference: Tuple[str, ...]


def render_json(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


@contextmanager
def worker_pool(jobs):
    if jobs is None or jobs <= 1:
        yield None
        return
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        yield executor


def _map(function, items, executor):
    if executor is None:
        return [function(item) for item in items]
    # executor.map yields in submission order regardless of completion order
    return list(executor.map(function, items, chunksize=max(1, len(items) // 64)))


def _reference_tokens(doc: Document):
    if not doc.reference_summary:
        raise EmptyInput(f"document {doc.id!r} has no reference summary")
    return tuple(summary_tokens(segment_sentences(doc.reference_summary, doc.lang), doc.lang))


def _prepare_document(doc, pipeline):
    return PreparedDocument(doc=doc, graph=pipeline.build_graph(doc), reference=_reference_tokens(doc))


def _score_document(prepared: PreparedDocument, config: SummarizerConfig) -> DocumentScores:
    summary = summarize_graph(prepared.doc, prepared.graph, config)
    candidate = summary_tokens(summary.sentences, prepared.doc.lang)
    scores = dict(zip((key for key, _ in VARIANT_KEYS), score_tokens(candidate, prepared.reference)))
    return DocumentScores(doc_id=prepared.doc.id, selected=tuple(summary.indices), scores=scores)


def prepare_split(split: DatasetSplit, config: SummarizerConfig, encoder_spec: EncoderSpec,
                  executor=None) -> List[PreparedDocument]:
    if not len(split):
        raise EmptySplit(f"the {split.name.value} split has no documents")
    encoder = None
    if config.method is not Method.LEAD:
        encoder = make_encoder(encoder_spec, split.records)
    pipeline = SummarizationPipeline(config, encoder)
    return _map(partial(_prepare_document, pipeline=pipeline), split.records, executor)


def evaluate_prepared(prepared: Sequence[PreparedDocument], config: SummarizerConfig,
                      encoder_spec: Optional[EncoderSpec], executor=None, notes=None) -> EvalResult:
    per_doc = _map(partial(_score_document, config=config), prepared, executor)
    encoder = None if config.method is Method.LEAD else encoder_spec
    return EvalResult.from_per_doc(config, encoder, per_doc, notes)


def evaluate_method(split: DatasetSplit, config: SummarizerConfig, encoder_spec: EncoderSpec,
                    jobs=1, notes=None) -> EvalResult:
    """Summarize every document of ``split`` and score it against its reference."""
    with worker_pool(jobs) as executor:
        prepared = prepare_split(split, config, encoder_spec, executor)
        result = evaluate_prepared(prepared, config, encoder_spec, executor, notes)
    for doc in result.per_doc:
        logger.info(f"{doc.doc_id}: sentences {list(doc.selected)} "
                    f"R-1 {doc.scores['r1'].f1:.4f} R-2 {doc.scores['r2'].f1:.4f} R-L {doc.scores['rl'].f1:.4f}")
    logger.info(f"Evaluated {result.label} on {result.doc_count} documents: "
                f"R-1 {result.aggregate['r1']['f1']:.4f} R-2 {result.aggregate['r2']['f1']:.4f} "
                f"R-L {result.aggregate['rl']['f1']:.4f}")
    return result


def grid_search(validation: DatasetSplit, grid: GridSpec, method, encoder_spec: EncoderSpec,
                base_config: Optional[SummarizerConfig] = None, jobs=1, log_stream=None,
                notes=None) -> Tuple[SummarizerConfig, EvalResult]:
    """Evaluate every grid point and return the best config with its result.

    Ties on the objective go to the lexicographically smallest
    (a, beta1, beta2, alpha1, alpha2). ``log_stream`` receives one JSON line
    per grid point.
    """
    method = Method.parse(method)
    base = replace(base_config or SummarizerConfig(), method=method)
    if method is Method.MULTIROUND and not grid.has_reduction_point(base):
        raise GridError("a multiround grid must contain a point with alpha1 == beta2 and alpha2 == beta1")

    best_key = None
    best = None
    points = 0
    with worker_pool(jobs) as executor:
        prepared = prepare_split(validation, base, encoder_spec, executor)
        for config in grid.configs(method, base):
            result = evaluate_prepared(prepared, config, encoder_spec, executor, notes)
            value = result.objective(grid.objective)
            points += 1
            logger.info(f"Grid point {points} {method.value} "
                        + " ".join(f"{name}={getattr(config, name):g}" for name in AXES)
                        + f": {grid.objective.value}={value:.6f}")
            if log_stream is not None:
                log_stream.write(json.dumps({
                    'point': points,
                    'config': config.to_dict(),
                    'objective': grid.objective.value,
                    'value': value,
                    'aggregate': result.aggregate,
                }, ensure_ascii=False) + "\n")
            key = (-value, tuple(getattr(config, name) for name in AXES))
            if best_key is None or key < best_key:
                best_key, best = key, result

    logger.info(f"Best of {points} grid points for {method.value}: "
                f"{grid.objective.value}={-best_key[0]:.6f}")
    return best.config, best


@dataclass(frozen=True)
class ComparisonReport:
    table: str
    rows: List[dict]

    def to_dict(self):
        return {'columns': list(COLUMNS), 'rows': self.rows}


def compare_report(results: Sequence[EvalResult]) -> ComparisonReport:
    """Methods as rows, mean ROUGE-1/2/L F1 (x100, one decimal) as columns."""
    if not results:
        raise ReportError("nothing to compare")
    lines = ["method\t" + "\t".join(COLUMNS)]
    rows = []
    for result in results:
        if not result.per_doc:
            raise ReportError(f"result for {result.label} has no per-document scores")
        cells = [format(result.aggregate[key]['f1'] * 100, '.1f') for key, _ in VARIANT_KEYS]
        lines.append("\t".join([result.label, *cells]))
        row = {'method': result.label, 'config': result.config.to_dict(), 'doc_count': result.doc_count}
        row.update(zip(COLUMNS, (float(cell) for cell in cells)))
        rows.append(row)
    return ComparisonReport(table="\n".join(lines) + "\n", rows=rows)

