"""Sentence selection: directional importance, multi-round selection with edge
dampening, and the Lead3 / TextRank / single-round baselines.

Importance of sentence ``i`` over a set of sentences ``over``::

    im_i = beta1 * sum(sim[i, j] for j > i in over) + beta2 * sum(sim[k, i] for k < i in over)

Multi-round selection picks one sentence per round. Once ``s`` is picked,
its forward edges ``sim[s, j]`` are scaled by ``alpha1`` and its backward
edges ``sim[k, s]`` by ``alpha2``. Later rounds score the remaining sentences
with the beta-weighted sums restricted to the remaining set, plus the
dampened edges to already picked sentences with coefficient 1. With
``alpha1 == beta2`` and ``alpha2 == beta1`` every round reproduces the
single-round ranking exactly.
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Set

import networkx as nx
import numpy as np

from .exceptions import AlreadyDampened, ConfigError, OutOfRange
from .simgraph import METRICS, SimilarityGraph

logger = logging.getLogger(__name__)


class Method(str, Enum):
    LEAD = 'lead3'
    TEXTRANK = 'textrank'
    PACSUM = 'pacsum'
    MULTIROUND = 'multiround'

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        if value == 'lead':
            return cls.LEAD
        try:
            return cls(value)
        except ValueError:
            raise ConfigError(f"unknown method {value!r}; expected one of "
                              f"{', '.join(m.value for m in cls)}") from None


class TieBreak(str, Enum):
    LOWEST_INDEX = 'lowest_index'


@dataclass(frozen=True)
class SummarizerConfig:
    k: int = 3
    a: float = 0.2
    beta1: float = 1.0
    beta2: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0
    method: Method = Method.MULTIROUND
    tie_break: TieBreak = TieBreak.LOWEST_INDEX
    damping: float = 0.85
    max_iter: int = 100
    tol: float = 1e-6
    similarity: str = 'dot'

    def __post_init__(self):
        object.__setattr__(self, 'method', Method.parse(self.method))
        try:
            object.__setattr__(self, 'tie_break', TieBreak(self.tie_break))
        except ValueError:
            raise ConfigError(f"unsupported tie_break {self.tie_break!r}") from None
        for name in ('a', 'beta1', 'beta2', 'alpha1', 'alpha2', 'damping', 'tol'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigError(f"{name} must be a finite number, got {value!r}")
            object.__setattr__(self, name, float(value))
        for name in ('k', 'max_iter'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{name} must be an integer, got {value!r}")
        if self.k < 1:
            raise OutOfRange('k', self.k, '[1, inf)')
        if not 0.0 <= self.a <= 1.0:
            raise OutOfRange('a', self.a, '[0, 1]')
        if not 0.0 < self.damping < 1.0:
            raise OutOfRange('damping', self.damping, '(0, 1)')
        if self.max_iter < 1:
            raise OutOfRange('max_iter', self.max_iter, '[1, inf)')
        if self.tol <= 0:
            raise OutOfRange('tol', self.tol, '(0, inf)')
        if self.similarity not in METRICS:
            raise OutOfRange('similarity', self.similarity, METRICS)

    @classmethod
    def field_names(cls):
        return tuple(cls.__dataclass_fields__)

    @classmethod
    def from_dict(cls, values):
        unknown = sorted(set(values) - set(cls.field_names()))
        if unknown:
            raise ConfigError(f"unknown summarizer config keys: {', '.join(unknown)}")
        return cls(**values)

    def to_dict(self):
        values = asdict(self)
        values['method'] = self.method.value
        values['tie_break'] = self.tie_break.value
        return values

    @property
    def is_reduction_point(self):
        return self.alpha1 == self.beta2 and self.alpha2 == self.beta1


@dataclass
class ImportanceVector:
    """Scores of one round; entries outside the scored set are NaN."""

    round: int
    scores: np.ndarray
    argmax: Optional[int] = None

    def candidates(self) -> List[int]:
        return np.flatnonzero(~np.isnan(self.scores)).tolist()

    def to_dict(self):
        return {
            'round': self.round,
            'scores': {str(i): float(self.scores[i]) for i in self.candidates()},
            'argmax': self.argmax,
        }


@dataclass
class SelectionState:
    working_sim: np.ndarray
    selected: List[int] = field(default_factory=list)
    remaining: Set[int] = field(default_factory=set)
    dampened: Set[int] = field(default_factory=set)
    trace: List[ImportanceVector] = field(default_factory=list)

    @classmethod
    def start(cls, graph: SimilarityGraph):
        return cls(working_sim=np.array(graph.sim, dtype=np.float64, copy=True),
                   remaining=set(range(graph.n)))

    @property
    def n(self):
        return self.working_sim.shape[0]

    def remaining_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[sorted(self.remaining)] = True
        return mask

    def pick(self, index):
        self.remaining.remove(index)
        self.selected.append(index)

    def summary(self) -> List[int]:
        return sorted(self.selected)


def _mask(n, indices) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    mask[sorted(indices)] = True
    return mask


def _scored(row_sums, mask, round_no) -> ImportanceVector:
    scores = np.full(row_sums.shape[0], np.nan)
    scores[mask] = row_sums[mask]
    return ImportanceVector(round=round_no, scores=scores)


def _argmax(importance: ImportanceVector) -> int:
    # np.argmax returns the first maximum: ties go to the lowest index
    return int(np.argmax(np.where(np.isnan(importance.scores), -np.inf, importance.scores)))


def base_importance(graph: SimilarityGraph, beta1, beta2, over) -> ImportanceVector:
    sim = graph.sim
    over_mask = _mask(graph.n, over)
    directed = beta1 * sim + beta2 * sim.T
    row_sums = np.where(over_mask[None, :], directed, 0.0).sum(axis=1)
    return _scored(row_sums, over_mask, round_no=1)


def dampen_selected(state: SelectionState, s, alpha1, alpha2) -> SelectionState:
    if s in state.dampened:
        raise AlreadyDampened(s)
    state.working_sim[s, s + 1:] *= alpha1
    state.working_sim[:s, s] *= alpha2
    state.dampened.add(s)
    return state


def round_importance(state: SelectionState, config: SummarizerConfig) -> ImportanceVector:
    working = state.working_sim
    remaining = state.remaining_mask()
    weighted = config.beta1 * working + config.beta2 * working.T
    dampened = working + working.T
    # edges to remaining sentences carry beta weights, edges to picked ones their dampened value
    row_sums = np.where(remaining[None, :], weighted, dampened).sum(axis=1)
    return _scored(row_sums, remaining, round_no=len(state.selected) + 1)


def run_multi_round(graph: SimilarityGraph, config: SummarizerConfig) -> SelectionState:
    state = SelectionState.start(graph)
    rounds = min(config.k, graph.n)
    for round_no in range(1, rounds + 1):
        if round_no == 1:
            importance = base_importance(graph, config.beta1, config.beta2, state.remaining)
        else:
            importance = round_importance(state, config)
        choice = _argmax(importance)
        importance.argmax = choice
        state.trace.append(importance)
        logger.debug(f"Round {round_no}: picked sentence {choice} (score {importance.scores[choice]:.6g})")
        state.pick(choice)
        dampen_selected(state, choice, config.alpha1, config.alpha2)
    return state


def select_multi_round(graph: SimilarityGraph, config: SummarizerConfig) -> List[int]:
    return run_multi_round(graph, config).summary()


def rank_pacsum(graph: SimilarityGraph, config: SummarizerConfig):
    """Single-round ranking: all indices by descending importance, ties to the lowest index."""
    importance = base_importance(graph, config.beta1, config.beta2, range(graph.n))
    scores = importance.scores
    ranking = sorted(range(graph.n), key=lambda i: (-scores[i], i))
    importance.argmax = ranking[0] if ranking else None
    return ranking, importance


def select_pacsum(graph: SimilarityGraph, config: SummarizerConfig) -> List[int]:
    ranking, _ = rank_pacsum(graph, config)
    return sorted(ranking[:config.k])


def select_lead(doc, k) -> List[int]:
    return list(range(min(max(k, 0), len(doc))))


# ranks that agree to this many decimals are ties (summation order noise)
RANK_DECIMALS = 12


@dataclass(frozen=True, eq=False)
class TextRankResult:
    ranks: np.ndarray
    iterations: int
    converged: bool


def to_networkx(graph: SimilarityGraph) -> nx.Graph:
    """Undirected weighted graph with one edge per positive similarity."""
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(graph.n))
    nx_graph.add_weighted_edges_from((i, j, value) for i, j, value in graph.pairs() if value > 0.0)
    return nx_graph


def textrank_scores(graph: SimilarityGraph, damping=0.85, max_iter=100, tol=1e-6) -> TextRankResult:
    """Weighted PageRank by power iteration on the symmetric similarity graph.

    Dangling nodes (no positive out-weight) spread their mass uniformly.
    Negative similarities are not edges. Convergence is an L1 change below ``tol``.
    """
    if not 0.0 < damping < 1.0:
        raise OutOfRange('damping', damping, '(0, 1)')
    n = graph.n
    transition = np.asarray(nx.google_matrix(to_networkx(graph), alpha=damping, nodelist=list(range(n))),
                            dtype=np.float64)

    ranks = np.full(n, 1.0 / n)
    for iteration in range(1, max_iter + 1):
        updated = ranks @ transition
        delta = np.abs(updated - ranks).sum()
        ranks = updated
        if delta < tol:
            return TextRankResult(ranks=np.round(ranks, RANK_DECIMALS), iterations=iteration, converged=True)
    logger.warning(f"TextRank did not converge within {max_iter} iterations (last change {delta:.3g})")
    return TextRankResult(ranks=np.round(ranks, RANK_DECIMALS), iterations=max_iter, converged=False)


def top_k(scores, k) -> List[int]:
    """Indices of the k highest scores (ties to the lowest index), in document order."""
    ranking = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return sorted(ranking[:k])


def select_textrank(graph: SimilarityGraph, damping, max_iter, tol, k) -> List[int]:
    return top_k(textrank_scores(graph, damping, max_iter, tol).ranks, k)


def naive_multi_round(graph: SimilarityGraph, config: SummarizerConfig):
    """Reference multi-round selection that rebuilds every sum from the thresholded matrix.

    Returns a list of ``(picked index, {candidate: score})`` per round.
    """
    n = graph.n
    sim = graph.sim
    selected: List[int] = []
    rounds = []
    for _ in range(min(config.k, n)):
        picked = set(selected)
        scores: Dict[int, float] = {}
        for c in range(n):
            if c in picked:
                continue
            total = 0.0
            for j in range(c + 1, n):
                weight = config.alpha2 if j in picked else config.beta1
                total += weight * sim[c, j]
            for k in range(c):
                weight = config.alpha1 if k in picked else config.beta2
                total += weight * sim[k, c]
            scores[c] = total
        best = max(scores, key=lambda i: (scores[i], -i))
        rounds.append((best, scores))
        selected.append(best)
    return rounds
