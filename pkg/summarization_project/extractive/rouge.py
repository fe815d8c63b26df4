"""ROUGE-N and ROUGE-L with clipped n-gram overlap and summary-level LCS.

Multi-sentence summaries are flattened with ``SENTENCE_BREAK`` between
sentences: n-grams never span a break, and the LCS ignores breaks.
"""
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Sequence, Union

from .corpus import Lang, tokenize
from .exceptions import EmptyInput

SENTENCE_BREAK = '<sentence-break>'

# F-beta with beta=1 is the headline number of every variant
F_BETA = 1.0


class RougeVariant(str, Enum):
    ROUGE1 = 'rouge1'
    ROUGE2 = 'rouge2'
    ROUGEL = 'rougeL'

    @classmethod
    def for_order(cls, n) -> Union["RougeVariant", str]:
        """Named variant for n = 1, 2; plain ``rouge{n}`` for higher orders."""
        try:
            return cls(f"rouge{n}")
        except ValueError:
            return f"rouge{n}"


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float
    variant: Union[RougeVariant, str]

    @classmethod
    def from_counts(cls, variant, match, candidate_total, reference_total):
        precision = match / candidate_total if candidate_total else 0.0
        recall = match / reference_total if reference_total else 0.0
        return cls(precision=precision, recall=recall, f1=f_measure(precision, recall), variant=variant)

    def to_dict(self):
        return {'p': self.precision, 'r': self.recall, 'f1': self.f1}


def f_measure(precision, recall, beta=F_BETA):
    if precision + recall <= 0:
        return 0.0
    beta2 = beta * beta
    return (1 + beta2) * precision * recall / (beta2 * precision + recall)


def _segments(tokens: Sequence[str]) -> List[List[str]]:
    segments = [[]]
    for token in tokens:
        if token == SENTENCE_BREAK:
            segments.append([])
        else:
            segments[-1].append(token)
    return segments


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    counts = Counter()
    for segment in _segments(tokens):
        counts.update(tuple(segment[i:i + n]) for i in range(len(segment) - n + 1))
    return counts


def rouge_n(candidate: Sequence[str], reference: Sequence[str], n: int = 1) -> RougeScore:
    if n < 1:
        raise ValueError(f"gram order must be >= 1, got {n}")
    variant = RougeVariant.for_order(n)
    candidate_grams = _ngrams(candidate, n)
    reference_grams = _ngrams(reference, n)
    match = sum(min(count, reference_grams[gram]) for gram, count in candidate_grams.items())
    return RougeScore.from_counts(variant, match, sum(candidate_grams.values()),
                                  sum(reference_grams.values()))


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for token in a:
        current = [0]
        for j, other in enumerate(b):
            if token == other:
                current.append(previous[j] + 1)
            else:
                current.append(max(previous[j + 1], current[j]))
        previous = current
    return previous[-1]


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> RougeScore:
    candidate = [token for token in candidate if token != SENTENCE_BREAK]
    reference = [token for token in reference if token != SENTENCE_BREAK]
    return RougeScore.from_counts(RougeVariant.ROUGEL, lcs_length(candidate, reference),
                                  len(candidate), len(reference))


def to_unicode_tokens(text: str) -> List[str]:
    """One ``U+XXXX`` token per non-whitespace code point."""
    return [f"U+{ord(char):04X}" for char in text if not char.isspace()]


def summary_tokens(sentences: Iterable[str], lang=Lang.LATIN) -> List[str]:
    """Flatten summary sentences into ROUGE tokens separated by ``SENTENCE_BREAK``."""
    lang = Lang(lang)
    tokens: List[str] = []
    for sentence in sentences:
        if lang is Lang.CJK:
            sentence_tokens = to_unicode_tokens(sentence)
        else:
            try:
                sentence_tokens = tokenize(sentence, lang)
            except EmptyInput:
                sentence_tokens = []
        if not sentence_tokens:
            continue
        if tokens:
            tokens.append(SENTENCE_BREAK)
        tokens.extend(sentence_tokens)
    return tokens


def score_tokens(candidate: Sequence[str], reference: Sequence[str]):
    return (rouge_n(candidate, reference, 1), rouge_n(candidate, reference, 2),
            rouge_l(candidate, reference))
