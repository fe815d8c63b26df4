"""Document model, sentence segmentation, tokenization and JSONL ingestion."""
import json
import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

from .exceptions import ConfigError, DataIOError, EmptyInput, FormatError

logger = logging.getLogger(__name__)


class Lang(str, Enum):
    LATIN = 'latin'
    CJK = 'cjk'


class SplitName(str, Enum):
    TRAIN = 'train'
    VALIDATION = 'validation'
    TEST = 'test'


# terminator run, optionally followed by closing quotes/brackets, then whitespace or end
_LATIN_BOUNDARY = re.compile(r'[.!?]+["\'”’)\]]*(?=\s|$)')
_CJK_BOUNDARY = re.compile(r'[。！？；]+[”’」』）]*')
_WORD = re.compile(r'[^\W_]+')
_LAST_WORD = re.compile(r'(\S+)$')
_WORD_BEFORE_LAST = re.compile(r'(\S+)\s+\S+$')
_NEXT_WORD = re.compile(r'\s*([^\W_]+)')
_NEXT_INITIAL = re.compile(r'\s*[A-Z]\.')

ABBREVIATIONS = frozenset({
    'mr', 'mrs', 'ms', 'dr', 'prof', 'sr', 'jr', 'st', 'vs', 'etc', 'inc',
    'ltd', 'co', 'corp', 'gen', 'gov', 'sen', 'rep', 'rev', 'no', 'fig',
    'e.g', 'i.e', 'u.s', 'u.k', 'a.m', 'p.m', 'jan', 'feb', 'mar', 'apr',
    'jun', 'jul', 'aug', 'sep', 'sept', 'oct', 'nov', 'dec',
})
MIN_SENTENCE_CHARS = 3
# capitalized words that usually open a sentence rather than continue a name
SENTENCE_OPENERS = frozenset({
    'a', 'an', 'the', 'it', 'its', 'he', 'she', 'his', 'her', 'they', 'their',
    'we', 'our', 'i', 'my', 'you', 'this', 'that', 'these', 'those', 'then',
    'there', 'but', 'and', 'so', 'yet', 'in', 'on', 'at', 'as', 'if', 'when',
    'after', 'before',
})

_SPLIT_ALIASES = {
    'train': SplitName.TRAIN,
    'validation': SplitName.VALIDATION,
    'valid': SplitName.VALIDATION,
    'val': SplitName.VALIDATION,
    'dev': SplitName.VALIDATION,
    'test': SplitName.TEST,
}


@dataclass(frozen=True)
class Sentence:
    index: int
    raw: str
    tokens: Tuple[str, ...]


@dataclass(frozen=True)
class Document:
    id: str
    sentences: Tuple[Sentence, ...]
    lang: Lang = Lang.LATIN
    reference_summary: Optional[str] = None

    def __post_init__(self):
        for position, sentence in enumerate(self.sentences):
            if sentence.index != position:
                raise ValueError(
                    f"document {self.id!r}: sentence at position {position} has index {sentence.index}")

    def __len__(self):
        return len(self.sentences)

    @property
    def texts(self) -> List[str]:
        return [sentence.raw for sentence in self.sentences]

    @classmethod
    def from_sentences(cls, doc_id, raw_sentences, lang=Lang.LATIN, reference_summary=None):
        """Build a document from already segmented sentences.

        Segments without a single token (pure punctuation, symbols) are dropped
        and the survivors are re-indexed from 0.
        """
        lang = Lang(lang)
        sentences = []
        for raw in raw_sentences:
            raw = raw.strip()
            if not raw:
                continue
            try:
                tokens = tokenize(raw, lang)
            except EmptyInput:
                logger.debug(f"Document {doc_id}: dropping token-less segment {raw!r}")
                continue
            sentences.append(Sentence(index=len(sentences), raw=raw, tokens=tuple(tokens)))
        if not sentences:
            raise EmptyInput(f"document {doc_id!r} has no tokenizable sentence")
        return cls(id=doc_id, sentences=tuple(sentences), lang=lang,
                   reference_summary=reference_summary)

    @classmethod
    def from_text(cls, doc_id, text, lang=Lang.LATIN, reference_summary=None):
        return cls.from_sentences(doc_id, segment_sentences(text, lang), lang, reference_summary)


@dataclass
class DatasetSplit:
    name: SplitName
    records: List[Document] = field(default_factory=list)
    source: Optional[Path] = None

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def _is_initial(prefix, suffix):
    """A lone capital followed by a period continues a name rather than ending a sentence.

    "John F. Kennedy" and "J. R. Tolkien" qualify; "an A. Then", "Plan B. It"
    and "did I. Then" do not.
    """
    if _NEXT_INITIAL.match(suffix):
        return True
    before = _WORD_BEFORE_LAST.search(prefix)
    after = _NEXT_WORD.match(suffix)
    if before is None or after is None:
        return False
    previous = before.group(1).lstrip('("\'“‘[')
    following = after.group(1)
    return (previous[:1].isupper() and following[:1].isupper()
            and following.lower() not in SENTENCE_OPENERS)


def _is_abbreviation(prefix, terminator, suffix=''):
    if not terminator.startswith('.'):
        return False
    match = _LAST_WORD.search(prefix)
    if match is None:
        return False
    word = match.group(1).lstrip('("\'“‘[')
    if len(word) == 1 and word.isupper() and word != 'I':
        return _is_initial(prefix, suffix)
    return word.lower() in ABBREVIATIONS


def _segment_latin(text):
    pieces = []
    start = 0
    for match in _LATIN_BOUNDARY.finditer(text):
        candidate = text[start:match.end()].strip()
        if len(candidate) < MIN_SENTENCE_CHARS:
            continue
        if _is_abbreviation(text[start:match.start()], match.group(0), text[match.end():]):
            continue
        pieces.append(candidate)
        start = match.end()
    tail = text[start:].strip()
    if tail:
        pieces.append(tail)
    return pieces


def _segment_cjk(text):
    pieces = []
    start = 0
    for match in _CJK_BOUNDARY.finditer(text):
        candidate = text[start:match.end()].strip()
        if candidate:
            pieces.append(candidate)
        start = match.end()
    tail = text[start:].strip()
    if tail:
        pieces.append(tail)
    return pieces


def segment_sentences(text, lang=Lang.LATIN) -> List[str]:
    """Split ``text`` into sentences with rule-based terminator sets.

    Every non-whitespace character of the input appears in exactly one
    returned sentence, in order.
    """
    if not text or not text.strip():
        raise EmptyInput("cannot segment whitespace-only text")
    if Lang(lang) is Lang.CJK:
        return _segment_cjk(text)
    return _segment_latin(text)


def tokenize(sentence, lang=Lang.LATIN) -> List[str]:
    if Lang(lang) is Lang.CJK:
        tokens = [char for char in sentence if not char.isspace()]
    else:
        tokens = _WORD.findall(sentence.lower())
    if not tokens:
        raise EmptyInput(f"no tokens in {sentence!r}")
    return tokens


def infer_split_name(path) -> SplitName:
    stem = Path(path).stem.lower()
    for part in re.split(r'[^a-z]+', stem):
        if part in _SPLIT_ALIASES:
            return _SPLIT_ALIASES[part]
    return SplitName.TEST


def _require_string(record, key, line_no):
    value = record.get(key)
    if not isinstance(value, str) or not value.strip():
        raise FormatError(line_no, f"field {key!r} must be a non-empty string")
    return value


def _parse_record(record, line_no) -> Document:
    if not isinstance(record, dict):
        raise FormatError(line_no, "expected a JSON object")
    doc_id = _require_string(record, 'id', line_no)
    summary = _require_string(record, 'summary', line_no)
    try:
        lang = Lang(record.get('lang'))
    except ValueError:
        raise FormatError(line_no, f"field 'lang' must be one of latin, cjk, got {record.get('lang')!r}")

    has_text = 'text' in record
    has_sentences = 'sentences' in record
    if has_text == has_sentences:
        raise FormatError(line_no, "exactly one of 'text' or 'sentences' is required")
    try:
        if has_text:
            text = _require_string(record, 'text', line_no)
            return Document.from_text(doc_id, text, lang, summary)
        sentences = record['sentences']
        if not isinstance(sentences, list) or not all(isinstance(s, str) for s in sentences):
            raise FormatError(line_no, "field 'sentences' must be an array of strings")
        return Document.from_sentences(doc_id, sentences, lang, summary)
    except EmptyInput as exc:
        raise FormatError(line_no, str(exc)) from exc


def iter_documents(path, skip_malformed=False) -> Iterator[Document]:
    """Stream documents from a normalized JSONL dataset file in file order.

    Lines are decoded one at a time, so a line that is not UTF-8 is a
    malformed record like any other.
    """
    path = Path(path)
    try:
        handle = open(path, 'rb')
    except OSError as exc:
        raise DataIOError(f"cannot open dataset {path}: {exc}") from exc

    with handle:
        try:
            for line_no, raw_line in enumerate(handle, start=1):
                try:
                    try:
                        line = raw_line.decode('utf-8').strip()
                    except UnicodeDecodeError as exc:
                        raise FormatError(line_no, f"not valid UTF-8: {exc.reason}") from exc
                    if not line:
                        continue
                    try:
                        record = json.loads(line)
                    except json.JSONDecodeError as exc:
                        raise FormatError(line_no, f"invalid JSON: {exc.msg}") from exc
                    document = _parse_record(record, line_no)
                except FormatError as exc:
                    if not skip_malformed:
                        raise
                    logger.warning(f"{path}: skipping malformed record ({exc})")
                    continue
                yield document
        except OSError as exc:
            raise DataIOError(f"error reading {path}: {exc}") from exc


def load_dataset(path, name=None, skip_malformed=False) -> DatasetSplit:
    split_name = SplitName(name) if name else infer_split_name(path)
    records = list(iter_documents(path, skip_malformed=skip_malformed))
    if not records:
        logger.warning(f"Dataset {path} contains no records")
    else:
        logger.info(f"Loaded {len(records)} documents from {path} ({split_name.value} split)")
    return DatasetSplit(name=split_name, records=records, source=Path(path))


def head(split: DatasetSplit, limit: int) -> DatasetSplit:
    """First ``limit`` documents of a split, for a coarse tuning pass."""
    return DatasetSplit(name=split.name, records=split.records[:max(limit, 0)], source=split.source)


def take_fraction(split: DatasetSplit, fraction: float) -> DatasetSplit:
    """Leading fraction of a split, used to tune on train when no validation split exists."""
    if not 0.0 < fraction <= 1.0:
        raise ConfigError(f"fraction must be in (0, 1], got {fraction}")
    count = max(1, math.ceil(fraction * len(split))) if len(split) else 0
    return head(split, count)

