"""Errors raised by the extractive summarization library.

Library code raises these; the management commands turn them into
``CommandError`` with exit status 2. Constructor arguments are kept in
``args`` so the errors survive the trip back from worker processes.
"""


class SummarizationError(Exception):
    """Base class for every data-level failure of the summarizer."""


class EmptyInput(SummarizationError):
    pass


class DataIOError(SummarizationError):
    pass


class FormatError(SummarizationError):
    def __init__(self, line_no, reason):
        super().__init__(line_no, reason)
        self.line_no = line_no
        self.reason = reason

    def __str__(self):
        if self.line_no is None:
            return self.reason
        return f"line {self.line_no}: {self.reason}"


class EmptyCorpus(SummarizationError):
    pass


class MissingDocument(SummarizationError):
    def __init__(self, doc_id):
        super().__init__(doc_id)
        self.doc_id = doc_id

    def __str__(self):
        return f"no entry for document {self.doc_id!r}"


class MissingEmbeddings(MissingDocument):
    def __str__(self):
        return f"no embeddings available for document {self.doc_id!r}"


class DimensionMismatch(SummarizationError):
    pass


class TooFewSentences(SummarizationError):
    pass


class OutOfRange(SummarizationError):
    def __init__(self, name, value, allowed):
        super().__init__(name, value, allowed)
        self.name = name
        self.value = value
        self.allowed = allowed

    def __str__(self):
        return f"{self.name}={self.value!r} is outside {self.allowed}"


class AlreadyDampened(SummarizationError):
    def __init__(self, index):
        super().__init__(index)
        self.index = index

    def __str__(self):
        return f"edges of sentence {self.index} were already dampened"


class EmptySplit(SummarizationError):
    pass


class ConfigError(SummarizationError):
    pass


class GridError(ConfigError):
    pass


class ReportError(SummarizationError):
    pass
