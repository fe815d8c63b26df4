import logging
import sys
from pathlib import Path

from extractive.corpus import Document, Lang
from extractive.encoder import make_encoder
from extractive.exceptions import DataIOError
from extractive.management.base import (SummarizationCommand, add_config_arguments, add_encoder_arguments,
                                        add_method_argument, resolve_options)
from extractive.pipeline import SummarizationPipeline
from extractive.simgraph import dump_matrix_tsv
from extractive.summarizer import Method

logger = logging.getLogger(__name__)


class Command(SummarizationCommand):
    help = "Summarize one document and print the selected sentences in document order, one per line."

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group()
        source.add_argument('--input', metavar='PATH', help="plain-text document to summarize")
        source.add_argument('--stdin', action='store_true', help="read the document from standard input")
        parser.add_argument('--lang', choices=[lang.value for lang in Lang], default=Lang.LATIN.value,
                            help="segmentation and tokenization rules (default: latin)")
        parser.add_argument('--doc-id',
                            help="id used to look up external embeddings (default: the input file stem, or 'stdin')")
        parser.add_argument('--trace', metavar='PATH', help="write per-round importance scores as JSON")
        parser.add_argument('--dump-matrix', metavar='PATH',
                            help="write the thresholded similarity matrix as TSV")
        add_method_argument(parser)
        add_config_arguments(parser)
        add_encoder_arguments(parser)

    def _read_document(self, options):
        if options['stdin']:
            try:
                return 'stdin', sys.stdin.read()
            except (OSError, UnicodeDecodeError) as exc:
                raise DataIOError(f"cannot read standard input: {exc}") from exc
        path = Path(options['input'])
        try:
            return path.stem, path.read_text(encoding='utf-8')
        except (OSError, UnicodeDecodeError) as exc:
            raise DataIOError(f"cannot read {path}: {exc}") from exc

    def handle(self, *args, **options):
        if not options['input'] and not options['stdin']:
            raise self.usage_error("one of --input or --stdin is required")
        config, encoder_spec = resolve_options(options)
        default_id, text = self._read_document(options)
        doc = Document.from_text(options['doc_id'] or default_id, text, Lang(options['lang']))
        logger.info(f"Document {doc.id}: {len(doc)} sentences")

        encoder = None if config.method is Method.LEAD else make_encoder(encoder_spec, [doc])
        pipeline = SummarizationPipeline(config, encoder)
        summary = pipeline.summarize(doc)
        logger.info(f"Selected sentences {summary.indices} in {pipeline.avg_summarize_time * 1000:.2f} ms")
        for sentence in summary.sentences:
            self.stdout.write(sentence)

        if options['trace']:
            self.write_json(options['trace'], {
                'doc_id': doc.id,
                'method': config.method.value,
                'config': config.to_dict(),
                'selected': summary.indices,
                'rounds': summary.trace,
            })
        if options['dump_matrix']:
            if summary.graph is None:
                logger.warning(f"No similarity graph for {doc.id} with method {config.method.value}; "
                               f"{options['dump_matrix']} not written")
            else:
                try:
                    with open(options['dump_matrix'], 'w', encoding='utf-8', newline='') as stream:
                        dump_matrix_tsv(summary.graph, stream)
                except OSError as exc:
                    raise DataIOError(f"cannot write {options['dump_matrix']}: {exc}") from exc
