"""Shared flags and error translation for the summarizer management commands."""
import json
import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from extractive.config import check_overrides, resolve
from extractive.corpus import SplitName, head, load_dataset
from extractive.encoder import EncoderKind, TfIdfScope
from extractive.exceptions import ConfigError, DataIOError, OutOfRange, SummarizationError
from extractive.harness import render_json
from extractive.simgraph import METRICS
from extractive.summarizer import Method, SummarizerConfig

logger = logging.getLogger(__name__)

DEFAULTS = SummarizerConfig()
METHOD_CHOICES = [method.value for method in Method] + ['lead']
SUMMARIZER_FLAGS = ('k', 'a', 'beta1', 'beta2', 'alpha1', 'alpha2', 'method', 'damping', 'max_iter',
                    'tol', 'similarity')


class SummarizationCommand(BaseCommand):
    """Base command: data errors exit with status 2, usage errors with status 1."""

    requires_system_checks = []
    requires_migrations_checks = False

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except SummarizationError as exc:
            raise CommandError(str(exc), returncode=2) from exc
        except OSError as exc:
            raise CommandError(f"I/O error: {exc}", returncode=2) from exc

    def usage_error(self, message):
        return CommandError(message, returncode=1)

    def check_counts(self, options):
        if options.get('jobs') is not None and options['jobs'] < 1:
            raise self.usage_error("--jobs must be at least 1")
        if options.get('limit') is not None and options['limit'] < 1:
            raise self.usage_error("--limit must be at least 1")

    def write_json(self, path, payload):
        try:
            Path(path).write_text(render_json(payload), encoding='utf-8')
        except OSError as exc:
            raise DataIOError(f"cannot write {path}: {exc}") from exc
        logger.info(f"Wrote {path}")

    def read_json(self, path):
        try:
            with open(path, 'r', encoding='utf-8') as handle:
                return json.load(handle)
        except OSError as exc:
            raise DataIOError(f"cannot read {path}: {exc}") from exc


def add_method_argument(parser):
    parser.add_argument('--method', choices=METHOD_CHOICES,
                        help=f"selection method (default: {DEFAULTS.method.value})")


def add_config_arguments(parser):
    group = parser.add_argument_group('summarizer configuration')
    group.add_argument('--config', metavar='PATH',
                       help="JSON or mmengine-style Python config; flags override its values")
    group.add_argument('--k', type=int, help=f"number of summary sentences (default: {DEFAULTS.k})")
    group.add_argument('--a', type=float, help=f"threshold position between min and max similarity (default: {DEFAULTS.a})")
    group.add_argument('--beta1', type=float, help=f"forward edge weight (default: {DEFAULTS.beta1})")
    group.add_argument('--beta2', type=float, help=f"backward edge weight (default: {DEFAULTS.beta2})")
    group.add_argument('--alpha1', type=float,
                       help=f"dampening of a picked sentence's forward edges (default: {DEFAULTS.alpha1})")
    group.add_argument('--alpha2', type=float,
                       help=f"dampening of a picked sentence's backward edges (default: {DEFAULTS.alpha2})")
    group.add_argument('--damping', type=float, help=f"TextRank damping factor (default: {DEFAULTS.damping})")
    group.add_argument('--max-iter', type=int, help=f"TextRank iteration cap (default: {DEFAULTS.max_iter})")
    group.add_argument('--tol', type=float, help=f"TextRank L1 convergence tolerance (default: {DEFAULTS.tol})")
    group.add_argument('--similarity', choices=METRICS,
                       help=f"sentence similarity; cosine is for ablations (default: {DEFAULTS.similarity})")


def add_encoder_arguments(parser):
    group = parser.add_argument_group('encoder')
    group.add_argument('--encoder', choices=[kind.value for kind in EncoderKind],
                       help=f"sentence encoder (default: {EncoderKind.TFIDF.value})")
    group.add_argument('--embeddings', metavar='PATH',
                       help="embedding JSONL file for --encoder external (default: none)")
    group.add_argument('--tfidf-scope', choices=[scope.value for scope in TfIdfScope],
                       help=f"idf units: sentences of one document or whole documents "
                            f"(default: {TfIdfScope.PER_DOCUMENT.value})")
    group.add_argument('--raw-tfidf', dest='normalize', action='store_false', default=None,
                       help="skip L2 normalization of tf-idf vectors (default: normalized)")


def add_jobs_argument(parser):
    jobs = settings.EXTRACTIVE['JOBS']
    parser.add_argument('--jobs', type=int, default=jobs,
                        help=f"worker processes for per-document work (default: {jobs})")


def resolve_options(options):
    summarizer = {name: options.get(name) for name in SUMMARIZER_FLAGS}
    try:
        check_overrides(summarizer)
    except (ConfigError, OutOfRange) as exc:
        # bad flag values are usage errors; bad config-file values stay data errors
        raise CommandError(str(exc), returncode=1) from exc
    encoder = {
        'kind': options.get('encoder'),
        'embeddings': options.get('embeddings'),
        'tfidf_scope': options.get('tfidf_scope'),
        'normalize': options.get('normalize'),
    }
    config, encoder_spec = resolve(options.get('config'), summarizer, encoder)
    logger.info(f"Effective config: {config.to_dict()} encoder: {encoder_spec.to_dict()}")
    return config, encoder_spec


def add_dataset_arguments(parser):
    group = parser.add_argument_group('dataset')
    group.add_argument('--dataset', metavar='PATH', required=True, help="JSONL file of documents with references")
    group.add_argument('--split', choices=[name.value for name in SplitName],
                       help="split label for the report (default: inferred from the file name)")
    group.add_argument('--skip-malformed', action='store_true',
                       help="log and skip malformed records instead of failing")
    group.add_argument('--limit', type=int, metavar='N', help="use only the first N documents")


def load_split(options):
    split = load_dataset(options['dataset'], name=options['split'], skip_malformed=options['skip_malformed'])
    if options['limit'] is not None:
        split = head(split, options['limit'])
    logger.info(f"Loaded {len(split)} {split.name.value} documents from {options['dataset']}")
    return split


def dataset_notes(options, split):
    notes = {'dataset': str(options['dataset']), 'split': split.name.value}
    if options['limit'] is not None:
        notes['limit'] = options['limit']
    return notes
