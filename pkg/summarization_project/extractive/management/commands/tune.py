import logging
from contextlib import ExitStack
from dataclasses import replace

from extractive.config import load_grid
from extractive.corpus import take_fraction
from extractive.exceptions import DataIOError
from extractive.harness import Objective, grid_search, render_json
from extractive.management.base import (SummarizationCommand, add_config_arguments, add_dataset_arguments,
                                        add_encoder_arguments, add_jobs_argument, add_method_argument,
                                        dataset_notes, load_split, resolve_options)

logger = logging.getLogger(__name__)

OBJECTIVE_CHOICES = ('r1', 'r2', 'rl')


class Command(SummarizationCommand):
    help = ("Grid-search a method's parameters on a validation split and print the best config "
            "with its scores as JSON.")

    def add_arguments(self, parser):
        add_dataset_arguments(parser)
        parser.add_argument('--grid', metavar='PATH', required=True,
                            help="grid file (JSON or Python config) listing values per axis")
        parser.add_argument('--objective', choices=OBJECTIVE_CHOICES,
                            help="mean F1 to maximize (default: the grid file's objective, else r1)")
        parser.add_argument('--tune-fraction', type=float, metavar='F',
                            help="tune on the first fraction F of the split, 0 < F <= 1 (default: 1)")
        parser.add_argument('--out', metavar='PATH',
                            help="write the best result, per-document scores included, in eval format")
        parser.add_argument('--log', metavar='PATH', help="write one JSON line per grid point")
        add_jobs_argument(parser)
        add_method_argument(parser)
        add_config_arguments(parser)
        add_encoder_arguments(parser)

    def handle(self, *args, **options):
        self.check_counts(options)
        base, encoder_spec = resolve_options(options)
        grid = load_grid(options['grid'])
        if options['objective']:
            grid = replace(grid, objective=Objective.parse(options['objective']))

        split = load_split(options)
        notes = dataset_notes(options, split)
        if options['tune_fraction'] is not None:
            split = take_fraction(split, options['tune_fraction'])
            notes['tune_fraction'] = options['tune_fraction']
        notes.update(grid=str(options['grid']), objective=grid.objective.value)

        with ExitStack() as stack:
            log_stream = None
            if options['log']:
                try:
                    log_stream = stack.enter_context(open(options['log'], 'w', encoding='utf-8'))
                except OSError as exc:
                    raise DataIOError(f"cannot write {options['log']}: {exc}") from exc
            best_config, result = grid_search(split, grid, base.method, encoder_spec, base_config=base,
                                              jobs=options['jobs'], log_stream=log_stream, notes=notes)

        self.stdout.write(render_json({
            'method': best_config.method.value,
            'best_config': best_config.to_dict(),
            'objective': grid.objective.value,
            'value': result.objective(grid.objective),
            'aggregate': result.aggregate,
            'doc_count': result.doc_count,
        }), ending='')
        if options['out']:
            self.write_json(options['out'], result.to_dict())
