from extractive.harness import evaluate_method, render_json
from extractive.management.base import (SummarizationCommand, add_config_arguments, add_dataset_arguments,
                                        add_encoder_arguments, add_jobs_argument, add_method_argument,
                                        dataset_notes, load_split, resolve_options)


class Command(SummarizationCommand):
    help = "Evaluate one method on a dataset split and print the aggregate ROUGE scores as JSON."

    def add_arguments(self, parser):
        add_dataset_arguments(parser)
        parser.add_argument('--out', metavar='PATH', help="write the full result, per-document scores included")
        add_jobs_argument(parser)
        add_method_argument(parser)
        add_config_arguments(parser)
        add_encoder_arguments(parser)

    def handle(self, *args, **options):
        self.check_counts(options)
        config, encoder_spec = resolve_options(options)
        split = load_split(options)
        result = evaluate_method(split, config, encoder_spec, jobs=options['jobs'],
                                 notes=dataset_notes(options, split))
        self.stdout.write(render_json(result.to_dict(include_per_doc=False)), ending='')
        if options['out']:
            self.write_json(options['out'], result.to_dict())
