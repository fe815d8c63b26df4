from extractive.exceptions import ReportError
from extractive.harness import EvalResult, compare_report
from extractive.management.base import SummarizationCommand


class Command(SummarizationCommand):
    help = "Tabulate saved evaluation results: one row per method, mean ROUGE-1/2/L F1 x100."

    def add_arguments(self, parser):
        parser.add_argument('--results', metavar='PATH', nargs='+', required=True,
                            help="result files written by eval --out or tune --out")
        parser.add_argument('--out', metavar='PATH', help="also write the table as JSON")

    def handle(self, *args, **options):
        results = []
        for path in options['results']:
            try:
                results.append(EvalResult.from_dict(self.read_json(path)))
            except ValueError as exc:
                raise ReportError(f"{path}: {exc}") from exc
        report = compare_report(results)
        self.stdout.write(report.table, ending='')
        if options['out']:
            self.write_json(options['out'], report.to_dict())
