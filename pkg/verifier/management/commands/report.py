from django.core.management.base import CommandError

from operators.catalog import CATALOG_NAMES
from verifier.checks import run_catalog_report
from verifier.reports import format_table, report_payload, write_csv
from zetafred.commands import ZetafredCommand


class Command(ZetafredCommand):
    help = 'Run every check on the catalog models and emit a JSON report and a table'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--models',
            nargs='+',
            choices=CATALOG_NAMES,
            default=list(CATALOG_NAMES),
            help='Catalog models to check (default: all)',
        )
        parser.add_argument(
            '--tol',
            type=float,
            default=None,
            help='Largest accepted identity residual (default: ZETAFRED_IDENTITY_TOL)',
        )
        parser.add_argument(
            '--csv',
            dest='csv_path',
            type=str,
            help='Also write the check rows as CSV to this path',
        )

    def run(self, **options):
        reports = run_catalog_report(options['models'], tol=options['tol'])
        self.write_json(report_payload(reports), options.get('json_path'))
        if options.get('csv_path'):
            write_csv(reports, options['csv_path'])
        for line in format_table(reports):
            self.stderr.write(line)

        failed = [report.model for report in reports if not report.passed]
        if failed:
            raise CommandError(f'FAIL: {", ".join(failed)}', returncode=1)
        self.stderr.write(self.style.SUCCESS(f'PASS: {len(reports)} models'))
