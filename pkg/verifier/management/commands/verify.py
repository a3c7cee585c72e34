from django.core.management.base import CommandError

from operators.catalog import resolve_model
from verifier.checks import verify_model
from verifier.reports import format_table, report_payload, write_csv
from zetafred.commands import ZetafredCommand, complex_value


class Command(ZetafredCommand):
    help = 'Check log det_zeta(L+z) = sum c_j z^j + log det_p(I+zL^-1) and the constant-term theorem'

    def add_command_arguments(self, parser):
        parser.add_argument('model', help='Catalog name or path to a model JSON file')
        parser.add_argument(
            '--z',
            dest='z_grid',
            type=complex_value,
            action='append',
            default=None,
            help='Grid point "re,im" with Re z > 0; repeat for several (default: ZETAFRED_IDENTITY_Z_GRID)',
        )
        parser.add_argument(
            '--tol',
            type=float,
            default=None,
            help='Largest accepted identity residual (default: ZETAFRED_IDENTITY_TOL)',
        )
        parser.add_argument(
            '--no-fit',
            action='store_true',
            help='Skip the constant-term fit',
        )
        parser.add_argument(
            '--csv',
            dest='csv_path',
            type=str,
            help='Also write the check rows as CSV to this path',
        )

    def run(self, **options):
        model = resolve_model(options['model'])
        report = verify_model(model, options['z_grid'], options['tol'], fit=not options['no_fit'])
        self.write_json(report_payload([report]), options.get('json_path'))
        if options.get('csv_path'):
            write_csv([report], options['csv_path'])
        for line in format_table([report]):
            self.stderr.write(line)
        if not report.passed:
            raise CommandError(f'{model.name}: FAIL', returncode=1)
        self.stderr.write(self.style.SUCCESS(f'{model.name}: PASS'))
