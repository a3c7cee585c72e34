from operators.catalog import resolve_model
from spectral.zeta import zeta
from zetafred.commands import ZetafredCommand, complex_value, json_number


class Command(ZetafredCommand):
    help = 'Evaluate the spectral zeta function of a model, with Laurent data at poles'

    def add_command_arguments(self, parser):
        parser.add_argument('model', help='Catalog name or path to a model JSON file')
        parser.add_argument(
            '--s',
            type=complex_value,
            required=True,
            help='Point s as "re,im" or "re"',
        )
        parser.add_argument(
            '--shift',
            type=complex_value,
            default=0,
            help='Evaluate for L+z with z given as "re,im" (default: 0)',
        )

    def run(self, **options):
        model = resolve_model(options['model'])
        spectrum = model.shifted(options['shift']) if options['shift'] else model
        result = zeta(spectrum, options['s'])
        payload = {
            'model': spectrum.name,
            's': json_number(result.s),
            'value': json_number(result.value),
            'window_bound': float(result.window_bound),
        }
        if result.laurent is not None:
            payload['laurent'] = {
                str(-m): json_number(c) for m, c in sorted(result.laurent.coeffs.items(), reverse=True)
            }
        self.write_json(payload, options.get('json_path'))
