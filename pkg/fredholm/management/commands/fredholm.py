from operators.catalog import resolve_model
from fredholm.products import det_fredholm
from zetafred.commands import ZetafredCommand, complex_value, json_number


class Command(ZetafredCommand):
    help = 'Regularized Fredholm determinant det_{N+1}(I + zL^-1) of a model'

    def add_command_arguments(self, parser):
        parser.add_argument('model', help='Catalog name or path to a model JSON file')
        parser.add_argument(
            '--z',
            type=complex_value,
            required=True,
            help='Point z as "re,im"',
        )
        parser.add_argument(
            '--order',
            type=int,
            default=None,
            help='Order N+1 of the determinant (default: the Schatten order p of the model)',
        )

    def run(self, **options):
        model = resolve_model(options['model'])
        order = options['order'] if options['order'] is not None else model.schatten_p
        result = det_fredholm(model, options['z'], order)
        payload = {
            'model': model.name,
            'z': json_number(result.z),
            'order': result.order,
            'log_value': json_number(result.log_value),
            'value': json_number(result.value),
            'truncation_n': result.truncation_n,
            'tail_bound': float(result.tail_bound),
        }
        self.write_json(payload, options.get('json_path'))
