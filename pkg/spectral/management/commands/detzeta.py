from django.core.management.base import CommandError

from operators.catalog import resolve_model
from spectral.determinants import determinant_routes
from zetafred.commands import ZetafredCommand, complex_value, json_number
from zetafred.conf import zetafred_setting


class Command(ZetafredCommand):
    help = 'Zeta-regularized log-determinant of a model (or of L+z) by both routes'

    def add_command_arguments(self, parser):
        parser.add_argument('model', help='Catalog name or path to a model JSON file')
        parser.add_argument(
            '--shift',
            type=complex_value,
            default=0,
            help='Shift z as "re,im" (default: 0)',
        )
        parser.add_argument(
            '--tol',
            type=float,
            default=None,
            help='Largest accepted disagreement of the two routes (default: ZETAFRED_ROUTE_TOL)',
        )

    def run(self, **options):
        model = resolve_model(options['model'])
        routes = determinant_routes(model, options['shift'])
        payload = {
            'model': model.name,
            'shift': json_number(options['shift']),
            'log_det_zeta': json_number(routes.value),
            'value': json_number(routes.value),
            'route_heat': json_number(routes.route_heat),
            'route_derivative': json_number(routes.route_derivative),
            'residual': float(routes.residual),
            'window_bound': float(routes.window_bound),
        }
        self.write_json(payload, options.get('json_path'))
        tol = options['tol'] if options['tol'] is not None else zetafred_setting('ROUTE_TOL')
        if routes.residual > tol:
            raise CommandError(
                f'Routes disagree by {float(routes.residual):.3e} (tolerance {tol})', returncode=1,
            )
