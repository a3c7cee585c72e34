from django.core.management.base import CommandError

from asymptotics.fitting import QUANTITIES, compare_expansions, fit_expansion, fit_template, geometric_grid, sample_grid
from asymptotics.predictions import (
    predict_fredholm_expansion, predict_log_det_zeta_expansion, predict_resolvent_expansion,
)
from asymptotics.serializers import LargeZExpansionSerializer
from expansions.serializers import ExpansionComparisonSerializer
from operators.catalog import resolve_model
from zetafred.commands import ZetafredCommand
from zetafred.conf import zetafred_setting


class Command(ZetafredCommand):
    help = 'Predicted large-z expansion of log det_zeta(L+z), log det_p(I+zL^-1) or tr(L+z)^-N'

    def add_command_arguments(self, parser):
        parser.add_argument('model', help='Catalog name or path to a model JSON file')
        parser.add_argument(
            '--what',
            choices=QUANTITIES,
            default='detzeta',
            help='Quantity to expand (default: detzeta)',
        )
        parser.add_argument(
            '--N',
            dest='N',
            type=int,
            default=None,
            help='Resolvent power N (default: the Schatten order p)',
        )
        parser.add_argument(
            '--fit',
            action='store_true',
            help='Also fit the expansion to numerical samples and compare',
        )
        parser.add_argument(
            '--z0',
            type=float,
            default=None,
            help='First point of the geometric fit grid (default: ZETAFRED_FIT_Z0)',
        )

    def run(self, **options):
        model = resolve_model(options['model'])
        what = options['what']
        N = options['N'] if options['N'] is not None else model.schatten_p
        predicted = self.predict(model, what, N)
        payload = {
            'model': model.name,
            'what': what,
            'N': N if what == 'resolvent' else None,
            'predicted': LargeZExpansionSerializer(predicted).data,
        }
        comparison = None
        if options['fit']:
            required = [] if what == 'resolvent' else [(0, 1), (0, 0)]
            template = fit_template(predicted, required=required)
            points = max(zetafred_setting('FIT_POINTS'), len(template) + 2)
            samples = sample_grid(model, what, geometric_grid(options['z0'], points), N)
            fitted = fit_expansion(samples, template)
            comparison = compare_expansions(predicted, fitted)
            payload['fitted'] = LargeZExpansionSerializer(fitted).data
            payload['comparison'] = ExpansionComparisonSerializer(comparison).data

        self.write_json(payload, options.get('json_path'))
        if comparison is not None and not comparison.passed:
            raise CommandError(f'{model.name} {what}: {comparison.message}', returncode=1)

    def predict(self, model, what, N):
        if what == 'detzeta':
            return predict_log_det_zeta_expansion(model)
        if what == 'fredholm':
            return predict_fredholm_expansion(model)
        return predict_resolvent_expansion(model, N)
