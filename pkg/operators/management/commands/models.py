from django.core.management.base import CommandError

from operators.catalog import CATALOG_NAMES, get_model, resolve_model
from operators.serializers import dump_model
from operators.spectra import validate_heat_expansion
from zetafred.commands import ZetafredCommand


class Command(ZetafredCommand):
    help = 'List, show or validate spectrum models'

    def add_command_arguments(self, parser):
        parser.add_argument(
            'action',
            choices=['list', 'show', 'validate'],
            help='list the catalog, show a model as JSON, or validate a model file',
        )
        parser.add_argument(
            'target',
            nargs='?',
            help='Catalog name or path to a model JSON file',
        )

    def run(self, **options):
        action = options['action']
        target = options.get('target')
        if action != 'list' and not target:
            raise CommandError(f'"models {action}" needs a model name or file', returncode=2)

        if action == 'list':
            self.list_models()
        elif action == 'show':
            self.write_json(dump_model(resolve_model(target)), options.get('json_path'))
        else:
            self.validate_model(target)

    def list_models(self):
        for name in CATALOG_NAMES:
            model = get_model(name)
            self.stdout.write(
                f'{model.name:8} p={model.schatten_p} dim_ker={model.dim_ker}  {model.description}'
            )

    def validate_model(self, target):
        model = resolve_model(target)
        comparison = validate_heat_expansion(model)
        if not comparison.passed:
            raise CommandError(f'{model.name}: {comparison.message}', returncode=1)
        self.stdout.write(
            self.style.SUCCESS(f'{model.name}: PASS ({comparison.message})')
        )
