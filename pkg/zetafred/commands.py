"""Shared pieces of the zetafred management commands."""
import argparse
import json
import logging
import os

import mpmath
from django.core.management.base import BaseCommand, CommandError

from .exceptions import ZetafredError
from .precision import PRECISION_MODES, working_precision

logger = logging.getLogger(__name__)


def complex_value(text):
    """argparse type for "re,im" or "re"."""
    parts = text.split(',')
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f'Expected "re,im", got {text!r}')
    try:
        values = [mpmath.mpf(part.strip()) for part in parts]
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f'Expected "re,im", got {text!r}')
    if len(values) == 1 or values[1] == 0:
        return values[0]
    return mpmath.mpc(*values)


def json_number(value):
    """Real numbers as floats, complex ones as [re, im]."""
    if value is None:
        return None
    value = mpmath.mpmathify(value)
    if isinstance(value, mpmath.mpc):
        if value.imag == 0:
            return float(value.real)
        return [float(value.real), float(value.imag)]
    return float(value)


class ZetafredCommand(BaseCommand):
    """Runs ``run`` at the requested precision and turns library errors into exit code 1."""

    def add_arguments(self, parser):
        parser.add_argument(
            '--precision',
            choices=PRECISION_MODES,
            default=None,
            help='Working precision (default: ZETAFRED_PRECISION)',
        )
        parser.add_argument(
            '--json',
            dest='json_path',
            type=str,
            help='Also write the JSON result to this path',
        )
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        try:
            with working_precision(options['precision']):
                return self.run(**options)
        except ZetafredError as exc:
            logger.error(f'{self.__class__.__module__}: {exc}')
            raise CommandError(str(exc), returncode=1)

    def run(self, **options):
        raise NotImplementedError

    def write_json(self, payload, json_path=None):
        text = json.dumps(payload, indent=2)
        self.stdout.write(text)
        if json_path:
            directory = os.path.dirname(json_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(json_path, 'w') as f:
                f.write(text + '\n')
