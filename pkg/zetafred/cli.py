"""Command-line entry point: ``zetafred <subcommand> ...``."""
import os
import sys

SUBCOMMANDS = ('models', 'zeta', 'detzeta', 'fredholm', 'expand', 'verify', 'report')

USAGE = (
    'usage: zetafred {' + ','.join(SUBCOMMANDS) + '} [options]\n'
    "Run 'zetafred <subcommand> --help' for the options of a subcommand."
)

EXIT_USAGE = 2


def cli_main(argv=None):
    """Dispatch ``argv`` to the management command of the same name and return the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in SUBCOMMANDS:
        sys.stderr.write(USAGE + '\n')
        return EXIT_USAGE

    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'zetafred.settings')
    try:
        import django
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc

    django.setup()
    try:
        execute_from_command_line(['zetafred', *argv])
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, CommandError with its returncode
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 1
    return 0
