"""Access to the ``ZETAFRED`` settings block with library defaults."""
from django.conf import settings

DEFAULTS = {
    'PRECISION': 'double',
    'EXTENDED_DPS': 40,
    'REGINT_TOL': 1e-10,
    'REGINT_FLOOR': 1e-12,
    'REGINT_DPS': 40,
    'HEAT_TRACE_TOL': 1e-14,
    'HEAT_TRACE_FLOOR': 1e-3,
    'HEAT_SPLIT': 0.1,
    'WINDOW_TOL': 1e-10,
    'HEAT_MAX_TERMS': 10_000_000,
    'FREDHOLM_TOL': 1e-12,
    'ROUTE_TOL': 1e-7,
    'IDENTITY_TOL': 1e-6,
    'CONSTANT_TERM_TOL': 1e-3,
    'FIT_CONDITION_LIMIT': 1e10,
    'FIT_Z0': 25.0,
    'FIT_POINTS': 6,
    'FIT_RESIDUAL_TOL': 1e-6,
    'FIT_MATCH_TOL': 1e-3,
    'RESOLVENT_SPLIT': 100.0,
    'IDENTITY_Z_GRID': [0.5, 1.0, 2.0, 4.0],
    'DERIVATIVE_STEPS': [1e-2, 5e-3, 2.5e-3],
}


def zetafred_setting(name):
    """Return a numerical setting, falling back to the library default."""
    if name not in DEFAULTS:
        raise KeyError(f'Unknown zetafred setting: {name}')
    overrides = getattr(settings, 'ZETAFRED', {}) if settings.configured else {}
    return overrides.get(name, DEFAULTS[name])
