"""Working precision for mpmath computations."""
from contextlib import contextmanager

import mpmath

from .conf import zetafred_setting

DOUBLE_DPS = 15
PRECISION_MODES = ('double', 'extended')


def precision_dps(mode=None):
    """Decimal digits used for a precision mode."""
    mode = mode or zetafred_setting('PRECISION')
    if mode not in PRECISION_MODES:
        raise ValueError(f'Unknown precision mode: {mode}')
    if mode == 'extended':
        return zetafred_setting('EXTENDED_DPS')
    return DOUBLE_DPS


def is_extended():
    return mpmath.mp.dps > DOUBLE_DPS


@contextmanager
def working_precision(mode=None):
    """Run a block at the decimal precision of ``mode``."""
    with mpmath.workdps(precision_dps(mode)):
        yield


def quadrature_tol():
    """Accepted quadrature error estimate at the working precision."""
    if is_extended():
        return mpmath.mpf(10) ** (10 - mpmath.mp.dps)
    return zetafred_setting('REGINT_TOL')
