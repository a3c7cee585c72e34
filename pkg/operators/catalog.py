"""Built-in models N1, N2, HO and the CUSTOM fixture, with their closed-form oracles."""
import json
import logging
import os
from fractions import Fraction

import mpmath

from expansions.terms import AT_ZERO, AsymptoticExpansion
from zetafred.exceptions import ModelRejected
from .laws import PowerLaw
from .spectra import SpectrumModel

logger = logging.getLogger(__name__)

CATALOG_NAMES = ('N1', 'N2', 'HO', 'CUSTOM')
HEAT_CUTOFF = 12
CUSTOM_FIXTURE = os.path.join(os.path.dirname(__file__), 'fixtures', 'custom_model.json')

_cache = {}


# N1: λ_n = n

def n1_heat_trace(t):
    return 1 / mpmath.expm1(t)


def n1_zeta(s):
    return mpmath.zeta(s)


def n1_log_det_shifted(z):
    return mpmath.log(2 * mpmath.pi) / 2 - mpmath.loggamma(1 + z)


def n1_log_det_fredholm(z):
    return -mpmath.euler * z - mpmath.loggamma(1 + z)


# N2: λ_n = n²

def n2_heat_trace(t):
    return (mpmath.jtheta(3, 0, mpmath.exp(-t)) - 1) / 2


def n2_heat_remainder(t):
    """Bound for |tr e^(−tL) − √π/2·t^(−1/2) + 1/2| from theta inversion."""
    return 2 * max(1, mpmath.sqrt(mpmath.pi / t)) * mpmath.exp(-mpmath.pi ** 2 / t)


def n2_zeta(s):
    return mpmath.zeta(2 * s)


def n2_log_det_shifted(z):
    if z == 0:
        return mpmath.log(2 * mpmath.pi)
    root = mpmath.sqrt(z)
    return mpmath.log(2 * mpmath.sinh(mpmath.pi * root) / root)


def n2_log_det_fredholm(z):
    if z == 0:
        return mpmath.mpf(0)
    x = mpmath.pi * mpmath.sqrt(z)
    return mpmath.log(mpmath.sinh(x) / x)


# HO: λ_n = n − 1/2

def ho_heat_trace(t):
    return 1 / (2 * mpmath.sinh(t / 2))


def ho_zeta(s):
    return mpmath.zeta(s, mpmath.mpf(1) / 2)


def ho_log_det_shifted(z):
    return mpmath.log(2 * mpmath.pi) / 2 - mpmath.loggamma(mpmath.mpf(1) / 2 + z)


def ho_log_det_fredholm(z):
    slope = mpmath.euler + 2 * mpmath.log(2)
    return mpmath.log(mpmath.pi) / 2 - mpmath.loggamma(mpmath.mpf(1) / 2 + z) - slope * z


def bernoulli_heat_expansion(cutoff=HEAT_CUTOFF):
    """1/(e^t − 1) = Σ_j B_j t^(j−1)/j!."""
    items = [
        (j - 1, 0, mpmath.bernoulli(j) / mpmath.factorial(j))
        for j in range(cutoff + 1)
    ]
    return AsymptoticExpansion.from_terms(AT_ZERO, items, cutoff)


def half_sinh_heat_expansion(cutoff=HEAT_CUTOFF):
    """1/(2 sinh(t/2)) = Σ_m (2^(1−2m) − 1)·B_2m·t^(2m−1)/(2m)!."""
    items = [
        (2 * m - 1, 0, (mpmath.mpf(2) ** (1 - 2 * m) - 1) * mpmath.bernoulli(2 * m) / mpmath.factorial(2 * m))
        for m in range(cutoff // 2 + 1)
        if 2 * m - 1 <= cutoff
    ]
    return AsymptoticExpansion.from_terms(AT_ZERO, items, cutoff)


def theta_heat_expansion():
    items = [(Fraction(-1, 2), 0, mpmath.sqrt(mpmath.pi) / 2), (0, 0, Fraction(-1, 2))]
    return AsymptoticExpansion.from_terms(AT_ZERO, items, None)


def build_n1():
    return SpectrumModel(
        name='N1',
        law=PowerLaw(),
        schatten_p=2,
        heat_expansion=bernoulli_heat_expansion(),
        description='lambda_n = n',
        oracles={
            'heat_trace': n1_heat_trace,
            'zeta': n1_zeta,
            'log_det_zeta': mpmath.log(2 * mpmath.pi) / 2,
            'log_det_zeta_shifted': n1_log_det_shifted,
            'log_det_fredholm': n1_log_det_fredholm,
        },
    )


def build_n2():
    return SpectrumModel(
        name='N2',
        law=PowerLaw(exponent=Fraction(2)),
        schatten_p=1,
        heat_expansion=theta_heat_expansion(),
        description='lambda_n = n^2',
        oracles={
            'heat_trace': n2_heat_trace,
            'heat_remainder': n2_heat_remainder,
            'zeta': n2_zeta,
            'log_det_zeta': mpmath.log(2 * mpmath.pi),
            'log_det_zeta_shifted': n2_log_det_shifted,
            'log_det_fredholm': n2_log_det_fredholm,
        },
    )


def build_ho():
    return SpectrumModel(
        name='HO',
        law=PowerLaw(shift=Fraction(-1, 2)),
        schatten_p=2,
        heat_expansion=half_sinh_heat_expansion(),
        description='lambda_n = n - 1/2 (harmonic oscillator)',
        oracles={
            'heat_trace': ho_heat_trace,
            'zeta': ho_zeta,
            'log_det_zeta': mpmath.log(2) / 2,
            'log_det_zeta_shifted': ho_log_det_shifted,
            'log_det_fredholm': ho_log_det_fredholm,
        },
    )


def build_custom():
    from .serializers import load_model

    with open(CUSTOM_FIXTURE) as f:
        return load_model(json.load(f))


BUILDERS = {
    'N1': build_n1,
    'N2': build_n2,
    'HO': build_ho,
    'CUSTOM': build_custom,
}


def get_model(name):
    """Catalog model with coefficients at the working precision."""
    if name not in BUILDERS:
        raise ModelRejected(f'Unknown catalog model: {name}')
    key = (name, mpmath.mp.dps)
    if key not in _cache:
        logger.debug(f'Building catalog model {name} at {mpmath.mp.dps} digits')
        _cache[key] = BUILDERS[name]()
    return _cache[key]


def catalog(names=CATALOG_NAMES):
    return [get_model(name) for name in names]


def resolve_model(identifier):
    """Catalog name or path to a model JSON file."""
    if identifier in BUILDERS:
        return get_model(identifier)
    if os.path.isfile(identifier):
        from .serializers import load_model

        with open(identifier) as f:
            try:
                payload = json.load(f)
            except json.JSONDecodeError as exc:
                raise ModelRejected(f'{identifier} is not valid JSON: {exc}')
        return load_model(payload)
    raise ModelRejected(f'{identifier!r} is neither a catalog model nor a model file')
