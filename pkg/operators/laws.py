"""Eigenvalue laws λ_n (n ≥ 1) with multiplicities and closed-form tail estimates."""
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from expansions.terms import rational
from special.functions import hurwitz_zeta
from zetafred.exceptions import HeatTraceError, ModelRejected

logger = logging.getLogger(__name__)

NUMBER = r'\d+(?:\.\d+)?(?:/\d+)?'

POWER_FORMULA = re.compile(
    rf'^\s*(?:(?P<scale>{NUMBER})\s*\*\s*)?(?P<open>\()?\s*n\s*'
    rf'(?:(?P<sign>[+-])\s*(?P<shift>{NUMBER}))?\s*(?(open)\))\s*'
    rf'(?:\^\s*(?P<exponent>{NUMBER}))?\s*$'
)
LOG_FORMULA = re.compile(rf'^\s*log\(\s*n\s*(?:(?P<sign>[+-])\s*(?P<shift>{NUMBER}))?\s*\)\s*$')


def _fraction(text, default):
    return Fraction(text) if text else Fraction(default)


def _mp(value):
    return mpmath.mpf(value.numerator) / value.denominator if isinstance(value, Fraction) else mpmath.mpf(value)


@dataclass(frozen=True)
class PowerLaw:
    """λ_n = scale·(n + shift)^exponent with a constant multiplicity."""

    scale: Fraction = Fraction(1)
    shift: Fraction = Fraction(0)
    exponent: Fraction = Fraction(1)
    multiplicity: int = 1

    kind = 'power'

    def __post_init__(self):
        if self.scale <= 0 or self.exponent <= 0:
            raise ModelRejected('A power law needs a positive scale and exponent')
        if 1 + self.shift <= 0:
            raise ModelRejected('A power law must give a positive first eigenvalue')
        if self.multiplicity < 1:
            raise ModelRejected('Multiplicities must be positive integers')

    @property
    def formula(self):
        text = 'n'
        if self.shift:
            sign = '+' if self.shift > 0 else '-'
            text = f'n{sign}{abs(self.shift)}'
        if self.exponent != 1:
            text = f'({text})^{self.exponent}' if self.shift else f'{text}^{self.exponent}'
        if self.scale != 1:
            text = f'{self.scale}*{text}'
        return text

    def eigenvalue(self, n):
        return _mp(self.scale) * mpmath.power(n + _mp(self.shift), _mp(self.exponent))

    def multiplicity_of(self, n):
        return self.multiplicity

    @lru_cache(maxsize=32)
    def eigenvalue_array(self, count):
        n = np.arange(1, count + 1, dtype=float)
        return float(self.scale) * (n + float(self.shift)) ** float(self.exponent)

    @lru_cache(maxsize=32)
    def multiplicity_array(self, count):
        return np.full(count, float(self.multiplicity))

    def heat_tail_bound(self, t, n):
        """Bound for Σ_{q>n} mult·e^(−tλ_q) by the integral from n to ∞."""
        r = _mp(self.exponent)
        ct = _mp(self.scale) * t
        base = max(n + _mp(self.shift), 0)
        return self.multiplicity * mpmath.gammainc(1 / r, ct * base ** r) / (r * ct ** (1 / r))

    def summation_cutoff(self, t, bound, start=0):
        """Smallest n ≥ start (up to a factor) with heat_tail_bound(t, n) ≤ bound."""
        r = float(self.exponent)
        ct = float(self.scale) * float(t)
        level = max(math.log(1 / bound), 1.0)
        while True:
            n = max(start, math.ceil((level / ct) ** (1 / r) - float(self.shift)), 1)
            if self.heat_tail_bound(t, n) <= bound:
                return n
            level *= 1.25

    def power_sum_tail(self, n, m):
        """Σ_{q>n} mult·λ_q^(−m) in closed form."""
        return (
            self.multiplicity * _mp(self.scale) ** (-m)
            * hurwitz_zeta(_mp(self.exponent) * m, n + 1 + _mp(self.shift))
        )

    def as_dict(self):
        return {'kind': f'formula:{self.formula}', 'multiplicity': self.multiplicity}


@dataclass(frozen=True)
class LogLaw:
    """λ_n = log(n + shift); admitted by the parser only to be rejected by the Schatten check."""

    shift: Fraction = Fraction(1)
    multiplicity: int = 1

    kind = 'log'

    @property
    def formula(self):
        return f'log(n+{self.shift})'

    def eigenvalue(self, n):
        return mpmath.log(n + _mp(self.shift))

    def multiplicity_of(self, n):
        return self.multiplicity

    def as_dict(self):
        return {'kind': f'formula:{self.formula}', 'multiplicity': self.multiplicity}


@dataclass(frozen=True)
class TableLaw:
    """Explicit leading eigenvalues followed by a power-law tail for n beyond the table."""

    values: tuple
    multiplicities: tuple
    tail: PowerLaw

    kind = 'table'

    def __post_init__(self):
        if not self.values:
            raise ModelRejected('An eigenvalue table needs at least one value')
        if len(self.multiplicities) != len(self.values):
            raise ModelRejected('Table multiplicities must match the eigenvalues')
        if any(v <= 0 for v in self.values):
            raise ModelRejected('Eigenvalues must be positive')
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ModelRejected('Eigenvalues must be listed in nondecreasing order')
        if self.tail.eigenvalue(len(self.values) + 1) < self.values[-1]:
            raise ModelRejected('The tail law must continue the table without decreasing')

    @property
    def size(self):
        return len(self.values)

    @property
    def formula(self):
        return f'table[{self.size}] + {self.tail.formula}'

    def eigenvalue(self, n):
        if n <= self.size:
            return mpmath.mpf(self.values[n - 1])
        return self.tail.eigenvalue(n)

    def multiplicity_of(self, n):
        if n <= self.size:
            return self.multiplicities[n - 1]
        return self.tail.multiplicity

    @lru_cache(maxsize=32)
    def eigenvalue_array(self, count):
        head = np.asarray(self.values[:count], dtype=float)
        if count <= self.size:
            return head
        return np.concatenate([head, self.tail.eigenvalue_array(count)[self.size:]])

    @lru_cache(maxsize=32)
    def multiplicity_array(self, count):
        head = np.asarray(self.multiplicities[:count], dtype=float)
        if count <= self.size:
            return head
        return np.concatenate([head, self.tail.multiplicity_array(count)[self.size:]])

    def heat_tail_bound(self, t, n):
        if n >= self.size:
            return self.tail.heat_tail_bound(t, n)
        head = mpmath.fsum(
            m * mpmath.exp(-t * v)
            for v, m in zip(self.values[n:], self.multiplicities[n:])
        )
        return head + self.tail.heat_tail_bound(t, self.size)

    def summation_cutoff(self, t, bound, start=0):
        return self.tail.summation_cutoff(t, bound, start=max(start, self.size))

    def power_sum_tail(self, n, m):
        if n >= self.size:
            return self.tail.power_sum_tail(n, m)
        head = mpmath.fsum(
            k * mpmath.mpf(v) ** (-m)
            for v, k in zip(self.values[n:], self.multiplicities[n:])
        )
        return head + self.tail.power_sum_tail(self.size, m)

    def as_dict(self):
        return {
            'kind': 'table',
            'values': [float(v) for v in self.values],
            'multiplicities': list(self.multiplicities),
            'tail': {
                'scale': float(self.tail.scale),
                'shift': float(self.tail.shift),
                'exponent': float(self.tail.exponent),
                'multiplicity': self.tail.multiplicity,
            },
        }


def parse_formula(text, multiplicity=1):
    """Eigenvalue law from a formula such as ``n^2``, ``n-1/2`` or ``2*(n+1)^3/2``."""
    match = POWER_FORMULA.match(text)
    if match:
        shift = _fraction(match['shift'], 0)
        if match['sign'] == '-':
            shift = -shift
        return PowerLaw(
            scale=_fraction(match['scale'], 1),
            shift=shift,
            exponent=_fraction(match['exponent'], 1),
            multiplicity=multiplicity,
        )
    match = LOG_FORMULA.match(text)
    if match:
        shift = _fraction(match['shift'], 0)
        if match['sign'] == '-':
            shift = -shift
        return LogLaw(shift=shift, multiplicity=multiplicity)
    raise ModelRejected(f'Unsupported eigenvalue formula: {text!r}')


def power_law_from_tail(tail):
    return PowerLaw(
        scale=rational(tail.get('scale', 1)),
        shift=rational(tail.get('shift', 0)),
        exponent=rational(tail['exponent']),
        multiplicity=int(tail.get('multiplicity', 1)),
    )


def estimate_tail_exponent(law, scales=(1e2, 1e4, 1e6)):
    """Log-log slopes of λ_n between consecutive sample scales."""
    n = np.asarray(scales)
    values = np.asarray([float(law.eigenvalue(int(x))) for x in scales])
    if np.any(values <= 0):
        return [0.0] * (len(scales) - 1)
    slopes = np.diff(np.log(values)) / np.diff(np.log(n))
    return [float(s) for s in slopes]


def check_schatten_order(law, p):
    """Reject laws with Σ λ_n^(−p) = ∞; slopes that keep shrinking mean no finite order."""
    slopes = estimate_tail_exponent(law)
    low, high = slopes[0], slopes[-1]
    logger.debug(f'Tail exponent estimates for {law.formula}: {slopes}')
    if high <= 0 or high < 0.9 * low:
        raise ModelRejected(
            f'Eigenvalues {law.formula} grow slower than any power: no finite Schatten order'
        )
    if high * p <= 1 + 1e-9:
        raise ModelRejected(
            f'Sum of eigenvalues^(-{p}) diverges for {law.formula} (tail exponent {high:.3f})'
        )
    return high


def heat_sum(law, t, tol, max_terms):
    """Σ mult(n)·e^(−tλ_n) with the integral tail bound below tol/2, ascending n."""
    count = law.summation_cutoff(t, tol / 2)
    if count > max_terms:
        raise HeatTraceError(
            f'Heat trace at t={t} needs {count} terms, more than the limit {max_terms}'
        )
    if mpmath.mp.dps > 15:
        t = mpmath.mpf(t)
        return mpmath.fsum(
            law.multiplicity_of(n) * mpmath.exp(-t * law.eigenvalue(n)) for n in range(1, count + 1)
        ), count
    lam = law.eigenvalue_array(count)
    weights = law.multiplicity_array(count)
    return math.fsum(weights * np.exp(-float(t) * lam)), count
