"""Spectrum models: eigenvalue law, kernel, Schatten order and declared heat expansion."""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import mpmath
import numpy as np

from expansions.algebra import multiply, taylor_exponential
from expansions.comparison import ComparisonRow, ExpansionComparison
from expansions.terms import AT_ZERO, AsymptoticExpansion
from zetafred.conf import zetafred_setting
from zetafred.exceptions import (
    ContractViolation, HeatTraceError, InsufficientExpansionError, ModelRejected,
)
from zetafred.precision import DOUBLE_DPS, is_extended
from .laws import check_schatten_order, heat_sum

logger = logging.getLogger(__name__)

DEFAULT_T_GRID = (0.01, 0.02, 0.04, 0.08)
SLOPE_TOLERANCE = 0.1
TRANSPORT_ORDER = 12


def heat_tolerance():
    """Absolute heat-trace tolerance at the working precision."""
    if is_extended():
        return mpmath.mpf(10) ** (5 - mpmath.mp.dps)
    return zetafred_setting('HEAT_TRACE_TOL')


def log_power_violations(expansion):
    """Terms c·t^(−n)·log^k t with n ≥ 0 and k > 0, excluded by k_{-n}=0."""
    return [
        term for term in expansion.terms
        if term.k > 0 and term.alpha.nonpositive_integer() is not None
    ]


@dataclass(frozen=True, eq=False)
class SpectrumModel:
    """A self-adjoint operator given by its nonzero eigenvalues λ_n (n ≥ 1) and kernel dimension."""

    name: str
    law: object
    schatten_p: int
    heat_expansion: AsymptoticExpansion
    dim_ker: int = 0
    description: str = ''
    oracles: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.heat_expansion.direction != AT_ZERO:
            raise ModelRejected('The heat expansion must be an expansion as t -> 0+')
        if self.dim_ker < 0:
            raise ModelRejected('dim_ker must be non-negative')
        if self.schatten_p < 1:
            raise ModelRejected('The Schatten order p must be a positive integer')
        violations = log_power_violations(self.heat_expansion)
        if violations:
            listed = ', '.join(f't^{t.alpha} log^{t.k} t' for t in violations)
            raise ModelRejected(f'Heat expansion violates k_{{-n}}=0: {listed}')
        check_schatten_order(self.law, self.schatten_p)

    @property
    def base(self):
        return self

    @property
    def shift(self):
        return 0

    @property
    def order(self):
        return self.schatten_p

    def eigenvalue(self, n):
        return self.law.eigenvalue(n)

    def multiplicity(self, n):
        return self.law.multiplicity_of(n)

    @property
    def first_eigenvalue(self):
        return self.law.eigenvalue(1)

    def oracle(self, name):
        return self.oracles.get(name)

    def heat_trace(self, t, tol=None):
        """tr e^(−tL) = dim_ker + Σ mult(n)·e^(−tλ_n)."""
        if t <= 0:
            raise ContractViolation('The heat trace needs t > 0')
        floor = zetafred_setting('HEAT_TRACE_FLOOR')
        if t < floor:
            raise HeatTraceError(f'Heat trace requested at t={t}, below the floor {floor}')
        tol = heat_tolerance() if tol is None else tol
        value, count = heat_sum(self.law, t, tol, zetafred_setting('HEAT_MAX_TERMS'))
        logger.debug(f'Heat trace of {self.name} at t={t}: {count} terms')
        return value + self.dim_ker

    def power_sum_tail(self, n, m):
        return self.law.power_sum_tail(n, m)

    def shifted(self, z):
        return ShiftedSpectrum(self, mpmath.mpmathify(z))

    def __str__(self):
        return self.name


def transport_order(expansion):
    """Taylor order of e^(−tz) that keeps the transported expansion complete to the same cutoff."""
    span = expansion.real_exponent_range()
    if expansion.cutoff is None or span is None:
        return TRANSPORT_ORDER
    return max(math.ceil(expansion.cutoff - float(span[0])), 0)


@dataclass(frozen=True, eq=False)
class ShiftedSpectrum:
    """The operator L + z, represented through L and the shift."""

    base: SpectrumModel
    shift: object

    def __post_init__(self):
        z = mpmath.mpmathify(self.shift)
        if self.base.dim_ker and z != 0 and mpmath.re(z) <= 0:
            raise ContractViolation('A shift of an operator with kernel needs Re z > 0')
        if mpmath.re(z) <= -self.base.first_eigenvalue:
            raise ContractViolation(
                f'L+z must stay positive: Re z = {mpmath.re(z)} <= -lambda_1'
            )
        object.__setattr__(self, 'shift', z)

    @property
    def name(self):
        return f'{self.base.name}+({mpmath.nstr(self.shift, 8)})'

    @property
    def schatten_p(self):
        return self.base.schatten_p

    @property
    def dim_ker(self):
        return self.base.dim_ker if self.shift == 0 else 0

    @property
    def first_eigenvalue(self):
        return self.base.first_eigenvalue + self.shift

    def eigenvalue(self, n):
        return self.base.eigenvalue(n) + self.shift

    def multiplicity(self, n):
        return self.base.multiplicity(n)

    @cached_property
    def heat_expansion(self):
        """A^H_{αk}(L+z) = Σ_n (Res_{−n}Γ)·A^H_{α−n,k}(L)·z^n, as a Cauchy product with e^(−tz)."""
        expansion = self.base.heat_expansion
        if self.shift == 0:
            return expansion
        return multiply(expansion, taylor_exponential(self.shift, transport_order(expansion)))

    def heat_trace(self, t, tol=None):
        return mpmath.exp(-t * self.shift) * self.base.heat_trace(t, tol)

    def shifted(self, z):
        return ShiftedSpectrum(self.base, self.shift + mpmath.mpmathify(z))

    def __str__(self):
        return self.name


def _noise_floor(value):
    digits = mpmath.mp.dps if is_extended() else DOUBLE_DPS
    return mpmath.mpf(10) ** (3 - digits) * max(1, abs(value))


def _next_exponent(expansion, order):
    later = [t.alpha.re for t in expansion.terms if t.alpha.re > order]
    return float(min(later)) if later else None


def validate_heat_expansion(model, t_grid=DEFAULT_T_GRID, order=None):
    """Compare heat_trace with the declared expansion truncated at ``order``.

    The remainder must scale like t^K' for the next declared exponent K' (log-log slope
    within ±0.1). Complete expansions are checked against the model's remainder bound.
    """
    expansion = model.heat_expansion
    order = expansion.cutoff_value if order is None else order
    if math.isinf(order):
        order = max((float(t.alpha.re) for t in expansion.terms), default=0.0)
    if not expansion.is_complete_for(order):
        raise InsufficientExpansionError(
            f'Cannot validate {model.name} at K={order}: declared cutoff is {expansion.cutoff}',
            required=order, cutoff=expansion.cutoff,
        )
    partial = expansion.truncate(order)
    rows = []
    remainders = []
    for t in t_grid:
        observed = model.heat_trace(t)
        predicted = partial.evaluate(t)
        rows.append(ComparisonRow(f't={t}', predicted, observed))
        remainders.append((t, abs(observed - predicted), _noise_floor(observed)))

    next_exponent = _next_exponent(expansion, order)
    if next_exponent is None and expansion.cutoff is None:
        bound = model.oracle('heat_remainder')
        if bound is None:
            raise InsufficientExpansionError(
                f'{model.name} declares a complete expansion without a remainder bound',
                required=order, cutoff=None,
            )
        failures = [t for t, rem, noise in remainders if rem > bound(t) + noise]
        passed = not failures
        message = 'remainder within the declared bound' if passed else (
            f'remainder exceeds the declared bound at t in {failures}'
        )
        return _report(model, rows, passed, message, None, None)

    expected = next_exponent if next_exponent is not None else expansion.cutoff_value
    usable = [(t, rem) for t, rem, noise in remainders if rem > noise]
    if len(usable) < 2:
        passed = len(usable) == 0
        message = 'remainder below the noise floor' if passed else 'too few points above the noise floor'
        return _report(model, rows, passed, message, None, expected)

    logs = np.log([float(t) for t, _ in usable])
    values = np.log([float(rem) for _, rem in usable])
    slope = float(np.polyfit(logs, values, 1)[0])
    if next_exponent is None:
        # only a lower bound for the next exponent is known past the cutoff
        passed = slope >= expected - SLOPE_TOLERANCE
    else:
        passed = abs(slope - expected) <= SLOPE_TOLERANCE
    message = f'remainder slope {slope:.3f}, expected {expected}'
    return _report(model, rows, passed, message, slope, expected)


def _report(model, rows, passed, message, slope, expected):
    if passed:
        logger.debug(f'Heat expansion of {model.name}: {message}')
    else:
        logger.warning(f'Heat expansion of {model.name} failed validation: {message}')
    return ExpansionComparison(
        label=f'heat expansion of {model.name}',
        rows=tuple(rows),
        passed=passed,
        slope=slope,
        expected_slope=expected,
        message=message,
    )