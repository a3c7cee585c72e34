"""Regularized integrals ⨍₀^∞ of functions with complete asymptotics at 0 and ∞."""
import logging
from dataclasses import dataclass

import mpmath

from zetafred.conf import zetafred_setting
from zetafred.exceptions import ContractViolation, InsufficientExpansionError, QuadratureError, ZetafredError
from .terms import AT_INFINITY, AT_ZERO, Exponent

logger = logging.getLogger(__name__)

WINDOW_START = 0.1
WINDOW_RATIO = 16


def unit_interval_regint(beta, k=0):
    """⨍₀¹ t^(β−1) log^k t dt, meromorphic in β and 0 at β = 0."""
    beta = mpmath.mpmathify(beta)
    if beta == 0:
        return mpmath.mpf(0)
    return (-1) ** k * mpmath.factorial(k) / beta ** (k + 1)


def unit_tail_regint(beta, k=0):
    """⨍₁^∞ t^(β−1) log^k t dt."""
    return -unit_interval_regint(beta, k)


def regint_term(alpha, k=0):
    """⨍₀^∞ x^α log^k x dx, which vanishes for every α and k."""
    beta = Exponent.of(alpha).value + 1
    return unit_interval_regint(beta, k) + unit_tail_regint(beta, k)


def integrate(func, points, tol, label='integral'):
    """Adaptive quadrature with the error estimate checked against ``tol``."""
    value, error = mpmath.quad(func, points, error=True)
    logger.debug(f'{label} over {points}: value={value} error={error}')
    if not mpmath.isfinite(value) or error > tol:
        logger.error(f'{label} did not converge over {points}: estimate {error} > {tol}')
        raise QuadratureError(
            f'Quadrature of the {label} did not reach {tol} (estimate {error})',
            value=value, error=error, interval=points,
        )
    return value


@dataclass(frozen=True)
class NearZeroWindow:
    """∫₀^δ t^(s−1)·e^(−tz)·r(t) dt for a remainder r(t) ≈ r(δ)·(t/δ)^β."""

    delta: object
    exponent: object
    estimate: object

    @property
    def bound(self):
        return abs(self.estimate)


def window_points(start, lowest, ratio=WINDOW_RATIO):
    """start, start/ratio, … down to ``lowest``, which is always the last point."""
    delta = mpmath.mpf(start)
    lowest = mpmath.mpf(lowest)
    while delta > lowest:
        yield delta
        delta /= ratio
    yield lowest


def remainder_exponent(at_delta, at_double, lower):
    """Power β with r(2δ)/r(δ) = 2^β, never below ``lower``."""
    if at_delta == 0 or at_double == 0:
        return mpmath.mpf(lower)
    beta = mpmath.log(abs(at_double) / abs(at_delta)) / mpmath.log(2)
    return max(beta, mpmath.mpf(lower))


def power_laplace(a, z, delta):
    """∫₀^δ t^(a−1)·e^(−tz) dt for Re a > 0 and Re z ≥ 0."""
    if z == 0:
        return delta ** a / a
    return z ** (-a) * mpmath.gammainc(a, 0, z * delta)


def near_zero_window(remainder, s, deltas, lower, tol, z=0, label='remainder'):
    """First window over ``deltas`` whose estimated contribution is at most ``tol``.

    ``remainder`` is o(t^lower) as t → 0+. Raises InsufficientExpansionError when the
    smallest window that can be sampled is still above ``tol``.
    """
    s = mpmath.mpmathify(s)
    if lower == mpmath.inf or lower == float('inf'):
        lower = max(0, 1 - mpmath.re(s))
    window = None
    for delta in deltas:
        try:
            at_delta, at_double = remainder(delta), remainder(2 * delta)
        except ZetafredError as exc:
            if window is None:
                raise
            logger.debug(f'{label}: no samples below {window.delta}: {exc}')
            break
        beta = remainder_exponent(at_delta, at_double, lower)
        if mpmath.re(s + beta) <= 0:
            raise InsufficientExpansionError(
                f'{label}: ∫ t^(s-1)·r(t) diverges at 0 for s = {s} with r ~ t^{beta}',
                required=float(-mpmath.re(s)), cutoff=lower,
            )
        window = NearZeroWindow(delta, beta, at_delta * delta ** (-beta) * power_laplace(s + beta, z, delta))
        if window.bound <= tol:
            logger.debug(f'{label}: window (0, {delta}) estimated at {window.estimate} (t^{beta})')
            return window
    logger.warning(f'{label}: window (0, {window.delta}) estimated at {window.bound}, above {tol}')
    raise InsufficientExpansionError(
        f'{label}: the remainder on (0, {mpmath.nstr(window.delta, 6)}) is estimated at '
        f'{mpmath.nstr(window.bound, 6)}, above {tol}; the declared expansion is too short',
        required=None, cutoff=lower,
    )


def _check_expansion(e, direction):
    if e is None:
        return
    if e.direction != direction:
        raise ContractViolation(f'Expected an expansion {direction}, got {e.direction}')
    if not e.is_complete_for(0):
        raise InsufficientExpansionError(
            f'Regularized integral needs cutoff >= 0 {direction}, got {e.cutoff}',
            required=0, cutoff=e.cutoff,
        )


def regint_numeric(f, at_zero, at_infinity=None, tol=None, floor=None, dps=None):
    """LIM_{R→∞} LIM_{ε→0} ∫_ε^R f(t) dt.

    The declared terms are subtracted on (0, 1] and on [1, ∞), the remainders are
    integrated numerically and the closed-form regularized integrals of the subtracted
    terms are added back. On (0, δ) the remainder is replaced by its power-law estimate;
    δ shrinks from 0.1 towards ``floor`` until that estimate is below ``tol``.
    ``at_infinity`` None means f decays exponentially.
    """
    tol = zetafred_setting('REGINT_TOL') if tol is None else tol
    floor = zetafred_setting('REGINT_FLOOR') if floor is None else floor
    if dps is None:
        dps = max(mpmath.mp.dps, zetafred_setting('REGINT_DPS'))
    _check_expansion(at_zero, AT_ZERO)
    _check_expansion(at_infinity, AT_INFINITY)

    with mpmath.workdps(dps):
        near_terms = mpmath.fsum(
            t.coeff * unit_interval_regint(t.alpha.value + 1, t.k) for t in at_zero.terms
        )

        def remainder(t):
            return f(t) - at_zero.evaluate(t)

        window = near_zero_window(
            remainder, 1, window_points(max(WINDOW_START, floor), floor), at_zero.cutoff_value, tol,
            label='regularized integral near zero',
        )
        near = integrate(remainder, [window.delta, 1], tol, 'remainder near zero')
        if at_infinity is None:
            far_terms = 0
            far = integrate(f, [1, mpmath.inf], tol, 'integral near infinity')
        else:
            far_terms = mpmath.fsum(
                t.coeff * unit_tail_regint(t.alpha.value + 1, t.k) for t in at_infinity.terms
            )
            far = integrate(
                lambda t: f(t) - at_infinity.evaluate(t), [1, mpmath.inf], tol,
                'remainder near infinity',
            )
        value = near_terms + window.estimate + near + far_terms + far
    return +value
