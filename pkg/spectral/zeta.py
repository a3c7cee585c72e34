"""Spectral zeta function ζ(s;L) by Mellin splitting of the heat trace."""
import logging
from dataclasses import dataclass

import mpmath

from expansions.algebra import mellin_pf
from expansions.regint import NearZeroWindow, integrate, near_zero_window, unit_interval_regint, window_points
from expansions.terms import Exponent, LaurentData
from special.functions import laplace_regint, rgamma_taylor
from zetafred.conf import zetafred_setting
from zetafred.exceptions import ContractViolation, InsufficientExpansionError
from zetafred.precision import quadrature_tol

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZetaValue:
    """ζ at s: the value at regular points, Laurent data at candidate poles."""

    s: object
    value: object = None
    laurent: LaurentData = None
    window_bound: object = 0

    @property
    def is_pole(self):
        return self.laurent is not None and not self.laurent.is_regular

    @property
    def finite_part(self):
        if self.laurent is not None:
            return self.laurent.finite_part
        return self.value

    @property
    def residue(self):
        if self.laurent is not None:
            return self.laurent.residue
        return mpmath.mpf(0)


@dataclass(frozen=True)
class MellinValue:
    """Finite part of a Mellin integral with the estimated piece on (0, δ)."""

    value: object
    window: NearZeroWindow

    @property
    def window_bound(self):
        return self.window.bound


def heat_split():
    return zetafred_setting('HEAT_SPLIT')


def window_tol():
    return zetafred_setting('WINDOW_TOL')


def heat_windows():
    """δ candidates from HEAT_SPLIT down to the smallest t at which heat traces are summed."""
    return window_points(heat_split(), zetafred_setting('HEAT_TRACE_FLOOR'), ratio=4)


def laplace_threshold():
    """Shifts with Re z > 0 and |z| above this use the Laplace form of the Mellin integral."""
    return 0.5 / heat_split()


def uses_laplace(spectrum):
    z = mpmath.mpmathify(spectrum.shift)
    return z != 0 and mpmath.re(z) > 0 and abs(z) > laplace_threshold()


def declared_expansion(spectrum):
    """Heat expansion of the spectrum restricted to the range where it is complete."""
    expansion = spectrum.heat_expansion
    return expansion.truncate(expansion.cutoff_value)


def check_strip(spectrum, s):
    cutoff = spectrum.heat_expansion.cutoff_value
    if mpmath.re(s) < -cutoff:
        raise InsufficientExpansionError(
            f'zeta({s}) of {spectrum.name} needs a heat expansion complete to {-mpmath.re(s)}, '
            f'cutoff is {spectrum.heat_expansion.cutoff}',
            required=float(-mpmath.re(s)), cutoff=spectrum.heat_expansion.cutoff,
        )


def split_mellin(spectrum, s):
    """Finite part at s of ∫₀^∞ t^(s−1)(tr e^(−tL) − dim ker) dt.

    Declared terms are integrated in closed form on (0, 1]; the remainder is integrated
    numerically on [δ, 1] and estimated on (0, δ).
    """
    s = mpmath.mpmathify(s)
    tol = quadrature_tol()
    partial = declared_expansion(spectrum)
    dim_ker = spectrum.dim_ker
    closed = mpmath.fsum(
        term.coeff * unit_interval_regint(s + term.alpha.value, term.k) for term in partial.terms
    )

    def remainder(t):
        return spectrum.heat_trace(t) - partial.evaluate(t)

    window = near_zero_window(
        remainder, s, heat_windows(), partial.cutoff_value, window_tol(),
        label=f'Mellin remainder of {spectrum.name} at s={mpmath.nstr(s, 8)}',
    )
    near = integrate(
        lambda t: mpmath.power(t, s - 1) * remainder(t),
        [window.delta, 1], tol, 'Mellin remainder on [delta, 1]',
    )
    far = integrate(
        lambda t: mpmath.power(t, s - 1) * (spectrum.heat_trace(t) - dim_ker),
        [1, mpmath.inf], tol, 'Mellin integral on [1, inf)',
    )
    kernel = -dim_ker / s if s != 0 else 0
    return MellinValue(closed + window.estimate + near + far + kernel, window)


def laplace_mellin(spectrum, s):
    """Finite part at s of ∫₀^∞ t^(s−1)e^(−tz) tr e^(−tL) dt for L+z with a large shift."""
    s = mpmath.mpmathify(s)
    base = spectrum.base
    z = spectrum.shift
    partial = declared_expansion(base)
    closed = mpmath.fsum(
        term.coeff * laplace_regint(s + term.alpha.value, term.k, z) for term in partial.terms
    )

    def remainder(t):
        return base.heat_trace(t) - partial.evaluate(t)

    window = near_zero_window(
        remainder, s, heat_windows(), partial.cutoff_value, window_tol(), z=z,
        label=f'Laplace remainder of {spectrum.name} at s={mpmath.nstr(s, 8)}',
    )
    rest = integrate(
        lambda t: mpmath.power(t, s - 1) * mpmath.exp(-t * z) * remainder(t),
        [window.delta, 1, mpmath.inf], quadrature_tol(), 'Laplace remainder',
    )
    return MellinValue(closed + window.estimate + rest, window)


def mellin_finite_part(spectrum, s):
    if uses_laplace(spectrum):
        return laplace_mellin(spectrum, s)
    return split_mellin(spectrum, s)


def pole_candidate(spectrum, s):
    """Exponent −s when s = −α for a declared α (or s = 0 with a kernel), else None."""
    try:
        point = Exponent.of(s)
    except (TypeError, ValueError, OverflowError):
        return None
    if point.value != s:
        return None
    if s == 0 and spectrum.dim_ker:
        return point
    alphas = {term.alpha for term in declared_expansion(spectrum).terms}
    return point if -point in alphas else None


def mellin_laurent(spectrum, point):
    """Laurent data of the continued Mellin transform at a candidate pole."""
    principal = mellin_pf(declared_expansion(spectrum), point)
    coeffs = dict(principal.coeffs)
    s = point.value
    if s == 0 and spectrum.dim_ker:
        coeffs[1] = coeffs.get(1, 0) - spectrum.dim_ker
    finite = mellin_finite_part(spectrum, s)
    coeffs[0] = finite.value
    return LaurentData(s, coeffs), finite.window


def zeta(spectrum, s):
    """ζ(s;L) = (1/Γ(s))·∫₀^∞ t^(s−1)(tr e^(−tL) − dim ker) dt, continued in s."""
    s = mpmath.mpmathify(s)
    check_strip(spectrum, s)
    point = pole_candidate(spectrum, s)
    if point is None:
        finite = mellin_finite_part(spectrum, s)
        value = finite.value * mpmath.rgamma(s)
        logger.debug(f'zeta({s}) of {spectrum.name} = {value} (window bound {finite.window_bound})')
        return ZetaValue(s, value=value, window_bound=finite.window_bound)
    mellin, window = mellin_laurent(spectrum, point)
    laurent = mellin.times_series(rgamma_taylor(s, mellin.order + 1))
    logger.debug(f'zeta Laurent data of {spectrum.name} at {s}: {dict(laurent.coeffs)}')
    value = laurent.finite_part if laurent.is_regular else None
    return ZetaValue(s, value=value, laurent=laurent, window_bound=window.bound)


def zeta_pf_at_positive_integer(spectrum, n):
    """(Res_{s=n} ζ, Pf_{s=n} ζ); the residue is A^H_{−n,0}/(n−1)!."""
    if n < 1:
        raise ContractViolation('n must be a positive integer')
    result = zeta(spectrum, n)
    return result.residue, result.finite_part
