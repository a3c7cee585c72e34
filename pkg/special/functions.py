"""Gamma, digamma, Riemann/Hurwitz zeta and the regularized Laplace integrals built on them."""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from expansions.terms import Exponent
from zetafred.conf import zetafred_setting
from zetafred.exceptions import ContractViolation, GammaPoleError, HurwitzPoleError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GammaPoleData:
    n: int
    residue: Fraction
    finite_part: object


def harmonic(n):
    """L_n = Σ_{j=1}^n 1/j as an exact rational, L_0 = 0."""
    if n < 0:
        raise ContractViolation('Harmonic numbers are defined for n >= 0')
    return sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))


def to_mp(value):
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpmathify(value)


def gamma_pole_data(n):
    """Residue (−1)^n/n! and finite part residue·(L_n − γ) of Γ at −n."""
    if n < 0:
        raise ContractViolation('Gamma poles sit at −n with n >= 0')
    residue = Fraction((-1) ** n, math.factorial(n))
    finite_part = to_mp(residue) * (to_mp(harmonic(n)) - mpmath.euler)
    return GammaPoleData(n, residue, finite_part)


def pole_index(s):
    """n when s = −n is a pole of Γ, else None."""
    s = to_mp(s)
    if mpmath.im(s) != 0:
        return None
    re = mpmath.re(s)
    if re <= 0 and mpmath.isint(re):
        return int(-re)
    return None


def gamma(s):
    n = pole_index(s)
    if n is not None:
        raise GammaPoleError(gamma_pole_data(n))
    return mpmath.gamma(s)


def log_gamma(s):
    """Principal branch of log Γ."""
    n = pole_index(s)
    if n is not None:
        raise GammaPoleError(gamma_pole_data(n))
    return mpmath.loggamma(s)


def digamma(s):
    n = pole_index(s)
    if n is not None:
        raise GammaPoleError(gamma_pole_data(n))
    return mpmath.digamma(s)


def polygamma(m, s):
    n = pole_index(s)
    if n is not None:
        raise GammaPoleError(gamma_pole_data(n))
    return mpmath.psi(m, s)


def riemann_zeta(s):
    if s == 1:
        raise HurwitzPoleError(1, mpmath.euler)
    return mpmath.zeta(s)


def hurwitz_zeta(s, a):
    """Σ_{n≥0} (n+a)^(−s), continued in s."""
    if a <= 0:
        raise ContractViolation('Hurwitz zeta needs a > 0')
    if s == 1:
        raise HurwitzPoleError(a, -mpmath.digamma(a))
    return mpmath.zeta(s, a)


def hurwitz_zeta_ds(s, a):
    """∂/∂s of the Hurwitz zeta function."""
    if a <= 0:
        raise ContractViolation('Hurwitz zeta needs a > 0')
    if s == 1:
        raise HurwitzPoleError(a, -mpmath.digamma(a))
    return mpmath.zeta(s, a, 1)


def cauchy_taylor(func, center, radius, count, points=64):
    """Taylor coefficients c_0..c_{count−1} of func at center by the trapezoidal rule on a circle.

    func must be holomorphic on the closed disc except possibly at the center.
    """
    center = mpmath.mpmathify(center)
    radius = mpmath.mpf(radius)
    nodes = [mpmath.expjpi(mpmath.mpf(2 * j) / points) for j in range(points)]
    samples = [func(center + radius * w) for w in nodes]
    coefficients = []
    for n in range(count):
        total = mpmath.fsum(f * w ** (-n) for f, w in zip(samples, nodes))
        coefficients.append(total / points / radius ** n)
    return coefficients


@lru_cache(maxsize=256)
def _gamma_laurent(n, order, dps):
    with mpmath.workdps(dps):
        regular = cauchy_taylor(
            lambda e: e * mpmath.gamma(-n + e), 0, mpmath.mpf(1) / 2, order + 2, points=96,
        )
    # coefficient of (s+n)^m is the (m+1)-th Taylor coefficient of (s+n)·Γ(s)
    return tuple(regular[m + 1] for m in range(-1, order + 1))


def gamma_laurent(n, order):
    """Laurent coefficients [c_{−1}, c_0, …, c_order] of Γ at −n."""
    dps = max(mpmath.mp.dps + 15, zetafred_setting('EXTENDED_DPS'))
    return [+c for c in _gamma_laurent(n, order, dps)]


def pf_dgamma(j, alpha):
    """(Pf ∂^j Γ)(α): the derivative itself off the poles, the Laurent finite part at −n."""
    if j < 0:
        raise ContractViolation('Derivative order must be non-negative')
    n = pole_index(alpha)
    if n is None:
        if j == 0:
            return mpmath.gamma(alpha)
        return mpmath.diff(mpmath.gamma, alpha, j)
    if j == 0:
        return gamma_pole_data(n).finite_part
    # Γ^{(j)}(−n+ε) has constant term j!·c_j
    return mpmath.factorial(j) * gamma_laurent(n, j)[j + 1]


def pf_drgamma(m, a):
    """m-th derivative of the entire function 1/Γ at a."""
    if m == 0:
        return mpmath.rgamma(a)
    return mpmath.diff(mpmath.rgamma, a, m)


def rgamma_taylor(a, count):
    """Taylor coefficients of 1/Γ at a."""
    return mpmath.taylor(mpmath.rgamma, a, count - 1)


def laplace_regint(alpha, k, z):
    """⨍₀^∞ x^(α−1) log^k x e^(−xz) dx in closed form, Re z > 0."""
    z = mpmath.mpmathify(z)
    if mpmath.re(z) <= 0:
        raise ContractViolation('The Laplace integral needs Re z > 0')
    alpha = Exponent.of(alpha).value if not isinstance(alpha, (mpmath.mpf, mpmath.mpc)) else alpha
    log_z = mpmath.log(z)
    total = mpmath.fsum(
        mpmath.binomial(k, j) * (-1) ** j * pf_dgamma(k - j, alpha) * log_z ** j
        for j in range(k + 1)
    )
    n = pole_index(alpha)
    if n is not None:
        residue = to_mp(gamma_pole_data(n).residue)
        total += (-1) ** (k + 1) * residue * log_z ** (k + 1) / (k + 1)
    return mpmath.power(z, -alpha) * total
