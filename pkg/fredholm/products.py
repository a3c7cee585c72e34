"""Regularized Fredholm determinants det_{N+1}(I + zL⁻¹) as Weierstrass products.

Every sum over the spectrum is split at n*, the last index with λ_{n*} < 4|z|. The head
q ≤ n* is summed directly in ascending q; the tail q > n* is expanded in powers of z/λ_q,
which are bounded by 1/4, and summed through the closed-form power sums of the law.
"""
import logging
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from spectral.zeta import laplace_mellin
from zetafred.conf import zetafred_setting
from zetafred.exceptions import ContractViolation
from zetafred.precision import is_extended

logger = logging.getLogger(__name__)

MAX_TAIL_TERMS = 500
TAIL_RATIO = 4


@dataclass(frozen=True)
class FredholmEval:
    """det_{N+1}(I + zL⁻¹) at z; log_value is None when z = −λ_q."""

    z: object
    order: int
    value: object
    log_value: object
    truncation_n: int
    tail_bound: object

    @property
    def on_spectrum(self):
        return self.log_value is None


def fredholm_tol():
    """Absolute tolerance for the truncated tail at the working precision."""
    if is_extended():
        return mpmath.mpf(10) ** (5 - mpmath.mp.dps)
    return zetafred_setting('FREDHOLM_TOL')


def truncation_index(model, z):
    """Smallest n ≥ 0 with λ_{n+1} ≥ 4|z|."""
    bound = TAIL_RATIO * abs(z)
    if model.first_eigenvalue >= bound:
        return 0
    lo, hi = 1, 2
    while model.eigenvalue(hi) < bound:
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if model.eigenvalue(mid) < bound:
            lo = mid
        else:
            hi = mid
    return lo


def _numpy_shift(model, z):
    # real z keeps every 1 + z/λ_q positive only above −λ₁
    if mpmath.im(z) == 0 and mpmath.re(z) > -model.first_eigenvalue:
        return float(mpmath.re(z))
    return complex(z)


def _fsum(values):
    if np.iscomplexobj(values):
        return mpmath.mpc(math.fsum(values.real), math.fsum(values.imag))
    return mpmath.mpf(math.fsum(values))


def head_sum(model, count, z, summand):
    """Σ_{q≤count} mult(q)·summand(λ_q, z, xp) with xp the numpy or mpmath namespace."""
    if count == 0:
        return mpmath.mpf(0)
    if is_extended():
        return mpmath.fsum(
            model.multiplicity(q) * summand(model.eigenvalue(q), z, mpmath)
            for q in range(1, count + 1)
        )
    lam = model.law.eigenvalue_array(count)
    weights = model.law.multiplicity_array(count)
    return _fsum(weights * summand(lam, _numpy_shift(model, z), np))


def tail_series(model, n, z, first_power, weight, tol):
    """Σ_j weight(j)·z^j·Σ_{q>n} mult·λ_q^(−first_power−j) and a bound for the omitted terms.

    Needs |z| ≤ λ_{n+1}/4 and weights whose ratios |w(j+1)/w(j)| are at most 1 or
    nonincreasing.
    """
    terms = []
    remainder = mpmath.mpf(0)
    for j in range(MAX_TAIL_TERMS):
        term = weight(j) * z ** j * model.power_sum_tail(n, first_power + j)
        terms.append(term)
        ratio = max(1, abs(weight(j + 1) / weight(j))) / TAIL_RATIO
        if ratio < 1:
            remainder = abs(term) * ratio / (1 - ratio)
            if remainder <= tol:
                break
    else:
        logger.warning(f'Tail series of {model.name} stopped after {MAX_TAIL_TERMS} terms, bound {remainder}')
    return mpmath.fsum(terms), remainder


def _check_order(model, order):
    if order < model.schatten_p:
        raise ContractViolation(
            f'Order {order} is below the Schatten order p = {model.schatten_p} of {model.name}'
        )


def on_spectrum(model, z, count):
    """True when z = −λ_q for some q ≤ count."""
    if mpmath.im(z) != 0 or mpmath.re(z) >= 0:
        return False
    return any(model.eigenvalue(q) == -z for q in range(1, count + 1))


def _factor_log(N):
    def summand(lam, z, xp):
        w = z / lam
        value = xp.log1p(w)
        for k in range(1, N + 1):
            value = value + (-1) ** k * w ** k / k
        return value
    return summand


def det_fredholm(model, z, order, tol=None):
    """det_{order}(I + zL⁻¹) = Π_q [(1 + z/λ_q)·exp(Σ_{k=1}^{N} (−1)^k (z/λ_q)^k / k)]^mult(q)."""
    _check_order(model, order)
    z = mpmath.mpmathify(z)
    tol = fredholm_tol() if tol is None else tol
    N = order - 1
    count = truncation_index(model, z)
    if on_spectrum(model, z, count):
        logger.debug(f'det_{order} of {model.name} vanishes at z={z}')
        return FredholmEval(z, order, mpmath.mpf(0), None, count, mpmath.mpf(0))

    head = head_sum(model, count, z, _factor_log(N))
    # log(1+w) + Σ_{k≤N} (−1)^k w^k/k = Σ_{k>N} (−1)^(k+1) w^k/k
    scale = z ** (N + 1)
    tail, remainder = tail_series(
        model, count, z, N + 1,
        lambda j: mpmath.mpf((-1) ** (N + j)) / (N + 1 + j),
        tol / max(abs(scale), 1),
    )
    log_value = head + scale * tail
    tail_bound = abs(scale) * remainder
    logger.debug(
        f'log det_{order} of {model.name} at z={z}: {log_value} '
        f'(head n*={count}, tail bound {tail_bound})'
    )
    return FredholmEval(z, order, mpmath.exp(log_value), log_value, count, tail_bound)


def log_derivative(model, z, order, tol=None):
    """d/dz log det_{N+1}(I + zL⁻¹) = (−z)^N·Σ_q mult(q)·λ_q^(−N)(λ_q + z)^(−1)."""
    _check_order(model, order)
    z = mpmath.mpmathify(z)
    tol = fredholm_tol() if tol is None else tol
    N = order - 1
    count = truncation_index(model, z)
    if on_spectrum(model, z, count):
        raise ContractViolation(f'log det_{order} of {model.name} has a pole at z = {z}')
    if N and z == 0:
        return mpmath.mpf(0)

    head = head_sum(model, count, z, lambda lam, w, xp: lam ** (-N) / (lam + w))
    tail, _ = tail_series(model, count, z, N + 1, lambda j: (-1) ** j, tol)
    return (-z) ** N * (head + tail)


def _check_resolvent_shift(model, z):
    if mpmath.re(z) <= -model.first_eigenvalue:
        raise ContractViolation(f'Re z = {mpmath.re(z)} must exceed -lambda_1 for tr(L+z)^(-N)')


def resolvent_power_trace(model, z, N, tol=None):
    """tr (L+z)^(−N) = Σ_q mult(q)·(λ_q + z)^(−N)."""
    _check_order(model, N)
    z = mpmath.mpmathify(z)
    _check_resolvent_shift(model, z)
    tol = fredholm_tol() if tol is None else tol
    count = truncation_index(model, z)
    head = head_sum(model, count, z, lambda lam, w, xp: (lam + w) ** (-N))
    tail, _ = tail_series(
        model, count, z, N,
        lambda j: (-1) ** j * mpmath.binomial(N + j - 1, j),
        tol,
    )
    return head + tail


def resolvent_trace_via_heat(model, z, N):
    """(1/(N−1)!)·∫₀^∞ t^(N−1)·e^(−zt)·tr e^(−tL) dt, for Re z > 0."""
    _check_order(model, N)
    z = mpmath.mpmathify(z)
    if mpmath.re(z) <= 0:
        raise ContractViolation('The heat-integral form of tr(L+z)^(-N) needs Re z > 0')
    return laplace_mellin(model.shifted(z), N).value / mpmath.factorial(N - 1)
