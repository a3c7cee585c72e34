import logging
import math

import mpmath

from zetafred.exceptions import ContractViolation, InsufficientExpansionError
from .terms import (
    AT_ZERO, AsymptoticExpansion, Exponent, LaurentData, merge_terms,
)

logger = logging.getLogger(__name__)


def _same_direction(e1, e2):
    if e1.direction != e2.direction:
        raise ContractViolation(
            f'Cannot combine an expansion {e1.direction} with one {e2.direction}'
        )


def add(e1, e2):
    """Termwise sum; the result is complete only as far as both operands are."""
    _same_direction(e1, e2)
    cutoff = min(e1.cutoff_value, e2.cutoff_value)
    items = [(t.alpha, t.k, t.coeff) for t in e1.terms + e2.terms]
    return AsymptoticExpansion(e1.direction, merge_terms(items), cutoff)


def _product_cutoff(e1, e2):
    bounds = []
    for first, second in ((e1, e2), (e2, e1)):
        span = second.real_exponent_range()
        if span is None:
            continue
        if first.direction == AT_ZERO:
            bounds.append(first.cutoff_value + float(span[0]))
        else:
            bounds.append(first.cutoff_value - float(span[1]))
    if not bounds:
        return min(e1.cutoff_value, e2.cutoff_value)
    return min(bounds)


def multiply(e1, e2):
    """Cauchy product, pruned to the exponents where the product is complete."""
    _same_direction(e1, e2)
    cutoff = _product_cutoff(e1, e2)
    items = [
        (t1.alpha + t2.alpha, t1.k + t2.k, t1.coeff * t2.coeff)
        for t1 in e1.terms
        for t2 in e2.terms
    ]
    product = AsymptoticExpansion(e1.direction, merge_terms(items), cutoff)
    if cutoff is None or math.isinf(cutoff):
        return product
    return product.truncate(cutoff)


def taylor_exponential(z, order, direction=AT_ZERO):
    """Power series of e^(−tz) in t through t^order."""
    z = mpmath.mpmathify(z)
    items = [(n, 0, (-z) ** n / mpmath.factorial(n)) for n in range(order + 1)]
    return AsymptoticExpansion(direction, merge_terms(items), order)


def regularized_limit(e):
    """LIM of the expanded function: its coefficient of x^0 log^0 x."""
    if not e.is_complete_for(0):
        raise InsufficientExpansionError(
            f'Regularized limit needs a cutoff >= 0, expansion has cutoff {e.cutoff}',
            required=0, cutoff=e.cutoff,
        )
    return e.coefficient(0, 0)


def dilation_correction(at_zero, at_infinity, lam):
    """Correction term in λ·⨍ f(λu) du = ⨍ f(x) dx + correction."""
    lam = mpmath.mpmathify(lam)
    if lam <= 0:
        raise ContractViolation('Dilation factor must be positive')
    log_lam = mpmath.log(lam)
    minus_one = Exponent.of(-1)
    powers = set()
    for e in (at_zero, at_infinity):
        if e is not None:
            powers.update(t.k for t in e.terms if t.alpha == minus_one)
    total = mpmath.mpf(0)
    for k in sorted(powers):
        a_inf = at_infinity.coefficient(minus_one, k) if at_infinity is not None else 0
        a_zero = at_zero.coefficient(minus_one, k) if at_zero is not None else 0
        total += (a_inf - a_zero) / (k + 1) * log_lam ** (k + 1)
    return total


def mellin_pf(e, s):
    """Principal part at s of the Mellin transform ∫ t^(s−1) f(t) dt from the expansion of f at 0.

    A term a·t^α·log^k t contributes (−1)^k k! a/(s+α)^(k+1); the finite part needs the
    function itself and is left out.
    """
    if not e.at_zero:
        raise ContractViolation('Mellin pole data comes from the expansion at zero')
    point = Exponent.of(s)
    if not e.is_complete_for(-float(point.re)):
        raise InsufficientExpansionError(
            f'Expansion cutoff {e.cutoff} does not reach the pole candidate s = {point}',
            required=-float(point.re), cutoff=e.cutoff,
        )
    coeffs = {}
    for term in e.terms:
        if term.alpha == -point:
            m = term.k + 1
            coeffs[m] = coeffs.get(m, 0) + (-1) ** term.k * mpmath.factorial(term.k) * term.coeff
    return LaurentData(point.value, coeffs)
