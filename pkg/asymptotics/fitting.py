"""Least-squares fits of large-z expansions to numerical samples."""
import logging

import mpmath
import numpy as np

from expansions.comparison import ComparisonRow, ExpansionComparison
from expansions.terms import Exponent
from fredholm.products import det_fredholm, resolvent_power_trace
from spectral.determinants import log_det_zeta_shifted
from zetafred.conf import zetafred_setting
from zetafred.exceptions import ContractViolation, FitConditioningError
from .predictions import FITTED, LargeZExpansion, term_label

logger = logging.getLogger(__name__)

QUANTITIES = ('detzeta', 'fredholm', 'resolvent')
SLOPE_TOLERANCE = 0.15


def geometric_grid(z0=None, points=None):
    """z₀·2^j for j = 0, …, points−1."""
    z0 = zetafred_setting('FIT_Z0') if z0 is None else z0
    points = zetafred_setting('FIT_POINTS') if points is None else points
    return [z0 * 2 ** j for j in range(points)]


def sample_quantity(model, what, z, N=None):
    """log det_ζ(L+z), log det_p(I + zL⁻¹) or tr (L+z)^(−N) at z."""
    if what == 'detzeta':
        return log_det_zeta_shifted(model, z)
    if what == 'fredholm':
        return det_fredholm(model, z, model.schatten_p).log_value
    if what == 'resolvent':
        return resolvent_power_trace(model, z, model.schatten_p if N is None else N)
    raise ContractViolation(f'Unknown quantity {what!r}, expected one of {QUANTITIES}')


def sample_grid(model, what, grid, N=None):
    return [(z, sample_quantity(model, what, z, N)) for z in grid]


def _real(value, what):
    value = mpmath.mpmathify(value)
    if mpmath.im(value) != 0:
        raise ContractViolation(f'Expansion fits need real {what}, got {value}')
    return float(mpmath.re(value))


def fit_expansion(samples, template):
    """Least-squares coefficients of Σ c·z^(−α)·log^k z over the (α, k) of ``template``.

    The columns are normalized before the condition number is taken; ``sensitivity``
    gives the amplification of a unit data error into each coefficient.
    """
    template = [(Exponent.of(alpha), int(k)) for alpha, k in template]
    if len(samples) < len(template) + 2:
        raise ContractViolation(
            f'A fit of {len(template)} terms needs at least {len(template) + 2} samples, got {len(samples)}'
        )
    if any(not alpha.is_real for alpha, _ in template):
        raise ContractViolation('Expansion fits support real exponents only')
    z = np.array([_real(z, 'sample points') for z, _ in samples])
    values = np.array([_real(v, 'sample values') for _, v in samples])
    if np.any(z <= 0):
        raise ContractViolation('Expansion fits need positive sample points')

    basis = np.column_stack([z ** (-float(alpha.re)) * np.log(z) ** k for alpha, k in template])
    norms = np.linalg.norm(basis, axis=0)
    scaled = basis / norms
    condition = float(np.linalg.cond(scaled))
    limit = zetafred_setting('FIT_CONDITION_LIMIT')
    if condition > limit:
        logger.warning(f'Fit basis condition number {condition:.3e} exceeds {limit:.1e}')
        raise FitConditioningError(
            f'Fit basis is ill-conditioned on z in [{z.min()}, {z.max()}] (condition {condition:.3e}); '
            f'use a wider grid or drop nearly dependent terms',
            condition=condition,
        )
    solution, *_ = np.linalg.lstsq(scaled, values, rcond=None)
    coefficients = solution / norms
    residuals = values - basis @ coefficients
    sensitivity = np.linalg.norm(np.linalg.pinv(scaled), axis=1) / norms

    residual_max = float(np.max(np.abs(residuals)))
    blowup = residual_max > zetafred_setting('FIT_RESIDUAL_TOL') * max(1.0, float(np.max(np.abs(values))))
    if blowup:
        logger.warning(f'Fit residual {residual_max:.3e} is too large: the template misses a term')
    diagnostics = {
        'grid': [float(x) for x in z],
        'condition': condition,
        'sensitivity': {term_label(alpha, k): float(s) for (alpha, k), s in zip(template, sensitivity)},
        'residual_max': residual_max,
        'residual_blowup': bool(blowup),
    }
    cutoff = max(float(alpha.re) for alpha, _ in template)
    items = [(alpha, k, mpmath.mpf(float(c))) for (alpha, k), c in zip(template, coefficients)]
    return LargeZExpansion.from_items(items, cutoff, provenance=FITTED, diagnostics=diagnostics)


def fit_template(predicted, max_re_alpha=1, required=()):
    """(α, k) of the predicted terms with Re α ≤ max_re_alpha, plus ``required`` keys."""
    keys = [key for key in predicted.keys() if key[0].re <= max_re_alpha]
    for alpha, k in required:
        key = (Exponent.of(alpha), k)
        if key not in keys:
            keys.append(key)
    return sorted(keys)


def compare_expansions(predicted, fitted, max_re_alpha=1, rel_tol=None):
    """Fitted against predicted coefficients for the fitted terms with Re α ≤ max_re_alpha."""
    rel_tol = zetafred_setting('FIT_MATCH_TOL') if rel_tol is None else rel_tol
    rows = []
    for alpha, k in fitted.keys():
        if alpha.re > max_re_alpha:
            continue
        expected = predicted.coefficient(alpha, k)
        rows.append(ComparisonRow(
            term_label(alpha, k), expected, fitted.coefficient(alpha, k),
            tolerance=rel_tol * max(1, abs(expected)),
        ))
    blowup = fitted.diagnostics.get('residual_blowup', False)
    failed = [row.key for row in rows if not row.ok]
    passed = not failed and not blowup
    if blowup:
        message = 'fit residual blow-up'
    elif failed:
        message = f'coefficients differ for {", ".join(failed)}'
    else:
        message = f'{len(rows)} coefficients agree within {rel_tol} relative'
    return ExpansionComparison(
        label='fitted against predicted expansion',
        rows=tuple(rows),
        passed=passed,
        message=message,
        diagnostics=dict(fitted.diagnostics),
    )


def remainder_decay(predicted, samples, order):
    """Log-log slope of |sample − predicted truncated at Re α ≤ order| against the next exponent."""
    partial = predicted.truncate(order)
    later = [term.alpha.re for term in predicted.terms if term.alpha.re > order]
    rows = [ComparisonRow(f'z={float(z)}', partial.evaluate(z), value) for z, value in samples]
    if not later:
        return ExpansionComparison(
            label='remainder of the predicted expansion',
            rows=tuple(rows),
            passed=True,
            message='no declared term beyond the truncation order',
        )
    expected = -float(min(later))
    logs = np.log([float(z) for z, _ in samples])
    errors = np.log([float(row.error) for row in rows])
    slope = float(np.polyfit(logs, errors, 1)[0])
    passed = abs(slope - expected) <= SLOPE_TOLERANCE
    return ExpansionComparison(
        label='remainder of the predicted expansion',
        rows=tuple(rows),
        passed=passed,
        slope=slope,
        expected_slope=expected,
        message=f'remainder slope {slope:.3f}, expected {expected}',
    )
